//! Traversal intermediate representation.
//!
//! A [`Traversal`] is a start (`g` or the anonymous `__`) followed by a chain
//! of [`Step`]s; nested traversals appear as step arguments. `project` and
//! `order` carry their `by` modulators inline so a projection always has
//! exactly one modulator per key.

mod parse;
mod text;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use parse::{parse_traversal, ParseError};
pub use text::normalize_whitespace;

use crate::synth::CompareOp;
use crate::value::{OrderDirection, Scalar};

/// Textual Gremlin dialect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// gremlinpython (`has_label`, `P.gt`, `to_list()`).
    #[default]
    Python,
    /// Gremlin-Groovy console syntax (`hasLabel`, `gt`, `toList()`).
    Groovy,
}

impl core::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "python" => Ok(Flavor::Python),
            "groovy" => Ok(Flavor::Groovy),
            other => Err(alloc::format!("unknown flavor {other:?} (expected python or groovy)")),
        }
    }
}

/// Element id literal: numeric ids print unquoted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdLit {
    Int(u64),
    Str(String),
}

impl IdLit {
    /// An id received as a GraphQL `ID` string.
    pub fn parse(s: &str) -> Self {
        if !s.is_empty() && s.len() <= 19 && s.bytes().all(|b| b.is_ascii_digit()) && !(s.len() > 1 && s.starts_with('0')) {
            if let Ok(n) = s.parse() {
                return IdLit::Int(n);
            }
        }
        IdLit::Str(s.into())
    }
}

impl fmt::Display for IdLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdLit::Int(n) => write!(f, "{n}"),
            IdLit::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub op: CompareOp,
    pub value: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// `g`
    Graph,
    /// `__`
    Anonymous,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    V(Option<IdLit>),
    E(Option<IdLit>),
    AddV(String),
    AddE(String),
    To(Traversal),
    HasLabel(String),
    Has(String, Predicate),
    Where(Traversal),
    And(Vec<Traversal>),
    Or(Vec<Traversal>),
    OutE(String),
    InE(String),
    InV,
    OutV,
    Values(String),
    Id,
    Label,
    Constant(Scalar),
    Coalesce(Vec<Traversal>),
    /// `project(k1, ..).by(t1)..`
    Project(Vec<(String, Traversal)>),
    /// `order().by(t1, dir1)..`
    OrderBy(Vec<(Traversal, OrderDirection)>),
    Skip(u64),
    Limit(u64),
    Fold,
    Property(String, Scalar),
    Drop,
    ToList,
    Next,
    Iterate,
}

impl Step {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Step::ToList | Step::Next | Step::Iterate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Traversal {
    pub start: Start,
    pub steps: Vec<Step>,
}

impl Traversal {
    pub fn g() -> Self {
        Traversal { start: Start::Graph, steps: Vec::new() }
    }

    pub fn anon() -> Self {
        Traversal { start: Start::Anonymous, steps: Vec::new() }
    }

    pub fn step(mut self, s: Step) -> Self {
        self.steps.push(s);
        self
    }

    pub fn push(&mut self, s: Step) {
        self.steps.push(s);
    }

    pub fn to_text(&self, flavor: Flavor) -> String {
        text::render(self, flavor)
    }

    /// Total number of steps, nested traversals included.
    pub fn step_count(&self) -> usize {
        self.steps
            .iter()
            .map(|s| {
                1 + match s {
                    Step::To(t) | Step::Where(t) => t.step_count(),
                    Step::And(ts) | Step::Or(ts) | Step::Coalesce(ts) => ts.iter().map(Traversal::step_count).sum(),
                    Step::Project(ps) => ps.iter().map(|(_, t)| t.step_count()).sum(),
                    Step::OrderBy(ts) => ts.iter().map(|(t, _)| t.step_count()).sum(),
                    _ => 0,
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests;
