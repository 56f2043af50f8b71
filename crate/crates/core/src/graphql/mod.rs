//! GraphQL request frontend: parsing, validation against a synthesized
//! schema, and expansion into a [`SelectionTree`].
//!
//! Expansion inlines named and inline fragments, substitutes variables,
//! merges fields sharing a response key, and turns filter, ordering and
//! pagination arguments into [`LogicCondition`], [`OrderTerm`] and
//! [`PaginationSpec`] values. The structural parameters S, W, K and D are
//! measured in the same pass.

pub mod ast;
mod lexer;
mod parser;
mod request;
mod sdl_check;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

pub use ast::{OperationKind, Pos};
pub use parser::{parse_executable, parse_sdl};
pub use request::{prepare_request, validate_document, Variables};
pub use sdl_check::{check_sdl, inventory, BUILTIN_SCALARS};

use crate::synth::{CompareOp, FieldOrigin};
use crate::value::{OrderDirection, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {pos}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub pos: Pos,
}

impl SyntaxError {
    /// The offending source line followed by a caret under the error column.
    pub fn caret(&self, src: &str) -> String {
        let line = src.lines().nth(self.pos.line.saturating_sub(1) as usize).unwrap_or("");
        let mut out = String::from(line);
        out.push('\n');
        for _ in 1..self.pos.column {
            out.push(' ');
        }
        out.push('^');
        out
    }
}

/// A request error in the shape of the GraphQL response `errors` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphQLError {
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub locations: Vec<Pos>,
}

impl GraphQLError {
    pub fn new(message: impl Into<String>, pos: Option<Pos>) -> Self {
        GraphQLError { message: message.into(), locations: pos.into_iter().collect() }
    }
}

impl fmt::Display for GraphQLError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if let Some(p) = self.locations.first() {
            write!(f, " ({p})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{}", join(.0))]
    Invalid(Vec<GraphQLError>),
}

fn join(errors: &[GraphQLError]) -> String {
    let mut s = String::new();
    for (i, e) in errors.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        s.push_str(&alloc::format!("{e}"));
    }
    s
}

impl RequestError {
    pub fn errors(&self) -> Vec<GraphQLError> {
        match self {
            RequestError::Syntax(e) => alloc::vec![GraphQLError::new(alloc::format!("Syntax Error: {}", e.message), Some(e.pos))],
            RequestError::Invalid(v) => v.clone(),
        }
    }
}

/// Filter tree. Items of one input object level are AND-ed.
#[derive(Debug, Clone, PartialEq)]
pub enum LogicCondition {
    Compare { property: String, op: CompareOp, value: Scalar },
    And(Vec<Conjunction>),
    Or(Vec<Conjunction>),
}

/// The conditions of one filter input object, all of which must hold.
pub type Conjunction = Vec<LogicCondition>;

impl LogicCondition {
    /// Number of comparison leaves.
    pub fn leaves(&self) -> usize {
        match self {
            LogicCondition::Compare { .. } => 1,
            LogicCondition::And(cs) | LogicCondition::Or(cs) => cs.iter().map(|c| conjunction_leaves(c)).sum(),
        }
    }
}

pub fn conjunction_leaves(c: &[LogicCondition]) -> usize {
    c.iter().map(LogicCondition::leaves).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTerm {
    pub property: String,
    pub direction: OrderDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaginationSpec {
    pub offset: u64,
    pub limit: u64,
}

/// Interpreted arguments of one field. Which members are used depends on
/// the field's [`FieldOrigin`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FieldArgs {
    /// `id` of single lookups, updates and deletes.
    pub id: Option<String>,
    /// `where` on list roots.
    pub filter: Option<Conjunction>,
    pub vertex_filter: Option<Conjunction>,
    pub edge_filter: Option<Conjunction>,
    /// `orderBy` on list roots.
    pub order: Vec<OrderTerm>,
    pub vertex_order: Vec<OrderTerm>,
    pub edge_order: Vec<OrderTerm>,
    pub pagination: Option<PaginationSpec>,
    pub source_id: Option<String>,
    pub target_id: Option<String>,
    /// Mutation payload in property declaration order; explicit nulls are dropped.
    pub data: Vec<(String, Scalar)>,
}

impl FieldArgs {
    pub fn filter_leaves(&self) -> usize {
        [&self.filter, &self.vertex_filter, &self.edge_filter].into_iter().flatten().map(|c| conjunction_leaves(c)).sum()
    }

    pub fn order_terms(&self) -> usize {
        self.order.len() + self.vertex_order.len() + self.edge_order.len()
    }
}

/// One selected field after expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTree {
    /// Response key: the alias if given, otherwise the field name.
    pub key: String,
    pub field: String,
    pub origin: FieldOrigin,
    pub args: FieldArgs,
    pub children: Vec<SelectionTree>,
}

impl SelectionTree {
    /// Number of field nodes below this one.
    pub fn descendant_count(&self) -> usize {
        self.children.iter().map(|c| 1 + c.descendant_count()).sum()
    }

    /// Maximum number of nested edge-list fields on any path below this node,
    /// counting this node.
    pub fn hop_depth(&self) -> usize {
        let own = usize::from(matches!(self.origin, FieldOrigin::Adjacency { .. }));
        own + self.children.iter().map(SelectionTree::hop_depth).max().unwrap_or(0)
    }
}

/// Structural parameters of a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RequestCounters {
    /// Selected fields below the root fields, after fragment expansion and merging.
    #[serde(rename = "S")]
    pub s: usize,
    /// Filter comparisons over all levels.
    #[serde(rename = "W")]
    pub w: usize,
    /// Ordering terms over all levels.
    #[serde(rename = "K")]
    pub k: usize,
    /// Maximum nesting of edge-list fields.
    #[serde(rename = "D")]
    pub d: usize,
}

/// A validated, fully expanded operation.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedRequest {
    pub kind: OperationKind,
    pub name: Option<String>,
    pub roots: Vec<SelectionTree>,
    pub counters: RequestCounters,
}
