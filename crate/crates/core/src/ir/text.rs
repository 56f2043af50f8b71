use alloc::format;
use alloc::string::String;

use super::{Flavor, IdLit, Predicate, Start, Step, Traversal};
use crate::synth::CompareOp;
use crate::value::{OrderDirection, Scalar};

pub(super) fn render(t: &Traversal, flavor: Flavor) -> String {
    let mut out = String::new();
    write_traversal(&mut out, t, flavor);
    out
}

fn write_traversal(out: &mut String, t: &Traversal, flavor: Flavor) {
    let mut first = true;
    match t.start {
        Start::Graph => out.push('g'),
        Start::Anonymous => match flavor {
            Flavor::Python => out.push_str("__"),
            // Groovy code statically imports the anonymous steps, except
            // for V() which would otherwise resolve against the graph.
            Flavor::Groovy => match t.steps.first() {
                Some(Step::V(_)) | None => out.push_str("__"),
                Some(_) => first = false,
            },
        },
    }
    for step in &t.steps {
        if first {
            out.push('.');
        }
        first = true;
        write_step(out, step, flavor);
    }
}

fn name(step: &Step, flavor: Flavor) -> &'static str {
    let py = flavor == Flavor::Python;
    match step {
        Step::V(_) => "V",
        Step::E(_) => "E",
        Step::AddV(_) => {
            if py {
                "add_v"
            } else {
                "addV"
            }
        }
        Step::AddE(_) => {
            if py {
                "add_e"
            } else {
                "addE"
            }
        }
        Step::To(_) => "to",
        Step::HasLabel(_) => {
            if py {
                "has_label"
            } else {
                "hasLabel"
            }
        }
        Step::Has(..) => "has",
        Step::Where(_) => "where",
        Step::And(_) => {
            if py {
                "and_"
            } else {
                "and"
            }
        }
        Step::Or(_) => {
            if py {
                "or_"
            } else {
                "or"
            }
        }
        Step::OutE(_) => {
            if py {
                "out_e"
            } else {
                "outE"
            }
        }
        Step::InE(_) => {
            if py {
                "in_e"
            } else {
                "inE"
            }
        }
        Step::InV => {
            if py {
                "in_v"
            } else {
                "inV"
            }
        }
        Step::OutV => {
            if py {
                "out_v"
            } else {
                "outV"
            }
        }
        Step::Values(_) => "values",
        Step::Id => {
            if py {
                "id_"
            } else {
                "id"
            }
        }
        Step::Label => "label",
        Step::Constant(_) => "constant",
        Step::Coalesce(_) => "coalesce",
        Step::Project(_) => "project",
        Step::OrderBy(_) => "order",
        Step::Skip(_) => "skip",
        Step::Limit(_) => "limit",
        Step::Fold => "fold",
        Step::Property(..) => "property",
        Step::Drop => "drop",
        Step::ToList => {
            if py {
                "to_list"
            } else {
                "toList"
            }
        }
        Step::Next => "next",
        Step::Iterate => "iterate",
    }
}

fn write_step(out: &mut String, step: &Step, flavor: Flavor) {
    out.push_str(name(step, flavor));
    out.push('(');
    match step {
        Step::V(id) | Step::E(id) => {
            if let Some(id) = id {
                write_id(out, id, flavor);
            }
        }
        Step::AddV(s) | Step::AddE(s) | Step::HasLabel(s) | Step::OutE(s) | Step::InE(s) | Step::Values(s) => write_str(out, s),
        Step::To(t) | Step::Where(t) => write_traversal(out, t, flavor),
        Step::Has(k, p) => {
            write_str(out, k);
            out.push_str(", ");
            write_predicate(out, p, flavor);
        }
        Step::And(ts) | Step::Or(ts) | Step::Coalesce(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_traversal(out, t, flavor);
            }
        }
        Step::Constant(v) => write_scalar(out, v, flavor),
        Step::Property(k, v) => {
            write_str(out, k);
            out.push_str(", ");
            write_scalar(out, v, flavor);
        }
        Step::Skip(n) | Step::Limit(n) => out.push_str(&format!("{n}")),
        Step::Project(entries) => {
            for (i, (k, _)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_str(out, k);
            }
            out.push(')');
            for (_, t) in entries {
                out.push_str(".by(");
                write_traversal(out, t, flavor);
                out.push(')');
            }
            return;
        }
        Step::OrderBy(terms) => {
            out.push(')');
            for (t, dir) in terms {
                out.push_str(".by(");
                write_traversal(out, t, flavor);
                out.push_str(", ");
                out.push_str(match (flavor, dir) {
                    (Flavor::Python, OrderDirection::Asc) => "Order.asc",
                    (Flavor::Python, OrderDirection::Desc) => "Order.desc",
                    (Flavor::Groovy, OrderDirection::Asc) => "asc",
                    (Flavor::Groovy, OrderDirection::Desc) => "desc",
                });
                out.push(')');
            }
            return;
        }
        Step::InV | Step::OutV | Step::Id | Step::Label | Step::Fold | Step::Drop | Step::ToList | Step::Next | Step::Iterate => {}
    }
    out.push(')');
}

fn write_id(out: &mut String, id: &IdLit, flavor: Flavor) {
    match id {
        IdLit::Int(n) => {
            out.push_str(&format!("{n}"));
            if flavor == Flavor::Groovy {
                out.push('L');
            }
        }
        IdLit::Str(s) => write_str(out, s),
    }
}

pub(super) fn predicate_name(op: CompareOp) -> &'static str {
    match op {
        CompareOp::Eq => "eq",
        CompareOp::Neq => "neq",
        CompareOp::Gt => "gt",
        CompareOp::Gte => "gte",
        CompareOp::Lt => "lt",
        CompareOp::Lte => "lte",
    }
}

fn write_predicate(out: &mut String, p: &Predicate, flavor: Flavor) {
    if flavor == Flavor::Python {
        out.push_str("P.");
    }
    out.push_str(predicate_name(p.op));
    out.push('(');
    write_scalar(out, &p.value, flavor);
    out.push(')');
}

fn write_scalar(out: &mut String, v: &Scalar, flavor: Flavor) {
    let py = flavor == Flavor::Python;
    match v {
        Scalar::Null => out.push_str(if py { "None" } else { "null" }),
        Scalar::Bool(b) => out.push_str(match (py, b) {
            (true, true) => "True",
            (true, false) => "False",
            (false, true) => "true",
            (false, false) => "false",
        }),
        Scalar::Int(n) => out.push_str(&format!("{n}")),
        Scalar::Float(f) => {
            // `{:?}` always keeps a fractional part or exponent.
            out.push_str(&format!("{f:?}"));
            if !py {
                out.push('d');
            }
        }
        Scalar::String(s) => write_str(out, s),
    }
}

fn write_str(out: &mut String, s: &str) {
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
}

/// Canonical single-line form of a traversal written across several lines:
/// drops line continuations, collapses whitespace runs and removes blanks
/// next to `(`, `)` and `.`. Applied to both sides when comparing texts.
pub fn normalize_whitespace(text: &str) -> String {
    let joined = text.replace("\\\r\n", " ").replace("\\\n", " ");
    let mut collapsed = String::with_capacity(joined.len());
    let mut pending_space = false;
    for c in joined.chars() {
        if c.is_whitespace() {
            pending_space = true;
            continue;
        }
        if pending_space {
            let prev = collapsed.chars().last();
            let glue = matches!(c, ')' | '.') || matches!(prev, Some('(' | '.') | None);
            if !glue {
                collapsed.push(' ');
            }
            pending_space = false;
        }
        collapsed.push(c);
    }
    collapsed
}
