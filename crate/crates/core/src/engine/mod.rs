//! Embedded property graph: the store, an interpreter for emitted
//! traversals, and an independent per-field resolver.

mod eval;
mod naive;
mod result;
mod store;

use alloc::string::String;
use alloc::vec::Vec;

pub use eval::Execution;
pub use naive::naive_resolve;
pub use result::{canonical_json, ResultValue};
pub use store::{Edge, ElementId, GraphStore, Properties, Snapshot, SnapshotEdge, SnapshotVertex, Vertex};

use crate::transpile::{RootKind, Transpiled};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("invalid traversal: {0}")]
    Invalid(String),
    #[error("traversal modifies the graph but the store is read-only")]
    ReadOnly,
}

/// Evaluates the root traversals of a query into a map keyed by response key.
pub fn run_query(store: &GraphStore, plan: &Transpiled) -> Result<ResultValue, EngineError> {
    let mut out = Vec::with_capacity(plan.roots.len());
    for root in &plan.roots {
        out.push((root.key.clone(), store.query(&root.traversal)?));
    }
    Ok(ResultValue::Map(out))
}

/// Applies the root traversals of a mutation in order. Each yields the id of
/// the created, updated or deleted element. Stops at the first failure;
/// earlier roots stay applied.
pub fn run_mutation(store: &mut GraphStore, plan: &Transpiled) -> Result<ResultValue, EngineError> {
    let mut out = Vec::with_capacity(plan.roots.len());
    for root in &plan.roots {
        let exec = store.execute(&root.traversal)?;
        let target = || root.target.clone().unwrap_or_default();
        let value = match root.kind {
            RootKind::DeleteVertex | RootKind::DeleteEdge => {
                if exec.dropped == 0 {
                    let what = if root.kind == RootKind::DeleteVertex { "vertex" } else { "edge" };
                    return Err(EngineError::NotFound(alloc::format!("{what} {}", target())));
                }
                ResultValue::String(target())
            }
            RootKind::ConnectEdge if exec.value == ResultValue::Null => return Err(EngineError::NotFound("source vertex".into())),
            RootKind::UpdateVertex if exec.value == ResultValue::Null => {
                return Err(EngineError::NotFound(alloc::format!("vertex {}", target())));
            }
            RootKind::UpdateEdge if exec.value == ResultValue::Null => return Err(EngineError::NotFound(alloc::format!("edge {}", target()))),
            RootKind::Single | RootKind::List => return Err(EngineError::Invalid("query root in a mutation".into())),
            _ => exec.value,
        };
        out.push((root.key.clone(), value));
    }
    Ok(ResultValue::Map(out))
}

#[cfg(test)]
mod tests;
