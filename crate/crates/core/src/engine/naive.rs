//! Field-by-field resolver working directly on the store.
//!
//! Each field is resolved on its own with fresh lookups, the way a naive
//! resolver tree would. Nothing here goes through traversals, so it serves as
//! an oracle for the transpiled path.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::result::ResultValue;
use super::store::{ElementId, GraphStore, Properties};
use super::EngineError;
use crate::graphql::{LogicCondition, OperationKind, OrderTerm, PaginationSpec, PreparedRequest, SelectionTree};
use crate::schema::{Direction, GraphSchema};
use crate::synth::{CompareOp, FieldOrigin, GraphQLSchemaDoc};
use crate::value::{OrderDirection, Scalar};

/// Resolves every root field of a query operation against `store`.
pub fn naive_resolve(doc: &GraphQLSchemaDoc, req: &PreparedRequest, store: &GraphStore) -> Result<ResultValue, EngineError> {
    if req.kind != OperationKind::Query {
        return Err(EngineError::Invalid("only queries can be resolved".into()));
    }
    let r = Resolver { g: doc.graph_schema(), store };
    let mut out = Vec::new();
    for root in &req.roots {
        out.push((root.key.clone(), r.root(root)?));
    }
    Ok(ResultValue::Map(out))
}

struct Resolver<'a> {
    g: &'a GraphSchema,
    store: &'a GraphStore,
}

fn unsupported(node: &SelectionTree) -> EngineError {
    EngineError::Invalid(alloc::format!("field {} cannot be resolved here", node.field))
}

impl Resolver<'_> {
    fn root(&self, node: &SelectionTree) -> Result<ResultValue, EngineError> {
        match node.origin {
            FieldOrigin::SingleRoot { vertex } => {
                let label = &self.g.vertex(vertex).label;
                let wanted = node.args.id.as_deref().unwrap_or_default();
                let hit = self.store.vertices().find(|(id, v)| id.to_string() == wanted && v.label == *label);
                match hit {
                    Some((id, _)) => self.vertex(node, id),
                    None => Ok(ResultValue::Null),
                }
            }
            FieldOrigin::ListRoot { vertex } => {
                let label = &self.g.vertex(vertex).label;
                let mut rows: Vec<ElementId> = self
                    .store
                    .vertices()
                    .filter(|(_, v)| v.label == *label)
                    .filter(|(_, v)| node.args.filter.as_ref().is_none_or(|f| all_hold(&v.properties, f)))
                    .map(|(id, _)| id)
                    .collect();
                if !node.args.order.is_empty() {
                    let key = |id: &ElementId| {
                        let props = &self.store.vertex(*id).expect("listed").properties;
                        node.args.order.iter().map(|t| (props.get(&t.property).filter(|v| !v.is_null()).cloned(), t.direction)).collect::<Vec<_>>()
                    };
                    sort_rows(&mut rows, key);
                }
                let rows = paginate(rows, node.args.pagination);
                let items = rows.into_iter().map(|id| self.vertex(node, id)).collect::<Result<_, _>>()?;
                Ok(ResultValue::List(items))
            }
            _ => Err(unsupported(node)),
        }
    }

    fn vertex(&self, node: &SelectionTree, id: ElementId) -> Result<ResultValue, EngineError> {
        let v = self.store.vertex(id).ok_or_else(|| EngineError::NotFound(alloc::format!("vertex {id}")))?;
        let mut map = Vec::with_capacity(node.children.len());
        for child in &node.children {
            let value = match &child.origin {
                FieldOrigin::Id => ResultValue::Id(id),
                FieldOrigin::Label => ResultValue::String(v.label.clone()),
                FieldOrigin::Property(p) => property(&v.properties, &p.key),
                &FieldOrigin::Adjacency { edge, direction } => self.adjacency(child, id, edge, direction)?,
                _ => return Err(unsupported(child)),
            };
            map.push((child.key.clone(), value));
        }
        Ok(ResultValue::Map(map))
    }

    fn adjacency(&self, node: &SelectionTree, vertex: ElementId, edge: usize, direction: Direction) -> Result<ResultValue, EngineError> {
        let def = self.g.edge(edge);
        let other_label = match direction {
            Direction::Out => def.target.map(|t| &self.g.vertex(t).label),
            Direction::In => def.source.map(|s| &self.g.vertex(s).label),
        };
        let far = |e: &super::store::Edge| match direction {
            Direction::Out => e.target,
            Direction::In => e.source,
        };
        let a = &node.args;
        let mut rows: Vec<ElementId> = Vec::new();
        for (eid, e) in self.store.edges() {
            let near = match direction {
                Direction::Out => e.source,
                Direction::In => e.target,
            };
            if near != vertex || e.label != def.label {
                continue;
            }
            if let Some(f) = &a.edge_filter {
                if !all_hold(&e.properties, f) {
                    continue;
                }
            }
            if let Some(f) = &a.vertex_filter {
                let Some(other) = self.store.vertex(far(e)) else { continue };
                if Some(&other.label) != other_label || !all_hold(&other.properties, f) {
                    continue;
                }
            }
            rows.push(eid);
        }
        if !a.edge_order.is_empty() || !a.vertex_order.is_empty() {
            let key = |id: &ElementId| {
                let e = self.store.edge(*id).expect("listed");
                let other = &self.store.vertex(far(e)).expect("endpoint").properties;
                let pick = |props: &Properties, terms: &[OrderTerm]| {
                    terms.iter().map(|t| (props.get(&t.property).filter(|v| !v.is_null()).cloned(), t.direction)).collect::<Vec<_>>()
                };
                let mut k = pick(&e.properties, &a.edge_order);
                k.extend(pick(other, &a.vertex_order));
                k
            };
            sort_rows(&mut rows, key);
        }
        let rows = paginate(rows, a.pagination);
        let mut items = Vec::with_capacity(rows.len());
        for eid in rows {
            items.push(self.edge(node, eid, direction)?);
        }
        Ok(ResultValue::List(items))
    }

    fn edge(&self, node: &SelectionTree, id: ElementId, direction: Direction) -> Result<ResultValue, EngineError> {
        let e = self.store.edge(id).ok_or_else(|| EngineError::NotFound(alloc::format!("edge {id}")))?;
        let mut map = Vec::with_capacity(node.children.len());
        for child in &node.children {
            let value = match &child.origin {
                FieldOrigin::Id => ResultValue::Id(id),
                FieldOrigin::Label => ResultValue::String(e.label.clone()),
                FieldOrigin::Property(p) => property(&e.properties, &p.key),
                &FieldOrigin::VertexRef { vertex } => {
                    let far = if direction == Direction::Out { e.target } else { e.source };
                    match self.store.vertex(far) {
                        Some(v) if v.label == self.g.vertex(vertex).label => self.vertex(child, far)?,
                        _ => ResultValue::Null,
                    }
                }
                _ => return Err(unsupported(child)),
            };
            map.push((child.key.clone(), value));
        }
        Ok(ResultValue::Map(map))
    }
}

fn property(props: &Properties, key: &str) -> ResultValue {
    match props.get(key) {
        None | Some(Scalar::Null) => ResultValue::Null,
        Some(Scalar::Bool(b)) => ResultValue::Bool(*b),
        Some(Scalar::Int(i)) => ResultValue::Int(*i),
        Some(Scalar::Float(f)) => ResultValue::Float(*f),
        Some(Scalar::String(s)) => ResultValue::String(s.clone()),
    }
}

fn all_hold(props: &Properties, conj: &[LogicCondition]) -> bool {
    conj.iter().all(|c| holds(props, c))
}

fn holds(props: &Properties, c: &LogicCondition) -> bool {
    match c {
        LogicCondition::Compare { property, op, value } => match props.get(property) {
            None | Some(Scalar::Null) => false,
            Some(actual) => match cmp(actual, value) {
                None => false,
                Some(o) => match op {
                    CompareOp::Eq => o.is_eq(),
                    CompareOp::Neq => o.is_ne(),
                    CompareOp::Gt => o.is_gt(),
                    CompareOp::Gte => o.is_ge(),
                    CompareOp::Lt => o.is_lt(),
                    CompareOp::Lte => o.is_le(),
                },
            },
        },
        LogicCondition::And(cs) => cs.iter().all(|conj| all_hold(props, conj)),
        LogicCondition::Or(cs) => cs.iter().any(|conj| all_hold(props, conj)),
    }
}

fn number(s: &Scalar) -> Option<f64> {
    match s {
        Scalar::Int(i) => Some(*i as f64),
        Scalar::Float(f) => Some(*f),
        _ => None,
    }
}

fn cmp(a: &Scalar, b: &Scalar) -> Option<Ordering> {
    match (a, b) {
        (Scalar::Int(x), Scalar::Int(y)) => Some(x.cmp(y)),
        (Scalar::String(x), Scalar::String(y)) => Some(x.chars().cmp(y.chars())),
        (Scalar::Bool(x), Scalar::Bool(y)) => Some(x.cmp(y)),
        _ => number(a)?.partial_cmp(&number(b)?),
    }
}

type SortKey = Vec<(Option<Scalar>, OrderDirection)>;

/// Stable sort: present values in the requested direction, absent values
/// after them, element id ascending last.
fn sort_rows<F>(rows: &mut [ElementId], key: F)
where
    F: Fn(&ElementId) -> SortKey,
{
    let mut keyed: Vec<(SortKey, ElementId)> = rows.iter().map(|id| (key(id), *id)).collect();
    keyed.sort_by(|(ka, ia), (kb, ib)| {
        for ((a, dir), (b, _)) in ka.iter().zip(kb) {
            let o = match (a, b) {
                (Some(x), Some(y)) => {
                    let base = cmp(x, y).unwrap_or(Ordering::Equal);
                    if *dir == OrderDirection::Desc {
                        base.reverse()
                    } else {
                        base
                    }
                }
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            };
            if o.is_ne() {
                return o;
            }
        }
        ia.cmp(ib)
    });
    for (slot, (_, id)) in rows.iter_mut().zip(keyed) {
        *slot = id;
    }
}

fn paginate(rows: Vec<ElementId>, p: Option<PaginationSpec>) -> Vec<ElementId> {
    match p {
        None => rows,
        Some(p) => rows.into_iter().skip(p.offset as usize).take(p.limit as usize).collect(),
    }
}
