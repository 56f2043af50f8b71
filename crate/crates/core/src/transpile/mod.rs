//! Conversion of expanded requests into traversals.
//!
//! Queries run through a recursive state machine. A root field opens a
//! vertex context; vertex projection visits each selected field, where edge
//! lists open an edge context, and the vertex reference of an edge type
//! re-enters vertex projection on the opposite endpoint (`out_e` pairs with
//! `in_v`, `in_e` with `out_v`). Two stacks hold the vertex and edge
//! definitions of the enclosing contexts.
//!
//! Mutations map onto fixed templates.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::graphql::{Conjunction, LogicCondition, OperationKind, OrderTerm, PreparedRequest, SelectionTree};
use crate::ir::{Flavor, IdLit, Predicate, Step, Traversal};
use crate::schema::{Direction, GraphSchema, PropertyDef};
use crate::synth::{FieldOrigin, GraphQLSchemaDoc};
use crate::value::{OrderDirection, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranspileError {
    #[error("expected a {expected} operation")]
    WrongOperation { expected: &'static str },
    /// The tree does not fit the schema it was prepared against.
    #[error("internal error: {0}")]
    Internal(String),
}

/// Structural parameters of a request together with what the state machine
/// measured while converting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ComplexityCounters {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "W")]
    pub w: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "D")]
    pub d: usize,
    /// Fields processed by vertex and edge projection.
    #[serde(rename = "fieldVisits")]
    pub field_visits: usize,
    #[serde(rename = "maxVertexStack")]
    pub max_vertex_stack: usize,
    #[serde(rename = "maxEdgeStack")]
    pub max_edge_stack: usize,
}

/// How a root traversal's result is consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// Single lookup: one map or null.
    Single,
    /// List root: a list of maps.
    List,
    AddVertex,
    UpdateVertex,
    ConnectEdge,
    UpdateEdge,
    DeleteVertex,
    DeleteEdge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootTraversal {
    /// Response key.
    pub key: String,
    pub kind: RootKind,
    /// Element id addressed by updates and deletes, as given in the request.
    pub target: Option<String>,
    pub traversal: Traversal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transpiled {
    pub roots: Vec<RootTraversal>,
    pub counters: ComplexityCounters,
}

impl Transpiled {
    /// One traversal per line, in root field order.
    pub fn text(&self, flavor: Flavor) -> String {
        let mut out = String::new();
        for (i, r) in self.roots.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&r.traversal.to_text(flavor));
        }
        out
    }
}

fn anon(steps: Vec<Step>) -> Traversal {
    Traversal { start: crate::ir::Start::Anonymous, steps }
}

fn internal(msg: impl Into<String>) -> TranspileError {
    TranspileError::Internal(msg.into())
}

/// Converts a prepared query into one traversal per root field.
pub fn transpile_query(doc: &GraphQLSchemaDoc, req: &PreparedRequest) -> Result<Transpiled, TranspileError> {
    if req.kind != OperationKind::Query {
        return Err(TranspileError::WrongOperation { expected: "query" });
    }
    let mut m = Machine::new(doc.graph_schema());
    let mut roots = Vec::with_capacity(req.roots.len());
    for node in &req.roots {
        roots.push(m.root(node)?);
    }
    if !m.vertices.is_empty() || !m.edges.is_empty() {
        return Err(internal("unbalanced context stacks"));
    }
    let c = req.counters;
    let counters = ComplexityCounters { s: c.s, w: c.w, k: c.k, d: c.d, field_visits: m.visits, max_vertex_stack: m.max_vertices, max_edge_stack: m.max_edges };
    Ok(Transpiled { roots, counters })
}

/// Converts a prepared mutation into one traversal per root field, to be
/// executed in order.
pub fn transpile_mutation(doc: &GraphQLSchemaDoc, req: &PreparedRequest) -> Result<Transpiled, TranspileError> {
    if req.kind != OperationKind::Mutation {
        return Err(TranspileError::WrongOperation { expected: "mutation" });
    }
    let g = doc.graph_schema();
    let mut roots = Vec::with_capacity(req.roots.len());
    for node in &req.roots {
        roots.push(mutation(g, node)?);
    }
    let c = req.counters;
    Ok(Transpiled { roots, counters: ComplexityCounters { s: c.s, w: c.w, k: c.k, d: c.d, ..Default::default() } })
}

fn required_arg<'a>(value: &'a Option<String>, what: &str) -> Result<&'a str, TranspileError> {
    value.as_deref().ok_or_else(|| internal(format!("missing {what}")))
}

fn properties(t: &mut Traversal, data: &[(String, Scalar)]) {
    for (k, v) in data {
        t.push(Step::Property(k.clone(), v.clone()));
    }
}

/// `g.add_v(label).property(..)*.id_().next()`
pub fn add_vertex(label: &str, data: &[(String, Scalar)]) -> Traversal {
    let mut t = Traversal::g().step(Step::AddV(label.into()));
    properties(&mut t, data);
    t.step(Step::Id).step(Step::Next)
}

/// New edge between two existing vertices, each checked for its label.
pub fn connect(source: (&str, IdLit), label: &str, target: (&str, IdLit), data: &[(String, Scalar)]) -> Traversal {
    let mut t = Traversal::g()
        .step(Step::V(Some(source.1)))
        .step(Step::HasLabel(source.0.into()))
        .step(Step::AddE(label.into()))
        .step(Step::To(anon(vec![Step::V(Some(target.1)), Step::HasLabel(target.0.into())])));
    properties(&mut t, data);
    t.step(Step::Id).step(Step::Next)
}

fn mutation(g: &GraphSchema, node: &SelectionTree) -> Result<RootTraversal, TranspileError> {
    let a = &node.args;
    let mut target = None;
    let (kind, t) = match node.origin {
        FieldOrigin::AddVertex { vertex } => {
            return Ok(RootTraversal { key: node.key.clone(), kind: RootKind::AddVertex, target, traversal: add_vertex(&g.vertex(vertex).label, &a.data) });
        }
        FieldOrigin::UpdateVertex { vertex } => {
            let id = required_arg(&a.id, "id")?;
            target = Some(id.into());
            let mut t = Traversal::g().step(Step::V(Some(IdLit::parse(id)))).step(Step::HasLabel(g.vertex(vertex).label.clone()));
            properties(&mut t, &a.data);
            (RootKind::UpdateVertex, t)
        }
        FieldOrigin::ConnectEdge { edge } => {
            let e = g.edge(edge);
            let (src, tgt) = e.endpoints().ok_or_else(|| internal("edge without endpoints"))?;
            let source = required_arg(&a.source_id, "source id")?;
            let dest = required_arg(&a.target_id, "target id")?;
            let t = connect((&g.vertex(src).label, IdLit::parse(source)), &e.label, (&g.vertex(tgt).label, IdLit::parse(dest)), &a.data);
            return Ok(RootTraversal { key: node.key.clone(), kind: RootKind::ConnectEdge, target, traversal: t });
        }
        FieldOrigin::UpdateEdge { edge } => {
            let e = g.edge(edge);
            let (src, tgt) = e.endpoints().ok_or_else(|| internal("edge without endpoints"))?;
            let id = required_arg(&a.id, "id")?;
            target = Some(id.into());
            // The label alone may be shared by edges between other vertex types.
            let mut t = Traversal::g()
                .step(Step::E(Some(IdLit::parse(id))))
                .step(Step::HasLabel(e.label.clone()))
                .step(Step::Where(anon(vec![Step::OutV, Step::HasLabel(g.vertex(src).label.clone())])))
                .step(Step::Where(anon(vec![Step::InV, Step::HasLabel(g.vertex(tgt).label.clone())])));
            properties(&mut t, &a.data);
            (RootKind::UpdateEdge, t)
        }
        FieldOrigin::DeleteVertex | FieldOrigin::DeleteEdge => {
            let id = required_arg(&a.id, "id")?;
            target = Some(id.into());
            let source = if node.origin == FieldOrigin::DeleteVertex { Step::V(Some(IdLit::parse(id))) } else { Step::E(Some(IdLit::parse(id))) };
            let kind = if node.origin == FieldOrigin::DeleteVertex { RootKind::DeleteVertex } else { RootKind::DeleteEdge };
            let t = Traversal::g().step(source).step(Step::Drop).step(Step::Iterate);
            return Ok(RootTraversal { key: node.key.clone(), kind, target, traversal: t });
        }
        ref other => return Err(internal(format!("{other:?} is not a mutation field"))),
    };
    let t = t.step(Step::Id).step(Step::Next);
    Ok(RootTraversal { key: node.key.clone(), kind, target, traversal: t })
}

struct Machine<'a> {
    g: &'a GraphSchema,
    vertices: Vec<usize>,
    edges: Vec<(usize, Direction)>,
    visits: usize,
    max_vertices: usize,
    max_edges: usize,
}

impl<'a> Machine<'a> {
    fn new(g: &'a GraphSchema) -> Self {
        Machine { g, vertices: Vec::new(), edges: Vec::new(), visits: 0, max_vertices: 0, max_edges: 0 }
    }

    fn push_vertex(&mut self, v: usize) {
        self.vertices.push(v);
        self.max_vertices = self.max_vertices.max(self.vertices.len());
    }

    fn push_edge(&mut self, e: usize, d: Direction) {
        self.edges.push((e, d));
        self.max_edges = self.max_edges.max(self.edges.len());
    }

    /// Root states: single lookup and list.
    fn root(&mut self, node: &SelectionTree) -> Result<RootTraversal, TranspileError> {
        let (vertex, kind) = match node.origin {
            FieldOrigin::SingleRoot { vertex } => (vertex, RootKind::Single),
            FieldOrigin::ListRoot { vertex } => (vertex, RootKind::List),
            ref other => return Err(internal(format!("{other:?} is not a query root"))),
        };
        let v = self.g.vertex(vertex);
        let mut t = Traversal::g();
        let mut target = None;
        if kind == RootKind::Single {
            let id = required_arg(&node.args.id, "id")?;
            target = Some(id.into());
            t.push(Step::V(Some(IdLit::parse(id))));
        } else {
            t.push(Step::V(None));
        }
        t.push(Step::HasLabel(v.label.clone()));
        if let Some(filter) = &node.args.filter {
            t.steps.extend(where_steps(filter));
        }
        if !node.args.order.is_empty() {
            t.push(order_step(&[(&[], &node.args.order, &v.properties)])?);
        }
        self.push_vertex(vertex);
        let project = self.project_vertex(node);
        self.vertices.pop();
        t.push(project?);
        if let Some(p) = node.args.pagination {
            t.push(Step::Skip(p.offset));
            t.push(Step::Limit(p.limit));
        }
        t.push(if kind == RootKind::Single { Step::Next } else { Step::ToList });
        Ok(RootTraversal { key: node.key.clone(), kind, target, traversal: t })
    }

    /// Vertex projection over the selected fields of the top vertex.
    fn project_vertex(&mut self, node: &SelectionTree) -> Result<Step, TranspileError> {
        let &vertex = self.vertices.last().ok_or_else(|| internal("empty vertex stack"))?;
        let v = self.g.vertex(vertex);
        let mut entries = Vec::with_capacity(node.children.len());
        for child in &node.children {
            self.visits += 1;
            let by = match &child.origin {
                FieldOrigin::Id => anon(vec![Step::Id]),
                FieldOrigin::Label => anon(vec![Step::Label]),
                FieldOrigin::Property(p) if v.property(&p.key).is_some() => property_value(p),
                &FieldOrigin::Adjacency { edge, direction } if self.attached(vertex, edge, direction) => self.edge_list(child, edge, direction)?,
                other => return Err(internal(format!("{other:?} cannot be read from vertex {}", v.label))),
            };
            entries.push((child.key.clone(), by));
        }
        Ok(Step::Project(entries))
    }

    fn attached(&self, vertex: usize, edge: usize, direction: Direction) -> bool {
        let e = self.g.edge(edge);
        match direction {
            Direction::Out => e.source == Some(vertex),
            Direction::In => e.target == Some(vertex),
        }
    }

    /// Edge list states: `out_e` or `in_e`, then filters, order, projection,
    /// pagination and `fold`.
    fn edge_list(&mut self, node: &SelectionTree, edge: usize, direction: Direction) -> Result<Traversal, TranspileError> {
        let e = self.g.edge(edge);
        let (other, pair) = paired(self.g, edge, direction)?;
        let other_label = self.g.vertex(other).label.clone();
        let a = &node.args;
        let mut t = anon(vec![match direction {
            Direction::Out => Step::OutE(e.label.clone()),
            Direction::In => Step::InE(e.label.clone()),
        }]);
        if let Some(filter) = &a.edge_filter {
            t.steps.extend(where_steps(filter));
        }
        if let Some(filter) = &a.vertex_filter {
            let mut inner = vec![pair.clone(), Step::HasLabel(other_label)];
            inner.extend(where_steps(filter));
            t.push(Step::Where(anon(inner)));
        }
        if !a.edge_order.is_empty() || !a.vertex_order.is_empty() {
            let ov = self.g.vertex(other);
            t.push(order_step(&[(&[], &a.edge_order, &e.properties), (&[pair], &a.vertex_order, &ov.properties)])?);
        }
        self.push_edge(edge, direction);
        let project = self.project_edge(node);
        self.edges.pop();
        t.push(project?);
        if let Some(p) = a.pagination {
            t.push(Step::Skip(p.offset));
            t.push(Step::Limit(p.limit));
        }
        t.push(Step::Fold);
        Ok(t)
    }

    /// Edge projection; the vertex reference continues on the paired endpoint.
    fn project_edge(&mut self, node: &SelectionTree) -> Result<Step, TranspileError> {
        let &(edge, direction) = self.edges.last().ok_or_else(|| internal("empty edge stack"))?;
        let e = self.g.edge(edge);
        let (other, pair) = paired(self.g, edge, direction)?;
        let mut entries = Vec::with_capacity(node.children.len());
        for child in &node.children {
            self.visits += 1;
            let by = match &child.origin {
                FieldOrigin::Id => anon(vec![Step::Id]),
                FieldOrigin::Label => anon(vec![Step::Label]),
                FieldOrigin::Property(p) if e.property(&p.key).is_some() => property_value(p),
                &FieldOrigin::VertexRef { vertex } if vertex == other => {
                    self.push_vertex(other);
                    let project = self.project_vertex(child);
                    self.vertices.pop();
                    anon(vec![pair.clone(), Step::HasLabel(self.g.vertex(other).label.clone()), project?])
                }
                other => return Err(internal(format!("{other:?} cannot be read from edge {}", e.label))),
            };
            entries.push((child.key.clone(), by));
        }
        Ok(Step::Project(entries))
    }
}

/// The far endpoint of an edge walked in `direction`, and the step reaching it.
fn paired(g: &GraphSchema, edge: usize, direction: Direction) -> Result<(usize, Step), TranspileError> {
    let (src, tgt) = g.edge(edge).endpoints().ok_or_else(|| internal("edge without endpoints"))?;
    Ok(match direction {
        Direction::Out => (tgt, Step::InV),
        Direction::In => (src, Step::OutV),
    })
}

fn property_value(p: &PropertyDef) -> Traversal {
    if p.required {
        anon(vec![Step::Values(p.key.clone())])
    } else {
        anon(vec![Step::Coalesce(vec![anon(vec![Step::Values(p.key.clone())]), anon(vec![Step::Constant(Scalar::Null)])])])
    }
}

/// Filter conditions as `has` chains; siblings are consecutive steps.
pub fn where_steps(conj: &Conjunction) -> Vec<Step> {
    conj.iter()
        .map(|c| match c {
            LogicCondition::Compare { property, op, value } => Step::Has(property.clone(), Predicate { op: *op, value: value.clone() }),
            LogicCondition::And(cs) => Step::And(cs.iter().map(|c| anon(where_steps(c))).collect()),
            LogicCondition::Or(cs) => Step::Or(cs.iter().map(|c| anon(where_steps(c))).collect()),
        })
        .collect()
}

/// One `order()` step over groups of (path to the element, terms, its
/// properties), followed by the current element's id ascending. Optional
/// properties sort present values before absent ones.
fn order_step(groups: &[(&[Step], &[OrderTerm], &[PropertyDef])]) -> Result<Step, TranspileError> {
    let mut terms = Vec::new();
    for &(prefix, list, props) in groups {
        for term in list {
            let p = props.iter().find(|p| p.key == term.property).ok_or_else(|| internal(format!("unknown order property {}", term.property)))?;
            let with = |s: Step| {
                let mut steps = prefix.to_vec();
                steps.push(s);
                anon(steps)
            };
            let values = || anon(vec![Step::Values(p.key.clone())]);
            if p.required {
                terms.push((with(Step::Values(p.key.clone())), term.direction));
            } else {
                let mut present = values();
                present.push(Step::Constant(Scalar::Int(0)));
                terms.push((with(Step::Coalesce(vec![present, anon(vec![Step::Constant(Scalar::Int(1))])])), OrderDirection::Asc));
                terms.push((with(Step::Coalesce(vec![values(), anon(vec![Step::Constant(Scalar::Int(0))])])), term.direction));
            }
        }
    }
    terms.push((anon(vec![Step::Id]), OrderDirection::Asc));
    Ok(Step::OrderBy(terms))
}

#[cfg(test)]
mod tests;
