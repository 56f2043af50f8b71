//! The internal data structure describing a property graph data schema.
//!
//! A [`GraphSchema`] is an ordered set of vertex definitions and edge
//! definitions. Every vertex keeps the indices of its outgoing and incoming
//! edges and every edge keeps the indices of its endpoints, so synthesis and
//! transpilation can navigate the schema in either direction.
//!
//! The JSON form is a direct image of the structure:
//!
//! ```json
//! {"vertices":[{"id":"u","label":"User","properties":[{"key":"name","datatype":"String","required":true}]}],
//!  "edges":[{"id":"l","label":"likes","source":"u","target":"u","properties":[]}]}
//! ```
//!
//! Adjacency lists are not part of the document; they are rebuilt on parse.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Built-in GraphQL scalar a property may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Datatype {
    #[serde(rename = "ID")]
    Id,
    String,
    Int,
    Float,
    Boolean,
}

impl Datatype {
    pub const ALL: [Datatype; 5] = [Datatype::Id, Datatype::String, Datatype::Int, Datatype::Float, Datatype::Boolean];

    pub fn graphql_name(self) -> &'static str {
        match self {
            Datatype::Id => "ID",
            Datatype::String => "String",
            Datatype::Int => "Int",
            Datatype::Float => "Float",
            Datatype::Boolean => "Boolean",
        }
    }

    pub fn from_graphql_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.graphql_name() == name)
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.graphql_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyDef {
    pub key: String,
    pub datatype: Datatype,
    pub required: bool,
}

impl PropertyDef {
    pub fn new(key: impl Into<String>, datatype: Datatype, required: bool) -> Self {
        Self { key: key.into(), datatype, required }
    }
}

/// Direction of an edge relative to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Out,
    In,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDef {
    pub id: String,
    pub label: String,
    pub properties: Vec<PropertyDef>,
    out_edges: Vec<usize>,
    in_edges: Vec<usize>,
    keys: KeyIndex,
}

impl VertexDef {
    /// Indices (into [`GraphSchema::edges`]) of edges leaving this vertex, in schema order.
    pub fn out_edges(&self) -> &[usize] {
        &self.out_edges
    }

    pub fn in_edges(&self) -> &[usize] {
        &self.in_edges
    }

    pub fn property(&self, key: &str) -> Option<&PropertyDef> {
        self.keys.find(&self.properties, key)
    }
}

/// Position of the first property with each key, so lookups on wide
/// elements stay logarithmic.
#[derive(Debug, Clone, Default)]
struct KeyIndex(BTreeMap<String, usize>);

impl KeyIndex {
    fn new(props: &[PropertyDef]) -> Self {
        let mut m = BTreeMap::new();
        for (i, p) in props.iter().enumerate() {
            m.entry(p.key.clone()).or_insert(i);
        }
        KeyIndex(m)
    }

    /// Falls back to a scan when `props` was edited after indexing.
    fn find<'p>(&self, props: &'p [PropertyDef], key: &str) -> Option<&'p PropertyDef> {
        match self.0.get(key).and_then(|&i| props.get(i)) {
            Some(p) if p.key == key => Some(p),
            _ => props.iter().find(|p| p.key == key),
        }
    }
}

// The index is derived from `properties`, so it takes no part in equality.
impl PartialEq for KeyIndex {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for KeyIndex {}

/// An edge definition. Endpoints are vertex indices; `None` marks an edge that
/// was authored without being attached to a vertex (rejected by the validator).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDef {
    pub id: String,
    pub label: String,
    pub source: Option<usize>,
    pub target: Option<usize>,
    pub properties: Vec<PropertyDef>,
    keys: KeyIndex,
}

impl EdgeDef {
    pub fn property(&self, key: &str) -> Option<&PropertyDef> {
        self.keys.find(&self.properties, key)
    }

    /// Source and target when both are attached.
    pub fn endpoints(&self) -> Option<(usize, usize)> {
        Some((self.source?, self.target?))
    }

    pub fn is_self_loop(&self) -> bool {
        matches!(self.endpoints(), Some((s, t)) if s == t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("malformed schema JSON: {0}")]
    Json(String),
    #[error("edge `{edge}` references unknown vertex id `{vertex}`")]
    DanglingReference { edge: String, vertex: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertexId(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("vertex `{0}` is not part of this schema")]
    UnknownVertex(String),
}

/// The validated-or-not graph data schema.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphSchema {
    vertices: Vec<VertexDef>,
    edges: Vec<EdgeDef>,
}

impl GraphSchema {
    pub fn vertices(&self) -> &[VertexDef] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeDef] {
        &self.edges
    }

    pub fn vertex(&self, idx: usize) -> &VertexDef {
        &self.vertices[idx]
    }

    pub fn edge(&self, idx: usize) -> &EdgeDef {
        &self.edges[idx]
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    /// Edges leaving (`Out`) or entering (`In`) the vertex with schema id `vertex_id`,
    /// in schema order.
    pub fn adjacent_edges(&self, vertex_id: &str, direction: Direction) -> Result<Vec<&EdgeDef>, SchemaError> {
        let idx = self.vertex_by_id(vertex_id).ok_or_else(|| SchemaError::UnknownVertex(vertex_id.to_string()))?;
        let v = &self.vertices[idx];
        let list = match direction {
            Direction::Out => &v.out_edges,
            Direction::In => &v.in_edges,
        };
        Ok(list.iter().map(|&e| &self.edges[e]).collect())
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, SchemaError> {
        let doc: SchemaDocument = serde_json::from_slice(bytes).map_err(|e| SchemaError::Json(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_json_str(text: &str) -> Result<Self, SchemaError> {
        Self::from_json(text.as_bytes())
    }

    /// Canonical JSON: fixed key order, lists in authored order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("schema document always serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("schema document always serializes")
    }

    pub fn from_document(doc: SchemaDocument) -> Result<Self, SchemaError> {
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, v) in doc.vertices.iter().enumerate() {
            if ids.insert(v.id.as_str(), i).is_some() {
                return Err(SchemaError::DuplicateVertexId(v.id.clone()));
            }
        }
        let mut edge_ids: BTreeMap<&str, ()> = BTreeMap::new();
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            if edge_ids.insert(e.id.as_str(), ()).is_some() {
                return Err(SchemaError::DuplicateEdgeId(e.id.clone()));
            }
            let resolve = |r: &Option<String>| -> Result<Option<usize>, SchemaError> {
                match r {
                    None => Ok(None),
                    Some(id) => {
                        ids.get(id.as_str()).copied().map(Some).ok_or_else(|| SchemaError::DanglingReference { edge: e.id.clone(), vertex: id.clone() })
                    }
                }
            };
            edges.push(EdgeDef {
                id: e.id.clone(),
                label: e.label.clone(),
                source: resolve(&e.source)?,
                target: resolve(&e.target)?,
                properties: e.properties.clone(),
                keys: KeyIndex::new(&e.properties),
            });
        }
        let mut vertices: Vec<VertexDef> = doc
            .vertices
            .into_iter()
            .map(|v| VertexDef {
                id: v.id,
                label: v.label,
                keys: KeyIndex::new(&v.properties),
                properties: v.properties,
                out_edges: Vec::new(),
                in_edges: Vec::new(),
            })
            .collect();
        for (i, e) in edges.iter().enumerate() {
            if let Some(s) = e.source {
                vertices[s].out_edges.push(i);
            }
            if let Some(t) = e.target {
                vertices[t].in_edges.push(i);
            }
        }
        Ok(GraphSchema { vertices, edges })
    }

    pub fn to_document(&self) -> SchemaDocument {
        SchemaDocument {
            vertices: self.vertices.iter().map(|v| VertexDocument { id: v.id.clone(), label: v.label.clone(), properties: v.properties.clone() }).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    id: e.id.clone(),
                    label: e.label.clone(),
                    source: e.source.map(|s| self.vertices[s].id.clone()),
                    target: e.target.map(|t| self.vertices[t].id.clone()),
                    properties: e.properties.clone(),
                })
                .collect(),
        }
    }

    pub fn builder() -> SchemaBuilder {
        SchemaBuilder::default()
    }
}

/// Serialized form of [`GraphSchema`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaDocument {
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDocument {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub properties: Vec<PropertyDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub properties: Vec<PropertyDef>,
}

/// Programmatic schema construction; vertices and edges are referenced by label
/// and get ids `v0, v1, ...` / `e0, e1, ...`.
#[derive(Debug, Clone, Default)]
pub struct SchemaBuilder {
    doc: Option<SchemaDocument>,
}

impl SchemaBuilder {
    fn doc(&mut self) -> &mut SchemaDocument {
        self.doc.get_or_insert_with(|| SchemaDocument { vertices: Vec::new(), edges: Vec::new() })
    }

    pub fn vertex(mut self, label: &str, properties: &[(&str, Datatype, bool)]) -> Self {
        let doc = self.doc();
        let id = alloc::format!("v{}", doc.vertices.len());
        doc.vertices.push(VertexDocument { id, label: label.to_string(), properties: props(properties) });
        self
    }

    /// Adds an edge between the first vertices carrying `source` and `target` labels.
    pub fn edge(mut self, label: &str, source: &str, target: &str, properties: &[(&str, Datatype, bool)]) -> Self {
        let doc = self.doc();
        let find = |l: &str| doc.vertices.iter().find(|v| v.label == l).map(|v| v.id.clone());
        let (s, t) = (find(source), find(target));
        let id = alloc::format!("e{}", doc.edges.len());
        doc.edges.push(EdgeDocument { id, label: label.to_string(), source: s, target: t, properties: props(properties) });
        self
    }

    pub fn build(mut self) -> GraphSchema {
        let doc = self.doc().clone();
        GraphSchema::from_document(doc).expect("builder output always resolves")
    }
}

fn props(list: &[(&str, Datatype, bool)]) -> Vec<PropertyDef> {
    list.iter().map(|&(k, d, r)| PropertyDef::new(k, d, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_todo_fixture() {
        let g = fixtures::todo_schema();
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.edges().len(), 2);
        let user = g.vertex(g.vertex_by_label("User").unwrap());
        assert!(!user.property("age").unwrap().required);
        assert_eq!(user.property("name").unwrap().datatype, Datatype::String);
    }

    #[test]
    fn empty_schema_roundtrip() {
        let g = GraphSchema::from_json(br#"{"vertices":[],"edges":[]}"#).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.to_json(), r#"{"vertices":[],"edges":[]}"#);
    }

    #[test]
    fn dangling_reference_is_rejected() {
        let err = GraphSchema::from_json_str(
            r#"{"vertices":[{"id":"a","label":"A","properties":[]}],
                "edges":[{"id":"e","label":"x","source":"a","target":"zzz","properties":[]}]}"#,
        )
        .unwrap_err();
        assert_eq!(err, SchemaError::DanglingReference { edge: "e".into(), vertex: "zzz".into() });
    }

    #[test]
    fn unknown_keys_and_datatypes_are_rejected() {
        let unknown_key = r#"{"vertices":[{"id":"a","label":"A","properties":[],"color":"red"}],"edges":[]}"#;
        assert!(matches!(GraphSchema::from_json_str(unknown_key), Err(SchemaError::Json(_))));
        let bad_type = r#"{"vertices":[{"id":"a","label":"A","properties":[{"key":"k","datatype":"Date","required":true}]}],"edges":[]}"#;
        assert!(matches!(GraphSchema::from_json_str(bad_type), Err(SchemaError::Json(_))));
        assert!(matches!(GraphSchema::from_json_str("{not json"), Err(SchemaError::Json(_))));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dup = r#"{"vertices":[{"id":"a","label":"A"},{"id":"a","label":"B"}],"edges":[]}"#;
        assert_eq!(GraphSchema::from_json_str(dup).unwrap_err(), SchemaError::DuplicateVertexId("a".into()));
    }

    #[test]
    fn adjacency_follows_schema_order() {
        let g = fixtures::todo_schema();
        let labels = |d| -> Vec<String> {
            g.adjacent_edges(&g.vertex(g.vertex_by_label("User").unwrap()).id.clone(), d)
                .unwrap()
                .iter()
                .map(|e| alloc::format!("{}->{}", e.label, g.vertex(e.target.unwrap()).label))
                .collect()
        };
        assert_eq!(labels(Direction::Out), ["likes->User", "owns->Todo"]);
        assert_eq!(labels(Direction::In), ["likes->User"]);
        let todo = g.vertex(g.vertex_by_label("Todo").unwrap()).id.clone();
        assert!(g.adjacent_edges(&todo, Direction::Out).unwrap().is_empty());
        assert_eq!(g.adjacent_edges("nope", Direction::Out).unwrap_err(), SchemaError::UnknownVertex("nope".into()));
    }

    #[test]
    fn adjacency_is_consistent() {
        let g = fixtures::movielens_schema();
        for (i, e) in g.edges().iter().enumerate() {
            let (s, t) = e.endpoints().unwrap();
            assert_eq!(g.vertex(s).out_edges().iter().filter(|&&x| x == i).count(), 1);
            assert_eq!(g.vertex(t).in_edges().iter().filter(|&&x| x == i).count(), 1);
        }
    }

    #[test]
    fn unattached_edge_parses_with_missing_endpoint() {
        let g = GraphSchema::from_json_str(r#"{"vertices":[{"id":"a","label":"A"}],"edges":[{"id":"e","label":"x","source":"a","target":null}]}"#).unwrap();
        assert_eq!(g.edge(0).target, None);
        assert_eq!(GraphSchema::from_json_str(&g.to_json()).unwrap(), g);
    }
}
