use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::value::Scalar;

pub type ElementId = u64;
pub type Properties = BTreeMap<String, Scalar>;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub label: String,
    pub properties: Properties,
    out_edges: BTreeSet<ElementId>,
    in_edges: BTreeSet<ElementId>,
}

impl Vertex {
    /// Outgoing edge ids, ascending.
    pub fn out_edges(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.out_edges.iter().copied()
    }

    /// Incoming edge ids, ascending.
    pub fn in_edges(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.in_edges.iter().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub label: String,
    pub source: ElementId,
    pub target: ElementId,
    pub properties: Properties,
}

/// In-memory property graph. Vertices and edges share one id sequence and
/// ids are never reused.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphStore {
    next_id: ElementId,
    vertices: BTreeMap<ElementId, Vertex>,
    edges: BTreeMap<ElementId, Edge>,
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn allocate(&mut self) -> ElementId {
        self.next_id += 1;
        self.next_id
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, properties: Properties) -> ElementId {
        let id = self.allocate();
        self.vertices.insert(id, Vertex { label: label.into(), properties, out_edges: BTreeSet::new(), in_edges: BTreeSet::new() });
        id
    }

    pub fn add_edge(&mut self, label: impl Into<String>, source: ElementId, target: ElementId, properties: Properties) -> Result<ElementId, EngineError> {
        if !self.vertices.contains_key(&source) {
            return Err(EngineError::NotFound(alloc::format!("vertex {source}")));
        }
        if !self.vertices.contains_key(&target) {
            return Err(EngineError::NotFound(alloc::format!("vertex {target}")));
        }
        let id = self.allocate();
        self.edges.insert(id, Edge { label: label.into(), source, target, properties });
        self.vertices.get_mut(&source).expect("checked").out_edges.insert(id);
        self.vertices.get_mut(&target).expect("checked").in_edges.insert(id);
        Ok(id)
    }

    /// Removes a vertex and every edge touching it.
    pub fn remove_vertex(&mut self, id: ElementId) -> bool {
        let Some(v) = self.vertices.remove(&id) else { return false };
        for e in v.out_edges.iter().chain(v.in_edges.iter()) {
            self.remove_edge(*e);
        }
        true
    }

    pub fn remove_edge(&mut self, id: ElementId) -> bool {
        let Some(e) = self.edges.remove(&id) else { return false };
        if let Some(v) = self.vertices.get_mut(&e.source) {
            v.out_edges.remove(&id);
        }
        if let Some(v) = self.vertices.get_mut(&e.target) {
            v.in_edges.remove(&id);
        }
        true
    }

    pub fn vertex(&self, id: ElementId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: ElementId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn vertex_properties_mut(&mut self, id: ElementId) -> Option<&mut Properties> {
        self.vertices.get_mut(&id).map(|v| &mut v.properties)
    }

    pub fn edge_properties_mut(&mut self, id: ElementId) -> Option<&mut Properties> {
        self.edges.get_mut(&id).map(|e| &mut e.properties)
    }

    /// Vertices in id order.
    pub fn vertices(&self) -> impl Iterator<Item = (ElementId, &Vertex)> {
        self.vertices.iter().map(|(k, v)| (*k, v))
    }

    /// Edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = (ElementId, &Edge)> {
        self.edges.iter().map(|(k, e)| (*k, e))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_counts_by_label(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for v in self.vertices.values() {
            *out.entry(v.label.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn edge_counts_by_label(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in self.edges.values() {
            *out.entry(e.label.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Checks that every edge has both endpoints and that adjacency sets
    /// mirror the edge table.
    pub fn check_integrity(&self) -> Result<(), String> {
        for (id, e) in &self.edges {
            let ok =
                self.vertices.get(&e.source).is_some_and(|v| v.out_edges.contains(id)) && self.vertices.get(&e.target).is_some_and(|v| v.in_edges.contains(id));
            if !ok {
                return Err(alloc::format!("edge {id} has a dangling endpoint"));
            }
        }
        for (id, v) in &self.vertices {
            for e in &v.out_edges {
                if self.edges.get(e).map(|e| e.source) != Some(*id) {
                    return Err(alloc::format!("vertex {id} lists unknown outgoing edge {e}"));
                }
            }
            for e in &v.in_edges {
                if self.edges.get(e).map(|e| e.target) != Some(*id) {
                    return Err(alloc::format!("vertex {id} lists unknown incoming edge {e}"));
                }
            }
        }
        if self.vertices.keys().chain(self.edges.keys()).any(|id| *id > self.next_id) {
            return Err("element id beyond the allocator".into());
        }
        Ok(())
    }

    pub fn to_snapshot(&self) -> Snapshot {
        Snapshot {
            next_id: self.next_id,
            vertices: self.vertices.iter().map(|(id, v)| SnapshotVertex { id: *id, label: v.label.clone(), properties: v.properties.clone() }).collect(),
            edges: self
                .edges
                .iter()
                .map(|(id, e)| SnapshotEdge { id: *id, label: e.label.clone(), source: e.source, target: e.target, properties: e.properties.clone() })
                .collect(),
        }
    }

    pub fn from_snapshot(s: Snapshot) -> Result<Self, EngineError> {
        let mut store = GraphStore { next_id: s.next_id, ..Default::default() };
        for v in s.vertices {
            let fresh = Vertex { label: v.label, properties: v.properties, out_edges: BTreeSet::new(), in_edges: BTreeSet::new() };
            if store.vertices.insert(v.id, fresh).is_some() {
                return Err(EngineError::Invalid(alloc::format!("duplicate id {}", v.id)));
            }
        }
        for e in s.edges {
            if store.vertices.contains_key(&e.id) || store.edges.contains_key(&e.id) {
                return Err(EngineError::Invalid(alloc::format!("duplicate id {}", e.id)));
            }
            let (Some(_), Some(_)) = (store.vertices.get(&e.source), store.vertices.get(&e.target)) else {
                return Err(EngineError::Invalid(alloc::format!("edge {} has a dangling endpoint", e.id)));
            };
            store.vertices.get_mut(&e.source).expect("checked").out_edges.insert(e.id);
            store.vertices.get_mut(&e.target).expect("checked").in_edges.insert(e.id);
            store.edges.insert(e.id, Edge { label: e.label, source: e.source, target: e.target, properties: e.properties });
        }
        store.check_integrity().map_err(EngineError::Invalid)?;
        Ok(store)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_snapshot()).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EngineError> {
        let s: Snapshot = serde_json::from_str(text).map_err(|e| EngineError::Invalid(alloc::format!("{e}")))?;
        Self::from_snapshot(s)
    }
}

/// Serialized form of a store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    pub next_id: ElementId,
    pub vertices: Vec<SnapshotVertex>,
    pub edges: Vec<SnapshotEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotVertex {
    pub id: ElementId,
    pub label: String,
    #[serde(default)]
    pub properties: Properties,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEdge {
    pub id: ElementId,
    pub label: String,
    pub source: ElementId,
    pub target: ElementId,
    #[serde(default)]
    pub properties: Properties,
}
