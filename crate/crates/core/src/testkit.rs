//! Seeded generators for property and differential tests: valid graph
//! schemas, stores that conform to them, and query texts over the
//! synthesized schema.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::engine::{ElementId, GraphStore, Properties};
use crate::graphql::ast::{SdlInputValue, TypeKind};
use crate::graphql::parse_sdl;
use crate::schema::{Datatype, GraphSchema, PropertyDef};
use crate::synth::{CompareOp, FieldDef, FieldOrigin, GraphQLSchemaDoc};
use crate::validate::validate;
use crate::value::Scalar;

pub use rand_chacha::ChaCha8Rng as TestRng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

const VERTEX_LABELS: [&str; 6] = ["User", "Movie", "Genre", "Place", "Tag", "Team"];
const EDGE_LABELS: [&str; 5] = ["likes", "rated", "follows", "owns", "tagged"];
const VERTEX_KEYS: [&str; 6] = ["name", "age", "score", "active", "code", "rank"];
const EDGE_KEYS: [&str; 4] = ["weight", "since", "note", "flag"];
const STRINGS: [&str; 7] = ["", "a", "Ann", "bob", "Zed", "caf\u{e9}", "x\"y"];

fn random_datatype(rng: &mut impl Rng) -> Datatype {
    *Datatype::ALL.choose(rng).expect("non-empty")
}

fn random_properties(rng: &mut impl Rng, pool: &[&str], max: usize) -> Vec<(String, Datatype, bool)> {
    let n = rng.gen_range(0..=max.min(pool.len()));
    let mut keys: Vec<&str> = pool.to_vec();
    keys.shuffle(rng);
    keys.into_iter().take(n).map(|k| (k.to_string(), random_datatype(rng), rng.gen_bool(0.5))).collect()
}

/// A random schema that passes validation: 1 to 4 vertex types, up to 5 edge
/// types (self-loops allowed), up to 4 properties per element.
pub fn random_schema(rng: &mut impl Rng) -> GraphSchema {
    loop {
        let mut labels: Vec<&str> = VERTEX_LABELS.to_vec();
        labels.shuffle(rng);
        let nv = rng.gen_range(1..=4);
        let mut b = GraphSchema::builder();
        let mut vertex_props = Vec::new();
        for l in &labels[..nv] {
            vertex_props.push((*l, random_properties(rng, &VERTEX_KEYS, 4)));
        }
        for (l, props) in &vertex_props {
            let list: Vec<(&str, Datatype, bool)> = props.iter().map(|(k, d, r)| (k.as_str(), *d, *r)).collect();
            b = b.vertex(l, &list);
        }
        let ne = rng.gen_range(0..=5);
        let mut edges = Vec::new();
        for _ in 0..ne {
            let label = *EDGE_LABELS.choose(rng).expect("non-empty");
            let s = labels[rng.gen_range(0..nv)];
            let t = labels[rng.gen_range(0..nv)];
            edges.push((label, s, t, random_properties(rng, &EDGE_KEYS, 2)));
        }
        for (label, s, t, props) in &edges {
            let list: Vec<(&str, Datatype, bool)> = props.iter().map(|(k, d, r)| (k.as_str(), *d, *r)).collect();
            b = b.edge(label, s, t, &list);
        }
        let g = b.build();
        if validate(&g).is_empty() {
            return g;
        }
    }
}

pub fn random_value(rng: &mut impl Rng, datatype: Datatype) -> Scalar {
    match datatype {
        Datatype::Int => Scalar::Int(rng.gen_range(-3..=12)),
        // quarters are exact in binary and in decimal text
        Datatype::Float => Scalar::Float(f64::from(rng.gen_range(-8i32..=24)) / 4.0 + 0.0),
        Datatype::String => Scalar::String(STRINGS.choose(rng).expect("non-empty").to_string()),
        Datatype::Boolean => Scalar::Bool(rng.gen_bool(0.5)),
        Datatype::Id => Scalar::String(format!("k{}", rng.gen_range(0..6))),
    }
}

fn random_element_properties(rng: &mut impl Rng, defs: &[PropertyDef]) -> Properties {
    let mut out = Properties::new();
    for p in defs {
        if p.required || rng.gen_bool(0.7) {
            out.insert(p.key.clone(), random_value(rng, p.datatype));
        }
    }
    out
}

/// A store conforming to `g` with at most `max_elements` vertices and edges.
/// Some elements are created and deleted again so ids have gaps.
pub fn random_store(rng: &mut impl Rng, g: &GraphSchema, max_elements: usize) -> GraphStore {
    let mut s = GraphStore::new();
    let budget = rng.gen_range(0..=max_elements);
    let nv = if g.edges().is_empty() { budget } else { budget * 3 / 5 };
    let mut by_label: Vec<Vec<ElementId>> = alloc::vec![Vec::new(); g.vertices().len()];
    for _ in 0..nv {
        let vi = rng.gen_range(0..g.vertices().len());
        let v = g.vertex(vi);
        let id = s.add_vertex(v.label.clone(), random_element_properties(rng, &v.properties));
        if rng.gen_bool(0.1) {
            s.remove_vertex(id);
        } else {
            by_label[vi].push(id);
        }
    }
    if !g.edges().is_empty() {
        for _ in nv..budget {
            let ei = rng.gen_range(0..g.edges().len());
            let e = g.edge(ei);
            let (src, tgt) = e.endpoints().expect("valid schema");
            let (Some(a), Some(b)) = (by_label[src].choose(rng), by_label[tgt].choose(rng)) else { continue };
            let props = random_element_properties(rng, &e.properties);
            s.add_edge(e.label.clone(), *a, *b, props).expect("endpoints exist");
        }
    }
    s
}

/// A generated query and the number of fields it selects below its roots.
#[derive(Debug, Clone)]
pub struct GeneratedQuery {
    pub text: String,
    pub fields: usize,
    pub depth: usize,
}

fn graphql_literal(v: &Scalar) -> String {
    match v {
        Scalar::Null => "null".into(),
        Scalar::Bool(b) => b.to_string(),
        Scalar::Int(i) => i.to_string(),
        Scalar::Float(f) => format!("{f:?}"),
        Scalar::String(s) => serde_json::to_string(s).expect("strings serialize"),
    }
}

struct QueryGen<'a, R> {
    rng: &'a mut R,
    doc: &'a GraphQLSchemaDoc,
    store: Option<&'a GraphStore>,
    fields: usize,
    max_hops: usize,
    deepest: usize,
    alias: usize,
}

impl<R: Rng> QueryGen<'_, R> {
    fn filterable<'p>(&self, props: &'p [PropertyDef]) -> Vec<&'p PropertyDef> {
        props.iter().filter(|p| !CompareOp::for_datatype(p.datatype).is_empty()).collect()
    }

    /// One filter input object over `props`, nesting AND/OR up to `depth`.
    fn filter(&mut self, props: &[&PropertyDef], depth: usize) -> String {
        let mut parts = Vec::new();
        let mut pool: Vec<&PropertyDef> = props.to_vec();
        pool.shuffle(self.rng);
        let leaves = self.rng.gen_range(0..=2usize.min(pool.len()));
        for p in pool.into_iter().take(leaves) {
            let ops = CompareOp::for_datatype(p.datatype);
            let op = *ops.choose(self.rng).expect("filterable");
            let v = random_value(self.rng, p.datatype);
            parts.push(format!("{}_{}: {}", p.key, op.suffix(), graphql_literal(&v)));
        }
        if depth > 0 {
            for name in ["AND", "OR"] {
                if self.rng.gen_bool(0.3) {
                    let n = self.rng.gen_range(1..=2);
                    let items: Vec<String> = (0..n).map(|_| self.filter(props, depth - 1)).collect();
                    parts.push(format!("{name}: [{}]", items.join(", ")));
                }
            }
        }
        if parts.is_empty() {
            let p = props[self.rng.gen_range(0..props.len())];
            let op = CompareOp::for_datatype(p.datatype)[0];
            parts.push(format!("{}_{}: {}", p.key, op.suffix(), graphql_literal(&random_value(self.rng, p.datatype))));
        }
        format!("{{{}}}", parts.join(", "))
    }

    fn order(&mut self, props: &[PropertyDef]) -> String {
        let mut keys: Vec<&PropertyDef> = props.iter().collect();
        keys.shuffle(self.rng);
        let n = self.rng.gen_range(1..=2usize.min(keys.len()));
        let terms: Vec<String> =
            keys.into_iter().take(n).map(|p| format!("{{property: {}, order: {}}}", p.key, if self.rng.gen_bool(0.5) { "ASC" } else { "DESC" })).collect();
        format!("[{}]", terms.join(", "))
    }

    fn pagination(&mut self) -> String {
        format!("{{offset: {}, limit: {}}}", self.rng.gen_range(0..3), self.rng.gen_range(0..5))
    }

    fn key(&mut self, field: &str) -> String {
        if self.rng.gen_bool(0.1) {
            self.alias += 1;
            format!("a{}: {field}", self.alias)
        } else {
            field.to_string()
        }
    }

    /// Selection set of an object type. Always selects at least one field
    /// and never selects the same field twice.
    fn selection(&mut self, type_name: &str, hops: usize) -> String {
        let obj = self.doc.object(type_name).expect("object type");
        let mut fields: Vec<&FieldDef> = obj
            .fields
            .iter()
            .filter(|f| match f.origin {
                FieldOrigin::Adjacency { .. } => hops < self.max_hops,
                _ => true,
            })
            .collect();
        fields.shuffle(self.rng);
        let n = self.rng.gen_range(1..=fields.len().min(4));
        let mut parts = Vec::new();
        for f in fields.into_iter().take(n) {
            self.fields += 1;
            let key = self.key(&f.name);
            match &f.origin {
                FieldOrigin::Adjacency { edge, direction } => {
                    self.deepest = self.deepest.max(hops + 1);
                    let g = self.doc.graph_schema();
                    let e = g.edge(*edge);
                    let (s, t) = e.endpoints().expect("valid");
                    let far = if *direction == crate::schema::Direction::Out { t } else { s };
                    let far_props = g.vertex(far).properties.clone();
                    let mut args = Vec::new();
                    let fe = self.filterable(&e.properties);
                    if !fe.is_empty() && self.rng.gen_bool(0.3) {
                        args.push(format!("whereEdge: {}", self.filter(&fe, 1)));
                    }
                    let fv = self.filterable(&far_props);
                    if !fv.is_empty() && self.rng.gen_bool(0.3) {
                        args.push(format!("whereVertex: {}", self.filter(&fv, 1)));
                    }
                    if !e.properties.is_empty() && self.rng.gen_bool(0.3) {
                        args.push(format!("orderByEdge: {}", self.order(&e.properties)));
                    }
                    if !far_props.is_empty() && self.rng.gen_bool(0.3) {
                        args.push(format!("orderByVertex: {}", self.order(&far_props)));
                    }
                    if self.rng.gen_bool(0.3) {
                        args.push(format!("pagination: {}", self.pagination()));
                    }
                    let inner = self.selection(f.ty.base(), hops + 1);
                    let args = if args.is_empty() { String::new() } else { format!("({})", args.join(", ")) };
                    parts.push(format!("{key}{args} {inner}"));
                }
                FieldOrigin::VertexRef { .. } => {
                    let inner = self.selection(f.ty.base(), hops);
                    parts.push(format!("{key} {inner}"));
                }
                _ => parts.push(key),
            }
        }
        format!("{{ {} }}", parts.join(" "))
    }

    fn root(&mut self) -> String {
        let q = self.doc.query_type().expect("schema has vertices");
        let roots: Vec<&FieldDef> = q.fields.iter().collect();
        let f = *roots.choose(self.rng).expect("non-empty");
        let key = f.name.clone();
        match f.origin {
            FieldOrigin::SingleRoot { vertex } => {
                let label = &self.doc.graph_schema().vertex(vertex).label;
                let ids: Vec<ElementId> = self.store.map(|s| s.vertices().filter(|(_, v)| v.label == *label).map(|(id, _)| id).collect()).unwrap_or_default();
                let id = match ids.choose(self.rng) {
                    Some(id) if self.rng.gen_bool(0.85) => id.to_string(),
                    _ => self.rng.gen_range(1..60).to_string(),
                };
                let inner = self.selection(f.ty.base(), 0);
                format!("{key}(id: \"{id}\") {inner}")
            }
            FieldOrigin::ListRoot { vertex } => {
                let props = self.doc.graph_schema().vertex(vertex).properties.clone();
                let mut args = Vec::new();
                let fp = self.filterable(&props);
                if !fp.is_empty() && self.rng.gen_bool(0.4) {
                    args.push(format!("where: {}", self.filter(&fp, 2)));
                }
                if !props.is_empty() && self.rng.gen_bool(0.4) {
                    args.push(format!("orderBy: {}", self.order(&props)));
                }
                if self.rng.gen_bool(0.3) {
                    args.push(format!("pagination: {}", self.pagination()));
                }
                let inner = self.selection(f.ty.base(), 0);
                let args = if args.is_empty() { String::new() } else { format!("({})", args.join(", ")) };
                format!("{key}{args} {inner}")
            }
            _ => unreachable!("query roots are lookups and lists"),
        }
    }
}

/// A random query with one root field and at most `max_hops` nested edge
/// lists. Single lookups mostly address vertices present in `store`.
pub fn random_query(rng: &mut impl Rng, doc: &GraphQLSchemaDoc, store: Option<&GraphStore>, max_hops: usize) -> GeneratedQuery {
    let mut gen = QueryGen { rng, doc, store, fields: 0, max_hops, deepest: 0, alias: 0 };
    let root = gen.root();
    GeneratedQuery { text: format!("query {{ {root} }}"), fields: gen.fields, depth: gen.deepest }
}

/// One field or input value of an SDL block: name, arguments and type, with
/// whitespace and commas dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutlineField {
    pub name: String,
    pub args: Vec<(String, String)>,
    pub ty: String,
}

/// A `type`, `input`, `enum` or `interface` block. Enum values are fields
/// with an empty type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutlineBlock {
    pub keyword: String,
    pub name: String,
    pub fields: Vec<OutlineField>,
}

impl OutlineBlock {
    pub fn field(&self, name: &str) -> Option<&OutlineField> {
        self.fields.iter().find(|f| f.name == name)
    }
}

/// Block structure of SDL text, read with the regular SDL parser. Panics on
/// malformed input.
pub fn sdl_outline(sdl: &str) -> Vec<OutlineBlock> {
    let doc = parse_sdl(sdl).unwrap_or_else(|e| panic!("unreadable SDL: {e}"));
    doc.types
        .iter()
        .map(|t| {
            let input = |v: &SdlInputValue| OutlineField { name: v.name.clone(), args: Vec::new(), ty: v.ty.to_string() };
            let fields = match t.kind {
                TypeKind::Object | TypeKind::Interface => t
                    .fields
                    .iter()
                    .map(|f| OutlineField {
                        name: f.name.clone(),
                        args: f.args.iter().map(|a| (a.name.clone(), a.ty.to_string())).collect(),
                        ty: f.ty.to_string(),
                    })
                    .collect(),
                TypeKind::Input => t.input_fields.iter().map(input).collect(),
                _ => t.values.iter().map(|v| OutlineField { name: v.clone(), args: Vec::new(), ty: String::new() }).collect(),
            };
            let keyword = match t.kind {
                TypeKind::Object => "type",
                TypeKind::Interface => "interface",
                TypeKind::Input => "input",
                TypeKind::Enum => "enum",
                TypeKind::Union => "union",
                TypeKind::Scalar => "scalar",
            };
            OutlineBlock { keyword: keyword.into(), name: t.name.clone(), fields }
        })
        .collect()
}
