//! Synthesis of the GraphQL schema from a validated [`GraphSchema`].
//!
//! Vertices become `{Label}Vertex` object types, every edge becomes one object
//! type per traversal direction (`{From}To{To}{Label}Edge`, a single type for
//! self-loops), and all of them implement the `GraphElement` interface. Vertex
//! types expose `{edge}In`/`{edge}Out` list fields, edge types expose a field
//! named after the vertex they lead to. The `Query` root has a single lookup and
//! a filtered list per vertex; the `Mutation` root has add/update per vertex,
//! connect/update per edge, and the generic deletes.

mod sdl;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::naming;
use crate::schema::{Datatype, Direction, GraphSchema, PropertyDef};
use crate::validate::{validate, Violation};

pub use sdl::emit_sdl;

/// A GraphQL type reference: `Int`, `[UserVertex!]!`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeRef {
    Named(String),
    List(Box<TypeRef>),
    NonNull(Box<TypeRef>),
}

impl TypeRef {
    pub fn named(name: impl Into<String>) -> Self {
        TypeRef::Named(name.into())
    }

    pub fn non_null(self) -> Self {
        TypeRef::NonNull(Box::new(self))
    }

    pub fn list(self) -> Self {
        TypeRef::List(Box::new(self))
    }

    /// `[T!]!`
    pub fn non_null_list_of(name: impl Into<String>) -> Self {
        TypeRef::named(name).non_null().list().non_null()
    }

    /// The innermost named type.
    pub fn base(&self) -> &str {
        match self {
            TypeRef::Named(n) => n,
            TypeRef::List(t) | TypeRef::NonNull(t) => t.base(),
        }
    }

    pub fn is_non_null(&self) -> bool {
        matches!(self, TypeRef::NonNull(_))
    }

    pub fn nullable(&self) -> &TypeRef {
        match self {
            TypeRef::NonNull(t) => t,
            t => t,
        }
    }

    pub fn is_list(&self) -> bool {
        matches!(self.nullable(), TypeRef::List(_))
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Named(n) => f.write_str(n),
            TypeRef::List(t) => write!(f, "[{t}]"),
            TypeRef::NonNull(t) => write!(f, "{t}!"),
        }
    }
}

fn scalar(d: Datatype) -> TypeRef {
    TypeRef::named(d.graphql_name())
}

fn property_type(p: &PropertyDef) -> TypeRef {
    if p.required {
        scalar(p.datatype).non_null()
    } else {
        scalar(p.datatype)
    }
}

/// A graph element an object or input type stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vertex(usize),
    /// An edge as seen when travelling in `direction` from the vertex owning the field.
    Edge {
        edge: usize,
        direction: Direction,
    },
}

/// What a field of the synthesized schema means in graph terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldOrigin {
    Id,
    Label,
    Property(PropertyDef),
    /// Edge list on a vertex type.
    Adjacency {
        edge: usize,
        direction: Direction,
    },
    /// Vertex reference on an edge type.
    VertexRef {
        vertex: usize,
    },
    SingleRoot {
        vertex: usize,
    },
    ListRoot {
        vertex: usize,
    },
    AddVertex {
        vertex: usize,
    },
    UpdateVertex {
        vertex: usize,
    },
    ConnectEdge {
        edge: usize,
    },
    UpdateEdge {
        edge: usize,
    },
    DeleteVertex,
    DeleteEdge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputValueDef {
    pub name: String,
    pub ty: TypeRef,
}

impl InputValueDef {
    fn new(name: impl Into<String>, ty: TypeRef) -> Self {
        Self { name: name.into(), ty }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDef {
    pub name: String,
    pub args: Vec<InputValueDef>,
    pub ty: TypeRef,
    pub origin: FieldOrigin,
}

impl FieldDef {
    pub fn arg(&self, name: &str) -> Option<&InputValueDef> {
        self.args.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectType {
    pub name: String,
    pub implements: Vec<String>,
    pub fields: Vec<FieldDef>,
    pub element: Option<Element>,
    field_index: BTreeMap<String, usize>,
}

impl ObjectType {
    fn new(name: String, implements: Vec<String>, fields: Vec<FieldDef>, element: Option<Element>) -> Self {
        let field_index = fields.iter().enumerate().map(|(i, f)| (f.name.clone(), i)).collect();
        Self { name, implements, fields, element, field_index }
    }

    pub fn field(&self, name: &str) -> Option<&FieldDef> {
        self.field_index.get(name).map(|&i| &self.fields[i])
    }
}

/// Role of an input object type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Mutation payload for a vertex or an edge (declared orientation).
    Data(Element),
    /// `*LogicInput` filter.
    Logic(Element),
    /// `*OrderByInput` term.
    OrderBy(Element),
    Pagination,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputType {
    pub name: String,
    pub fields: Vec<InputValueDef>,
    pub kind: InputKind,
}

impl InputType {
    pub fn field(&self, name: &str) -> Option<&InputValueDef> {
        self.fields.iter().find(|f| f.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumType {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeDef {
    Object(ObjectType),
    Interface(ObjectType),
    Input(InputType),
    Enum(EnumType),
}

impl TypeDef {
    pub fn name(&self) -> &str {
        match self {
            TypeDef::Object(o) | TypeDef::Interface(o) => &o.name,
            TypeDef::Input(i) => &i.name,
            TypeDef::Enum(e) => &e.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("schema has {} rule violation(s); first: {}", .0.len(), .0.first().map(|v| v.message.as_str()).unwrap_or(""))]
    InvalidSchema(Vec<Violation>),
}

/// The synthesized GraphQL schema: type definitions, the mapping back to the
/// graph schema, and the canonical SDL text.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphQLSchemaDoc {
    schema: GraphSchema,
    types: Vec<TypeDef>,
    index: BTreeMap<String, usize>,
    vertex_types: Vec<String>,
    sdl: String,
}

/// Operators available in `*LogicInput` types, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompareOp {
    Eq,
    Neq,
    Gt,
    Gte,
    Lt,
    Lte,
}

impl CompareOp {
    pub const ALL: [CompareOp; 6] = [CompareOp::Eq, CompareOp::Neq, CompareOp::Gt, CompareOp::Gte, CompareOp::Lt, CompareOp::Lte];

    pub fn suffix(self) -> &'static str {
        match self {
            CompareOp::Eq => "EQ",
            CompareOp::Neq => "NEQ",
            CompareOp::Gt => "GT",
            CompareOp::Gte => "GTE",
            CompareOp::Lt => "LT",
            CompareOp::Lte => "LTE",
        }
    }

    pub fn from_suffix(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.suffix() == s)
    }

    /// Operators a property of this datatype can be filtered with.
    pub fn for_datatype(d: Datatype) -> &'static [CompareOp] {
        match d {
            Datatype::Int | Datatype::Float | Datatype::String => &Self::ALL,
            Datatype::Boolean => &[CompareOp::Eq, CompareOp::Neq],
            Datatype::Id => &[],
        }
    }
}

/// Splits `age_GT` into (`age`, `Gt`).
pub fn split_filter_field(name: &str) -> Option<(&str, CompareOp)> {
    let (prop, suffix) = name.rsplit_once('_')?;
    Some((prop, CompareOp::from_suffix(suffix)?))
}

impl GraphQLSchemaDoc {
    pub fn graph_schema(&self) -> &GraphSchema {
        &self.schema
    }

    pub fn sdl(&self) -> &str {
        &self.sdl
    }

    pub fn types(&self) -> &[TypeDef] {
        &self.types
    }

    pub fn get(&self, name: &str) -> Option<&TypeDef> {
        self.index.get(name).map(|&i| &self.types[i])
    }

    pub fn object(&self, name: &str) -> Option<&ObjectType> {
        match self.get(name)? {
            TypeDef::Object(o) => Some(o),
            _ => None,
        }
    }

    pub fn input(&self, name: &str) -> Option<&InputType> {
        match self.get(name)? {
            TypeDef::Input(i) => Some(i),
            _ => None,
        }
    }

    pub fn enum_type(&self, name: &str) -> Option<&EnumType> {
        match self.get(name)? {
            TypeDef::Enum(e) => Some(e),
            _ => None,
        }
    }

    pub fn query_type(&self) -> Option<&ObjectType> {
        self.object(naming::QUERY)
    }

    pub fn mutation_type(&self) -> Option<&ObjectType> {
        self.object(naming::MUTATION)
    }

    /// Object type name of a vertex.
    pub fn vertex_type_name(&self, vertex: usize) -> &str {
        &self.vertex_types[vertex]
    }

    /// Object type reached by following `edge` in `direction` from a vertex.
    pub fn edge_type_name(&self, edge: usize, direction: Direction) -> String {
        let e = self.schema.edge(edge);
        let (s, t) = e.endpoints().expect("validated edges are attached");
        let (from, to) = match direction {
            Direction::Out => (s, t),
            Direction::In => (t, s),
        };
        naming::edge_type(&self.schema.vertex(from).label, &self.schema.vertex(to).label, &e.label)
    }

    /// fields_S: ordered field names of an object or interface type.
    pub fn fields_of(&self, type_name: &str) -> Option<Vec<&str>> {
        match self.get(type_name)? {
            TypeDef::Object(o) | TypeDef::Interface(o) => Some(o.fields.iter().map(|f| f.name.as_str()).collect()),
            _ => None,
        }
    }

    /// args_S: argument names of a field.
    pub fn args_of(&self, type_name: &str, field: &str) -> Option<Vec<&str>> {
        let f = self.field(type_name, field)?;
        Some(f.args.iter().map(|a| a.name.as_str()).collect())
    }

    /// type_S for a field.
    pub fn type_of(&self, type_name: &str, field: &str) -> Option<&TypeRef> {
        Some(&self.field(type_name, field)?.ty)
    }

    pub fn field(&self, type_name: &str, field: &str) -> Option<&FieldDef> {
        match self.get(type_name)? {
            TypeDef::Object(o) | TypeDef::Interface(o) => o.field(field),
            _ => None,
        }
    }

    /// implementation_S: object types implementing an interface.
    pub fn implementations(&self, interface: &str) -> Vec<&str> {
        self.types
            .iter()
            .filter_map(|t| match t {
                TypeDef::Object(o) if o.implements.iter().any(|i| i == interface) => Some(o.name.as_str()),
                _ => None,
            })
            .collect()
    }

    /// root_S: the Query fields and their return types.
    pub fn roots(&self) -> Vec<(&str, &TypeRef)> {
        self.query_type().map(|q| q.fields.iter().map(|f| (f.name.as_str(), &f.ty)).collect()).unwrap_or_default()
    }

    /// Object types standing for vertices or edges.
    pub fn element_types(&self) -> impl Iterator<Item = &ObjectType> {
        self.types.iter().filter_map(|t| match t {
            TypeDef::Object(o) if o.element.is_some() => Some(o),
            _ => None,
        })
    }

    /// Whether `type_name` satisfies a fragment type condition `condition`.
    pub fn type_applies(&self, condition: &str, type_name: &str) -> bool {
        if condition == type_name {
            return true;
        }
        matches!(self.object(type_name), Some(o) if o.implements.iter().any(|i| i == condition))
    }
}

/// Builds the GraphQL schema for a schema that passes every validation rule.
pub fn synthesize(g: &GraphSchema) -> Result<GraphQLSchemaDoc, SynthError> {
    let violations = validate(g);
    if !violations.is_empty() {
        return Err(SynthError::InvalidSchema(violations));
    }
    Ok(synthesize_unchecked(g))
}

fn synthesize_unchecked(g: &GraphSchema) -> GraphQLSchemaDoc {
    let mut b = Builder { g, types: Vec::new() };
    b.roots();
    b.vertex_types();
    b.edge_types();
    b.inputs();
    b.enums();
    b.types.push(TypeDef::Interface(ObjectType::new(
        naming::GRAPH_ELEMENT.to_string(),
        Vec::new(),
        vec![
            FieldDef { name: "id".into(), args: Vec::new(), ty: TypeRef::named("ID").non_null(), origin: FieldOrigin::Id },
            FieldDef { name: "label".into(), args: Vec::new(), ty: TypeRef::named("String").non_null(), origin: FieldOrigin::Label },
        ],
        None,
    )));
    let types = b.types;
    let index = types.iter().enumerate().map(|(i, t)| (t.name().to_string(), i)).collect();
    let vertex_types = g.vertices().iter().map(|v| naming::vertex_type(&v.label)).collect();
    let mut doc = GraphQLSchemaDoc { schema: g.clone(), types, index, vertex_types, sdl: String::new() };
    doc.sdl = emit_sdl(&doc);
    doc
}

struct Builder<'a> {
    g: &'a GraphSchema,
    types: Vec<TypeDef>,
}

impl Builder<'_> {
    fn vlabel(&self, v: usize) -> &str {
        &self.g.vertex(v).label
    }

    fn has_order_input(&self, el: Element) -> bool {
        !self.properties(el).is_empty()
    }

    fn properties(&self, el: Element) -> &[PropertyDef] {
        match el {
            Element::Vertex(v) => &self.g.vertex(v).properties,
            Element::Edge { edge, .. } => &self.g.edge(edge).properties,
        }
    }

    fn edge_names(&self, edge: usize) -> (&str, &str, &str) {
        let e = self.g.edge(edge);
        let (s, t) = e.endpoints().expect("validated edges are attached");
        (self.vlabel(s), self.vlabel(t), &e.label)
    }

    fn logic_input_name(&self, el: Element) -> String {
        match el {
            Element::Vertex(v) => naming::vertex_logic_input(self.vlabel(v)),
            Element::Edge { edge, .. } => {
                let (s, t, l) = self.edge_names(edge);
                naming::edge_logic_input(s, t, l)
            }
        }
    }

    fn order_input_name(&self, el: Element) -> String {
        match el {
            Element::Vertex(v) => naming::vertex_order_input(self.vlabel(v)),
            Element::Edge { edge, .. } => {
                let (s, t, l) = self.edge_names(edge);
                naming::edge_order_input(s, t, l)
            }
        }
    }

    fn property_enum_name(&self, el: Element) -> String {
        match el {
            Element::Vertex(v) => naming::vertex_property_enum(self.vlabel(v)),
            Element::Edge { edge, .. } => {
                let (s, t, l) = self.edge_names(edge);
                naming::edge_property_enum(s, t, l)
            }
        }
    }

    fn roots(&mut self) {
        let g = self.g;
        if g.vertices().is_empty() {
            return;
        }
        let mut query = Vec::new();
        for (vi, v) in g.vertices().iter().enumerate() {
            let vt = naming::vertex_type(&v.label);
            query.push(FieldDef {
                name: naming::single_root(&v.label),
                args: vec![InputValueDef::new("id", TypeRef::named("ID").non_null())],
                ty: TypeRef::named(vt.clone()),
                origin: FieldOrigin::SingleRoot { vertex: vi },
            });
            let el = Element::Vertex(vi);
            let mut args = vec![InputValueDef::new("where", TypeRef::named(self.logic_input_name(el)))];
            if self.has_order_input(el) {
                args.push(InputValueDef::new("orderBy", TypeRef::named(self.order_input_name(el)).non_null().list()));
            }
            args.push(InputValueDef::new("pagination", TypeRef::named(naming::PAGINATION_INPUT)));
            query.push(FieldDef { name: naming::list_root(&v.label), args, ty: TypeRef::non_null_list_of(vt), origin: FieldOrigin::ListRoot { vertex: vi } });
        }
        self.types.push(TypeDef::Object(ObjectType::new(naming::QUERY.into(), Vec::new(), query, None)));

        let id = || TypeRef::named("ID").non_null();
        let mut mutation = Vec::new();
        for (vi, v) in g.vertices().iter().enumerate() {
            let data: Vec<InputValueDef> =
                if v.properties.is_empty() { Vec::new() } else { vec![InputValueDef::new("data", TypeRef::named(naming::vertex_input(&v.label)).non_null())] };
            mutation.push(FieldDef { name: naming::add_vertex(&v.label), args: data.clone(), ty: id(), origin: FieldOrigin::AddVertex { vertex: vi } });
            let mut args = vec![InputValueDef::new("id", id())];
            args.extend(data);
            mutation.push(FieldDef { name: naming::update_vertex(&v.label), args, ty: id(), origin: FieldOrigin::UpdateVertex { vertex: vi } });
        }
        mutation.push(FieldDef { name: naming::DELETE_VERTEX.into(), args: vec![InputValueDef::new("id", id())], ty: id(), origin: FieldOrigin::DeleteVertex });
        for (ei, e) in g.edges().iter().enumerate() {
            let (s, t) = e.endpoints().expect("validated edges are attached");
            let (sl, tl) = (self.vlabel(s), self.vlabel(t));
            let mut args = vec![InputValueDef::new(naming::source_id_arg(sl), id()), InputValueDef::new(naming::target_id_arg(tl), id())];
            let data = InputValueDef::new("data", TypeRef::named(naming::edge_input(sl, tl, &e.label)).non_null());
            if !e.properties.is_empty() {
                args.push(data.clone());
            }
            mutation.push(FieldDef { name: naming::connect_edge(sl, tl, &e.label), args, ty: id(), origin: FieldOrigin::ConnectEdge { edge: ei } });
            if !e.properties.is_empty() {
                mutation.push(FieldDef {
                    name: naming::update_edge(sl, tl, &e.label),
                    args: vec![InputValueDef::new("id", id()), data],
                    ty: id(),
                    origin: FieldOrigin::UpdateEdge { edge: ei },
                });
            }
        }
        if g.edges().is_empty() {
            self.types.push(TypeDef::Object(ObjectType::new(naming::MUTATION.into(), Vec::new(), mutation, None)));
            return;
        }
        mutation.push(FieldDef { name: naming::DELETE_EDGE.into(), args: vec![InputValueDef::new("id", id())], ty: id(), origin: FieldOrigin::DeleteEdge });
        self.types.push(TypeDef::Object(ObjectType::new(naming::MUTATION.into(), Vec::new(), mutation, None)));
    }

    fn default_fields(&self, el: Element) -> Vec<FieldDef> {
        let mut fields = vec![
            FieldDef { name: "id".into(), args: Vec::new(), ty: TypeRef::named("ID").non_null(), origin: FieldOrigin::Id },
            FieldDef { name: "label".into(), args: Vec::new(), ty: TypeRef::named("String").non_null(), origin: FieldOrigin::Label },
        ];
        for p in self.properties(el) {
            fields.push(FieldDef { name: p.key.clone(), args: Vec::new(), ty: property_type(p), origin: FieldOrigin::Property(p.clone()) });
        }
        fields
    }

    fn vertex_types(&mut self) {
        let g = self.g;
        for (vi, v) in g.vertices().iter().enumerate() {
            let el = Element::Vertex(vi);
            let mut fields = self.default_fields(el);
            // Incident edges in schema order; `In` before `Out` for self-loops.
            for (ei, e) in g.edges().iter().enumerate() {
                let Some((s, t)) = e.endpoints() else { continue };
                for (dir, here, there) in [(Direction::In, t, s), (Direction::Out, s, t)] {
                    if here != vi {
                        continue;
                    }
                    let edge_el = Element::Edge { edge: ei, direction: dir };
                    let pointed = Element::Vertex(there);
                    let mut args = vec![InputValueDef::new("whereVertex", TypeRef::named(self.logic_input_name(pointed)))];
                    if self.has_order_input(pointed) {
                        args.push(InputValueDef::new("orderByVertex", TypeRef::named(self.order_input_name(pointed)).non_null().list()));
                    }
                    if !e.properties.is_empty() {
                        args.push(InputValueDef::new("whereEdge", TypeRef::named(self.logic_input_name(edge_el))));
                        args.push(InputValueDef::new("orderByEdge", TypeRef::named(self.order_input_name(edge_el)).non_null().list()));
                    }
                    args.push(InputValueDef::new("pagination", TypeRef::named(naming::PAGINATION_INPUT)));
                    let (from, to) = (&g.vertex(here).label, &g.vertex(there).label);
                    fields.push(FieldDef {
                        name: naming::adjacency_field(&e.label, dir),
                        args,
                        ty: TypeRef::non_null_list_of(naming::edge_type(from, to, &e.label)),
                        origin: FieldOrigin::Adjacency { edge: ei, direction: dir },
                    });
                }
            }
            self.types.push(TypeDef::Object(ObjectType::new(naming::vertex_type(&v.label), vec![naming::GRAPH_ELEMENT.into()], fields, Some(el))));
        }
    }

    fn edge_types(&mut self) {
        let g = self.g;
        for (ei, e) in g.edges().iter().enumerate() {
            let Some((s, t)) = e.endpoints() else { continue };
            let mut dirs = vec![(Direction::Out, s, t)];
            if s != t {
                dirs.push((Direction::In, t, s));
            }
            for (dir, from, to) in dirs {
                let el = Element::Edge { edge: ei, direction: dir };
                let mut fields = self.default_fields(el);
                fields.push(FieldDef {
                    name: naming::vertex_ref_field(self.vlabel(to)),
                    args: Vec::new(),
                    ty: TypeRef::named(naming::vertex_type(self.vlabel(to))).non_null(),
                    origin: FieldOrigin::VertexRef { vertex: to },
                });
                self.types.push(TypeDef::Object(ObjectType::new(
                    naming::edge_type(self.vlabel(from), self.vlabel(to), &e.label),
                    vec![naming::GRAPH_ELEMENT.into()],
                    fields,
                    Some(el),
                )));
            }
        }
    }

    fn inputs(&mut self) {
        let g = self.g;
        if g.vertices().is_empty() {
            self.types.push(pagination_input());
            return;
        }
        let data_fields = |props: &[PropertyDef]| -> Vec<InputValueDef> { props.iter().map(|p| InputValueDef::new(p.key.clone(), property_type(p))).collect() };
        for (vi, v) in g.vertices().iter().enumerate() {
            if !v.properties.is_empty() {
                self.types.push(TypeDef::Input(InputType {
                    name: naming::vertex_input(&v.label),
                    fields: data_fields(&v.properties),
                    kind: InputKind::Data(Element::Vertex(vi)),
                }));
            }
        }
        for (ei, e) in g.edges().iter().enumerate() {
            if !e.properties.is_empty() {
                let (s, t, l) = self.edge_names(ei);
                self.types.push(TypeDef::Input(InputType {
                    name: naming::edge_input(s, t, l),
                    fields: data_fields(&e.properties),
                    kind: InputKind::Data(Element::Edge { edge: ei, direction: Direction::Out }),
                }));
            }
        }

        let filterable = self.filterable_elements();
        for &el in &filterable {
            let name = self.logic_input_name(el);
            let mut fields = Vec::new();
            for p in self.properties(el) {
                for op in CompareOp::for_datatype(p.datatype) {
                    fields.push(InputValueDef::new(alloc::format!("{}_{}", p.key, op.suffix()), scalar(p.datatype)));
                }
            }
            let self_list = TypeRef::named(name.clone()).non_null().list();
            fields.push(InputValueDef::new("OR", self_list.clone()));
            fields.push(InputValueDef::new("AND", self_list));
            self.types.push(TypeDef::Input(InputType { name, fields, kind: InputKind::Logic(el) }));
        }
        for &el in &filterable {
            if self.has_order_input(el) {
                self.types.push(TypeDef::Input(InputType {
                    name: self.order_input_name(el),
                    fields: vec![
                        InputValueDef::new("property", TypeRef::named(self.property_enum_name(el)).non_null()),
                        InputValueDef::new("order", TypeRef::named(naming::ORDER_DIRECTION).non_null()),
                    ],
                    kind: InputKind::OrderBy(el),
                }));
            }
        }
        self.types.push(pagination_input());
    }

    /// Every vertex, plus every edge that has properties (declared orientation).
    fn filterable_elements(&self) -> Vec<Element> {
        let mut out: Vec<Element> = (0..self.g.vertices().len()).map(Element::Vertex).collect();
        for (ei, e) in self.g.edges().iter().enumerate() {
            if !e.properties.is_empty() && e.endpoints().is_some() {
                out.push(Element::Edge { edge: ei, direction: Direction::Out });
            }
        }
        out
    }

    fn enums(&mut self) {
        self.types.push(TypeDef::Enum(EnumType { name: naming::ORDER_DIRECTION.into(), values: vec!["ASC".into(), "DESC".into()] }));
        if self.g.vertices().is_empty() {
            return;
        }
        for el in self.filterable_elements() {
            let props = self.properties(el);
            if !props.is_empty() {
                let values = props.iter().map(|p| p.key.clone()).collect();
                self.types.push(TypeDef::Enum(EnumType { name: self.property_enum_name(el), values }));
            }
        }
    }
}

fn pagination_input() -> TypeDef {
    TypeDef::Input(InputType {
        name: naming::PAGINATION_INPUT.into(),
        fields: vec![InputValueDef::new("offset", TypeRef::named("Int").non_null()), InputValueDef::new("limit", TypeRef::named("Int").non_null())],
        kind: InputKind::Pagination,
    })
}
