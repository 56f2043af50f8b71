//! Schema-driven GraphQL middleware for property graph databases.
//!
//! The crate takes a developer-authored graph data schema (vertex and edge
//! labels plus typed, optionally required properties), checks it against a
//! fixed set of integrity rules, synthesizes a complete GraphQL CRUD schema
//! from it, and compiles GraphQL requests into a single Gremlin traversal.
//!
//! Pipeline:
//!
//! 1. [`schema::GraphSchema::from_json`] parses the schema document.
//! 2. [`validate::validate`] reports every rule violation.
//! 3. [`synth::synthesize`] builds the [`synth::GraphQLSchemaDoc`] and its SDL.
//! 4. [`graphql`] parses, validates and expands a request into a
//!    [`graphql::SelectionTree`].
//! 5. [`transpile`] runs the conversion state machine and produces a
//!    [`ir::Traversal`], which serializes to gremlinpython or Groovy text.
//! 6. [`engine`] executes traversals against an in-memory property graph and
//!    provides an independent, per-field resolver used as a differential oracle.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod engine;
pub mod graphql;
pub mod ir;
pub mod naming;
pub mod schema;
pub mod synth;
pub mod transpile;
pub mod validate;
pub mod value;

pub mod fixtures;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use engine::{GraphStore, ResultValue};
pub use graphql::{prepare_request, PreparedRequest, RequestError, SelectionTree};
pub use ir::{Flavor, Traversal};
pub use schema::{Datatype, Direction, EdgeDef, GraphSchema, PropertyDef, SchemaError, VertexDef};
pub use synth::{synthesize, GraphQLSchemaDoc};
pub use transpile::{transpile_mutation, transpile_query, ComplexityCounters, TranspileError};
pub use validate::{validate, Rule, Violation};
