//! Structural validation of type system documents.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{OperationKind, SdlDocument, SdlType, TypeKind};
use crate::synth::TypeRef;

pub const BUILTIN_SCALARS: [&str; 5] = ["ID", "String", "Int", "Float", "Boolean"];

/// Checks an SDL document for the type system rules a GraphQL server relies
/// on. Returns one message per problem; empty means the schema is usable.
pub fn check_sdl(doc: &SdlDocument) -> Vec<String> {
    let mut errors = Vec::new();
    let mut kinds: BTreeMap<&str, TypeKind> = BUILTIN_SCALARS.iter().map(|s| (*s, TypeKind::Scalar)).collect();
    for t in &doc.types {
        if t.name.starts_with("__") {
            errors.push(format!("type name {} must not begin with \"__\"", t.name));
        }
        if kinds.insert(&t.name, t.kind).is_some() {
            errors.push(format!("type {} is defined more than once", t.name));
        }
    }
    let kind_of = |name: &str| kinds.get(name).copied();
    let is_input = |ty: &TypeRef| matches!(kind_of(ty.base()), Some(TypeKind::Scalar | TypeKind::Enum | TypeKind::Input));
    let is_output = |ty: &TypeRef| matches!(kind_of(ty.base()), Some(k) if k != TypeKind::Input);

    for t in &doc.types {
        match t.kind {
            TypeKind::Object | TypeKind::Interface => {
                if t.fields.is_empty() {
                    errors.push(format!("{} must define at least one field", t.name));
                }
                let mut seen = BTreeSet::new();
                for f in &t.fields {
                    if !seen.insert(f.name.as_str()) {
                        errors.push(format!("field {}.{} is defined more than once", t.name, f.name));
                    }
                    if kind_of(f.ty.base()).is_none() {
                        errors.push(format!("field {}.{} references unknown type {}", t.name, f.name, f.ty.base()));
                    } else if !is_output(&f.ty) {
                        errors.push(format!("field {}.{} must have an output type, found {}", t.name, f.name, f.ty));
                    }
                    let mut arg_names = BTreeSet::new();
                    for a in &f.args {
                        if !arg_names.insert(a.name.as_str()) {
                            errors.push(format!("argument {}.{}({}) is defined more than once", t.name, f.name, a.name));
                        }
                        if kind_of(a.ty.base()).is_none() {
                            errors.push(format!("argument {}.{}({}) references unknown type {}", t.name, f.name, a.name, a.ty.base()));
                        } else if !is_input(&a.ty) {
                            errors.push(format!("argument {}.{}({}) must have an input type, found {}", t.name, f.name, a.name, a.ty));
                        }
                    }
                }
                for iface in &t.implements {
                    match doc.get(iface) {
                        Some(i) if i.kind == TypeKind::Interface => check_implementation(doc, t, i, &mut errors),
                        Some(_) => errors.push(format!("{} implements {}, which is not an interface", t.name, iface)),
                        None => errors.push(format!("{} implements unknown interface {}", t.name, iface)),
                    }
                }
            }
            TypeKind::Input => {
                if t.input_fields.is_empty() {
                    errors.push(format!("input {} must define at least one field", t.name));
                }
                let mut seen = BTreeSet::new();
                for f in &t.input_fields {
                    if !seen.insert(f.name.as_str()) {
                        errors.push(format!("input field {}.{} is defined more than once", t.name, f.name));
                    }
                    if kind_of(f.ty.base()).is_none() {
                        errors.push(format!("input field {}.{} references unknown type {}", t.name, f.name, f.ty.base()));
                    } else if !is_input(&f.ty) {
                        errors.push(format!("input field {}.{} must have an input type, found {}", t.name, f.name, f.ty));
                    }
                }
            }
            TypeKind::Enum => {
                if t.values.is_empty() {
                    errors.push(format!("enum {} must define at least one value", t.name));
                }
                let mut seen = BTreeSet::new();
                for v in &t.values {
                    if !seen.insert(v.as_str()) {
                        errors.push(format!("enum value {}.{} is defined more than once", t.name, v));
                    }
                    if matches!(v.as_str(), "true" | "false" | "null") {
                        errors.push(format!("enum value {}.{} is reserved", t.name, v));
                    }
                }
            }
            TypeKind::Union => {
                for m in &t.values {
                    if kind_of(m) != Some(TypeKind::Object) {
                        errors.push(format!("union {} member {} is not an object type", t.name, m));
                    }
                }
            }
            TypeKind::Scalar => {}
        }
    }

    check_input_cycles(doc, &mut errors);

    let mut root = |op: OperationKind, default: &str| -> bool {
        let bound = doc.schema_ops.iter().find(|(k, _)| *k == op).map(|(_, n)| n.as_str());
        let name = bound.unwrap_or(default);
        match kind_of(name) {
            Some(TypeKind::Object) => true,
            Some(_) => {
                errors.push(format!("{} root type {} must be an object type", op.as_str(), name));
                false
            }
            None => {
                if bound.is_some() {
                    errors.push(format!("{} root type {} is not defined", op.as_str(), name));
                }
                false
            }
        }
    };
    let has_query = root(OperationKind::Query, "Query");
    let has_mutation = root(OperationKind::Mutation, "Mutation");
    if has_mutation && !has_query {
        errors.push("schema defines a mutation root but no query root".into());
    }
    errors
}

fn check_implementation(doc: &SdlDocument, t: &SdlType, iface: &SdlType, errors: &mut Vec<String>) {
    for f in &iface.fields {
        let Some(own) = t.fields.iter().find(|o| o.name == f.name) else {
            errors.push(format!("{} must define field {} required by interface {}", t.name, f.name, iface.name));
            continue;
        };
        if !is_subtype(doc, &own.ty, &f.ty) {
            errors.push(format!("{}.{} has type {}, incompatible with {}.{}: {}", t.name, f.name, own.ty, iface.name, f.name, f.ty));
        }
        for a in &f.args {
            match own.args.iter().find(|o| o.name == a.name) {
                Some(o) if o.ty == a.ty => {}
                _ => errors.push(format!("{}.{} must accept argument {}: {} as declared by {}", t.name, f.name, a.name, a.ty, iface.name)),
            }
        }
        for o in &own.args {
            if o.ty.is_non_null() && !f.args.iter().any(|a| a.name == o.name) {
                errors.push(format!("{}.{} adds required argument {} not declared by {}", t.name, f.name, o.name, iface.name));
            }
        }
    }
}

fn is_subtype(doc: &SdlDocument, sub: &TypeRef, sup: &TypeRef) -> bool {
    match (sub, sup) {
        (TypeRef::NonNull(a), TypeRef::NonNull(b)) => is_subtype(doc, a, b),
        (TypeRef::NonNull(a), b) => is_subtype(doc, a, b),
        (TypeRef::List(a), TypeRef::List(b)) => is_subtype(doc, a, b),
        (TypeRef::Named(a), TypeRef::Named(b)) => a == b || doc.get(a).is_some_and(|t| t.implements.iter().any(|i| i == b)),
        _ => false,
    }
}

/// Input objects must not reference themselves through an unbroken chain of
/// non-null, non-list fields.
fn check_input_cycles(doc: &SdlDocument, errors: &mut Vec<String>) {
    let inputs: BTreeMap<&str, &SdlType> = doc.types.iter().filter(|t| t.kind == TypeKind::Input).map(|t| (t.name.as_str(), t)).collect();
    fn strict_edges<'d>(t: &'d SdlType, inputs: &BTreeMap<&str, &SdlType>) -> Vec<&'d str> {
        t.input_fields
            .iter()
            .filter_map(|f| match &f.ty {
                TypeRef::NonNull(inner) => match inner.as_ref() {
                    TypeRef::Named(n) if inputs.contains_key(n.as_str()) => Some(n.as_str()),
                    _ => None,
                },
                _ => None,
            })
            .collect()
    }
    for (&start, &t) in &inputs {
        let mut stack = strict_edges(t, &inputs);
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if n == start {
                errors.push(format!("input {start} references itself through required fields"));
                break;
            }
            if seen.insert(n) {
                stack.extend(strict_edges(inputs[n], &inputs));
            }
        }
    }
}

/// Per-type member sets: fields for object, interface and input types,
/// values for enums and unions. Used to compare two schemas by content.
pub fn inventory(doc: &SdlDocument) -> BTreeMap<String, BTreeSet<String>> {
    doc.types
        .iter()
        .map(|t| {
            let members: BTreeSet<String> = match t.kind {
                TypeKind::Object | TypeKind::Interface => t.fields.iter().map(|f| f.name.clone()).collect(),
                TypeKind::Input => t.input_fields.iter().map(|f| f.name.clone()).collect(),
                TypeKind::Enum | TypeKind::Union => t.values.iter().cloned().collect(),
                TypeKind::Scalar => BTreeSet::new(),
            };
            (t.name.clone(), members)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graphql::parse_sdl;
    use crate::synth::synthesize;

    #[test]
    fn synthesized_schemas_pass() {
        for g in [fixtures::todo_schema(), fixtures::movielens_schema(), crate::schema::GraphSchema::default()] {
            let doc = synthesize(&g).unwrap();
            let parsed = parse_sdl(doc.sdl()).unwrap();
            assert_eq!(check_sdl(&parsed), Vec::<String>::new());
        }
    }

    #[test]
    fn detects_problems() {
        let doc = parse_sdl(
            "type Query { a: Missing b: In }\ninput In { x: Query }\ninterface I { id: ID! }\ntype T implements I { id: String }\nenum E { A A }\ninput R { r: R! }",
        )
        .unwrap();
        let errors = check_sdl(&doc);
        let joined = errors.join("\n");
        assert!(joined.contains("unknown type Missing"), "{joined}");
        assert!(joined.contains("Query.b must have an output type"), "{joined}");
        assert!(joined.contains("In.x must have an input type"), "{joined}");
        assert!(joined.contains("incompatible with I.id"), "{joined}");
        assert!(joined.contains("E.A is defined more than once"), "{joined}");
        assert!(joined.contains("R references itself"), "{joined}");
    }

    #[test]
    fn mutation_needs_query() {
        let doc = parse_sdl("type Mutation { a: Int }").unwrap();
        assert_eq!(check_sdl(&doc).len(), 1);
    }
}
