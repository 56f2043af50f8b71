use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde_json::{Map, Number, Value as Json};

use super::ast::*;
use super::sdl_check::BUILTIN_SCALARS;
use super::{
    parse_executable, Conjunction, FieldArgs, GraphQLError, LogicCondition, OrderTerm, PaginationSpec, PreparedRequest, RequestCounters, RequestError,
    SelectionTree,
};
use crate::schema::{Datatype, PropertyDef};
use crate::synth::{split_filter_field, Element, FieldDef, GraphQLSchemaDoc, InputKind, InputType, ObjectType, TypeDef, TypeRef};
use crate::value::{OrderDirection, Scalar};

/// Variable values of a request, as sent in the JSON envelope.
pub type Variables = Map<String, Json>;

/// Parses, validates and expands `query` against `doc`.
pub fn prepare_request(
    doc: &GraphQLSchemaDoc,
    query: &str,
    variables: Option<&Variables>,
    operation_name: Option<&str>,
) -> Result<PreparedRequest, RequestError> {
    let ast = parse_executable(query)?;
    let errors = validate_document(doc, &ast);
    if !errors.is_empty() {
        return Err(RequestError::Invalid(errors));
    }
    let op = select_operation(&ast, operation_name)?;
    let empty = Map::new();
    let vars = coerce_variables(doc, op, variables.unwrap_or(&empty))?;
    let mut ex = Expander { doc, ast: &ast, vars: &vars, w: 0, k: 0 };
    ex.run(op).map_err(|e| RequestError::Invalid(vec![e]))
}

fn select_operation<'d>(ast: &'d Document, name: Option<&str>) -> Result<&'d OperationDefinition, RequestError> {
    let found = match name {
        Some(n) => ast.operations.iter().find(|o| o.name.as_deref() == Some(n)).ok_or_else(|| format!("Unknown operation named \"{n}\".")),
        None if ast.operations.len() == 1 => Ok(&ast.operations[0]),
        None => Err("Must provide operation name if query contains multiple operations.".to_string()),
    };
    found.map_err(|m| RequestError::Invalid(vec![GraphQLError::new(m, None)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Scalar,
    Enum,
    Input,
    Object,
    Interface,
}

fn kind_of(doc: &GraphQLSchemaDoc, name: &str) -> Option<Kind> {
    if BUILTIN_SCALARS.contains(&name) {
        return Some(Kind::Scalar);
    }
    Some(match doc.get(name)? {
        TypeDef::Object(_) => Kind::Object,
        TypeDef::Interface(_) => Kind::Interface,
        TypeDef::Input(_) => Kind::Input,
        TypeDef::Enum(_) => Kind::Enum,
    })
}

fn composite<'d>(doc: &'d GraphQLSchemaDoc, name: &str) -> Option<&'d ObjectType> {
    match doc.get(name)? {
        TypeDef::Object(o) | TypeDef::Interface(o) => Some(o),
        _ => None,
    }
}

fn possible_types<'d>(doc: &'d GraphQLSchemaDoc, name: &'d str) -> Vec<&'d str> {
    match doc.get(name) {
        Some(TypeDef::Object(_)) => vec![name],
        Some(TypeDef::Interface(_)) => doc.implementations(name),
        _ => Vec::new(),
    }
}

fn print_value(v: &Value) -> String {
    match v {
        Value::Variable(n) => format!("${n}"),
        Value::Int(i) => i.to_string(),
        Value::Float(x) => format!("{x:?}"),
        Value::String(s) => format!("{s:?}"),
        Value::Boolean(b) => b.to_string(),
        Value::Null => "null".into(),
        Value::Enum(e) => e.clone(),
        Value::List(items) => format!("[{}]", items.iter().map(print_value).collect::<Vec<_>>().join(", ")),
        Value::Object(fields) => format!("{{{}}}", fields.iter().map(|(k, v)| format!("{k}: {}", print_value(v))).collect::<Vec<_>>().join(", ")),
    }
}

/// Whether a variable of `var` type may be passed where `loc` is expected.
fn variable_fits(var: &TypeRef, has_default: bool, loc: &TypeRef) -> bool {
    match (var, loc) {
        (TypeRef::NonNull(a), TypeRef::NonNull(b)) => variable_fits(a, false, b),
        (TypeRef::NonNull(a), b) => variable_fits(a, false, b),
        (a, TypeRef::NonNull(b)) => has_default && variable_fits(a, false, b),
        (TypeRef::List(a), TypeRef::List(b)) => variable_fits(a, false, b),
        (TypeRef::Named(a), TypeRef::Named(b)) => a == b,
        _ => false,
    }
}

enum Mode<'m> {
    /// Static checking: variable references are checked for definition and
    /// type compatibility, their values are unknown.
    Check { defs: &'m [VariableDefinition], used: &'m mut BTreeSet<String> },
    /// Coercion with concrete, already coerced variable values.
    Run { vars: &'m Map<String, Json> },
}

/// Coerces an argument literal. `Ok(None)` means the value is not known
/// statically or refers to an unset variable.
fn coerce_literal(doc: &GraphQLSchemaDoc, v: &Value, ty: &TypeRef, mode: &mut Mode<'_>) -> Result<Option<Json>, String> {
    if let Value::Variable(name) = v {
        return match mode {
            Mode::Check { defs, used } => {
                used.insert(name.clone());
                match defs.iter().find(|d| d.name == *name) {
                    None => Err(format!("Variable \"${name}\" is not defined.")),
                    Some(d) => {
                        let has_default = d.default.as_ref().is_some_and(|v| *v != Value::Null);
                        if variable_fits(&d.ty, has_default, ty) {
                            Ok(None)
                        } else {
                            Err(format!("Variable \"${name}\" of type \"{}\" used in position expecting type \"{ty}\".", d.ty))
                        }
                    }
                }
            }
            Mode::Run { vars } => match vars.get(name) {
                None => {
                    if ty.is_non_null() {
                        Err(format!("Variable \"${name}\" of required type \"{ty}\" was not provided."))
                    } else {
                        Ok(None)
                    }
                }
                Some(j) => coerce_json(doc, j, ty).map(Some),
            },
        };
    }
    match ty {
        TypeRef::NonNull(inner) => {
            if *v == Value::Null {
                return Err(format!("Expected value of type \"{ty}\", found null."));
            }
            coerce_literal(doc, v, inner, mode)
        }
        TypeRef::List(inner) => match v {
            Value::Null => Ok(Some(Json::Null)),
            Value::List(items) => {
                let mut out = Vec::with_capacity(items.len());
                let mut known = true;
                for item in items {
                    match coerce_literal(doc, item, inner, mode)? {
                        Some(j) => out.push(j),
                        None if matches!(mode, Mode::Run { .. }) => {
                            if inner.is_non_null() {
                                return Err(format!("Expected value of type \"{inner}\", found null."));
                            }
                            out.push(Json::Null)
                        }
                        None => known = false,
                    }
                }
                Ok(known.then_some(Json::Array(out)))
            }
            single => Ok(coerce_literal(doc, single, inner, mode)?.map(|j| Json::Array(vec![j]))),
        },
        TypeRef::Named(name) => {
            if *v == Value::Null {
                return Ok(Some(Json::Null));
            }
            let mismatch = || format!("Expected value of type \"{name}\", found {}.", print_value(v));
            match name.as_str() {
                "Int" => match v {
                    Value::Int(i) if i32::try_from(*i).is_ok() => Ok(Some(Json::from(*i))),
                    Value::Int(i) => Err(format!("Int cannot represent non 32-bit signed integer value: {i}")),
                    _ => Err(mismatch()),
                },
                "Float" => match v {
                    Value::Int(i) => Ok(Some(float_json(*i as f64))),
                    Value::Float(x) => Ok(Some(float_json(*x))),
                    _ => Err(mismatch()),
                },
                "String" => match v {
                    Value::String(s) => Ok(Some(Json::String(s.clone()))),
                    _ => Err(mismatch()),
                },
                "Boolean" => match v {
                    Value::Boolean(b) => Ok(Some(Json::Bool(*b))),
                    _ => Err(mismatch()),
                },
                "ID" => match v {
                    Value::String(s) => Ok(Some(Json::String(s.clone()))),
                    Value::Int(i) => Ok(Some(Json::String(i.to_string()))),
                    _ => Err(mismatch()),
                },
                _ => match doc.get(name) {
                    Some(TypeDef::Enum(e)) => match v {
                        Value::Enum(s) if e.values.contains(s) => Ok(Some(Json::String(s.clone()))),
                        Value::Enum(s) => Err(format!("Value \"{s}\" does not exist in \"{name}\" enum.")),
                        _ => Err(format!("Enum \"{name}\" cannot represent non-enum value: {}.", print_value(v))),
                    },
                    Some(TypeDef::Input(input)) => {
                        let Value::Object(fields) = v else { return Err(mismatch()) };
                        for (k, _) in fields {
                            if input.field(k).is_none() {
                                return Err(format!("Field \"{k}\" is not defined by type \"{name}\"."));
                            }
                        }
                        let mut out = Map::new();
                        let mut known = true;
                        for def in &input.fields {
                            let given = fields.iter().find(|(k, _)| *k == def.name).map(|(_, v)| v);
                            let coerced = match given {
                                Some(val) => coerce_literal(doc, val, &def.ty, mode)?,
                                None => None,
                            };
                            match coerced {
                                Some(j) => {
                                    out.insert(def.name.clone(), j);
                                }
                                None if given.is_some() && matches!(mode, Mode::Check { .. }) => known = false,
                                None if def.ty.is_non_null() => {
                                    return Err(format!("Field \"{name}.{}\" of required type \"{}\" was not provided.", def.name, def.ty));
                                }
                                None => {}
                            }
                        }
                        Ok(known.then_some(Json::Object(out)))
                    }
                    _ => Err(format!("Unknown type \"{name}\".")),
                },
            }
        }
    }
}

fn float_json(x: f64) -> Json {
    Number::from_f64(x).map(Json::Number).unwrap_or(Json::Null)
}

/// Coerces a JSON variable value to `ty`.
fn coerce_json(doc: &GraphQLSchemaDoc, j: &Json, ty: &TypeRef) -> Result<Json, String> {
    match ty {
        TypeRef::NonNull(inner) => {
            if j.is_null() {
                return Err(format!("Expected non-nullable type \"{ty}\" not to be null."));
            }
            coerce_json(doc, j, inner)
        }
        _ if j.is_null() => Ok(Json::Null),
        TypeRef::List(inner) => match j {
            Json::Array(items) => items.iter().map(|i| coerce_json(doc, i, inner)).collect::<Result<Vec<_>, _>>().map(Json::Array),
            single => Ok(Json::Array(vec![coerce_json(doc, single, inner)?])),
        },
        TypeRef::Named(name) => {
            let mismatch = || format!("Expected value of type \"{name}\", found {j}.");
            match name.as_str() {
                "Int" => {
                    let i = j.as_i64().or_else(|| j.as_f64().filter(|x| x.abs() < 1e10 && *x == (*x as i64) as f64).map(|x| x as i64)).ok_or_else(mismatch)?;
                    if i32::try_from(i).is_err() {
                        return Err(format!("Int cannot represent non 32-bit signed integer value: {i}"));
                    }
                    Ok(Json::from(i))
                }
                "Float" => j.as_f64().map(float_json).ok_or_else(mismatch),
                "String" => j.as_str().map(|s| Json::String(s.into())).ok_or_else(mismatch),
                "Boolean" => j.as_bool().map(Json::Bool).ok_or_else(mismatch),
                "ID" => match j {
                    Json::String(s) => Ok(Json::String(s.clone())),
                    Json::Number(n) if n.is_i64() || n.is_u64() => Ok(Json::String(n.to_string())),
                    _ => Err(mismatch()),
                },
                _ => match doc.get(name) {
                    Some(TypeDef::Enum(e)) => match j.as_str() {
                        Some(s) if e.values.iter().any(|v| v == s) => Ok(Json::String(s.into())),
                        Some(s) => Err(format!("Value \"{s}\" does not exist in \"{name}\" enum.")),
                        None => Err(mismatch()),
                    },
                    Some(TypeDef::Input(input)) => {
                        let Json::Object(obj) = j else { return Err(mismatch()) };
                        for k in obj.keys() {
                            if input.field(k).is_none() {
                                return Err(format!("Field \"{k}\" is not defined by type \"{name}\"."));
                            }
                        }
                        let mut out = Map::new();
                        for def in &input.fields {
                            match obj.get(&def.name) {
                                Some(v) => {
                                    out.insert(def.name.clone(), coerce_json(doc, v, &def.ty).map_err(|m| format!("In field \"{}\": {m}", def.name))?);
                                }
                                None if def.ty.is_non_null() => {
                                    return Err(format!("Field \"{name}.{}\" of required type \"{}\" was not provided.", def.name, def.ty));
                                }
                                None => {}
                            }
                        }
                        Ok(Json::Object(out))
                    }
                    _ => Err(format!("Unknown type \"{name}\".")),
                },
            }
        }
    }
}

fn coerce_variables(doc: &GraphQLSchemaDoc, op: &OperationDefinition, provided: &Map<String, Json>) -> Result<Map<String, Json>, RequestError> {
    let mut out = Map::new();
    let mut errors = Vec::new();
    for def in &op.variables {
        let result = match provided.get(&def.name) {
            Some(j) => coerce_json(doc, j, &def.ty).map(Some),
            None => match &def.default {
                Some(d) => coerce_literal(doc, d, &def.ty, &mut Mode::Run { vars: &Map::new() }),
                None if def.ty.is_non_null() => Err(format!("Variable \"${}\" of required type \"{}\" was not provided.", def.name, def.ty)),
                None => Ok(None),
            },
        };
        match result {
            Ok(Some(j)) => {
                out.insert(def.name.clone(), j);
            }
            Ok(None) => {}
            Err(m) => errors.push(GraphQLError::new(format!("Variable \"${}\" got invalid value; {m}", def.name), Some(def.pos))),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(RequestError::Invalid(errors))
    }
}

/// Checks a parsed document against the schema: operations, fragments,
/// field and argument existence, literal types, variable usage, and leaf
/// selections. Directives and subscriptions are reported as unsupported.
pub fn validate_document(doc: &GraphQLSchemaDoc, ast: &Document) -> Vec<GraphQLError> {
    let mut v = Checker { doc, ast, errors: Vec::new() };
    v.document();
    let mut seen = BTreeSet::new();
    v.errors.retain(|e| seen.insert((e.message.clone(), e.locations.clone())));
    v.errors
}

struct Checker<'a> {
    doc: &'a GraphQLSchemaDoc,
    ast: &'a Document,
    errors: Vec<GraphQLError>,
}

impl<'a> Checker<'a> {
    fn err(&mut self, message: String, pos: Pos) {
        self.errors.push(GraphQLError::new(message, Some(pos)));
    }

    fn directives(&mut self, ds: &[Directive]) {
        for d in ds {
            self.err(format!("Directive \"@{}\" is not supported.", d.name), d.pos);
        }
    }

    fn document(&mut self) {
        let ast = self.ast;
        let mut names = BTreeSet::new();
        for op in &ast.operations {
            match &op.name {
                Some(n) if !names.insert(n.as_str()) => self.err(format!("There can be only one operation named \"{n}\"."), op.pos),
                None if ast.operations.len() > 1 => self.err("This anonymous operation must be the only defined operation.".into(), op.pos),
                _ => {}
            }
        }
        let mut frag_names = BTreeSet::new();
        for f in &ast.fragments {
            if !frag_names.insert(f.name.as_str()) {
                self.err(format!("There can be only one fragment named \"{}\".", f.name), f.pos);
            }
            self.directives(&f.directives);
            match kind_of(self.doc, &f.type_condition) {
                Some(Kind::Object | Kind::Interface) => {}
                Some(_) => self.err(format!("Fragment \"{}\" cannot condition on non composite type \"{}\".", f.name, f.type_condition), f.pos),
                None => self.err(format!("Unknown type \"{}\".", f.type_condition), f.pos),
            }
        }
        let cyclic = self.fragment_cycles();
        let mut used_frags = BTreeSet::new();
        for op in &ast.operations {
            self.operation(op, &mut used_frags, cyclic);
        }
        for f in &ast.fragments {
            if !used_frags.contains(f.name.as_str()) {
                self.err(format!("Fragment \"{}\" is never used.", f.name), f.pos);
            }
        }
    }

    /// Reports spread cycles; returns whether any exist.
    fn fragment_cycles(&mut self) -> bool {
        fn spreads<'s>(sels: &'s [Selection], out: &mut Vec<(&'s str, Pos)>) {
            for s in sels {
                match s {
                    Selection::Field(f) => spreads(&f.selection_set, out),
                    Selection::FragmentSpread { name, pos, .. } => out.push((name, *pos)),
                    Selection::InlineFragment { selection_set, .. } => spreads(selection_set, out),
                }
            }
        }
        let ast = self.ast;
        let graph: BTreeMap<&str, Vec<(&str, Pos)>> = ast
            .fragments
            .iter()
            .map(|f| {
                let mut out = Vec::new();
                spreads(&f.selection_set, &mut out);
                (f.name.as_str(), out)
            })
            .collect();
        // 0 unvisited, 1 on stack, 2 done
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        let mut found = false;
        for start in graph.keys() {
            if state.get(start).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
            state.insert(start, 1);
            while let Some((node, idx)) = stack.pop() {
                let edges = &graph[node];
                if idx < edges.len() {
                    stack.push((node, idx + 1));
                    let (next, pos) = edges[idx];
                    match state.get(next).copied() {
                        Some(1) => {
                            found = true;
                            self.err(format!("Cannot spread fragment \"{next}\" within itself."), pos);
                        }
                        Some(_) => {}
                        None if graph.contains_key(next) => {
                            state.insert(next, 1);
                            stack.push((next, 0));
                        }
                        None => {}
                    }
                } else {
                    state.insert(node, 2);
                }
            }
        }
        found
    }

    fn operation(&mut self, op: &'a OperationDefinition, used_frags: &mut BTreeSet<&'a str>, cyclic: bool) {
        self.directives(&op.directives);
        let root = match op.kind {
            OperationKind::Subscription => {
                self.err("Subscriptions are not supported.".into(), op.pos);
                return;
            }
            OperationKind::Query => self.doc.query_type(),
            OperationKind::Mutation => self.doc.mutation_type(),
        };
        let Some(root) = root else {
            self.err(format!("Schema is not configured to execute {} operation.", op.kind.as_str()), op.pos);
            return;
        };
        let mut var_names = BTreeSet::new();
        for d in &op.variables {
            self.directives(&d.directives);
            if !var_names.insert(d.name.as_str()) {
                self.err(format!("There can be only one variable named \"${}\".", d.name), d.pos);
            }
            if !matches!(kind_of(self.doc, d.ty.base()), Some(Kind::Scalar | Kind::Enum | Kind::Input)) {
                self.err(format!("Variable \"${}\" cannot be non-input type \"{}\".", d.name, d.ty), d.pos);
            } else if let Some(default) = &d.default {
                if let Err(m) = coerce_literal(self.doc, default, &d.ty, &mut Mode::Run { vars: &Map::new() }) {
                    self.err(format!("Variable \"${}\" has invalid default value: {m}", d.name), d.pos);
                }
            }
        }
        let mut used_vars = BTreeSet::new();
        let mut visited = BTreeSet::new();
        let mut ctx = OpCtx { defs: &op.variables, used_vars: &mut used_vars, visited: &mut visited, cyclic };
        self.selections(&op.selection_set, &root.name, &mut ctx);
        used_frags.extend(visited.iter().copied());
        for d in &op.variables {
            if !used_vars.contains(&d.name) {
                let what = op
                    .name
                    .as_ref()
                    .map(|n| format!("Variable \"${}\" is never used in operation \"{n}\".", d.name))
                    .unwrap_or_else(|| format!("Variable \"${}\" is never used.", d.name));
                self.err(what, d.pos);
            }
        }
    }

    fn selections(&mut self, sels: &'a [Selection], parent: &str, ctx: &mut OpCtx<'a, '_>) {
        for s in sels {
            match s {
                Selection::Field(f) => self.field(f, parent, ctx),
                Selection::FragmentSpread { name, directives, pos } => {
                    self.directives(directives);
                    let Some(frag) = self.ast.fragment(name) else {
                        self.err(format!("Unknown fragment \"{name}\"."), *pos);
                        continue;
                    };
                    self.spread_possible(&frag.type_condition, parent, *pos, Some(name));
                    if ctx.visited.insert(frag.name.as_str()) && !ctx.cyclic && composite(self.doc, &frag.type_condition).is_some() {
                        self.selections(&frag.selection_set, &frag.type_condition, ctx);
                    }
                }
                Selection::InlineFragment { type_condition, directives, selection_set, pos } => {
                    self.directives(directives);
                    let target = match type_condition {
                        Some(tc) => {
                            if composite(self.doc, tc).is_none() {
                                if kind_of(self.doc, tc).is_some() {
                                    self.err(format!("Fragment cannot condition on non composite type \"{tc}\"."), *pos);
                                } else {
                                    self.err(format!("Unknown type \"{tc}\"."), *pos);
                                }
                                continue;
                            }
                            self.spread_possible(tc, parent, *pos, None);
                            tc.as_str()
                        }
                        None => parent,
                    };
                    let target = String::from(target);
                    self.selections(selection_set, &target, ctx);
                }
            }
        }
    }

    fn spread_possible(&mut self, cond: &str, parent: &str, pos: Pos, name: Option<&str>) {
        if composite(self.doc, cond).is_none() {
            return;
        }
        let a = possible_types(self.doc, cond);
        let b = possible_types(self.doc, parent);
        if !a.iter().any(|t| b.contains(t)) {
            let m = match name {
                Some(n) => format!("Fragment \"{n}\" cannot be spread here as objects of type \"{parent}\" can never be of type \"{cond}\"."),
                None => format!("Fragment cannot be spread here as objects of type \"{parent}\" can never be of type \"{cond}\"."),
            };
            self.err(m, pos);
        }
    }

    fn field(&mut self, f: &'a Field, parent: &str, ctx: &mut OpCtx<'a, '_>) {
        self.directives(&f.directives);
        let Some(def) = composite(self.doc, parent).and_then(|t| t.field(&f.name)) else {
            self.err(format!("Cannot query field \"{}\" on type \"{parent}\".", f.name), f.pos);
            return;
        };
        let mut seen = BTreeSet::new();
        for a in &f.arguments {
            if !seen.insert(a.name.as_str()) {
                self.err(format!("There can be only one argument named \"{}\".", a.name), a.pos);
                continue;
            }
            let Some(adef) = def.arg(&a.name) else {
                self.err(format!("Unknown argument \"{}\" on field \"{parent}.{}\".", a.name, f.name), a.pos);
                continue;
            };
            let mut mode = Mode::Check { defs: ctx.defs, used: &mut *ctx.used_vars };
            if let Err(m) = coerce_literal(self.doc, &a.value, &adef.ty, &mut mode) {
                self.err(format!("Argument \"{}\" has invalid value: {m}", a.name), a.pos);
            }
        }
        for adef in &def.args {
            if adef.ty.is_non_null() && !f.arguments.iter().any(|a| a.name == adef.name) {
                self.err(format!("Field \"{}\" argument \"{}\" of type \"{}\" is required, but it was not provided.", f.name, adef.name, adef.ty), f.pos);
            }
        }
        let base = def.ty.base();
        match kind_of(self.doc, base) {
            Some(Kind::Object | Kind::Interface) => {
                if f.selection_set.is_empty() {
                    self.err(format!("Field \"{}\" of type \"{}\" must have a selection of subfields.", f.name, def.ty), f.pos);
                } else {
                    self.selections(&f.selection_set, base, ctx);
                }
            }
            _ => {
                if !f.selection_set.is_empty() {
                    self.err(format!("Field \"{}\" must not have a selection since type \"{}\" has no subfields.", f.name, def.ty), f.pos);
                }
            }
        }
    }
}

struct OpCtx<'a, 'c> {
    defs: &'a [VariableDefinition],
    used_vars: &'c mut BTreeSet<String>,
    visited: &'c mut BTreeSet<&'a str>,
    cyclic: bool,
}

#[derive(Default)]
struct Groups<'a> {
    fields: Vec<(&'a str, Vec<&'a Field>)>,
    index: BTreeMap<&'a str, usize>,
}

struct Expander<'a> {
    doc: &'a GraphQLSchemaDoc,
    ast: &'a Document,
    vars: &'a Map<String, Json>,
    w: usize,
    k: usize,
}

impl<'a> Expander<'a> {
    fn run(&mut self, op: &'a OperationDefinition) -> Result<PreparedRequest, GraphQLError> {
        let root = match op.kind {
            OperationKind::Query => self.doc.query_type(),
            OperationKind::Mutation => self.doc.mutation_type(),
            OperationKind::Subscription => None,
        }
        .ok_or_else(|| GraphQLError::new(format!("Schema is not configured to execute {} operation.", op.kind.as_str()), Some(op.pos)))?;
        let roots = self.selection(root, &[op.selection_set.as_slice()])?;
        let counters = RequestCounters {
            s: roots.iter().map(SelectionTree::descendant_count).sum(),
            w: self.w,
            k: self.k,
            d: roots.iter().map(SelectionTree::hop_depth).max().unwrap_or(0),
        };
        Ok(PreparedRequest { kind: op.kind, name: op.name.clone(), roots, counters })
    }

    /// Groups fields by response key in first-seen order.
    fn collect(&self, obj: &ObjectType, sels: &'a [Selection], groups: &mut Groups<'a>) {
        for s in sels {
            match s {
                Selection::Field(f) => {
                    let key = f.response_key();
                    match groups.index.get(key) {
                        Some(&i) => groups.fields[i].1.push(f),
                        None => {
                            groups.index.insert(key, groups.fields.len());
                            groups.fields.push((key, vec![f]));
                        }
                    }
                }
                Selection::FragmentSpread { name, .. } => {
                    let frag = self.ast.fragment(name).expect("validated fragment");
                    if self.doc.type_applies(&frag.type_condition, &obj.name) {
                        self.collect(obj, &frag.selection_set, groups);
                    }
                }
                Selection::InlineFragment { type_condition, selection_set, .. } => {
                    if type_condition.as_deref().is_none_or(|tc| self.doc.type_applies(tc, &obj.name)) {
                        self.collect(obj, selection_set, groups);
                    }
                }
            }
        }
    }

    fn selection(&mut self, obj: &ObjectType, sets: &[&'a [Selection]]) -> Result<Vec<SelectionTree>, GraphQLError> {
        let mut groups = Groups::default();
        for set in sets {
            self.collect(obj, set, &mut groups);
        }
        let mut out = Vec::with_capacity(groups.fields.len());
        for (key, fields) in groups.fields {
            let first = fields[0];
            let def = obj.field(&first.name).expect("validated field");
            let args = self.args(def, first)?;
            for other in &fields[1..] {
                if other.name != first.name {
                    return Err(GraphQLError::new(
                        format!("Fields \"{key}\" conflict because \"{}\" and \"{}\" are different fields.", first.name, other.name),
                        Some(other.pos),
                    ));
                }
                if self.args(def, other)? != args {
                    return Err(GraphQLError::new(format!("Fields \"{key}\" conflict because they have differing arguments."), Some(other.pos)));
                }
            }
            self.w += args.filter_leaves();
            self.k += args.order_terms();
            let children = match self.doc.object(def.ty.base()) {
                Some(target) => {
                    let subsets: Vec<&'a [Selection]> = fields.iter().map(|f| f.selection_set.as_slice()).collect();
                    self.selection(target, &subsets)?
                }
                None => Vec::new(),
            };
            out.push(SelectionTree { key: key.to_string(), field: first.name.clone(), origin: def.origin.clone(), args, children });
        }
        Ok(out)
    }

    fn args(&self, def: &FieldDef, f: &Field) -> Result<FieldArgs, GraphQLError> {
        let mut out = FieldArgs::default();
        for adef in &def.args {
            let given = f.arguments.iter().find(|a| a.name == adef.name);
            let pos = Some(given.map_or(f.pos, |a| a.pos));
            let json = match given {
                Some(a) => coerce_literal(self.doc, &a.value, &adef.ty, &mut Mode::Run { vars: self.vars })
                    .map_err(|m| GraphQLError::new(format!("Argument \"{}\" has invalid value: {m}", a.name), pos))?,
                None => None,
            };
            let Some(json) = json.filter(|j| !j.is_null()) else {
                if adef.ty.is_non_null() {
                    return Err(GraphQLError::new(format!("Field \"{}\" argument \"{}\" of type \"{}\" is required.", f.name, adef.name, adef.ty), pos));
                }
                continue;
            };
            let input = self.doc.input(adef.ty.base());
            let fail = |m: String| GraphQLError::new(m, pos);
            match adef.name.as_str() {
                "id" => out.id = json.as_str().map(String::from),
                "where" => out.filter = self.filter(input, &json).map_err(fail)?,
                "whereVertex" => out.vertex_filter = self.filter(input, &json).map_err(fail)?,
                "whereEdge" => out.edge_filter = self.filter(input, &json).map_err(fail)?,
                "orderBy" => out.order = self.order(&json),
                "orderByVertex" => out.vertex_order = self.order(&json),
                "orderByEdge" => out.edge_order = self.order(&json),
                "pagination" => out.pagination = Some(pagination(&json).map_err(fail)?),
                "data" => out.data = self.data(input, &json),
                n if n.starts_with("source_") => out.source_id = json.as_str().map(String::from),
                n if n.starts_with("target_") => out.target_id = json.as_str().map(String::from),
                _ => {}
            }
        }
        Ok(out)
    }

    fn properties(&self, el: Element) -> &'a [PropertyDef] {
        let g = self.doc.graph_schema();
        match el {
            Element::Vertex(v) => &g.vertex(v).properties,
            Element::Edge { edge, .. } => &g.edge(edge).properties,
        }
    }

    fn filter(&self, input: Option<&'a InputType>, json: &Json) -> Result<Option<Conjunction>, String> {
        let input = input.ok_or("filter argument without input type")?;
        let InputKind::Logic(el) = input.kind else { return Err("filter argument of wrong kind".into()) };
        let c = self.conjunction(input, self.properties(el), json)?;
        Ok((!c.is_empty()).then_some(c))
    }

    fn conjunction(&self, input: &InputType, props: &[PropertyDef], json: &Json) -> Result<Conjunction, String> {
        let mut out = Vec::new();
        let Json::Object(obj) = json else { return Ok(out) };
        for f in &input.fields {
            let Some(v) = obj.get(&f.name).filter(|v| !v.is_null()) else { continue };
            match f.name.as_str() {
                "AND" | "OR" => {
                    let items = v.as_array().map(Vec::as_slice).unwrap_or(&[]);
                    let mut children = Vec::with_capacity(items.len());
                    for item in items {
                        children.push(self.conjunction(input, props, item)?);
                    }
                    if f.name == "AND" {
                        children.retain(|c| !c.is_empty());
                        if !children.is_empty() {
                            out.push(LogicCondition::And(children));
                        }
                    } else if !children.is_empty() && children.iter().all(|c| !c.is_empty()) {
                        out.push(LogicCondition::Or(children));
                    }
                }
                name => {
                    let (property, op) = split_filter_field(name).ok_or_else(|| format!("unexpected filter field {name}"))?;
                    let p = props.iter().find(|p| p.key == property).ok_or_else(|| format!("unknown property {property}"))?;
                    let value = scalar(v, p.datatype).ok_or_else(|| format!("invalid value for {name}"))?;
                    out.push(LogicCondition::Compare { property: property.to_string(), op, value });
                }
            }
        }
        Ok(out)
    }

    fn order(&self, json: &Json) -> Vec<OrderTerm> {
        let items = json.as_array().map(Vec::as_slice).unwrap_or(&[]);
        items
            .iter()
            .filter_map(|item| {
                let property = item.get("property")?.as_str()?.to_string();
                let direction = match item.get("order")?.as_str()? {
                    "DESC" => OrderDirection::Desc,
                    _ => OrderDirection::Asc,
                };
                Some(OrderTerm { property, direction })
            })
            .collect()
    }

    fn data(&self, input: Option<&InputType>, json: &Json) -> Vec<(String, Scalar)> {
        let Some(InputType { kind: InputKind::Data(el), .. }) = input else { return Vec::new() };
        let props = self.properties(*el);
        props.iter().filter_map(|p| Some((p.key.clone(), scalar(json.get(&p.key).filter(|v| !v.is_null())?, p.datatype)?))).collect()
    }
}

fn pagination(json: &Json) -> Result<PaginationSpec, String> {
    let get = |k: &str| -> Result<u64, String> {
        let i = json.get(k).and_then(Json::as_i64).ok_or_else(|| format!("pagination.{k} is required"))?;
        u64::try_from(i).map_err(|_| format!("pagination.{k} must be non-negative, got {i}"))
    };
    Ok(PaginationSpec { offset: get("offset")?, limit: get("limit")? })
}

fn scalar(j: &Json, datatype: Datatype) -> Option<Scalar> {
    Some(match datatype {
        Datatype::Int => Scalar::Int(j.as_i64()?),
        Datatype::Float => Scalar::Float(j.as_f64()?),
        Datatype::String | Datatype::Id => Scalar::String(j.as_str()?.into()),
        Datatype::Boolean => Scalar::Bool(j.as_bool()?),
    })
}
