//! Integrity rules a graph data schema must satisfy before a GraphQL schema
//! can be synthesized from it.
//!
//! | Rule | Condition |
//! |------|-----------|
//! | V1  | vertex/edge label matches `[A-Za-z_][A-Za-z0-9_]*` |
//! | V2  | vertex/edge label does not start with `__` |
//! | V3  | property key matches `[A-Za-z_][A-Za-z0-9_]*` |
//! | V4  | property key is not `id`, `label`, and does not start with `__` |
//! | V5  | property keys are unique within their vertex/edge |
//! | V6  | vertex labels are unique |
//! | V7  | every edge is attached to a source and a target vertex |
//! | V8  | an edge's property keys differ from the (lower-cased) labels of its endpoints |
//! | V9  | edge labels are unique among the edges leaving, and among the edges entering, a vertex |
//! | V10 | `<edge>In` differs from the property keys of the edge's target vertex |
//! | V11 | `<edge>Out` differs from the property keys of the edge's source vertex |
//! | V12 | labels do not shadow fixed types and synthesized names do not collide |
//!
//! All violations are reported; nothing short-circuits. The output order is
//! vertices then edges in schema order, rules in code order within an element,
//! followed by cross-element name collisions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::naming;
use crate::schema::{Direction, GraphSchema, PropertyDef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
    V10,
    V11,
    V12,
}

impl Rule {
    pub const ALL: [Rule; 12] = [Rule::V1, Rule::V2, Rule::V3, Rule::V4, Rule::V5, Rule::V6, Rule::V7, Rule::V8, Rule::V9, Rule::V10, Rule::V11, Rule::V12];

    pub fn code(self) -> &'static str {
        match self {
            Rule::V1 => "V1",
            Rule::V2 => "V2",
            Rule::V3 => "V3",
            Rule::V4 => "V4",
            Rule::V5 => "V5",
            Rule::V6 => "V6",
            Rule::V7 => "V7",
            Rule::V8 => "V8",
            Rule::V9 => "V9",
            Rule::V10 => "V10",
            Rule::V11 => "V11",
            Rule::V12 => "V12",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    /// Path to the offending element: `vertices/<id>`, `edges/<id>`, optionally
    /// followed by `/properties/<key>`.
    pub subject: String,
    pub message: String,
}

/// Checks every rule and returns all violations. Empty means valid.
pub fn validate(g: &GraphSchema) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut seen_labels: BTreeMap<&str, &str> = BTreeMap::new();
    for v in g.vertices() {
        let subject = format!("vertices/{}", v.id);
        check_label(&mut out, &subject, "vertex", &v.label);
        check_properties(&mut out, &subject, &v.properties);
        if let Some(first) = seen_labels.get(v.label.as_str()) {
            out.push(Violation {
                rule: Rule::V6,
                subject: subject.clone(),
                message: format!("vertex label `{}` is already used by vertex `{first}`", v.label),
            });
        } else {
            seen_labels.insert(&v.label, &v.id);
        }
        check_reserved(&mut out, &subject, &v.label);
        let lowered = naming::lower_first(&v.label);
        if lowered == "id" || lowered == "label" {
            out.push(Violation {
                rule: Rule::V12,
                subject,
                message: format!("vertex label `{}` would produce an edge field `{lowered}` shadowing a default field", v.label),
            });
        }
    }

    for (ei, e) in g.edges().iter().enumerate() {
        let subject = format!("edges/{}", e.id);
        check_label(&mut out, &subject, "edge", &e.label);
        check_properties(&mut out, &subject, &e.properties);

        if e.source.is_none() || e.target.is_none() {
            let missing = match (e.source, e.target) {
                (None, None) => "a source and a target vertex",
                (None, _) => "a source vertex",
                _ => "a target vertex",
            };
            out.push(Violation { rule: Rule::V7, subject: subject.clone(), message: format!("edge `{}` is not connected to {missing}", e.label) });
        }

        // V8: the edge object types carry a field named after each endpoint.
        let mut endpoints: Vec<usize> = e.source.into_iter().chain(e.target).collect();
        endpoints.dedup();
        for vi in endpoints {
            let field = naming::vertex_ref_field(&g.vertex(vi).label);
            if let Some(p) = e.properties.iter().find(|p| p.key == field) {
                out.push(Violation {
                    rule: Rule::V8,
                    subject: format!("{subject}/properties/{}", p.key),
                    message: format!("property `{}` collides with the field for connected vertex `{}`", p.key, g.vertex(vi).label),
                });
            }
        }

        // V9: compare against every earlier edge sharing the label.
        for (oi, other) in g.edges()[..ei].iter().enumerate() {
            if other.label != e.label {
                continue;
            }
            let same_source = e.source.is_some() && e.source == other.source;
            let same_target = e.target.is_some() && e.target == other.target;
            // Reverse orientation would synthesize the same edge object type twice.
            let reversed = e.source.is_some() && e.source == other.target && e.target.is_some() && e.target == other.source;
            if same_source || same_target || reversed {
                let why = if same_source {
                    "leaves the same source vertex"
                } else if same_target {
                    "enters the same target vertex"
                } else {
                    "connects the same vertices in reverse"
                };
                out.push(Violation {
                    rule: Rule::V9,
                    subject: subject.clone(),
                    message: format!("edge label `{}` {why} as edge `{}` (edges[{oi}])", e.label, other.id),
                });
            }
        }

        if let Some(t) = e.target {
            let field = naming::adjacency_field(&e.label, Direction::In);
            if let Some(p) = g.vertex(t).property(&field) {
                out.push(Violation {
                    rule: Rule::V10,
                    subject: subject.clone(),
                    message: format!("`{field}` collides with property `{}` of target vertex `{}`", p.key, g.vertex(t).label),
                });
            }
        }
        if let Some(s) = e.source {
            let field = naming::adjacency_field(&e.label, Direction::Out);
            if let Some(p) = g.vertex(s).property(&field) {
                out.push(Violation {
                    rule: Rule::V11,
                    subject: subject.clone(),
                    message: format!("`{field}` collides with property `{}` of source vertex `{}`", p.key, g.vertex(s).label),
                });
            }
        }
        check_reserved(&mut out, &subject, &e.label);
    }

    check_name_collisions(g, &mut out);
    out
}

fn check_label(out: &mut Vec<Violation>, subject: &str, kind: &str, label: &str) {
    if !naming::is_identifier(label) {
        out.push(Violation {
            rule: Rule::V1,
            subject: subject.into(),
            message: format!("{kind} label `{label}` must start with a letter or underscore followed by letters, digits or underscores"),
        });
    }
    if label.starts_with("__") {
        out.push(Violation { rule: Rule::V2, subject: subject.into(), message: format!("{kind} label `{label}` must not start with `__`") });
    }
}

fn check_properties(out: &mut Vec<Violation>, subject: &str, props: &[PropertyDef]) {
    for (i, p) in props.iter().enumerate() {
        let psub = format!("{subject}/properties/{}", p.key);
        if !naming::is_identifier(&p.key) {
            out.push(Violation {
                rule: Rule::V3,
                subject: psub.clone(),
                message: format!("property key `{}` must start with a letter or underscore followed by letters, digits or underscores", p.key),
            });
        }
        if p.key == "id" || p.key == "label" || p.key.starts_with("__") {
            out.push(Violation { rule: Rule::V4, subject: psub.clone(), message: format!("property key `{}` is reserved", p.key) });
        }
        if props[..i].iter().any(|q| q.key == p.key) {
            out.push(Violation { rule: Rule::V5, subject: psub, message: format!("property key `{}` is defined more than once", p.key) });
        }
    }
}

fn check_reserved(out: &mut Vec<Violation>, subject: &str, label: &str) {
    if naming::RESERVED_LABELS.contains(&label) {
        out.push(Violation { rule: Rule::V12, subject: subject.into(), message: format!("label `{label}` is reserved by the generated schema") });
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Owner {
    Vertex(usize),
    Edge(usize),
}

/// Collisions between synthesized type names, root fields and adjacency fields
/// that the per-element rules do not already explain.
fn check_name_collisions(g: &GraphSchema, out: &mut Vec<Violation>) {
    let label_of = |o: Owner| match o {
        Owner::Vertex(i) => &g.vertex(i).label,
        Owner::Edge(i) => &g.edge(i).label,
    };
    let subject_of = |o: Owner| match o {
        Owner::Vertex(i) => format!("vertices/{}", g.vertex(i).id),
        Owner::Edge(i) => format!("edges/{}", g.edge(i).id),
    };

    // namespace -> name -> first owner
    let mut names: BTreeMap<(u8, String), Owner> = BTreeMap::new();
    let mut claim = |ns: u8, name: String, owner: Owner, out: &mut Vec<Violation>| match names.get(&(ns, name.clone())) {
        Some(&first) if first != owner && label_of(first) != label_of(owner) => {
            out.push(Violation {
                rule: Rule::V12,
                subject: subject_of(owner),
                message: format!("synthesized name `{name}` collides with the one generated for `{}`", label_of(first)),
            });
        }
        Some(_) => {}
        None => {
            names.insert((ns, name), owner);
        }
    };
    const TYPES: u8 = 0;
    const QUERY: u8 = 1;
    const MUTATION: u8 = 2;

    for (i, v) in g.vertices().iter().enumerate() {
        let o = Owner::Vertex(i);
        for t in [naming::vertex_type(&v.label), naming::vertex_input(&v.label), naming::vertex_logic_input(&v.label)] {
            claim(TYPES, t, o, out);
        }
        claim(QUERY, naming::single_root(&v.label), o, out);
        claim(QUERY, naming::list_root(&v.label), o, out);
        claim(MUTATION, naming::add_vertex(&v.label), o, out);
        claim(MUTATION, naming::update_vertex(&v.label), o, out);
    }
    for (i, e) in g.edges().iter().enumerate() {
        let Some((s, t)) = e.endpoints() else { continue };
        let (sl, tl) = (&g.vertex(s).label, &g.vertex(t).label);
        let o = Owner::Edge(i);
        claim(TYPES, naming::edge_type(sl, tl, &e.label), o, out);
        if s != t {
            claim(TYPES, naming::edge_type(tl, sl, &e.label), o, out);
        }
        claim(TYPES, naming::edge_logic_input(sl, tl, &e.label), o, out);
        claim(TYPES, naming::edge_input(sl, tl, &e.label), o, out);
        claim(MUTATION, naming::connect_edge(sl, tl, &e.label), o, out);
        claim(MUTATION, naming::update_edge(sl, tl, &e.label), o, out);
    }

    // Adjacency fields per vertex that differ only in first-letter casing.
    for v in g.vertices() {
        let mut fields: BTreeMap<String, usize> = BTreeMap::new();
        let incident = v.in_edges().iter().map(|&e| (e, Direction::In)).chain(v.out_edges().iter().map(|&e| (e, Direction::Out)));
        for (ei, dir) in incident {
            let e = g.edge(ei);
            let field = naming::adjacency_field(&e.label, dir);
            match fields.get(&field) {
                Some(&first) if g.edge(first).label != e.label => out.push(Violation {
                    rule: Rule::V12,
                    subject: format!("edges/{}", e.id),
                    message: format!("field `{field}` on `{}` collides with the one generated for edge `{}`", v.label, g.edge(first).label),
                }),
                Some(_) => {}
                None => {
                    fields.insert(field, ei);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::schema::Datatype::*;
    use alloc::vec;

    fn rules(g: &GraphSchema) -> Vec<Rule> {
        validate(g).into_iter().map(|v| v.rule).collect()
    }

    #[test]
    fn bundled_schemas_are_valid() {
        assert_eq!(validate(&fixtures::todo_schema()), vec![]);
        assert_eq!(validate(&fixtures::movielens_schema()), vec![]);
    }

    #[test]
    fn each_violation_fixture_triggers_only_its_rule() {
        for (rule, json) in fixtures::VIOLATION_FIXTURES {
            let g = GraphSchema::from_json_str(json).unwrap();
            assert_eq!(rules(&g), [rule], "{json}");
        }
    }

    #[test]
    fn digit_leading_label() {
        let g = GraphSchema::builder().vertex("2user", &[]).build();
        assert_eq!(rules(&g), [Rule::V1]);
    }

    #[test]
    fn double_underscore_label() {
        let g = GraphSchema::builder().vertex("__User", &[]).build();
        assert_eq!(rules(&g), [Rule::V2]);
    }

    #[test]
    fn reserved_property_key() {
        let g = GraphSchema::builder().vertex("User", &[("id", String, true)]).build();
        assert_eq!(rules(&g), [Rule::V4]);
    }

    #[test]
    fn duplicate_vertex_label() {
        let g = GraphSchema::builder().vertex("User", &[]).vertex("User", &[]).build();
        assert_eq!(rules(&g), [Rule::V6]);
    }

    #[test]
    fn duplicate_self_loop() {
        let g = GraphSchema::builder().vertex("User", &[]).edge("likes", "User", "User", &[]).edge("likes", "User", "User", &[]).build();
        assert_eq!(rules(&g), [Rule::V9]);
    }

    #[test]
    fn in_field_collides_with_target_property() {
        let g = GraphSchema::builder().vertex("User", &[("likesIn", Int, true)]).vertex("Post", &[]).edge("likes", "Post", "User", &[]).build();
        assert_eq!(rules(&g), [Rule::V10]);
    }

    #[test]
    fn edge_property_named_after_endpoint() {
        let g = GraphSchema::builder().vertex("User", &[]).vertex("Post", &[]).edge("wrote", "User", "Post", &[("user", String, true)]).build();
        let v = validate(&g);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::V8);
        assert_eq!(v[0].subject, "edges/e0/properties/user");
    }

    #[test]
    fn same_label_to_different_targets_is_rejected() {
        // Both would produce an `ownsOut` field on User.
        let g = GraphSchema::builder().vertex("User", &[]).vertex("Todo", &[]).edge("owns", "User", "Todo", &[]).edge("owns", "User", "User", &[]).build();
        assert_eq!(rules(&g), [Rule::V9]);
    }

    #[test]
    fn same_label_between_disjoint_pairs_is_fine() {
        let g = GraphSchema::builder()
            .vertex("A", &[])
            .vertex("B", &[])
            .vertex("C", &[])
            .vertex("D", &[])
            .edge("rel", "A", "B", &[])
            .edge("rel", "C", "D", &[])
            .build();
        assert_eq!(rules(&g), []);
    }

    #[test]
    fn case_folded_collisions_are_v12() {
        let g = GraphSchema::builder().vertex("User", &[]).vertex("user", &[]).build();
        assert!(!rules(&g).is_empty());
        assert!(rules(&g).iter().all(|r| *r == Rule::V12));

        let g = GraphSchema::builder().vertex("User", &[]).vertex("Todo", &[]).edge("likes", "User", "User", &[]).edge("Likes", "User", "Todo", &[]).build();
        assert!(!rules(&g).is_empty());
        assert!(rules(&g).iter().all(|r| *r == Rule::V12));
    }

    #[test]
    fn reserved_labels() {
        let g = GraphSchema::builder().vertex("Query", &[]).build();
        assert_eq!(rules(&g), [Rule::V12]);
    }

    #[test]
    fn all_violations_are_reported_in_stable_order() {
        let g = GraphSchema::builder().vertex("__A", &[("id", Int, true), ("x", Int, true), ("x", Int, true)]).vertex("2B", &[]).build();
        assert_eq!(rules(&g), [Rule::V2, Rule::V4, Rule::V5, Rule::V1]);
        assert_eq!(validate(&g), validate(&g));
    }
}
