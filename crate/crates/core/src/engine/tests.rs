use alloc::string::String;

use super::*;
use crate::fixtures;
use crate::graphql::prepare_request;
use crate::synth::{synthesize, GraphQLSchemaDoc};
use crate::transpile::{transpile_mutation, transpile_query};
use crate::value::Scalar;

fn todo() -> GraphQLSchemaDoc {
    synthesize(&fixtures::todo_schema()).unwrap()
}

fn props(pairs: &[(&str, Scalar)]) -> Properties {
    pairs.iter().map(|(k, v)| (String::from(*k), v.clone())).collect()
}

/// Both resolution paths, checked against each other.
fn both(doc: &GraphQLSchemaDoc, store: &GraphStore, q: &str) -> String {
    let req = prepare_request(doc, q, None, None).unwrap();
    let via_ir = run_query(store, &transpile_query(doc, &req).unwrap()).unwrap();
    let naive = naive_resolve(doc, &req, store).unwrap();
    assert_eq!(canonical_json(&via_ir), canonical_json(&naive), "{q}");
    canonical_json(&via_ir)
}

fn mutate(doc: &GraphQLSchemaDoc, store: &mut GraphStore, q: &str) -> Result<ResultValue, EngineError> {
    let req = prepare_request(doc, q, None, None).unwrap();
    run_mutation(store, &transpile_mutation(doc, &req).unwrap())
}

#[test]
fn lookup_returns_liked_users() {
    let doc = todo();
    let mut s = GraphStore::new();
    let alice = s.add_vertex("User", props(&[("name", "Alice".into())]));
    let bob = s.add_vertex("User", props(&[("name", "Bob".into())]));
    s.add_edge("likes", alice, bob, props(&[("strength", 0.73.into())])).unwrap();
    assert_eq!(alice, 1);
    assert_eq!(both(&doc, &s, fixtures::TODO_LOOKUP), r#"{"user":{"likesOut":[{"strength":0.73,"user":{"name":"Bob"}}]}}"#);
}

#[test]
fn adult_users_with_first_likes() {
    let doc = todo();
    let mut s = GraphStore::new();
    let a = s.add_vertex("User", props(&[("name", "A".into()), ("age", 30.into())]));
    let b = s.add_vertex("User", props(&[("name", "B".into()), ("age", 12.into())]));
    let c = s.add_vertex("User", props(&[("name", "C".into())]));
    s.add_edge("likes", a, b, props(&[("strength", 0.5.into())])).unwrap();
    s.add_edge("likes", a, c, props(&[("strength", 0.25.into())])).unwrap();
    s.add_edge("likes", b, a, props(&[("strength", 1.0.into())])).unwrap();
    assert_eq!(
        both(&doc, &s, fixtures::TODO_USER_LIKES),
        r#"{"userList":[{"age":30,"likesOut":[{"strength":0.5,"user":{"id":"2"}},{"strength":0.25,"user":{"id":"3"}}]}]}"#
    );
}

#[test]
fn ordering_places_missing_values_last() {
    let doc = todo();
    let mut s = GraphStore::new();
    s.add_vertex("User", props(&[("name", "a".into())]));
    s.add_vertex("User", props(&[("name", "b".into()), ("age", 20.into())]));
    s.add_vertex("User", props(&[("name", "c".into()), ("age", 40.into())]));
    s.add_vertex("User", props(&[("name", "d".into()), ("age", 20.into())]));
    for (dir, expected) in [("DESC", r#"["c","b","d","a"]"#), ("ASC", r#"["b","d","c","a"]"#)] {
        let out = both(&doc, &s, &alloc::format!("{{ userList(orderBy: [{{property: age, order: {dir}}}]) {{ name }} }}"));
        let names: alloc::vec::Vec<String> = serde_json::from_str::<serde_json::Value>(&out).unwrap()["userList"]
            .as_array()
            .unwrap()
            .iter()
            .map(|u| u["name"].as_str().unwrap().into())
            .collect();
        assert_eq!(serde_json::to_string(&names).unwrap(), expected);
    }
}

#[test]
fn pagination_beyond_size() {
    let doc = todo();
    let mut s = GraphStore::new();
    s.add_vertex("User", props(&[("name", "a".into())]));
    s.add_vertex("User", props(&[("name", "b".into())]));
    assert_eq!(both(&doc, &s, "{ userList(pagination: {offset: 0, limit: 3}) { name } }"), r#"{"userList":[{"name":"a"},{"name":"b"}]}"#);
    assert_eq!(both(&doc, &s, "{ userList(pagination: {offset: 5, limit: 3}) { name } }"), r#"{"userList":[]}"#);
}

#[test]
fn empty_store_and_missing_lookup() {
    let doc = todo();
    let s = GraphStore::new();
    assert_eq!(both(&doc, &s, "{ userList { id } }"), r#"{"userList":[]}"#);
    assert_eq!(both(&doc, &s, r#"{ user(id: "5") { id } }"#), r#"{"user":null}"#);
}

#[test]
fn mutations_round_trip() {
    let doc = todo();
    let mut s = GraphStore::new();
    let added = mutate(&doc, &mut s, r#"mutation { a: addUserVertex(data: {name: "John"}) b: addUserVertex(data: {name: "Jane", age: 41}) }"#).unwrap();
    assert_eq!(canonical_json(&added), r#"{"a":"1","b":"2"}"#);
    let e = mutate(&doc, &mut s, r#"mutation { connectUserToUserViaLikesEdge(source_user_id: "1", target_user_id: "2", data: {strength: 0.73}) }"#).unwrap();
    assert_eq!(canonical_json(&e), r#"{"connectUserToUserViaLikesEdge":"3"}"#);
    assert_eq!(
        both(&doc, &s, r#"{ user(id: "1") { name likesOut { id strength user { name age } } } }"#),
        r#"{"user":{"likesOut":[{"id":"3","strength":0.73,"user":{"age":41,"name":"Jane"}}],"name":"John"}}"#
    );

    mutate(&doc, &mut s, r#"mutation { updateUserVertex(id: "1", data: {name: "John", age: 7}) updateUserToUserLikesEdge(id: "3", data: {strength: 0.1}) }"#)
        .unwrap();
    assert_eq!(both(&doc, &s, r#"{ user(id: "1") { age likesOut { strength } } }"#), r#"{"user":{"age":7,"likesOut":[{"strength":0.1}]}}"#);

    let before = s.clone();
    assert!(matches!(
        mutate(&doc, &mut s, r#"mutation { connectUserToUserViaLikesEdge(source_user_id: "1", target_user_id: "99", data: {strength: 1}) }"#),
        Err(EngineError::NotFound(_))
    ));
    assert_eq!(s, before);
    assert!(matches!(mutate(&doc, &mut s, r#"mutation { updateUserVertex(id: "99", data: {name: "x"}) }"#), Err(EngineError::NotFound(_))));
    assert!(matches!(mutate(&doc, &mut s, r#"mutation { updateUserToUserLikesEdge(id: "1", data: {strength: 1}) }"#), Err(EngineError::NotFound(_))));

    let d = mutate(&doc, &mut s, r#"mutation { deleteVertex(id: "2") }"#).unwrap();
    assert_eq!(canonical_json(&d), r#"{"deleteVertex":"2"}"#);
    assert_eq!(s.edge_count(), 0);
    assert!(matches!(mutate(&doc, &mut s, r#"mutation { deleteVertex(id: "2") }"#), Err(EngineError::NotFound(_))));
    s.check_integrity().unwrap();
}

#[test]
fn vertex_removal_cascades() {
    let mut s = GraphStore::new();
    let a = s.add_vertex("User", Properties::new());
    let b = s.add_vertex("User", Properties::new());
    s.add_edge("likes", a, b, Properties::new()).unwrap();
    s.add_edge("likes", b, a, Properties::new()).unwrap();
    s.add_edge("likes", a, a, Properties::new()).unwrap();
    assert!(s.remove_vertex(a));
    assert_eq!((s.vertex_count(), s.edge_count()), (1, 0));
    s.check_integrity().unwrap();
    // ids are not reused
    assert_eq!(s.add_vertex("User", Properties::new()), 6);
}

#[test]
fn snapshot_round_trip() {
    let mut s = GraphStore::new();
    let a = s.add_vertex("User", props(&[("name", "x".into()), ("w", 1.0.into()), ("ok", true.into())]));
    let b = s.add_vertex("Todo", Properties::new());
    s.add_edge("owns", a, b, Properties::new()).unwrap();
    s.remove_vertex(b);
    let text = s.to_json();
    let back = GraphStore::from_json(&text).unwrap();
    assert_eq!(back, s);
    assert!(GraphStore::from_json(r#"{"nextId":2,"vertices":[{"id":1,"label":"A"}],"edges":[{"id":2,"label":"e","source":1,"target":9}]}"#).is_err());
}

#[test]
fn read_only_queries_cannot_write() {
    let s = GraphStore::new();
    let t = crate::ir::Traversal::g().step(crate::ir::Step::AddV("User".into())).step(crate::ir::Step::Next);
    assert_eq!(s.query(&t), Err(EngineError::ReadOnly));
    let mut w = s.clone();
    assert_eq!(w.execute(&t).unwrap().value, ResultValue::Id(1));
}
