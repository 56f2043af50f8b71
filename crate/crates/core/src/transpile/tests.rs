use alloc::string::String;

use super::*;
use crate::fixtures;
use crate::graphql::prepare_request;
use crate::ir::normalize_whitespace;
use crate::synth::synthesize;

fn todo() -> GraphQLSchemaDoc {
    synthesize(&fixtures::todo_schema()).unwrap()
}

fn movielens() -> GraphQLSchemaDoc {
    synthesize(&fixtures::movielens_schema()).unwrap()
}

fn query(doc: &GraphQLSchemaDoc, q: &str) -> Transpiled {
    let req = prepare_request(doc, q, None, None).unwrap();
    transpile_query(doc, &req).unwrap()
}

fn mutate(doc: &GraphQLSchemaDoc, q: &str) -> String {
    let req = prepare_request(doc, q, None, None).unwrap();
    transpile_mutation(doc, &req).unwrap().text(Flavor::Python)
}

#[test]
fn user_likes_matches_reference_text() {
    let t = query(&todo(), fixtures::TODO_USER_LIKES);
    let expected = include_str!("../../tests/data/todo_user_likes.py.txt");
    assert_eq!(t.text(Flavor::Python), normalize_whitespace(expected));
    assert_eq!(t.counters.field_visits, t.counters.s);
}

#[test]
fn minimal_list_query() {
    let t = query(&todo(), "{ userList { id } }");
    assert_eq!(t.text(Flavor::Python), "g.V().has_label('User').project('id').by(__.id_()).to_list()");
    assert_eq!(t.text(Flavor::Groovy), "g.V().hasLabel('User').project('id').by(id()).toList()");
    assert_eq!((t.counters.s, t.counters.field_visits), (1, 1));
}

#[test]
fn single_lookup() {
    let t = query(&todo(), fixtures::TODO_LOOKUP);
    assert_eq!(
        t.text(Flavor::Python),
        "g.V(1).has_label('User').project('likesOut').by(__.out_e('likes').project('strength', 'user')\
         .by(__.values('strength')).by(__.in_v().has_label('User').project('name').by(__.values('name'))).fold()).next()"
    );
    assert_eq!(t.roots[0].kind, RootKind::Single);
}

#[test]
fn edge_arguments() {
    let t = query(&todo(), fixtures::TODO_ARGUMENTS);
    assert_eq!(
        t.text(Flavor::Python),
        "g.V().has_label('User').has('name', P.eq('John')).project('likesOut').by(__.out_e('likes')\
         .where(__.in_v().has_label('User').has('age', P.gt(18)))\
         .order().by(__.values('strength'), Order.desc).by(__.id_(), Order.asc)\
         .project('user').by(__.in_v().has_label('User').project('name').by(__.values('name')))\
         .skip(0).limit(2).fold()).to_list()"
    );
}

#[test]
fn incoming_edges_pair_with_out_v() {
    let t = query(&todo(), "{ todoList { ownsIn { user { id } } } }");
    assert_eq!(
        t.text(Flavor::Python),
        "g.V().has_label('Todo').project('ownsIn').by(__.in_e('owns').project('user')\
         .by(__.out_v().has_label('User').project('id').by(__.id_())).fold()).to_list()"
    );
}

#[test]
fn optional_order_sorts_missing_last() {
    let t = query(&todo(), "{ userList(orderBy: [{property: age, order: DESC}]) { id } }");
    assert_eq!(
        t.text(Flavor::Python),
        "g.V().has_label('User').order()\
         .by(__.coalesce(__.values('age').constant(0), __.constant(1)), Order.asc)\
         .by(__.coalesce(__.values('age'), __.constant(0)), Order.desc)\
         .by(__.id_(), Order.asc).project('id').by(__.id_()).to_list()"
    );
}

#[test]
fn logic_filters() {
    let t = query(&todo(), r#"{ userList(where: {name_EQ: "John", OR: [{age_LT: 10}, {age_GT: 60}]}) { id } }"#);
    assert_eq!(
        t.text(Flavor::Python),
        "g.V().has_label('User').has('name', P.eq('John')).or_(__.has('age', P.lt(10)), __.has('age', P.gt(60)))\
         .project('id').by(__.id_()).to_list()"
    );
    assert_eq!(
        t.text(Flavor::Groovy),
        "g.V().hasLabel('User').has('name', eq('John')).or(has('age', lt(10)), has('age', gt(60)))\
         .project('id').by(id()).toList()"
    );
}

#[test]
fn benchmark_queries_visit_each_field_once() {
    let doc = movielens();
    for (name, text) in fixtures::MOVIELENS_QUERIES {
        let text = text.replace(fixtures::USER_GRAPH_ID_PLACEHOLDER, "1").replace(fixtures::GENRE_GRAPH_ID_PLACEHOLDER, "2");
        let t = query(&doc, &text);
        let c = t.counters;
        assert_eq!(c.field_visits, c.s, "{name}");
        assert!(c.max_vertex_stack <= c.d + 1, "{name}");
        assert_eq!(c.max_edge_stack, c.d, "{name}");
    }
}

#[test]
fn user_ratings_shape() {
    let text = fixtures::USER_RATINGS.replace(fixtures::USER_GRAPH_ID_PLACEHOLDER, "7");
    let t = query(&movielens(), &text);
    assert_eq!(
        t.text(Flavor::Python),
        "g.V(7).has_label('User').project('userId', 'ratedOut').by(__.values('userId'))\
         .by(__.out_e('rated').project('rating', 'movie').by(__.values('rating'))\
         .by(__.in_v().has_label('Movie').project('title').by(__.values('title'))).skip(0).limit(5).fold()).next()"
    );
    assert_eq!(t.counters.field_visits, 5);
}

#[test]
fn mutation_templates() {
    let doc = todo();
    assert_eq!(mutate(&doc, r#"mutation { addUserVertex(data: {name: "John"}) }"#), "g.add_v('User').property('name', 'John').id_().next()");
    assert_eq!(
        mutate(&doc, r#"mutation { updateUserVertex(id: "1", data: {name: "Jane", age: 30}) }"#),
        "g.V(1).has_label('User').property('name', 'Jane').property('age', 30).id_().next()"
    );
    assert_eq!(
        mutate(&doc, r#"mutation { connectUserToUserViaLikesEdge(source_user_id: "1", target_user_id: "2", data: {strength: 0.73}) }"#),
        "g.V(1).has_label('User').add_e('likes').to(__.V(2).has_label('User')).property('strength', 0.73).id_().next()"
    );
    assert_eq!(
        mutate(&doc, r#"mutation { updateUserToUserLikesEdge(id: "9", data: {strength: 0.5}) }"#),
        "g.E(9).has_label('likes').where(__.out_v().has_label('User')).where(__.in_v().has_label('User'))\
         .property('strength', 0.5).id_().next()"
    );
    assert_eq!(mutate(&doc, r#"mutation { deleteVertex(id: "1") }"#), "g.V(1).drop().iterate()");
    assert_eq!(mutate(&doc, r#"mutation { deleteEdge(id: "x") }"#), "g.E('x').drop().iterate()");
}

#[test]
fn operation_kind_is_checked() {
    let doc = todo();
    let q = prepare_request(&doc, "{ userList { id } }", None, None).unwrap();
    assert!(transpile_mutation(&doc, &q).is_err());
    let m = prepare_request(&doc, r#"mutation { deleteVertex(id: "1") }"#, None, None).unwrap();
    assert!(transpile_query(&doc, &m).is_err());
}

#[test]
fn deterministic() {
    let doc = movielens();
    let text = fixtures::GENRE_DEMOGRAPHICS.replace(fixtures::GENRE_GRAPH_ID_PLACEHOLDER, "3");
    assert_eq!(query(&doc, &text), query(&doc, &text));
}
