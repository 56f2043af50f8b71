//! Synthesized SDL compared block by block with published schema excerpts.

use std::collections::BTreeSet;

use gqlgremlin_core::graphql::{inventory, parse_sdl};
use gqlgremlin_core::testkit::{sdl_outline, OutlineBlock, OutlineField};
use gqlgremlin_core::{fixtures, synthesize};

const TODO_BASIC: &str = include_str!("data/excerpts/todo_basic.graphql");
const TODO_ARGUMENTS: &str = include_str!("data/excerpts/todo_arguments.graphql");
const TODO_VERTEX_MUTATIONS: &str = include_str!("data/excerpts/todo_vertex_mutations.graphql");
const TODO_EDGE_MUTATIONS: &str = include_str!("data/excerpts/todo_edge_mutations.graphql");
const TODO_DELETE_MUTATIONS: &str = include_str!("data/excerpts/todo_delete_mutations.graphql");

fn ours(schema: &gqlgremlin_core::GraphSchema) -> Vec<OutlineBlock> {
    sdl_outline(synthesize(schema).unwrap().sdl())
}

fn block<'a>(blocks: &'a [OutlineBlock], name: &str) -> &'a OutlineBlock {
    blocks.iter().find(|b| b.name == name).unwrap_or_else(|| panic!("no block {name}"))
}

/// Every excerpt field exists with the same signature, in the same relative order.
fn assert_contains(ours: &[OutlineBlock], excerpt: &[OutlineBlock], elided_args: bool) {
    for want in excerpt {
        let have = block(ours, &want.name);
        assert_eq!(have.keyword, want.keyword, "{}", want.name);
        let mut last = None;
        for wf in &want.fields {
            let pos = have.fields.iter().position(|f| f.name == wf.name).unwrap_or_else(|| panic!("{}.{} missing", want.name, wf.name));
            let mut hf = have.fields[pos].clone();
            // the short excerpt leaves out argument lists it does not discuss
            if elided_args && wf.args.is_empty() {
                hf.args.clear();
            }
            assert_eq!(&hf, wf, "{}.{}", want.name, wf.name);
            assert!(last < Some(pos), "{}.{} out of order", want.name, wf.name);
            last = Some(pos);
        }
    }
}

fn set_type(blocks: &mut [OutlineBlock], block: &str, field: &str, ty: &str) {
    let b = blocks.iter_mut().find(|b| b.name == block).unwrap();
    b.fields.iter_mut().find(|f| f.name == field).unwrap().ty = ty.into();
}

#[test]
fn todo_basic_excerpt() {
    let mut excerpt = sdl_outline(TODO_BASIC);
    // single lookups are nullable and the fixture's age is optional
    set_type(&mut excerpt, "Query", "user", "UserVertex");
    set_type(&mut excerpt, "UserVertex", "age", "Int");
    let ours = ours(&fixtures::todo_schema());
    assert_contains(&ours, &excerpt, true);
    let names = |b: &OutlineBlock| b.fields.iter().map(|f| f.name.clone()).collect::<Vec<_>>();
    assert_eq!(names(block(&ours, "UserVertex")), names(block(&excerpt, "UserVertex")));
}

#[test]
fn todo_argument_excerpt() {
    assert_contains(&ours(&fixtures::todo_schema()), &sdl_outline(TODO_ARGUMENTS), false);
}

#[test]
fn todo_mutation_excerpts() {
    let todo = ours(&fixtures::todo_schema());
    assert_contains(&todo, &sdl_outline(TODO_VERTEX_MUTATIONS), false);
    assert_contains(&todo, &sdl_outline(TODO_DELETE_MUTATIONS), false);
    let mut excerpt = sdl_outline(TODO_EDGE_MUTATIONS);
    // update-edge fields carry no "Via", matching the requests that call them
    let m = excerpt.iter_mut().find(|b| b.name == "Mutation").unwrap();
    m.fields.iter_mut().find(|f| f.name == "updateUserToUserViaLikesEdge").unwrap().name = "updateUserToUserLikesEdge".into();
    assert_contains(&todo, &excerpt, false);
}

fn reference() -> Vec<OutlineBlock> {
    sdl_outline(include_str!("data/movielens_reference.graphql"))
}

#[test]
fn movielens_listed_blocks_match_exactly() {
    let ours = ours(&fixtures::movielens_schema());
    for want in reference() {
        assert_eq!(block(&ours, &want.name), &want);
    }
}

#[test]
fn movielens_inventory() {
    let listed: BTreeSet<String> = reference().into_iter().map(|b| b.name).collect();
    // the listing abbreviates the remaining filter, order and property declarations
    let mut expected = listed.clone();
    for el in ["GenreVertex", "OccupationVertex", "MovieVertex", "UserToMovieRatedEdge"] {
        for suffix in ["LogicInput", "OrderByInput", "Property"] {
            expected.insert(format!("{el}{suffix}"));
        }
    }
    let sdl = synthesize(&fixtures::movielens_schema()).unwrap().sdl().to_string();
    let ours = inventory(&parse_sdl(&sdl).unwrap());
    assert_eq!(ours.keys().cloned().collect::<BTreeSet<_>>(), expected);
    let theirs = inventory(&parse_sdl(include_str!("data/movielens_reference.graphql")).unwrap());
    for (name, members) in &theirs {
        assert_eq!(&ours[name], members, "{name}");
    }
}

#[test]
fn outline_reads_compact_and_spread_forms() {
    let a = sdl_outline("type T { a(x: Int, y: [S!]!): [U!]!  b: ID! }\nenum E { P  Q }\ntype U { c: Int } type S { d: Int }");
    let b = sdl_outline("type T {\n  a(\n    x: Int\n    y: [S!]!\n  ): [U!]!\n  b: ID!\n}\n\nenum E {\n  P\n  Q\n}\ntype U { c: Int }\ntype S { d: Int }\n");
    assert_eq!(a, b);
    assert_eq!(a[0].fields[0], OutlineField { name: "a".into(), args: vec![("x".into(), "Int".into()), ("y".into(), "[S!]!".into())], ty: "[U!]!".into() });
    assert_eq!(a[1].fields.len(), 2);
}
