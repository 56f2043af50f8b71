//! Randomized checks over generated schemas, stores and queries.

use gqlgremlin_core::engine::{canonical_json, naive_resolve, run_query};
use gqlgremlin_core::ir::parse_traversal;
use gqlgremlin_core::testkit::{self, random_query, random_schema, random_store};
use gqlgremlin_core::{fixtures, prepare_request, synthesize, transpile_query, Flavor};

#[test]
fn transpiled_results_match_naive_resolution() {
    let mut rng = testkit::rng(0x5eed);
    let mut checked = 0;
    while checked < 250 {
        let g = random_schema(&mut rng);
        let doc = synthesize(&g).unwrap();
        let store = random_store(&mut rng, &g, 50);
        for _ in 0..5 {
            let q = random_query(&mut rng, &doc, Some(&store), 3);
            let req = prepare_request(&doc, &q.text, None, None).unwrap_or_else(|e| panic!("{e}\n{}", q.text));
            let plan = transpile_query(&doc, &req).unwrap();
            let fast = run_query(&store, &plan).unwrap_or_else(|e| panic!("{e}\n{}\n{}", q.text, plan.text(Flavor::Python)));
            let slow = naive_resolve(&doc, &req, &store).unwrap();
            assert_eq!(canonical_json(&fast), canonical_json(&slow), "query: {}\nstore: {}", q.text, store.to_json());
            checked += 1;
        }
    }
}

#[test]
fn every_selected_field_is_visited_once() {
    let mut rng = testkit::rng(7);
    let movielens = synthesize(&fixtures::movielens_schema()).unwrap();
    for i in 0..500 {
        let doc = if i % 2 == 0 { movielens.clone() } else { synthesize(&random_schema(&mut rng)).unwrap() };
        let q = random_query(&mut rng, &doc, None, 4);
        let req = prepare_request(&doc, &q.text, None, None).unwrap_or_else(|e| panic!("{e}\n{}", q.text));
        let c = transpile_query(&doc, &req).unwrap().counters;
        assert_eq!(c.s, q.fields, "{}", q.text);
        assert_eq!(c.field_visits, c.s, "{}", q.text);
        assert_eq!(c.d, q.depth, "{}", q.text);
        assert!(c.max_edge_stack <= c.d);
    }
}

#[test]
fn emitted_text_parses_back() {
    let mut rng = testkit::rng(99);
    for _ in 0..200 {
        let doc = synthesize(&random_schema(&mut rng)).unwrap();
        let q = random_query(&mut rng, &doc, None, 3);
        let req = prepare_request(&doc, &q.text, None, None).unwrap();
        for root in transpile_query(&doc, &req).unwrap().roots {
            for flavor in [Flavor::Python, Flavor::Groovy] {
                let text = root.traversal.to_text(flavor);
                assert_eq!(parse_traversal(&text).unwrap(), root.traversal, "{text}");
            }
        }
    }
}

#[test]
fn generated_stores_are_consistent() {
    let mut rng = testkit::rng(3);
    for _ in 0..100 {
        let g = random_schema(&mut rng);
        let s = random_store(&mut rng, &g, 50);
        s.check_integrity().unwrap();
        assert!(s.vertex_count() + s.edge_count() <= 50);
        assert_eq!(gqlgremlin_core::GraphStore::from_json(&s.to_json()).unwrap(), s);
    }
}
