//! End-to-end acceptance gate. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! Needs the MovieLens 100k files in `data/ml-100k` (or `ML100K_DIR`);
//! `scripts/fetch_movielens.py` puts them there.

use std::collections::BTreeSet;
use std::panic;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use gqlgremlin::bench::{benchmark_queries, run_bench, synthetic_movielens, BenchConfig, BenchReport};
use gqlgremlin::ingest::{default_dataset_dir, ingest_movielens, Ingested};
use gqlgremlin_core::engine::{canonical_json, naive_resolve, run_mutation, run_query, GraphStore};
use gqlgremlin_core::graphql::{inventory, parse_sdl};
use gqlgremlin_core::ir::normalize_whitespace;
use gqlgremlin_core::testkit::{self, random_query, random_schema, random_store, sdl_outline, OutlineBlock};
use gqlgremlin_core::transpile::Transpiled;
use gqlgremlin_core::{fixtures, prepare_request, synthesize, transpile_mutation, transpile_query, validate, Flavor, GraphQLSchemaDoc, GraphSchema};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn doc(g: &GraphSchema) -> GraphQLSchemaDoc {
    synthesize(g).expect("bundled schemas synthesize")
}

fn compile(doc: &GraphQLSchemaDoc, text: &str) -> Result<Transpiled, String> {
    let req = prepare_request(doc, text, None, None).map_err(|e| format!("{e}\n{text}"))?;
    transpile_query(doc, &req).map_err(|e| format!("{e}\n{text}"))
}

fn dataset() -> &'static Result<Ingested, String> {
    static INGESTED: OnceLock<Result<Ingested, String>> = OnceLock::new();
    INGESTED.get_or_init(|| {
        let dir = default_dataset_dir();
        ingest_movielens(&dir).map_err(|e| format!("{e} (run scripts/fetch_movielens.py)"))
    })
}

/// The timed harness, on the real dataset when present. Transpile timings do
/// not depend on the store, so the synthetic one is an adequate stand-in.
fn bench() -> &'static Result<BenchReport, String> {
    static REPORT: OnceLock<Result<BenchReport, String>> = OnceLock::new();
    REPORT.get_or_init(|| {
        let cfg = BenchConfig::default();
        match dataset() {
            Ok(d) => {
                let (user, genre) = d.placeholder_ids().ok_or("dataset lacks user 1 or Action")?;
                run_bench(&d.store, user, genre, "ml-100k", &cfg).map_err(|e| e.to_string())
            }
            Err(_) => {
                let (store, user, genre) = synthetic_movielens(200, 300);
                run_bench(&store, user, genre, "synthetic", &cfg).map_err(|e| e.to_string())
            }
        }
    })
}

fn reference_traversal() -> Outcome {
    let start = Instant::now();
    let plan = compile(&doc(&fixtures::todo_schema()), fixtures::TODO_USER_LIKES)?;
    let ours = plan.text(Flavor::Python);
    let elapsed = start.elapsed();
    let want = normalize_whitespace(include_str!("../../core/tests/data/todo_user_likes.py.txt"));
    ensure!(normalize_whitespace(&ours) == want, "text differs\nours: {ours}\nwant: {want}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{} bytes identical in {elapsed:?}", want.len()))
}

fn benchmark_counters() -> Outcome {
    let movielens = doc(&fixtures::movielens_schema());
    let expected = [(3, 1, 0, 0), (2, 2, 1, 0), (5, 0, 0, 1), (10, 1, 0, 3)];
    let mut seen = Vec::new();
    for ((name, text), want) in benchmark_queries(1, 2).into_iter().zip(expected) {
        let c = compile(&movielens, &text)?.counters;
        let got = (c.s, c.w, c.k, c.d);
        ensure!(got == want, "{name}: (S,W,K,D) = {got:?}, expected {want:?}");
        seen.push(format!("{name} {got:?}"));
    }
    Ok(seen.join(", "))
}

fn one_visit_per_field() -> Outcome {
    let movielens = doc(&fixtures::movielens_schema());
    for (name, text) in benchmark_queries(1, 2) {
        let c = compile(&movielens, &text)?.counters;
        ensure!(c.field_visits == c.s, "{name}: {} visits for S={}", c.field_visits, c.s);
    }
    let mut rng = testkit::rng(0x0b5e);
    let mut deepest = 0;
    for i in 0..500 {
        let g = random_schema(&mut rng);
        let d = doc(&g);
        let store = random_store(&mut rng, &g, 20);
        let q = random_query(&mut rng, &d, Some(&store), 4);
        let c = compile(&d, &q.text)?.counters;
        ensure!(q.depth <= 4, "query {i} has depth {}", q.depth);
        ensure!(c.s == q.fields, "query {i}: S={} but {} fields selected\n{}", c.s, q.fields, q.text);
        ensure!(c.field_visits == c.s, "query {i}: {} visits for S={}\n{}", c.field_visits, c.s, q.text);
        deepest = deepest.max(q.depth);
    }
    Ok(format!("4 benchmark queries and 500 random queries (max depth {deepest})"))
}

fn validator_matrix() -> Outcome {
    for (rule, json) in fixtures::VIOLATION_FIXTURES {
        let g = GraphSchema::from_json_str(json).map_err(|e| e.to_string())?;
        let fired: Vec<_> = validate(&g).into_iter().map(|v| v.rule).collect();
        ensure!(fired == [rule], "{rule} fixture fired {fired:?}");
    }
    for (name, g) in [("Todo", fixtures::todo_schema()), ("MovieLens", fixtures::movielens_schema())] {
        let v = validate(&g);
        ensure!(v.is_empty(), "{name} reports {v:?}");
    }
    Ok(format!("{} single-rule fixtures, Todo and MovieLens clean", fixtures::VIOLATION_FIXTURES.len()))
}

/// Every excerpt field exists in `ours` with the same signature and relative
/// order. With `elided_args`, argument lists the excerpt omits are ignored.
fn contains(ours: &[OutlineBlock], excerpt: &[OutlineBlock], elided_args: bool) -> Result<(), String> {
    for want in excerpt {
        let have = ours.iter().find(|b| b.name == want.name).ok_or_else(|| format!("no {} {}", want.keyword, want.name))?;
        ensure!(have.keyword == want.keyword, "{} is a {}, not a {}", want.name, have.keyword, want.keyword);
        let mut last = None;
        for wf in &want.fields {
            let pos = have.fields.iter().position(|f| f.name == wf.name).ok_or_else(|| format!("{}.{} missing", want.name, wf.name))?;
            let mut hf = have.fields[pos].clone();
            if elided_args && wf.args.is_empty() {
                hf.args.clear();
            }
            ensure!(&hf == wf, "{}.{}: {hf:?} vs {wf:?}", want.name, wf.name);
            ensure!(last < Some(pos), "{}.{} out of order", want.name, wf.name);
            last = Some(pos);
        }
    }
    Ok(())
}

fn retype(blocks: &mut [OutlineBlock], block: &str, field: &str, f: impl FnOnce(&mut gqlgremlin_core::testkit::OutlineField)) {
    let b = blocks.iter_mut().find(|b| b.name == block).expect("excerpt block");
    f(b.fields.iter_mut().find(|x| x.name == field).expect("excerpt field"));
}

fn sdl_fidelity() -> Outcome {
    let todo = sdl_outline(doc(&fixtures::todo_schema()).sdl());

    let mut basic = sdl_outline(include_str!("../../core/tests/data/excerpts/todo_basic.graphql"));
    // single lookups are nullable and the fixture's age is optional
    retype(&mut basic, "Query", "user", |f| f.ty = "UserVertex".into());
    retype(&mut basic, "UserVertex", "age", |f| f.ty = "Int".into());
    contains(&todo, &basic, true)?;
    contains(&todo, &sdl_outline(include_str!("../../core/tests/data/excerpts/todo_arguments.graphql")), false)?;
    contains(&todo, &sdl_outline(include_str!("../../core/tests/data/excerpts/todo_vertex_mutations.graphql")), false)?;
    contains(&todo, &sdl_outline(include_str!("../../core/tests/data/excerpts/todo_delete_mutations.graphql")), false)?;
    let mut edges = sdl_outline(include_str!("../../core/tests/data/excerpts/todo_edge_mutations.graphql"));
    // the update request calls the field without "Via"
    retype(&mut edges, "Mutation", "updateUserToUserViaLikesEdge", |f| f.name = "updateUserToUserLikesEdge".into());
    contains(&todo, &edges, false)?;

    let reference_text = include_str!("../../core/tests/data/movielens_reference.graphql");
    let reference = parse_sdl(reference_text).map_err(|e| e.to_string())?;
    let ours_text = doc(&fixtures::movielens_schema()).sdl().to_string();
    let ours = inventory(&parse_sdl(&ours_text).map_err(|e| e.to_string())?);
    let theirs = inventory(&reference);
    let mut expected: BTreeSet<String> = theirs.keys().cloned().collect();
    // filter, order and property declarations the listing abbreviates
    for el in ["GenreVertex", "OccupationVertex", "MovieVertex", "UserToMovieRatedEdge"] {
        for suffix in ["LogicInput", "OrderByInput", "Property"] {
            expected.insert(format!("{el}{suffix}"));
        }
    }
    let names: BTreeSet<String> = ours.keys().cloned().collect();
    ensure!(
        names == expected,
        "type sets differ: extra {:?}, missing {:?}",
        names.difference(&expected).collect::<Vec<_>>(),
        expected.difference(&names).collect::<Vec<_>>()
    );
    for (name, members) in &theirs {
        ensure!(&ours[name] == members, "{name} members differ: {:?} vs {members:?}", ours[name]);
    }
    let ours_blocks = sdl_outline(&ours_text);
    for want in sdl_outline(reference_text) {
        ensure!(ours_blocks.contains(&want), "{} differs from the listing", want.name);
    }
    Ok(format!("5 Todo excerpts contained, {} MovieLens types match", names.len()))
}

fn differential_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = testkit::rng(0xacce97);
    let mut triples = 0;
    let mut nonempty = 0;
    while triples < 240 {
        let g = random_schema(&mut rng);
        let d = doc(&g);
        let store = random_store(&mut rng, &g, 50);
        ensure!(store.vertex_count() + store.edge_count() <= 50, "store too large");
        for _ in 0..4 {
            let q = random_query(&mut rng, &d, Some(&store), 3);
            let req = prepare_request(&d, &q.text, None, None).map_err(|e| format!("{e}\n{}", q.text))?;
            let plan = transpile_query(&d, &req).map_err(|e| e.to_string())?;
            let fast = canonical_json(&run_query(&store, &plan).map_err(|e| format!("{e}\n{}", q.text))?);
            let slow = canonical_json(&naive_resolve(&d, &req, &store).map_err(|e| format!("{e}\n{}", q.text))?);
            ensure!(fast == slow, "results differ\n{}\ntraversal: {fast}\nnaive:     {slow}", q.text);
            if fast.contains('{') && fast.matches('[').count() > fast.matches("[]").count() {
                nonempty += 1;
            }
            triples += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{triples} triples agree ({nonempty} with non-empty lists) in {elapsed:.2?}"))
}

fn linearity() -> Outcome {
    let r = bench().as_ref().map_err(Clone::clone)?;
    let fit = &r.linearity.fit;
    ensure!(fit.r2 >= 0.98, "R² = {:.4}", fit.r2);
    for p in &r.linearity.points {
        ensure!(p.field_visits == p.s, "S={} visited {} fields", p.s, p.field_visits);
    }
    let eq = &r.equal_s;
    ensure!(eq.flat.field_visits == eq.nested.field_visits, "equal-S pair visits {} vs {}", eq.flat.field_visits, eq.nested.field_visits);
    ensure!(eq.ratio < 2.0, "equal-S ratio {:.2}", eq.ratio);
    let mut means = Vec::new();
    for q in &r.queries {
        ensure!(q.transpile.mean_ms < 5.0, "{} transpile mean {:.3} ms", q.name, q.transpile.mean_ms);
        means.push(format!("{} {:.3}", q.name, q.transpile.mean_ms));
    }
    Ok(format!("R² {:.4}, equal-S ratio {:.2}, transpile means ms: {} ({})", fit.r2, eq.ratio, means.join(", "), r.dataset))
}

struct Session {
    doc: GraphQLSchemaDoc,
    store: GraphStore,
}

impl Session {
    fn mutate(&mut self, text: &str) -> Result<serde_json::Value, String> {
        let req = prepare_request(&self.doc, text, None, None).map_err(|e| format!("{e}\n{text}"))?;
        let plan = transpile_mutation(&self.doc, &req).map_err(|e| e.to_string())?;
        let out = run_mutation(&mut self.store, &plan).map_err(|e| format!("{e}\n{text}"))?;
        self.store.check_integrity()?;
        Ok(out.to_json())
    }

    fn read(&self, text: &str) -> Result<serde_json::Value, String> {
        let plan = compile(&self.doc, text)?;
        Ok(run_query(&self.store, &plan).map_err(|e| e.to_string())?.to_json())
    }

    fn rejects(&self, text: &str) -> bool {
        prepare_request(&self.doc, text, None, None).is_err()
    }
}

fn mutation_roundtrips() -> Outcome {
    use serde_json::json;
    let mut s = Session { doc: doc(&fixtures::todo_schema()), store: GraphStore::new() };

    let john = s.mutate("mutation {\n  addUserVertex(data: {name: \"John\"})\n}")?["addUserVertex"].clone();
    ensure!(john == json!("1"), "first vertex id {john}");
    ensure!(s.read(r#"{ user(id: "1") { id name age } }"#)? == json!({ "user": { "id": "1", "name": "John", "age": null } }), "John not readable");
    let update = "mutation {\n  updateUserVertex(data: {name: \"Bob\", age: 7})\n}";
    ensure!(s.rejects(update), "update without id was accepted");
    s.mutate(&update.replace("(data:", "(id: \"1\", data:"))?;
    ensure!(s.read(r#"{ user(id: "1") { id name age } }"#)? == json!({ "user": { "id": "1", "name": "Bob", "age": 7 } }), "update not readable");

    s.mutate(r#"mutation { addUserVertex(data: {name: "Alice"}) }"#)?;
    let connect = "mutation {\n  connectUserToUserViaLikesEdge (\n    source_user_id: \"1\",\n    target_user_id: \"2\",\n    data: {strength: 0.73}\n  )\n}";
    let edge = s.mutate(connect)?["connectUserToUserViaLikesEdge"].clone();
    ensure!(edge == json!("3"), "edge id {edge}");
    let likes = r#"{ user(id: "1") { likesOut { id strength user { name } } } }"#;
    let want = json!({ "user": { "likesOut": [{ "id": "3", "strength": 0.73, "user": { "name": "Alice" } }] } });
    ensure!(s.read(likes)? == want, "connect read back {}", s.read(likes)?);
    let update = "mutation {\n  updateUserToUserLikesEdge (\n    data: {strength: 0.37}\n  )\n}";
    ensure!(s.rejects(update), "edge update without id was accepted");
    s.mutate(&update.replace("(\n    data:", "(\n    id: \"3\",\n    data:"))?;
    ensure!(s.read(r#"{ user(id: "2") { likesIn { strength } } }"#)? == json!({ "user": { "likesIn": [{ "strength": 0.37 }] } }), "edge update not readable");

    let (delete_vertex, delete_edge) = ("mutation {\n  deleteVertex(id: \"1\")\n}", "mutation {\n  deleteEdge(id: \"3\")\n}");
    ensure!(s.mutate(delete_edge)? == json!({ "deleteEdge": "3" }), "deleteEdge result");
    ensure!(s.read(likes)? == json!({ "user": { "likesOut": [] } }), "edge still readable");
    ensure!(s.mutate(delete_vertex)? == json!({ "deleteVertex": "1" }), "deleteVertex result");
    ensure!(s.read(r#"{ user(id: "1") { id } userList { name } }"#)? == json!({ "user": null, "userList": [{ "name": "Alice" }] }), "vertex still readable");
    Ok("add/update vertex, connect (0.73)/update (0.37) edge, delete edge and vertex read back".into())
}

fn movielens_counts() -> Outcome {
    let d = dataset().as_ref().map_err(Clone::clone)?;
    let v = d.store.vertex_counts_by_label();
    let e = d.store.edge_counts_by_label();
    let count = |m: &std::collections::BTreeMap<String, usize>, k: &str| m.get(k).copied().unwrap_or(0);
    let got = (count(&v, "User"), count(&v, "Movie"), count(&v, "Genre"), count(&v, "Occupation"), count(&e, "rated"));
    ensure!(got == (943, 1682, 19, 21, 100_000), "User/Movie/Genre/Occupation/rated = {got:?}");
    d.store.check_integrity()?;
    Ok(format!(
        "943/1682/19/21 vertices, 100000 rated, {} hasGenre, {} worksAs, {} non-numeric zips",
        count(&e, "hasGenre"),
        count(&e, "worksAs"),
        d.report.non_numeric_zips.len()
    ))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("reference traversal text", reference_traversal),
        ("benchmark query counters", benchmark_counters),
        ("one visit per field", one_visit_per_field),
        ("validator matrix", validator_matrix),
        ("SDL fidelity", sdl_fidelity),
        ("differential oracle", differential_oracle),
        ("linearity", linearity),
        ("mutation roundtrips", mutation_roundtrips),
        ("MovieLens ingest counts", movielens_counts),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
