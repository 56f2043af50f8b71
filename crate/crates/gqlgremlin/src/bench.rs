//! Benchmark harness: timed runs of the four MovieLens queries, a
//! transpile-time sweep over selection size, and a flat vs nested pair with
//! equal field counts.

use std::hint::black_box;
use std::time::{Duration, Instant};

use gqlgremlin_core::engine::{run_query, ElementId, GraphStore};
use gqlgremlin_core::schema::{Datatype, GraphSchema};
use gqlgremlin_core::synth::GraphQLSchemaDoc;
use gqlgremlin_core::transpile::Transpiled;
use gqlgremlin_core::value::Scalar;
use gqlgremlin_core::{fixtures, prepare_request, synthesize, transpile_query, ComplexityCounters};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("selection of {wanted} fields exceeds the {available} properties of the wide vertex")]
    TooWide { wanted: usize, available: usize },
    #[error("{name}: {message}")]
    Query { name: String, message: String },
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Executions per query, warm-up included.
    pub runs: usize,
    pub warmup: usize,
    /// Selection sizes of the linearity sweep.
    pub sizes: Vec<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { runs: 120, warmup: 20, sizes: vec![10, 50, 100, 500, 1000] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub mean_ms: f64,
    pub std_ms: f64,
    pub p95_ms: f64,
}

impl Stats {
    /// Sample standard deviation and nearest-rank 95th percentile.
    pub fn from_samples(samples: &[Duration]) -> Stats {
        let ms: Vec<f64> = samples.iter().map(|d| d.as_secs_f64() * 1e3).collect();
        let n = ms.len() as f64;
        let mean = ms.iter().sum::<f64>() / n;
        let var = if ms.len() > 1 { ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        let mut sorted = ms.clone();
        sorted.sort_by(f64::total_cmp);
        let rank = ((0.95 * n).ceil() as usize).clamp(1, sorted.len());
        Stats { mean_ms: mean, std_ms: var.sqrt(), p95_ms: sorted[rank - 1] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counters {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "W")]
    pub w: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "D")]
    pub d: usize,
}

impl From<ComplexityCounters> for Counters {
    fn from(c: ComplexityCounters) -> Self {
        Counters { s: c.s, w: c.w, k: c.k, d: c.d }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryRow {
    pub name: String,
    pub n: usize,
    pub transpile: Stats,
    pub eval: Stats,
    pub counters: Counters,
    /// Share of the mean total latency spent transpiling, in percent.
    pub t_share: f64,
}

/// Transpile share of total latency, in percent.
pub fn t_share(transpile_mean: f64, eval_mean: f64) -> f64 {
    let total = transpile_mean + eval_mean;
    if total == 0.0 {
        0.0
    } else {
        100.0 * transpile_mean / total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of `ys` on `xs`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Fit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Fit { slope, intercept, r2 }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepPoint {
    pub s: usize,
    pub field_visits: usize,
    pub transpile: Stats,
}

#[derive(Debug, Clone, Serialize)]
pub struct Linearity {
    pub points: Vec<SweepPoint>,
    /// Mean transpile milliseconds against S.
    pub fit: Fit,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShapePoint {
    pub counters: Counters,
    pub field_visits: usize,
    pub transpile: Stats,
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualS {
    pub flat: ShapePoint,
    pub nested: ShapePoint,
    /// Larger mean over smaller mean.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub dataset: String,
    pub queries: Vec<QueryRow>,
    pub linearity: Linearity,
    #[serde(rename = "equalS")]
    pub equal_s: EqualS,
}

/// The benchmark queries with placeholders replaced by vertex ids.
pub fn benchmark_queries(user: ElementId, genre: ElementId) -> Vec<(&'static str, String)> {
    fixtures::MOVIELENS_QUERIES
        .iter()
        .map(|(name, text)| {
            let text = text.replace(fixtures::USER_GRAPH_ID_PLACEHOLDER, &user.to_string()).replace(fixtures::GENRE_GRAPH_ID_PLACEHOLDER, &genre.to_string());
            (*name, text)
        })
        .collect()
}

fn err(name: &str) -> impl Fn(String) -> BenchError + '_ {
    move |message| BenchError::Query { name: name.into(), message }
}

fn compile(doc: &GraphQLSchemaDoc, query: &str) -> Result<Transpiled, String> {
    let req = prepare_request(doc, query, None, None).map_err(|e| e.to_string())?;
    transpile_query(doc, &req).map_err(|e| e.to_string())
}

/// Timed transpile runs (parse, validation, expansion and conversion) with
/// the warm-up discarded.
fn time_transpile(doc: &GraphQLSchemaDoc, query: &str, cfg: &BenchConfig) -> Result<(Transpiled, Vec<Duration>), String> {
    Ok(time_interleaved(doc, &[query], cfg)?.remove(0))
}

/// Like [`time_transpile`] for several queries, taking turns run by run so
/// that drift in machine load affects every query alike.
fn time_interleaved(doc: &GraphQLSchemaDoc, queries: &[&str], cfg: &BenchConfig) -> Result<Vec<(Transpiled, Vec<Duration>)>, String> {
    let mut out = queries.iter().map(|q| Ok((compile(doc, q)?, Vec::with_capacity(cfg.runs)))).collect::<Result<Vec<_>, String>>()?;
    for i in 0..cfg.runs {
        for (q, (_, samples)) in queries.iter().zip(&mut out) {
            let start = Instant::now();
            black_box(compile(doc, black_box(q))?);
            let d = start.elapsed();
            if i >= cfg.warmup {
                samples.push(d);
            }
        }
    }
    Ok(out)
}

/// One vertex type `Wide` with Int properties `f0..f{n-1}`.
pub fn wide_schema(n: usize) -> GraphSchema {
    let keys: Vec<String> = (0..n).map(|i| format!("f{i}")).collect();
    let props: Vec<(&str, Datatype, bool)> = keys.iter().map(|k| (k.as_str(), Datatype::Int, true)).collect();
    GraphSchema::builder().vertex("Wide", &props).build()
}

/// Flat list queries over [`wide_schema`] selecting exactly S fields each.
pub fn synth_linear_workload(available: usize, sizes: &[usize]) -> Result<Vec<(usize, String)>, BenchError> {
    sizes
        .iter()
        .map(|&s| {
            if s > available {
                return Err(BenchError::TooWide { wanted: s, available });
            }
            let fields: Vec<String> = (0..s).map(|i| format!("f{i}")).collect();
            Ok((s, format!("{{ wideList {{ {} }} }}", fields.join(" "))))
        })
        .collect()
}

/// Twelve fields each over the MovieLens schema: one flat selection (six
/// fields plus six aliases) and one three edge lists deep.
pub fn equal_s_queries() -> (&'static str, &'static str) {
    (
        "{ userList { id label userId age gender zipCode a: id b: label c: userId d: age e: gender f: zipCode } }",
        "{ userList { age ratedOut { rating movie { title ratedIn { rating user { age worksAsOut { occupation { name } } } } } } } }",
    )
}

/// A small deterministic MovieLens-shaped store for runs without the
/// dataset. Returns the store and the ids of the first user and of the
/// "Action" genre.
pub fn synthetic_movielens(users: usize, movies: usize) -> (GraphStore, ElementId, ElementId) {
    let mut s = GraphStore::new();
    let p = |pairs: Vec<(&str, Scalar)>| pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let genres: Vec<ElementId> = ["Action", "Comedy", "Drama"]
        .iter()
        .enumerate()
        .map(|(i, g)| s.add_vertex("Genre", p(vec![("genreId", (i as i64).into()), ("name", (*g).into())])))
        .collect();
    let jobs: Vec<ElementId> = ["engineer", "writer"]
        .iter()
        .enumerate()
        .map(|(i, o)| s.add_vertex("Occupation", p(vec![("occupationId", (i as i64 + 1).into()), ("name", (*o).into())])))
        .collect();
    let user_ids: Vec<ElementId> = (0..users)
        .map(|i| {
            let props = vec![
                ("userId", (i as i64 + 1).into()),
                ("age", ((15 + (i * 7) % 50) as i64).into()),
                ("gender", if i % 2 == 0 { "M" } else { "F" }.into()),
                ("zipCode", 10000i64.into()),
            ];
            let id = s.add_vertex("User", p(props));
            s.add_edge("worksAs", id, jobs[i % jobs.len()], Default::default()).expect("endpoints exist");
            id
        })
        .collect();
    for m in 0..movies {
        let id = s.add_vertex("Movie", p(vec![("movieId", (m as i64 + 1).into()), ("title", format!("Movie {m}").as_str().into())]));
        s.add_edge("hasGenre", id, genres[m % genres.len()], Default::default()).expect("endpoints exist");
        for (k, u) in user_ids.iter().enumerate().filter(|(k, _)| (k + m) % 3 == 0) {
            let props = p(vec![("rating", (((k + m) % 5) as i64 + 1).into()), ("timestamp", "881250949".into())]);
            s.add_edge("rated", *u, id, props).expect("endpoints exist");
        }
    }
    (s, user_ids[0], genres[0])
}

/// Runs the whole harness single-threaded against `store`.
pub fn run_bench(store: &GraphStore, user: ElementId, genre: ElementId, dataset: &str, cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    let movielens = synthesize(&fixtures::movielens_schema()).expect("fixture schema is valid");

    let mut queries = Vec::new();
    for (name, text) in benchmark_queries(user, genre) {
        let (plan, transpile) = time_transpile(&movielens, &text, cfg).map_err(err(name))?;
        let mut eval = Vec::with_capacity(cfg.runs);
        for i in 0..cfg.runs {
            let start = Instant::now();
            black_box(run_query(store, &plan).map_err(|e| err(name)(e.to_string()))?);
            if i >= cfg.warmup {
                eval.push(start.elapsed());
            }
        }
        let (transpile, eval) = (Stats::from_samples(&transpile), Stats::from_samples(&eval));
        queries.push(QueryRow {
            name: name.into(),
            n: cfg.runs - cfg.warmup,
            transpile,
            eval,
            counters: plan.counters.into(),
            t_share: t_share(transpile.mean_ms, eval.mean_ms),
        });
    }

    let widest = cfg.sizes.iter().copied().max().unwrap_or(0);
    let wide = synthesize(&wide_schema(widest)).expect("wide schema is valid");
    let workload = synth_linear_workload(widest, &cfg.sizes)?;
    let texts: Vec<&str> = workload.iter().map(|(_, t)| t.as_str()).collect();
    let timed = time_interleaved(&wide, &texts, cfg).map_err(err("linearity"))?;
    let points: Vec<SweepPoint> = workload
        .iter()
        .zip(timed)
        .map(|((s, _), (plan, samples))| SweepPoint { s: *s, field_visits: plan.counters.field_visits, transpile: Stats::from_samples(&samples) })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.s as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.transpile.mean_ms).collect();
    let linearity = Linearity { fit: least_squares(&xs, &ys), points };

    let (flat, nested) = equal_s_queries();
    let mut pair = time_interleaved(&movielens, &[flat, nested], cfg).map_err(err("equal-S"))?.into_iter().map(|(plan, samples)| ShapePoint {
        counters: plan.counters.into(),
        field_visits: plan.counters.field_visits,
        transpile: Stats::from_samples(&samples),
    });
    let (flat, nested) = (pair.next().expect("two queries"), pair.next().expect("two queries"));
    let (a, b) = (flat.transpile.mean_ms, nested.transpile.mean_ms);
    let equal_s = EqualS { ratio: a.max(b) / a.min(b), flat, nested };

    Ok(BenchReport { dataset: dataset.into(), queries, linearity, equal_s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn share_uses_means() {
        assert_eq!(t_share(0.25, 0.75), 25.0);
        assert_eq!(t_share(0.0, 0.0), 0.0);
        let t = Stats::from_samples(&[Duration::from_millis(1), Duration::from_millis(3)]);
        let e = Stats::from_samples(&[Duration::from_millis(6)]);
        assert_eq!(t.mean_ms, 2.0);
        assert_eq!(t_share(t.mean_ms, e.mean_ms), 25.0);
    }

    #[test]
    fn stats_of_known_samples() {
        let samples: Vec<Duration> = (1..=20).map(Duration::from_millis).collect();
        let s = Stats::from_samples(&samples);
        assert_eq!(s.mean_ms, 10.5);
        assert_eq!(s.p95_ms, 19.0);
        assert!((s.std_ms - 5.9160797831).abs() < 1e-9);
    }

    #[test]
    fn exact_line_fits_perfectly() {
        let f = least_squares(&[1.0, 2.0, 3.0, 4.0], &[3.0, 5.0, 7.0, 9.0]);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert_eq!(f.r2, 1.0);
    }

    #[test]
    fn workload_sizes() {
        let w = synth_linear_workload(20, &[10, 20]).unwrap();
        let doc = synthesize(&wide_schema(20)).unwrap();
        for (s, q) in w {
            assert_eq!(compile(&doc, &q).unwrap().counters.s, s);
        }
        assert!(matches!(synth_linear_workload(20, &[21]), Err(BenchError::TooWide { wanted: 21, available: 20 })));
    }

    #[test]
    fn equal_s_pair_shapes() {
        let doc = synthesize(&fixtures::movielens_schema()).unwrap();
        let (flat, nested) = equal_s_queries();
        let (f, n) = (compile(&doc, flat).unwrap().counters, compile(&doc, nested).unwrap().counters);
        assert_eq!((f.s, f.d, f.field_visits), (12, 0, 12));
        assert_eq!((n.s, n.d, n.field_visits), (12, 3, 12));
    }

    #[test]
    fn synthetic_store_answers_every_query() {
        let (store, user, genre) = synthetic_movielens(12, 9);
        store.check_integrity().unwrap();
        let cfg = BenchConfig { runs: 3, warmup: 1, sizes: vec![1, 2, 4] };
        let r = run_bench(&store, user, genre, "synthetic", &cfg).unwrap();
        assert_eq!(r.queries.len(), 4);
        assert!(r.queries.iter().all(|q| q.n == 2));
        assert_eq!(r.linearity.points.iter().map(|p| p.field_visits).collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
