use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use gqlgremlin::bench::{run_bench, synthetic_movielens, BenchConfig};
use gqlgremlin::ingest::{default_dataset_dir, ingest_movielens};
use gqlgremlin::service::{serve, AppState};
use gqlgremlin_core::graphql::OperationKind;
use gqlgremlin_core::{prepare_request, synthesize, transpile_mutation, transpile_query, validate, Flavor, GraphSchema};

#[derive(Parser)]
#[command(name = "gqlgremlin", version, about = "GraphQL schemas and Gremlin traversals from property graph schemas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "GQLGREMLIN_PORT", default_value_t = 8080)]
        port: u16,
        /// Directory for schema records and store snapshots; in-memory when absent.
        #[arg(long, env = "GQLGREMLIN_DATA_DIR")]
        data_dir: Option<PathBuf>,
        /// Origin allowed by CORS; any origin when absent.
        #[arg(long, env = "GQLGREMLIN_CORS_ORIGIN")]
        cors_origin: Option<String>,
    },
    /// Check a schema document; prints one violation per line.
    Validate { schema: PathBuf },
    /// Print the GraphQL SDL synthesized from a schema document.
    Sdl { schema: PathBuf },
    /// Print the traversal for a GraphQL request.
    Transpile {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value = "python")]
        flavor: Flavor,
        /// Also print the complexity counters as JSON on stderr.
        #[arg(long)]
        counters: bool,
    },
    /// Ingest MovieLens 100k and print element counts.
    Ingest {
        /// Dataset directory; defaults to ML100K_DIR or data/ml-100k.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Write the resulting store snapshot here.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Run the benchmark harness and write a JSON report.
    Bench {
        /// Checked against the MovieLens fixture schema the harness runs on.
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long, conflicts_with = "synthetic")]
        data: Option<PathBuf>,
        /// Use a small generated store instead of the dataset.
        #[arg(long)]
        synthetic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 120)]
        runs: usize,
        #[arg(long, default_value_t = 20)]
        warmup: usize,
    },
}

type Failure = Box<dyn std::error::Error>;

fn load_schema(path: &PathBuf) -> Result<GraphSchema, Failure> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(GraphSchema::from_json(&bytes).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn valid_schema(path: &PathBuf) -> Result<GraphSchema, Failure> {
    let g = load_schema(path)?;
    let violations = validate(&g);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("{:?} {}: {}", v.rule, v.subject, v.message)).collect();
        return Err(lines.join("\n").into());
    }
    Ok(g)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Serve { port, data_dir, cors_origin } => {
            let state = match &data_dir {
                Some(d) => AppState::open(d)?,
                None => AppState::ephemeral(),
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(Arc::new(state), port, cors_origin))?;
        }
        Command::Validate { schema } => {
            let violations = validate(&load_schema(&schema)?);
            for v in &violations {
                println!("{:?}\t{}\t{}", v.rule, v.subject, v.message);
            }
            if !violations.is_empty() {
                return Ok(ExitCode::from(1));
            }
            println!("ok");
        }
        Command::Sdl { schema } => {
            print!("{}", synthesize(&valid_schema(&schema)?)?.sdl());
        }
        Command::Transpile { schema, query, flavor, counters } => {
            let doc = synthesize(&valid_schema(&schema)?)?;
            let text = fs::read_to_string(&query).map_err(|e| format!("{}: {e}", query.display()))?;
            let req = prepare_request(&doc, &text, None, None)?;
            let plan = match req.kind {
                OperationKind::Query => transpile_query(&doc, &req)?,
                _ => transpile_mutation(&doc, &req)?,
            };
            println!("{}", plan.text(flavor));
            if counters {
                eprintln!("{}", serde_json::to_string(&plan.counters)?);
            }
        }
        Command::Ingest { data, snapshot } => {
            let dir = data.unwrap_or_else(default_dataset_dir);
            let ingested = ingest_movielens(&dir)?;
            println!("{}", serde_json::to_string_pretty(&ingested.report)?);
            if let Some(path) = snapshot {
                fs::write(path, ingested.store.to_json())?;
            }
        }
        Command::Bench { schema, data, synthetic, out, runs, warmup } => {
            if let Some(path) = schema {
                let given = valid_schema(&path)?;
                if given != gqlgremlin_core::fixtures::movielens_schema() {
                    return Err(format!("{} is not the MovieLens schema", path.display()).into());
                }
            }
            let cfg = BenchConfig { runs, warmup, ..BenchConfig::default() };
            let report = if synthetic {
                let (store, user, genre) = synthetic_movielens(200, 300);
                run_bench(&store, user, genre, "synthetic", &cfg)?
            } else {
                let dir = data.unwrap_or_else(default_dataset_dir);
                let ingested = ingest_movielens(&dir)?;
                let (user, genre) = ingested.placeholder_ids().ok_or("dataset lacks user 1 or the Action genre")?;
                run_bench(&ingested.store, user, genre, &dir.display().to_string(), &cfg)?
            };
            let text = serde_json::to_string_pretty(&report)?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => println!("{text}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
