//! REST API over stored schemas, with a GraphQL endpoint per schema backed
//! by an in-memory store.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gqlgremlin_core::engine::{run_mutation, run_query, GraphStore};
use gqlgremlin_core::graphql::{GraphQLError, OperationKind, Variables};
use gqlgremlin_core::{prepare_request, synthesize, transpile_mutation, transpile_query, validate, Flavor, GraphQLSchemaDoc, GraphSchema, PreparedRequest};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub struct Record {
    pub schema: GraphSchema,
    pub doc: GraphQLSchemaDoc,
    pub store: RwLock<GraphStore>,
}

/// Shared state: schema records by id and where they are persisted.
#[derive(Default)]
pub struct AppState {
    records: RwLock<BTreeMap<String, Arc<Record>>>,
    data_dir: Option<PathBuf>,
    next_id: AtomicU64,
}

fn schema_file(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.schema.json"))
}

fn store_file(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.store.json"))
}

impl AppState {
    /// In-memory state, nothing persisted.
    pub fn ephemeral() -> Self {
        AppState::default()
    }

    /// Loads the schema records and store snapshots found in `dir`, creating
    /// it if needed.
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let mut records = BTreeMap::new();
        let mut max = 0;
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(id) = path.file_name().and_then(|n| n.to_str()).and_then(|n| n.strip_suffix(".schema.json")) else { continue };
            let invalid = |e: String| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", path.display()));
            let schema = GraphSchema::from_json(&fs::read(&path)?).map_err(|e| invalid(e.to_string()))?;
            let doc = synthesize(&schema).map_err(|e| invalid(e.to_string()))?;
            let store = match fs::read_to_string(store_file(dir, id)) {
                Ok(text) => GraphStore::from_json(&text).map_err(|e| invalid(e.to_string()))?,
                Err(e) if e.kind() == io::ErrorKind::NotFound => GraphStore::new(),
                Err(e) => return Err(e),
            };
            max = max.max(id.strip_prefix('s').and_then(|n| n.parse().ok()).unwrap_or(0));
            records.insert(id.to_string(), Arc::new(Record { schema, doc, store: RwLock::new(store) }));
        }
        Ok(AppState { records: RwLock::new(records), data_dir: Some(dir.to_path_buf()), next_id: AtomicU64::new(max) })
    }

    pub fn get(&self, id: &str) -> Option<Arc<Record>> {
        self.records.read().expect("lock").get(id).cloned()
    }

    pub fn ids(&self) -> Vec<String> {
        self.records.read().expect("lock").keys().cloned().collect()
    }

    /// Writes every store snapshot to the data directory.
    pub fn flush(&self) -> io::Result<()> {
        let Some(dir) = &self.data_dir else { return Ok(()) };
        for (id, r) in self.records.read().expect("lock").iter() {
            fs::write(store_file(dir, id), r.store.read().expect("lock").to_json())?;
        }
        Ok(())
    }

    fn persist_schema(&self, id: &str, schema: &GraphSchema) -> io::Result<()> {
        match &self.data_dir {
            Some(dir) => fs::write(schema_file(dir, id), schema.to_json_pretty()),
            None => Ok(()),
        }
    }

    fn persist_store(&self, id: &str, store: &GraphStore) -> io::Result<()> {
        match &self.data_dir {
            Some(dir) => fs::write(store_file(dir, id), store.to_json()),
            None => Ok(()),
        }
    }

    fn forget(&self, id: &str) -> io::Result<()> {
        let Some(dir) = &self.data_dir else { return Ok(()) };
        for f in [schema_file(dir, id), store_file(dir, id)] {
            match fs::remove_file(f) {
                Err(e) if e.kind() != io::ErrorKind::NotFound => return Err(e),
                _ => {}
            }
        }
        Ok(())
    }
}

pub type Shared = Arc<AppState>;

/// Routes with CORS for `cors_origin` (any origin when `None`).
pub fn router(state: Shared, cors_origin: Option<&str>) -> Router {
    let origin = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(o) => AllowOrigin::exact(o),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new().allow_origin(origin).allow_methods(tower_http::cors::Any).allow_headers(tower_http::cors::Any);
    Router::new()
        .route("/schemas", post(create_schema).get(list_schemas))
        .route("/schemas/{id}", get(read_schema).put(update_schema).delete(delete_schema))
        .route("/schemas/{id}/sdl", get(read_sdl))
        .route("/schemas/{id}/transpile", post(transpile))
        .route("/schemas/{id}/graphql", post(graphql))
        .route("/schemas/{id}/store", get(read_store).put(replace_store))
        .layer(cors)
        .with_state(state)
}

/// Serves until ctrl-c, then writes the store snapshots.
pub async fn serve(state: Shared, port: u16, cors_origin: Option<String>) -> io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    let app = router(state.clone(), cors_origin.as_deref());
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    state.flush()
}

enum ApiError {
    NotFound(String),
    /// Schema document that cannot be read or breaks rules.
    Unprocessable(Value),
    BadRequest(Vec<GraphQLError>),
    Io(io::Error),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::NotFound(id) => (StatusCode::NOT_FOUND, Json(json!({ "error": format!("no schema with id {id}") }))).into_response(),
            ApiError::Unprocessable(body) => (StatusCode::UNPROCESSABLE_ENTITY, Json(body)).into_response(),
            ApiError::BadRequest(errors) => (StatusCode::BAD_REQUEST, Json(json!({ "errors": errors }))).into_response(),
            ApiError::Io(e) => (StatusCode::INTERNAL_SERVER_ERROR, Json(json!({ "error": e.to_string() }))).into_response(),
        }
    }
}

impl From<io::Error> for ApiError {
    fn from(e: io::Error) -> Self {
        ApiError::Io(e)
    }
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<Record>, ApiError> {
    state.get(id).ok_or_else(|| ApiError::NotFound(id.into()))
}

/// Parses, validates and synthesizes a schema body.
fn build_record(body: &[u8]) -> Result<Record, ApiError> {
    let schema = GraphSchema::from_json(body).map_err(|e| ApiError::Unprocessable(json!({ "error": e.to_string() })))?;
    let violations = validate(&schema);
    if !violations.is_empty() {
        return Err(ApiError::Unprocessable(json!({ "violations": violations })));
    }
    let doc = synthesize(&schema).map_err(|e| ApiError::Unprocessable(json!({ "error": e.to_string() })))?;
    Ok(Record { schema, doc, store: RwLock::new(GraphStore::new()) })
}

async fn create_schema(State(state): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let record = build_record(&body)?;
    let id = format!("s{}", state.next_id.fetch_add(1, Ordering::SeqCst) + 1);
    state.persist_schema(&id, &record.schema)?;
    state.records.write().expect("lock").insert(id.clone(), Arc::new(record));
    Ok((StatusCode::CREATED, [(header::LOCATION, format!("/schemas/{id}"))], Json(json!({ "schemaId": id }))).into_response())
}

async fn list_schemas(State(state): State<Shared>) -> Json<Value> {
    Json(json!({ "schemas": state.ids() }))
}

async fn read_schema(State(state): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let r = lookup(&state, &id)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], r.schema.to_json()).into_response())
}

/// Replaces the schema; the instance store starts over empty.
async fn update_schema(State(state): State<Shared>, UrlPath(id): UrlPath<String>, body: Bytes) -> Result<Response, ApiError> {
    lookup(&state, &id)?;
    let record = build_record(&body)?;
    state.persist_schema(&id, &record.schema)?;
    state.persist_store(&id, &GraphStore::new())?;
    state.records.write().expect("lock").insert(id.clone(), Arc::new(record));
    Ok(([(header::WARNING, "199 - \"instance store cleared\"")], Json(json!({ "schemaId": id }))).into_response())
}

async fn delete_schema(State(state): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<StatusCode, ApiError> {
    if state.records.write().expect("lock").remove(&id).is_none() {
        return Err(ApiError::NotFound(id));
    }
    state.forget(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn read_sdl(State(state): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let r = lookup(&state, &id)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], r.doc.sdl().to_string()).into_response())
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct GraphQLBody {
    query: String,
    #[serde(default)]
    variables: Option<Variables>,
    #[serde(default)]
    operation_name: Option<String>,
    #[serde(default)]
    flavor: Flavor,
}

fn prepare(doc: &GraphQLSchemaDoc, body: &GraphQLBody) -> Result<PreparedRequest, Vec<GraphQLError>> {
    prepare_request(doc, &body.query, body.variables.as_ref(), body.operation_name.as_deref()).map_err(|e| e.errors())
}

async fn transpile(State(state): State<Shared>, UrlPath(id): UrlPath<String>, Json(body): Json<GraphQLBody>) -> Result<Json<Value>, ApiError> {
    let r = lookup(&state, &id)?;
    let start = Instant::now();
    let req = prepare(&r.doc, &body).map_err(ApiError::BadRequest)?;
    let plan = match req.kind {
        OperationKind::Query => transpile_query(&r.doc, &req),
        _ => transpile_mutation(&r.doc, &req),
    }
    .map_err(|e| ApiError::BadRequest(vec![GraphQLError::new(e.to_string(), None)]))?;
    let nanos = start.elapsed().as_nanos() as u64;
    let mut counters = serde_json::to_value(plan.counters).expect("counters serialize");
    counters["transpileNanos"] = json!(nanos);
    Ok(Json(json!({ "gremlin": plan.text(body.flavor), "counters": counters })))
}

/// Always answers 200 with a GraphQL response body; request and execution
/// errors go into `errors`.
async fn graphql(State(state): State<Shared>, UrlPath(id): UrlPath<String>, Json(body): Json<GraphQLBody>) -> Result<Json<Value>, ApiError> {
    let r = lookup(&state, &id)?;
    let req = match prepare(&r.doc, &body) {
        Ok(req) => req,
        Err(errors) => return Ok(Json(json!({ "errors": errors }))),
    };
    let failed = |message: String| Json(json!({ "data": null, "errors": [{ "message": message }] }));
    let result = match req.kind {
        OperationKind::Query => {
            let plan = transpile_query(&r.doc, &req).map_err(|e| ApiError::BadRequest(vec![GraphQLError::new(e.to_string(), None)]))?;
            run_query(&r.store.read().expect("lock"), &plan)
        }
        _ => {
            let plan = transpile_mutation(&r.doc, &req).map_err(|e| ApiError::BadRequest(vec![GraphQLError::new(e.to_string(), None)]))?;
            let mut store = r.store.write().expect("lock");
            let out = run_mutation(&mut store, &plan);
            debug_assert!(store.check_integrity().is_ok());
            out
        }
    };
    Ok(match result {
        Ok(data) => Json(json!({ "data": data.to_json() })),
        Err(e) => failed(e.to_string()),
    })
}

async fn read_store(State(state): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let r = lookup(&state, &id)?;
    let text = r.store.read().expect("lock").to_json();
    Ok(([(header::CONTENT_TYPE, "application/json")], text).into_response())
}

/// Replaces the instance data with a snapshot whose labels the schema knows.
async fn replace_store(State(state): State<Shared>, UrlPath(id): UrlPath<String>, body: String) -> Result<StatusCode, ApiError> {
    let r = lookup(&state, &id)?;
    let bad = |m: String| ApiError::Unprocessable(json!({ "error": m }));
    let store = GraphStore::from_json(&body).map_err(|e| bad(e.to_string()))?;
    if let Some((_, v)) = store.vertices().find(|(_, v)| r.schema.vertex_by_label(&v.label).is_none()) {
        return Err(bad(format!("unknown vertex label {}", v.label)));
    }
    if let Some((_, e)) = store.edges().find(|(_, e)| !r.schema.edges().iter().any(|d| d.label == e.label)) {
        return Err(bad(format!("unknown edge label {}", e.label)));
    }
    state.persist_store(&id, &store)?;
    *r.store.write().expect("lock") = store;
    Ok(StatusCode::NO_CONTENT)
}
