//! Loads the MovieLens 100k files into a store laid out by the MovieLens
//! fixture schema.
//!
//! Every element is created through the same add-vertex and connect
//! traversals the mutation API emits, so ingest exercises the engine the way
//! a client would.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use gqlgremlin_core::engine::{ElementId, EngineError, GraphStore, ResultValue};
use gqlgremlin_core::ir::{IdLit, Traversal};
use gqlgremlin_core::transpile::{add_vertex, connect};
use gqlgremlin_core::value::Scalar;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{}: {source}", .file.display())]
    Io { file: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {message}", .file.display())]
    Parse { file: PathBuf, line: usize, message: String },
    #[error("{}:{line}: {source}", .file.display())]
    Engine { file: PathBuf, line: usize, source: EngineError },
}

/// Element counts after ingest, plus the rows whose zip code was not numeric.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IngestReport {
    pub users: usize,
    pub movies: usize,
    pub genres: usize,
    pub occupations: usize,
    pub rated: usize,
    pub has_genre: usize,
    pub works_as: usize,
    /// `(u.user line, raw zip)`; these users are stored with zip code -1.
    pub non_numeric_zips: Vec<(usize, String)>,
}

pub struct Ingested {
    pub store: GraphStore,
    pub report: IngestReport,
    /// MovieLens user id to vertex id.
    pub users: HashMap<i64, ElementId>,
    /// Genre name to vertex id.
    pub genres: HashMap<String, ElementId>,
}

impl Ingested {
    /// Vertex ids to substitute for the benchmark placeholders: MovieLens
    /// user 1 and the "Action" genre.
    pub fn placeholder_ids(&self) -> Option<(ElementId, ElementId)> {
        Some((*self.users.get(&1)?, *self.genres.get("Action")?))
    }
}

struct Source {
    path: PathBuf,
    text: String,
}

impl Source {
    /// The files are Latin-1; every byte maps to the code point of equal value.
    fn open(dir: &Path, name: &str) -> Result<Self, IngestError> {
        let path = dir.join(name);
        let bytes = fs::read(&path).map_err(|source| IngestError::Io { file: path.clone(), source })?;
        Ok(Source { path, text: bytes.iter().map(|&b| b as char).collect() })
    }

    /// Non-empty lines with their 1-based line numbers.
    fn rows(&self) -> impl Iterator<Item = (usize, &str)> {
        self.text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty())
    }

    fn bad(&self, line: usize, message: impl Into<String>) -> IngestError {
        IngestError::Parse { file: self.path.clone(), line, message: message.into() }
    }

    fn fields<'a>(&self, line: usize, row: &'a str, sep: char, n: usize) -> Result<Vec<&'a str>, IngestError> {
        let f: Vec<&str> = row.split(sep).collect();
        if f.len() < n {
            return Err(self.bad(line, format!("expected {n} fields, found {}", f.len())));
        }
        Ok(f)
    }

    fn int(&self, line: usize, what: &str, s: &str) -> Result<i64, IngestError> {
        s.trim().parse().map_err(|_| self.bad(line, format!("{what} is not an integer: {s:?}")))
    }
}

struct Loader {
    store: GraphStore,
}

impl Loader {
    fn run(&mut self, src: &Source, line: usize, t: &Traversal) -> Result<ElementId, IngestError> {
        let out = self.store.execute(t).map_err(|source| IngestError::Engine { file: src.path.clone(), line, source })?;
        match out.value {
            ResultValue::Id(id) => Ok(id),
            other => Err(src.bad(line, format!("mutation returned {other:?}"))),
        }
    }

    fn vertex(&mut self, src: &Source, line: usize, label: &str, data: Vec<(&str, Scalar)>) -> Result<ElementId, IngestError> {
        let data: Vec<(String, Scalar)> = data.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self.run(src, line, &add_vertex(label, &data))
    }

    fn edge(
        &mut self,
        src: &Source,
        line: usize,
        from: (&str, ElementId),
        label: &str,
        to: (&str, ElementId),
        data: Vec<(&str, Scalar)>,
    ) -> Result<ElementId, IngestError> {
        let data: Vec<(String, Scalar)> = data.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self.run(src, line, &connect((from.0, IdLit::Int(from.1)), label, (to.0, IdLit::Int(to.1)), &data))
    }
}

/// Reads `u.genre`, `u.occupation`, `u.user`, `u.item` and `u.data` from `dir`.
pub fn ingest_movielens(dir: &Path) -> Result<Ingested, IngestError> {
    let mut l = Loader { store: GraphStore::new() };
    let mut report = IngestReport::default();

    let src = Source::open(dir, "u.genre")?;
    let mut genres = HashMap::new();
    let mut genre_by_index = HashMap::new();
    for (line, row) in src.rows() {
        let f = src.fields(line, row, '|', 2)?;
        let index = src.int(line, "genre id", f[1])?;
        let id = l.vertex(&src, line, "Genre", vec![("genreId", index.into()), ("name", f[0].into())])?;
        genres.insert(f[0].to_string(), id);
        genre_by_index.insert(index, id);
    }
    report.genres = genres.len();

    let src = Source::open(dir, "u.occupation")?;
    let mut occupations = HashMap::new();
    for (line, row) in src.rows() {
        let name = row.trim();
        let n = occupations.len() as i64 + 1;
        let id = l.vertex(&src, line, "Occupation", vec![("occupationId", n.into()), ("name", name.into())])?;
        occupations.insert(name.to_string(), id);
    }
    report.occupations = occupations.len();

    let src = Source::open(dir, "u.user")?;
    let mut users = HashMap::new();
    for (line, row) in src.rows() {
        let f = src.fields(line, row, '|', 5)?;
        let user = src.int(line, "user id", f[0])?;
        let age = src.int(line, "age", f[1])?;
        let zip = match f[4].trim().parse::<i64>() {
            Ok(z) => z,
            Err(_) => {
                report.non_numeric_zips.push((line, f[4].to_string()));
                -1
            }
        };
        let id = l.vertex(&src, line, "User", vec![("userId", user.into()), ("age", age.into()), ("gender", f[2].into()), ("zipCode", zip.into())])?;
        let occupation = *occupations.get(f[3]).ok_or_else(|| src.bad(line, format!("unknown occupation {:?}", f[3])))?;
        l.edge(&src, line, ("User", id), "worksAs", ("Occupation", occupation), Vec::new())?;
        report.works_as += 1;
        users.insert(user, id);
    }
    report.users = users.len();

    let src = Source::open(dir, "u.item")?;
    let mut movies = HashMap::new();
    for (line, row) in src.rows() {
        let f = src.fields(line, row, '|', 5 + genre_by_index.len())?;
        let movie = src.int(line, "movie id", f[0])?;
        let mut data = vec![("movieId", movie.into()), ("title", f[1].into())];
        if !f[2].is_empty() {
            data.push(("releaseDate", f[2].into()));
        }
        if !f[4].is_empty() {
            data.push(("imdbUrl", f[4].into()));
        }
        let id = l.vertex(&src, line, "Movie", data)?;
        for (i, flag) in f[5..].iter().enumerate() {
            match *flag {
                "0" => {}
                "1" => {
                    let genre = *genre_by_index.get(&(i as i64)).ok_or_else(|| src.bad(line, format!("no genre with index {i}")))?;
                    l.edge(&src, line, ("Movie", id), "hasGenre", ("Genre", genre), Vec::new())?;
                    report.has_genre += 1;
                }
                other => return Err(src.bad(line, format!("genre flag {other:?}"))),
            }
        }
        movies.insert(movie, id);
    }
    report.movies = movies.len();

    let src = Source::open(dir, "u.data")?;
    for (line, row) in src.rows() {
        let f = src.fields(line, row, '\t', 4)?;
        let user = *users.get(&src.int(line, "user id", f[0])?).ok_or_else(|| src.bad(line, format!("unknown user {}", f[0])))?;
        let movie = *movies.get(&src.int(line, "movie id", f[1])?).ok_or_else(|| src.bad(line, format!("unknown movie {}", f[1])))?;
        let rating = src.int(line, "rating", f[2])?;
        src.int(line, "timestamp", f[3])?;
        l.edge(&src, line, ("User", user), "rated", ("Movie", movie), vec![("rating", rating.into()), ("timestamp", f[3].trim().into())])?;
        report.rated += 1;
    }

    Ok(Ingested { store: l.store, report, users, genres })
}

/// Where the dataset is looked up: `ML100K_DIR` if set, else `data/ml-100k`
/// at the workspace root.
pub fn default_dataset_dir() -> PathBuf {
    match std::env::var_os("ML100K_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/ml-100k"),
    }
}
