//! Bundled schemas and benchmark queries.

use crate::schema::GraphSchema;
use crate::validate::Rule;

/// Two-vertex todo application: `User` likes `User`, `User` owns `Todo`.
pub const TODO_SCHEMA_JSON: &str = include_str!("../fixtures/todo.json");

/// MovieLens 100k graph: users, movies, genres and occupations.
pub const MOVIELENS_SCHEMA_JSON: &str = include_str!("../fixtures/movielens.json");

pub fn todo_schema() -> GraphSchema {
    GraphSchema::from_json_str(TODO_SCHEMA_JSON).expect("bundled todo schema parses")
}

pub fn movielens_schema() -> GraphSchema {
    GraphSchema::from_json_str(MOVIELENS_SCHEMA_JSON).expect("bundled movielens schema parses")
}

/// Movie list filtered by exact title.
pub const SIMPLE_LOOKUP: &str = include_str!("../fixtures/queries/simple_lookup.graphql");
/// User list with a compound filter, ordering and pagination.
pub const COMPLEX_FILTER: &str = include_str!("../fixtures/queries/complex_filter.graphql");
/// Single user and one hop to rated movies. Contains `<user_graph_id>`.
pub const USER_RATINGS: &str = include_str!("../fixtures/queries/user_ratings.graphql");
/// Genre with three alternating vertex-edge-vertex hops. Contains `<genre_graph_id>`.
pub const GENRE_DEMOGRAPHICS: &str = include_str!("../fixtures/queries/genre_demographics.graphql");

pub const USER_GRAPH_ID_PLACEHOLDER: &str = "<user_graph_id>";
pub const GENRE_GRAPH_ID_PLACEHOLDER: &str = "<genre_graph_id>";

/// The four MovieLens benchmark queries, in order.
pub const MOVIELENS_QUERIES: [(&str, &str); 4] =
    [("SimpleLookup", SIMPLE_LOOKUP), ("ComplexFilter", COMPLEX_FILTER), ("UserRatings", USER_RATINGS), ("GenreDemographics", GENRE_DEMOGRAPHICS)];

/// Todo users older than 18 with their first three outgoing `likes` edges.
pub const TODO_USER_LIKES: &str = include_str!("../fixtures/queries/todo_user_likes.graphql");
/// Single user lookup with the names of liked users.
pub const TODO_LOOKUP: &str = include_str!("../fixtures/queries/todo_lookup.graphql");
/// Root filter plus edge ordering, vertex filter and pagination on `likesOut`.
pub const TODO_ARGUMENTS: &str = include_str!("../fixtures/queries/todo_arguments.graphql");

/// One schema per rule V1 to V11, each violating that rule and nothing else.
pub const VIOLATION_FIXTURES: [(Rule, &str); 11] = [
    (Rule::V1, include_str!("../fixtures/violations/v1.json")),
    (Rule::V2, include_str!("../fixtures/violations/v2.json")),
    (Rule::V3, include_str!("../fixtures/violations/v3.json")),
    (Rule::V4, include_str!("../fixtures/violations/v4.json")),
    (Rule::V5, include_str!("../fixtures/violations/v5.json")),
    (Rule::V6, include_str!("../fixtures/violations/v6.json")),
    (Rule::V7, include_str!("../fixtures/violations/v7.json")),
    (Rule::V8, include_str!("../fixtures/violations/v8.json")),
    (Rule::V9, include_str!("../fixtures/violations/v9.json")),
    (Rule::V10, include_str!("../fixtures/violations/v10.json")),
    (Rule::V11, include_str!("../fixtures/violations/v11.json")),
];
