//! Name construction shared by synthesis and validation.
//!
//! Every GraphQL name the synthesizer emits is built here so the validator can
//! check for collisions against exactly the same strings.

use alloc::format;
use alloc::string::String;

use crate::schema::Direction;

/// `User` -> `user`, `hasGenre` -> `hasGenre`.
pub fn lower_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `likes` -> `Likes`, `hasGenre` -> `HasGenre`.
pub fn upper_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

pub const GRAPH_ELEMENT: &str = "GraphElement";
pub const PAGINATION_INPUT: &str = "PaginationInput";
pub const ORDER_DIRECTION: &str = "OrderDirection";
pub const QUERY: &str = "Query";
pub const MUTATION: &str = "Mutation";

/// Labels that would shadow a fixed type of the synthesized schema.
pub const RESERVED_LABELS: [&str; 5] = [QUERY, MUTATION, GRAPH_ELEMENT, PAGINATION_INPUT, ORDER_DIRECTION];

pub fn vertex_type(label: &str) -> String {
    format!("{label}Vertex")
}

pub fn vertex_input(label: &str) -> String {
    format!("{label}VertexInput")
}

pub fn vertex_logic_input(label: &str) -> String {
    format!("{label}VertexLogicInput")
}

pub fn vertex_order_input(label: &str) -> String {
    format!("{label}VertexOrderByInput")
}

pub fn vertex_property_enum(label: &str) -> String {
    format!("{label}VertexProperty")
}

/// Object type for an edge seen from `from` towards `to`, e.g. `UserToTodoOwnsEdge`.
pub fn edge_type(from: &str, to: &str, edge_label: &str) -> String {
    format!("{from}To{to}{}Edge", upper_first(edge_label))
}

/// Filter and ordering inputs are named after the declared orientation only.
pub fn edge_logic_input(source: &str, target: &str, edge_label: &str) -> String {
    format!("{}LogicInput", edge_type(source, target, edge_label))
}

pub fn edge_order_input(source: &str, target: &str, edge_label: &str) -> String {
    format!("{}OrderByInput", edge_type(source, target, edge_label))
}

pub fn edge_property_enum(source: &str, target: &str, edge_label: &str) -> String {
    format!("{}Property", edge_type(source, target, edge_label))
}

pub fn edge_input(source: &str, target: &str, edge_label: &str) -> String {
    format!("{source}To{target}Via{}EdgeInput", upper_first(edge_label))
}

pub fn single_root(label: &str) -> String {
    lower_first(label)
}

pub fn list_root(label: &str) -> String {
    format!("{}List", lower_first(label))
}

/// Adjacency field on a vertex type: `likesOut`, `ownsIn`.
pub fn adjacency_field(edge_label: &str, direction: Direction) -> String {
    let suffix = match direction {
        Direction::Out => "Out",
        Direction::In => "In",
    };
    format!("{}{suffix}", lower_first(edge_label))
}

/// Field on an edge type pointing at the vertex the edge leads to.
pub fn vertex_ref_field(vertex_label: &str) -> String {
    lower_first(vertex_label)
}

pub fn add_vertex(label: &str) -> String {
    format!("add{label}Vertex")
}

pub fn update_vertex(label: &str) -> String {
    format!("update{label}Vertex")
}

pub fn connect_edge(source: &str, target: &str, edge_label: &str) -> String {
    format!("connect{source}To{target}Via{}Edge", upper_first(edge_label))
}

pub fn update_edge(source: &str, target: &str, edge_label: &str) -> String {
    format!("update{}", edge_type(source, target, edge_label))
}

pub fn source_id_arg(label: &str) -> String {
    format!("source_{}_id", lower_first(label))
}

pub fn target_id_arg(label: &str) -> String {
    format!("target_{}_id", lower_first(label))
}

pub const DELETE_VERTEX: &str = "deleteVertex";
pub const DELETE_EDGE: &str = "deleteEdge";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casing() {
        assert_eq!(lower_first("User"), "user");
        assert_eq!(lower_first("hasGenre"), "hasGenre");
        assert_eq!(upper_first("hasGenre"), "HasGenre");
        assert_eq!(lower_first(""), "");
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("User"));
        assert!(is_identifier("_x9"));
        assert!(!is_identifier("2user"));
        assert!(!is_identifier("a-b"));
        assert!(!is_identifier(""));
    }

    #[test]
    fn derived_names() {
        assert_eq!(edge_type("User", "User", "likes"), "UserToUserLikesEdge");
        assert_eq!(edge_input("User", "User", "likes"), "UserToUserViaLikesEdgeInput");
        assert_eq!(connect_edge("Movie", "Genre", "hasGenre"), "connectMovieToGenreViaHasGenreEdge");
        assert_eq!(update_edge("User", "Movie", "rated"), "updateUserToMovieRatedEdge");
        assert_eq!(adjacency_field("hasGenre", Direction::In), "hasGenreIn");
        assert_eq!(source_id_arg("Movie"), "source_movie_id");
    }
}
