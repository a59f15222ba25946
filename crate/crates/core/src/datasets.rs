//! Small bundled graphs.

use crate::graph::{Graph, ParseOptions};

/// Zachary's karate club as an edge list, members labelled `1..=34`.
pub const KARATE_CLUB_EDGES: &str = include_str!("../data/karate.edges");

pub fn karate_club() -> Graph {
    Graph::parse_edge_list(KARATE_CLUB_EDGES, &ParseOptions::default())
        .expect("bundled karate club edge list is valid")
}
