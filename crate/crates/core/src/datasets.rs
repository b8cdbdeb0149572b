//! Networks shipped with the crate.

use crate::error::Result;
use crate::graph::{load_edge_list, Graph};

/// Zachary's karate club: 34 nodes, 78 edges, ids 1..=34.
pub const KARATE: &str = include_str!("../data/karate.txt");

pub const BUNDLED: &[&str] = &["karate"];

pub fn bundled(name: &str) -> Option<Result<Graph>> {
    match name {
        "karate" => Some(load_edge_list(KARATE.as_bytes())),
        _ => None,
    }
}

pub fn karate() -> Graph {
    load_edge_list(KARATE.as_bytes()).expect("bundled karate network parses")
}
