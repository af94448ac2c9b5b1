use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Named graph families appearing in the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Path on `vertices ≥ 1` vertices.
    Path { vertices: usize },
    /// Cycle on `vertices ≥ 3` vertices.
    Cycle { vertices: usize },
    /// Complete graph on `vertices ≥ 1` vertices.
    Complete { vertices: usize },
    /// Hyperoctahedral graph on `2(n + 1)` vertices: vertices `i` and
    /// `i + n + 1` are the only non-adjacent pairs.
    CocktailParty { n: usize },
    /// `K_vertices` with the pairs `(2i, 2i + 1)`, `i < matching`, removed.
    CompleteMinusMatching { vertices: usize, matching: usize },
}

pub fn construct_family(family: Family) -> Result<Graph, GraphError> {
    let invalid = |msg: String| Err(GraphError::InvalidFamily(msg));
    match family {
        Family::Path { vertices } => {
            if vertices < 1 {
                return invalid("path needs at least 1 vertex".into());
            }
            Ok(Graph::from_normalized(
                vertices,
                (1..vertices).map(|v| (v - 1, v)).collect(),
            ))
        }
        Family::Cycle { vertices } => {
            if vertices < 3 {
                return invalid(format!("cycle needs at least 3 vertices, got {vertices}"));
            }
            let mut edges: Vec<_> = (1..vertices).map(|v| (v - 1, v)).collect();
            edges.push((0, vertices - 1));
            edges.sort_unstable();
            Ok(Graph::from_normalized(vertices, edges))
        }
        Family::Complete { vertices } => {
            if vertices < 1 {
                return invalid("complete graph needs at least 1 vertex".into());
            }
            Ok(complete_without(vertices, |_, _| false))
        }
        Family::CocktailParty { n } => {
            if n < 1 {
                return invalid("cocktail-party graph needs n >= 1".into());
            }
            let half = n + 1;
            Ok(complete_without(2 * half, |u, v| v == u + half))
        }
        Family::CompleteMinusMatching { vertices, matching } => {
            if vertices < 1 || 2 * matching > vertices {
                return invalid(format!(
                    "need vertices >= 1 and 2*matching <= vertices, got ({vertices}, {matching})"
                ));
            }
            Ok(complete_without(vertices, |u, v| {
                u % 2 == 0 && v == u + 1 && u / 2 < matching
            }))
        }
    }
}

fn complete_without(n: usize, removed: impl Fn(usize, usize) -> bool) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if !removed(u, v) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_normalized(n, edges)
}
