use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Independent structural predicates; several may hold at once (`K_3` is
/// both complete and a cycle, `C_4` is a cycle and `K_4` minus a matching).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFlags {
    pub is_path: bool,
    pub is_cycle: bool,
    pub is_complete: bool,
    pub is_complete_minus_matching: bool,
    pub max_degree: usize,
    /// Number of non-adjacent pairs when `is_complete_minus_matching` holds.
    pub matching_size: Option<usize>,
}

impl ShapeFlags {
    /// Compact `+`-joined list of the flags that hold, e.g. `complete+cycle`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.is_path {
            parts.push("path");
        }
        if self.is_cycle {
            parts.push("cycle");
        }
        if self.is_complete {
            parts.push("complete");
        }
        if self.is_complete_minus_matching {
            parts.push("complete_minus_matching");
        }
        if parts.is_empty() {
            "none".to_owned()
        } else {
            parts.join("+")
        }
    }
}

/// Classifies a connected graph. Disconnected input is an error naming the
/// components.
pub fn classify_shape(graph: &Graph) -> Result<ShapeFlags, GraphError> {
    graph.require_connected()?;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let max_degree = graph.max_degree();

    // Connected with n - 1 edges means a tree.
    let is_path = n >= 1 && m + 1 == n && max_degree <= 2;
    let is_cycle = n >= 3 && (0..n).all(|v| graph.degree(v) == 2);
    let is_complete = graph.is_complete();
    let is_complete_minus_matching = n >= 3 && graph.complement_is_partial_matching();
    let matching_size = is_complete_minus_matching.then(|| n * (n - 1) / 2 - m);

    Ok(ShapeFlags {
        is_path,
        is_cycle,
        is_complete,
        is_complete_minus_matching,
        max_degree,
        matching_size,
    })
}
