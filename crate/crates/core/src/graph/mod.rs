//! Finite simple undirected graphs, their shortest-path metric, and the
//! structural shape predicates the classifier consumes.

mod family;
mod graph6;
mod metric;
mod shape;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use family::{construct_family, Family};
pub use graph6::{parse_graph6, write_graph6, GRAPH6_MAX_VERTICES};
pub use metric::{distance_matrix, Distance, DistanceMatrix};
pub use shape::{classify_shape, ShapeFlags};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("edge {{{u}, {v}}} listed more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph6: invalid byte 0x{byte:02x} at offset {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6: unsupported encoding at offset {offset}: {what}")]
    UnsupportedEncoding { offset: usize, what: &'static str },
    #[error("graph6: expected {expected} data bytes after offset {offset}, found {found}")]
    LengthMismatch {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("graph6: nonzero padding bits in byte at offset {offset}")]
    NonzeroPadding { offset: usize },
    #[error("graph6: empty input")]
    Empty,
    #[error("graph6 short form supports at most {max} vertices, got {vertex_count}")]
    TooLarge { vertex_count: usize, max: usize },
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("edge-list json: {0}")]
    Json(String),
    #[error("graph is disconnected; components: {components:?}")]
    Disconnected { components: Vec<Vec<usize>> },
}

/// A finite simple undirected graph on vertices `0..vertex_count`.
///
/// Edges are stored normalized (`u < v`) and sorted; the value is immutable
/// once constructed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops, out-of-range indices and
    /// repeated pairs (in either orientation) are rejected.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            return Err(GraphError::DuplicateEdge { u, v });
        }
        Ok(Self::from_normalized(vertex_count, normalized))
    }

    /// `edges` must already be normalized, sorted and unique.
    pub(crate) fn from_normalized(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self {
            vertex_count,
            edges,
            neighbors,
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_normalized(vertex_count, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count;
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut components = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.neighbors[u] {
                    if !seen[w] {
                        seen[w] = true;
                        component.push(w);
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// The empty graph on zero vertices counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub(crate) fn require_connected(&self) -> Result<(), GraphError> {
        let components = self.components();
        if components.len() > 1 {
            return Err(GraphError::Disconnected { components });
        }
        Ok(())
    }

    /// Non-adjacent pairs `(u, v)`, `u < v`, in ascending order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count;
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True when every vertex has at most one non-neighbor, i.e. the graph is
    /// a complete graph minus a (possibly empty) matching.
    pub fn complement_is_partial_matching(&self) -> bool {
        let n = self.vertex_count;
        self.neighbors.iter().all(|list| list.len() + 2 >= n)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.vertex_count, "permutation length");
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Self::from_normalized(self.vertex_count, edges)
    }

    pub fn from_edge_list_json(text: &str) -> Result<Self, GraphError> {
        let parsed: EdgeListJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::new(parsed.vertices, parsed.edges.into_iter().map(|[u, v]| (u, v)))
    }

    pub fn to_edge_list_json(&self) -> String {
        let doc = EdgeListJson {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&doc).expect("edge list serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeListJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert_eq!(
            Graph::new(3, [(1, 1)]),
            Err(GraphError::SelfLoop { vertex: 1 })
        );
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        );
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn edge_order_is_irrelevant() {
        let a = Graph::new(3, [(0, 1), (2, 1)]).unwrap();
        let b = Graph::new(3, [(1, 2), (1, 0)]).unwrap();
        assert_eq!(a, b);
        assert!(a.has_edge(2, 1) && a.has_edge(1, 2));
    }

    #[test]
    fn edge_list_json() {
        let g = Graph::from_edge_list_json(r#"{"vertices": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(Graph::from_edge_list_json(&g.to_edge_list_json()).unwrap(), g);

        let dup = Graph::from_edge_list_json(r#"{"vertices": 3, "edges": [[0,1],[1,0]]}"#);
        assert!(matches!(dup, Err(GraphError::DuplicateEdge { .. })));
        let looped = Graph::from_edge_list_json(r#"{"vertices": 3, "edges": [[2,2]]}"#);
        assert!(matches!(looped, Err(GraphError::SelfLoop { .. })));
        assert!(Graph::from_edge_list_json("{\"vertices\": 2}").is_err());
    }

    #[test]
    fn components_are_named() {
        let g = Graph::new(4, [(0, 2)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 2], vec![1], vec![3]]);
        assert!(matches!(
            g.require_connected(),
            Err(GraphError::Disconnected { components }) if components.len() == 3
        ));
    }

    #[test]
    fn partial_matching_complement() {
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(c4.complement_is_partial_matching());
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!star.complement_is_partial_matching());
        assert!(Graph::empty(1).complement_is_partial_matching());
        assert!(Graph::empty(2).complement_is_partial_matching());
    }
}
