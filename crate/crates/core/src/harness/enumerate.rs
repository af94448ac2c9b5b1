//! Exhaustive enumeration of small connected graphs.
//!
//! A labeled graph on `m` vertices is a bit string over the `m(m-1)/2` vertex
//! pairs in graph6 order (column-major upper triangle), stored most
//! significant bit first so that integer order equals graph6 string order.
//! The canonical form of a graph is the smallest such string over vertex
//! orderings that list vertices by ascending refinement invariant.

use crate::graph::Graph;

use super::HarnessError;

/// Largest vertex count handled by internal enumeration.
pub const MAX_ENUMERATION_VERTICES: usize = 7;

/// Connected graphs on exactly `m` vertices in ascending graph6 order. With
/// `dedup`, only the canonical representative of each isomorphism class is
/// yielded.
pub fn enumerate_connected_graphs(m: usize, dedup: bool) -> Result<ConnectedGraphs, HarnessError> {
    if !(1..=MAX_ENUMERATION_VERTICES).contains(&m) {
        return Err(HarnessError::VertexCountOutOfRange {
            m,
            max: MAX_ENUMERATION_VERTICES,
        });
    }
    let pairs = m * (m - 1) / 2;
    Ok(ConnectedGraphs {
        m,
        pairs,
        next: 0,
        end: 1u64 << pairs,
        dedup,
    })
}

#[derive(Clone, Debug)]
pub struct ConnectedGraphs {
    m: usize,
    pairs: usize,
    next: u64,
    end: u64,
    dedup: bool,
}

impl Iterator for ConnectedGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next < self.end {
            let code = self.next;
            self.next += 1;
            let adj = adjacency(self.m, self.pairs, code);
            if !connected(&adj) {
                continue;
            }
            if self.dedup && canonical_code(&adj) != code {
                continue;
            }
            return Some(graph_of(self.m, &adj));
        }
        None
    }
}

/// Canonical bit string of `graph`; equal for isomorphic graphs only.
pub fn canonical_form(graph: &Graph) -> u64 {
    let m = graph.vertex_count();
    let mut adj = vec![0u32; m];
    for &(u, v) in graph.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    canonical_code(&adj)
}

fn pair_bit(pairs: usize, i: usize, j: usize) -> u64 {
    // Pair (i, j) with i < j sits at index j(j-1)/2 + i.
    1u64 << (pairs - 1 - (j * (j - 1) / 2 + i))
}

fn adjacency(m: usize, pairs: usize, code: u64) -> Vec<u32> {
    let mut adj = vec![0u32; m];
    for j in 1..m {
        for i in 0..j {
            if code & pair_bit(pairs, i, j) != 0 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn connected(adj: &[u32]) -> bool {
    let m = adj.len();
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let mut next = 0u32;
        for v in 0..m {
            if frontier & (1 << v) != 0 {
                next |= adj[v];
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen.count_ones() as usize == m
}

fn graph_of(m: usize, adj: &[u32]) -> Graph {
    let mut edges = Vec::new();
    for j in 1..m {
        for i in 0..j {
            if adj[i] & (1 << j) != 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(m, edges).expect("enumerated edges are valid")
}

/// Isomorphism-invariant vertex keys: degree, then the sorted multiset of
/// neighbor degrees.
fn invariants(adj: &[u32]) -> Vec<(u32, Vec<u32>)> {
    let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    (0..adj.len())
        .map(|v| {
            let mut nd: Vec<u32> = (0..adj.len()).filter(|&w| adj[v] & (1 << w) != 0).map(|w| deg[w]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect()
}

fn canonical_code(adj: &[u32]) -> u64 {
    let m = adj.len();
    let pairs = m * (m.saturating_sub(1)) / 2;
    if m <= 1 {
        return 0;
    }
    let keys = invariants(adj);
    let mut slots: Vec<usize> = (0..m).collect();
    slots.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let slot_keys: Vec<&(u32, Vec<u32>)> = slots.iter().map(|&v| &keys[v]).collect();

    let mut search = Search {
        adj,
        keys: &keys,
        slot_keys: &slot_keys,
        pairs,
        order: Vec::with_capacity(m),
        used: 0,
        best: u64::MAX,
    };
    search.extend(0);
    search.best
}

/// Branch and bound over vertex orderings. Position `p` fixes the bits of
/// column `p`, which come right after columns `< p` in graph6 order, so a
/// partial code can be compared against the best complete code by prefix.
struct Search<'a> {
    adj: &'a [u32],
    keys: &'a [(u32, Vec<u32>)],
    slot_keys: &'a [&'a (u32, Vec<u32>)],
    pairs: usize,
    order: Vec<usize>,
    used: u32,
    best: u64,
}

impl Search<'_> {
    fn extend(&mut self, code: u64) {
        let p = self.order.len();
        let m = self.adj.len();
        if p == m {
            self.best = self.best.min(code);
            return;
        }
        for v in 0..m {
            if self.used & (1 << v) != 0 || &self.keys[v] != self.slot_keys[p] {
                continue;
            }
            let mut next = code;
            for (i, &u) in self.order.iter().enumerate() {
                if self.adj[u] & (1 << v) != 0 {
                    next |= pair_bit(self.pairs, i, p);
                }
            }
            // Bits of columns > p are still zero, so `next` is the smallest
            // code any completion can reach.
            if p > 0 {
                let fixed = p * (p + 1) / 2;
                let mask = !0u64 << (self.pairs - fixed);
                if next & mask > self.best & mask {
                    continue;
                }
            }
            self.order.push(v);
            self.used |= 1 << v;
            self.extend(next);
            self.used &= !(1 << v);
            self.order.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{construct_family, write_graph6, Family};

    /// Connected labeled graph counts from the exponential-formula
    /// recurrence `c_n = 2^C(n,2) - Σ_{k<n} C(n-1,k-1) c_k 2^C(n-k,2)`.
    fn labeled_connected(n: usize) -> u64 {
        let binom = |n: usize, k: usize| -> u64 {
            (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
        };
        let total = |n: usize| 1u64 << (n * n.saturating_sub(1) / 2);
        let mut c = vec![0u64; n + 1];
        for m in 1..=n {
            let mut v = total(m);
            for k in 1..m {
                v -= binom(m - 1, k - 1) * c[k] * total(m - k);
            }
            c[m] = v;
        }
        c[n]
    }

    #[test]
    fn recurrence_matches_known_values() {
        let known = [1, 1, 4, 38, 728, 26_704, 1_866_256];
        for (i, &k) in known.iter().enumerate() {
            assert_eq!(labeled_connected(i + 1), k);
        }
    }

    #[test]
    fn labeled_counts() {
        for m in 1..=6 {
            assert_eq!(enumerate_connected_graphs(m, false).unwrap().count() as u64, labeled_connected(m));
        }
    }

    #[test]
    fn unlabeled_counts() {
        let known = [1, 1, 2, 6, 21, 112, 853];
        for (i, &k) in known.iter().enumerate() {
            assert_eq!(enumerate_connected_graphs(i + 1, true).unwrap().count(), k, "m={}", i + 1);
        }
    }

    /// Brute-force isomorphism over all permutations.
    fn isomorphic(a: &Graph, b: &Graph) -> bool {
        let m = a.vertex_count();
        if m != b.vertex_count() || a.edge_count() != b.edge_count() {
            return false;
        }
        let mut perm: Vec<usize> = (0..m).collect();
        loop {
            if a.permuted(&perm) == *b {
                return true;
            }
            // Next lexicographic permutation.
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                return false;
            };
            let j = (i + 1..m).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    }

    #[test]
    fn four_vertex_classes_are_pairwise_distinct_and_complete() {
        let reps: Vec<Graph> = enumerate_connected_graphs(4, true).unwrap().collect();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!isomorphic(a, b));
            }
        }
        for g in enumerate_connected_graphs(4, false).unwrap() {
            assert_eq!(reps.iter().filter(|r| isomorphic(r, &g)).count(), 1);
        }
    }

    #[test]
    fn canonical_form_is_invariant() {
        let g = construct_family(Family::CocktailParty { n: 2 }).unwrap();
        let base = canonical_form(&g);
        for perm in [[1, 0, 2, 3, 4, 5], [5, 4, 3, 2, 1, 0], [2, 4, 0, 5, 1, 3]] {
            assert_eq!(canonical_form(&g.permuted(&perm)), base);
        }
        let c6 = construct_family(Family::Cycle { vertices: 6 }).unwrap();
        assert_ne!(canonical_form(&c6), base);
    }

    #[test]
    fn output_is_sorted_by_graph6() {
        for m in 1..=5 {
            let codes: Vec<String> = enumerate_connected_graphs(m, true)
                .unwrap()
                .map(|g| write_graph6(&g).unwrap())
                .collect();
            let mut sorted = codes.clone();
            sorted.sort();
            assert_eq!(codes, sorted);
        }
    }

    #[test]
    fn range_is_checked() {
        assert!(enumerate_connected_graphs(0, true).is_err());
        assert!(enumerate_connected_graphs(8, true).is_err());
    }

    #[test]
    fn complement_matching_implies_small_diameter() {
        for m in 3..=7 {
            for g in enumerate_connected_graphs(m, true).unwrap() {
                if g.complement_is_partial_matching() {
                    assert!(g.diameter() <= 2);
                }
            }
        }
    }
}
