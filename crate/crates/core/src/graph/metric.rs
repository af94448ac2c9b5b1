use std::collections::VecDeque;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::Graph;

/// A distance entry; disconnected pairs carry an explicit marker instead of a
/// sentinel number. Serialized as a JSON number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Distance {
    Finite(f64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<f64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Distance::Finite(d) => s.serialize_f64(d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct DistanceVisitor;
        impl Visitor<'_> for DistanceVisitor {
            type Value = Distance;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Distance, E> {
                Ok(Distance::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Distance, E> {
                Ok(Distance::Finite(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Distance, E> {
                Ok(Distance::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Distance, E> {
                match v {
                    "inf" | "Infinity" => Ok(Distance::Infinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }
        d.deserialize_any(DistanceVisitor)
    }
}

/// Symmetric square matrix of nonnegative distances with zero diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceMatrix {
    size: usize,
    entries: Vec<Vec<Distance>>,
}

#[derive(Deserialize)]
struct RawDistanceMatrix {
    size: usize,
    entries: Vec<Vec<Distance>>,
}

impl<'de> Deserialize<'de> for DistanceMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawDistanceMatrix::deserialize(d)?;
        if raw.entries.len() != raw.size {
            return Err(de::Error::custom("row count does not match size"));
        }
        DistanceMatrix::from_entries(raw.entries).map_err(de::Error::custom)
    }
}

impl DistanceMatrix {
    /// Validates symmetry, zero diagonal and nonnegativity.
    pub fn from_entries(entries: Vec<Vec<Distance>>) -> Result<Self, String> {
        let size = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != size {
                return Err(format!("row {i} has {} entries, expected {size}", row.len()));
            }
            if row[i] != Distance::Finite(0.0) {
                return Err(format!("diagonal entry ({i},{i}) is not zero"));
            }
            for (j, &entry) in row.iter().enumerate() {
                if let Distance::Finite(d) = entry {
                    if !(d >= 0.0 && d.is_finite()) {
                        return Err(format!("entry ({i},{j}) = {d} is not a nonnegative real"));
                    }
                }
                if entry != entries[j][i] {
                    return Err(format!("entries ({i},{j}) and ({j},{i}) differ"));
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, String> {
        Self::from_entries(
            rows.iter()
                .map(|row| row.iter().map(|&d| Distance::Finite(d)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> Distance {
        self.entries[i][j]
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|d| matches!(d, Distance::Finite(_)))
    }

    /// Dense row-major copy of the entries, or `None` if any is infinite.
    pub fn to_dense(&self) -> Option<Vec<f64>> {
        self.entries.iter().flatten().map(|d| d.finite()).collect()
    }

    /// Largest finite entry (0 for an empty matrix).
    pub fn max_finite(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .filter_map(|d| d.finite())
            .fold(0.0, f64::max)
    }

    /// Checks `d(i,k) ≤ d(i,j) + d(j,k) + slack` over all finite triples.
    pub fn satisfies_triangle_inequality(&self, slack: f64) -> bool {
        let n = self.size;
        for i in 0..n {
            for j in 0..n {
                let Some(dij) = self.entries[i][j].finite() else { continue };
                for k in 0..n {
                    let (Some(djk), Some(dik)) =
                        (self.entries[j][k].finite(), self.entries[i][k].finite())
                    else {
                        continue;
                    };
                    if dik > dij + djk + slack {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Same matrix with rows and columns relabeled: index `v` moves to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.size;
        let mut entries = vec![vec![Distance::Finite(0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i]][perm[j]] = self.entries[i][j];
            }
        }
        Self { size: n, entries }
    }
}

/// All-pairs shortest path lengths by breadth-first search from every vertex.
pub fn distance_matrix(graph: &Graph) -> DistanceMatrix {
    let n = graph.vertex_count();
    let mut entries = Vec::with_capacity(n);
    for source in 0..n {
        let mut row = vec![Distance::Infinite; n];
        row[source] = Distance::Finite(0.0);
        let mut hops = vec![usize::MAX; n];
        hops[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if hops[w] == usize::MAX {
                    hops[w] = hops[u] + 1;
                    row[w] = Distance::Finite(hops[w] as f64);
                    queue.push_back(w);
                }
            }
        }
        entries.push(row);
    }
    DistanceMatrix { size: n, entries }
}

impl Graph {
    /// Largest finite shortest-path distance.
    pub fn diameter(&self) -> usize {
        distance_matrix(self).max_finite() as usize
    }
}
