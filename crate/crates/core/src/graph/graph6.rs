//! graph6 short form: one header byte `63 + n`, then the upper triangle of the
//! adjacency matrix in column-major pair order `(0,1),(0,2),(1,2),(0,3),…`,
//! packed six bits per byte (most significant first) and offset by 63.

use super::{Graph, GraphError};

/// Largest vertex count representable with a single header byte.
pub const GRAPH6_MAX_VERTICES: usize = 62;

const OFFSET: u8 = 63;
const OPTIONAL_HEADER: &str = ">>graph6<<";

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (skip, body) = match trimmed.strip_prefix(OPTIONAL_HEADER) {
        Some(rest) => (OPTIONAL_HEADER.len(), rest.as_bytes()),
        None => (0, trimmed.as_bytes()),
    };
    let Some(&header) = body.first() else {
        return Err(GraphError::Empty);
    };
    match header {
        b':' => {
            return Err(GraphError::UnsupportedEncoding {
                offset: skip,
                what: "sparse6",
            })
        }
        b'&' => {
            return Err(GraphError::UnsupportedEncoding {
                offset: skip,
                what: "digraph6",
            })
        }
        b'~' => {
            return Err(GraphError::UnsupportedEncoding {
                offset: skip,
                what: "long-form vertex count",
            })
        }
        63..=125 => {}
        byte => return Err(GraphError::InvalidByte { offset: skip, byte }),
    }
    let n = usize::from(header - OFFSET);
    let data = &body[1..];
    let expected = data_len(n);
    if data.len() != expected {
        return Err(GraphError::LengthMismatch {
            offset: skip + 1,
            expected,
            found: data.len(),
        });
    }

    let pair_count = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for (i, &byte) in data.iter().enumerate() {
        let offset = skip + 1 + i;
        if !(OFFSET..=126).contains(&byte) {
            return Err(GraphError::InvalidByte { offset, byte });
        }
        let chunk = byte - OFFSET;
        for shift in (0..6).rev() {
            let set = (chunk >> shift) & 1 == 1;
            if bit >= pair_count {
                if set {
                    return Err(GraphError::NonzeroPadding { offset });
                }
            } else if set {
                let (u, v) = pair_at(bit);
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_normalized(n, edges))
}

/// Inverse of the column-major pair index: bit `k` names pair `(u, v)`, `u < v`.
fn pair_at(k: usize) -> (usize, usize) {
    let mut v = 1;
    while v * (v + 1) / 2 <= k {
        v += 1;
    }
    (k - v * (v - 1) / 2, v)
}

pub fn write_graph6(graph: &Graph) -> Result<String, GraphError> {
    let n = graph.vertex_count();
    if n > GRAPH6_MAX_VERTICES {
        return Err(GraphError::TooLarge {
            vertex_count: n,
            max: GRAPH6_MAX_VERTICES,
        });
    }
    let mut out = String::with_capacity(1 + data_len(n));
    out.push(char::from(OFFSET + n as u8));
    let mut chunk = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            chunk = (chunk << 1) | u8::from(graph.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(char::from(OFFSET + chunk));
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(char::from(OFFSET + (chunk << (6 - filled))));
    }
    Ok(out)
}
