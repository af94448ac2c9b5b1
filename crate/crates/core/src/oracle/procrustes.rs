use crate::linalg::{symmetric_eigendecomposition, Matrix};
use crate::space::{ModelSpace, SpaceKind};

use super::{Embedding, OracleError};

/// Orthogonal map `Q` of the ambient space with `Q·B_i ≈ A_i`.
#[derive(Clone, Debug)]
pub struct Alignment {
    pub map: Matrix,
    /// `max_i |Q·B_i - A_i|` (after centering, for Euclidean inputs).
    pub residual: f64,
}

/// Orthogonal Procrustes: the ambient orthogonal transform minimizing
/// `Σ |Q·B_i - A_i|²`.
///
/// With `M = Σ A_i B_iᵀ = U S Vᵀ` the optimum is `Q = U Vᵀ`. `V` and `S` come
/// from the eigendecomposition of `MᵀM`; `u_k = M v_k / s_k` on the range of
/// `M`, and the null directions of `MMᵀ` complete `U`.
pub fn procrustes_align(
    space: ModelSpace,
    a: &Embedding,
    b: &Embedding,
) -> Result<Alignment, OracleError> {
    if a.space != space || b.space != space {
        return Err(OracleError::SpaceMismatch);
    }
    if a.len() != b.len() {
        return Err(OracleError::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if space.kind() == SpaceKind::Hyperbolic {
        return Err(OracleError::Unsupported("hyperbolic alignment (needs Lorentz transforms)"));
    }
    let dim = space.ambient_dim();
    let mut pa: Vec<Vec<f64>> = a.points.iter().map(|p| p.coords().to_vec()).collect();
    let mut pb: Vec<Vec<f64>> = b.points.iter().map(|p| p.coords().to_vec()).collect();
    if space.kind() == SpaceKind::Euclidean {
        center(&mut pa);
        center(&mut pb);
    }

    let m = Matrix::from_fn(dim, dim, |i, j| pa.iter().zip(&pb).map(|(x, y)| x[i] * y[j]).sum());
    let mtm = m.transpose().matmul(&m);
    let mmt = m.matmul(&m.transpose());
    let right = symmetric_eigendecomposition(&mtm)?;
    let left = symmetric_eigendecomposition(&mmt)?;

    let top = right.values.first().copied().unwrap_or(0.0).max(0.0);
    let rank = right.values.iter().filter(|&&l| l > 1e-14 * top && l > 0.0).count();

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for k in 0..rank {
        let s = right.values[k].sqrt();
        u_cols.push(m.mul_vec(&right.vector(k)).into_iter().map(|x| x / s).collect());
    }
    // Eigenvalues are sorted descending, so the trailing vectors of MMᵀ span
    // the orthogonal complement of range(M).
    for k in rank..dim {
        u_cols.push(left.vector(k));
    }

    let map = Matrix::from_fn(dim, dim, |i, j| {
        (0..dim).map(|k| u_cols[k][i] * right.vectors[(j, k)]).sum()
    });

    let residual = pa
        .iter()
        .zip(&pb)
        .map(|(x, y)| {
            let mapped = map.mul_vec(y);
            mapped.iter().zip(x).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max);
    Ok(Alignment { map, residual })
}

fn center(points: &mut [Vec<f64>]) {
    let Some(dim) = points.first().map(Vec::len) else { return };
    let n = points.len() as f64;
    let mean: Vec<f64> = (0..dim).map(|k| points.iter().map(|p| p[k]).sum::<f64>() / n).collect();
    for p in points.iter_mut() {
        for (x, m) in p.iter_mut().zip(&mean) {
            *x -= m;
        }
    }
}
