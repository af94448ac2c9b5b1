//! Spectral realizability tests.
//!
//! * Euclidean: classical multidimensional scaling. `B = -½ J (D∘D) J` must be
//!   positive semidefinite with rank at most `n`.
//! * Sphere of radius `r`: the cosine Gram `C = r² cos(D / r)` must be
//!   positive semidefinite with rank at most `n + 1`, and no entry may exceed
//!   `πr`.
//! * Hyperbolic: `H = cosh(D)` must have exactly one positive eigenvalue and
//!   at most `n` negative ones; the Lorentzian factorization is then
//!   assembled and verified.
//!
//! All decisions use the relative threshold `τ = tol · max|λ|`.

use std::f64::consts::PI;

use crate::graph::DistanceMatrix;
use crate::linalg::{symmetric_eigendecomposition, Eigen, Matrix};
use crate::space::{hyperboloid_lift, ModelSpace, SpacePoint};

use super::{
    dense_finite, verification_tol, verify_isometric, EmbedCertificate, Embedding, InfeasibleReason,
    OracleError,
};

struct Spectrum {
    eigen: Eigen,
    threshold: f64,
}

impl Spectrum {
    fn of(m: &Matrix, tol: f64) -> Result<Self, OracleError> {
        let eigen = symmetric_eigendecomposition(m)?;
        let scale = eigen.values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        Ok(Self {
            eigen,
            threshold: tol * scale,
        })
    }

    fn positive(&self) -> usize {
        self.eigen.values.iter().filter(|&&x| x > self.threshold).count()
    }

    fn negative(&self) -> usize {
        self.eigen.values.iter().filter(|&&x| x < -self.threshold).count()
    }

    /// `rows[i][k] = sqrt(λ_k) v_k[i]` over the leading `rank` eigenpairs,
    /// zero-padded to `width` columns.
    fn factor(&self, rank: usize, width: usize) -> Vec<Vec<f64>> {
        let n = self.eigen.values.len();
        (0..n)
            .map(|i| {
                let mut row = vec![0.0; width];
                for (k, slot) in row.iter_mut().enumerate().take(rank) {
                    *slot = self.eigen.values[k].max(0.0).sqrt() * self.eigen.vectors[(i, k)];
                }
                row
            })
            .collect()
    }
}

/// Attaches a verified witness, or reports why the points do not realize `d`.
fn finish(
    space: ModelSpace,
    rows: Vec<Vec<f64>>,
    d: &DistanceMatrix,
    spectrum: &Spectrum,
    rank: usize,
) -> Result<EmbedCertificate, OracleError> {
    let embedding = Embedding::new(space, rows.into_iter().map(SpacePoint::new).collect())?;
    let report = verify_isometric(&embedding, d, verification_tol(d.max_finite()))?;
    let eigenvalues = spectrum.eigen.values.clone();
    if !report.injective {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::CoincidentPoints, eigenvalues, rank));
    }
    if !report.passed {
        return Err(OracleError::WitnessFailed {
            residual: report.max_residual,
        });
    }
    let mut witness = embedding;
    witness.residual = Some(report.max_residual);
    Ok(EmbedCertificate {
        feasible: true,
        eigenvalues,
        rank,
        witness: Some(witness),
        residual: Some(report.max_residual),
        reason: None,
    })
}

/// Classical MDS test for realizability in `R^n`.
pub fn euclidean_feasibility(
    d: &DistanceMatrix,
    n: usize,
    tol: f64,
) -> Result<EmbedCertificate, OracleError> {
    let space = ModelSpace::euclidean(n)?;
    let size = d.size();
    if size == 0 {
        return Err(OracleError::EmptyMatrix);
    }
    let Ok(dense) = dense_finite(d) else {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::InfiniteDistance, Vec::new(), 0));
    };

    let sq = |i: usize, j: usize| dense[i * size + j] * dense[i * size + j];
    let inv = 1.0 / size as f64;
    let row_mean: Vec<f64> = (0..size).map(|i| (0..size).map(|j| sq(i, j)).sum::<f64>() * inv).collect();
    let grand_mean = row_mean.iter().sum::<f64>() * inv;
    let b = Matrix::from_fn(size, size, |i, j| {
        -0.5 * (sq(i, j) - row_mean[i] - row_mean[j] + grand_mean)
    });

    let spectrum = Spectrum::of(&b, tol)?;
    let rank = spectrum.positive();
    let eigenvalues = spectrum.eigen.values.clone();
    if spectrum.negative() > 0 {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::NegativeEigenvalue, eigenvalues, rank));
    }
    if rank > n {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::RankExceedsDim, eigenvalues, rank));
    }
    let rows = spectrum.factor(rank, n);
    finish(space, rows, d, &spectrum, rank)
}

/// Cosine-Gram test for realizability on the sphere of radius `r` in `R^(n+1)`.
pub fn sphere_feasibility(
    d: &DistanceMatrix,
    n: usize,
    r: f64,
    tol: f64,
) -> Result<EmbedCertificate, OracleError> {
    let space = ModelSpace::sphere(n, r)?;
    let size = d.size();
    if size == 0 {
        return Err(OracleError::EmptyMatrix);
    }
    let Ok(dense) = dense_finite(d) else {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::InfiniteDistance, Vec::new(), 0));
    };
    if dense.iter().any(|&x| x > PI * r + tol) {
        return Ok(EmbedCertificate::infeasible(
            InfeasibleReason::DistanceExceedsDiameter,
            Vec::new(),
            0,
        ));
    }

    let r2 = r * r;
    let gram = Matrix::from_fn(size, size, |i, j| r2 * (dense[i * size + j] / r).cos());
    let spectrum = Spectrum::of(&gram, tol)?;
    let rank = spectrum.positive();
    let eigenvalues = spectrum.eigen.values.clone();
    if spectrum.negative() > 0 {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::NegativeEigenvalue, eigenvalues, rank));
    }
    if rank > n + 1 {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::RankExceedsDim, eigenvalues, rank));
    }
    // The Gram diagonal is r², so rows already have norm r up to rounding;
    // renormalize to sit exactly on the sphere.
    let rows = spectrum
        .factor(rank, n + 1)
        .into_iter()
        .map(|row| {
            let len = crate::linalg::norm(&row);
            row.into_iter().map(|x| r * x / len).collect()
        })
        .collect();
    finish(space, rows, d, &spectrum, rank)
}

/// Lorentzian-Gram test for realizability in hyperbolic `n`-space.
///
/// The signature condition is necessary; sufficiency is established by
/// assembling the hyperboloid points and verifying them. A witness that does
/// not verify downgrades the verdict to `wrong_signature`.
pub fn hyperbolic_feasibility(
    d: &DistanceMatrix,
    n: usize,
    tol: f64,
) -> Result<EmbedCertificate, OracleError> {
    let space = ModelSpace::hyperbolic(n)?;
    let size = d.size();
    if size == 0 {
        return Err(OracleError::EmptyMatrix);
    }
    let Ok(dense) = dense_finite(d) else {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::InfiniteDistance, Vec::new(), 0));
    };

    let h = Matrix::from_fn(size, size, |i, j| dense[i * size + j].cosh());
    let spectrum = Spectrum::of(&h, tol)?;
    let positive = spectrum.positive();
    let negative = spectrum.negative();
    let rank = positive + negative;
    let eigenvalues = spectrum.eigen.values.clone();
    if positive != 1 {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::WrongSignature, eigenvalues, rank));
    }
    if negative > n {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::RankExceedsDim, eigenvalues, rank));
    }

    // -H = X η Xᵀ: the timelike column comes from the positive eigenpair, the
    // spacelike columns from the negative ones.
    let values = &spectrum.eigen.values;
    let vectors = &spectrum.eigen.vectors;
    let time: Vec<f64> = (0..size).map(|i| values[0].sqrt() * vectors[(i, 0)]).collect();
    let sheet = if time.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    if time.iter().any(|&t| sheet * t <= 0.0) {
        return Ok(EmbedCertificate::infeasible(InfeasibleReason::WrongSignature, eigenvalues, rank));
    }
    let rows: Vec<Vec<f64>> = (0..size)
        .map(|i| {
            let mut spacelike = vec![0.0; n];
            for (slot, k) in spacelike.iter_mut().zip((size - negative)..size) {
                *slot = (-values[k]).sqrt() * vectors[(i, k)];
            }
            hyperboloid_lift(&spacelike)
        })
        .collect();

    match finish(space, rows, d, &spectrum, rank) {
        Err(OracleError::WitnessFailed { .. }) => Ok(EmbedCertificate::infeasible(
            InfeasibleReason::WrongSignature,
            eigenvalues,
            rank,
        )),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{construct_family, distance_matrix, Family};
    use crate::oracle::DEFAULT_TOL;
    use std::f64::consts::FRAC_2_PI;

    fn metric(f: Family) -> DistanceMatrix {
        distance_matrix(&construct_family(f).unwrap())
    }

    fn tetra_radius() -> f64 {
        1.0 / (-1.0f64 / 3.0).acos()
    }

    #[test]
    fn triangle_in_the_plane() {
        let d = metric(Family::Complete { vertices: 3 });
        let cert = euclidean_feasibility(&d, 2, DEFAULT_TOL).unwrap();
        assert!(cert.feasible);
        assert_eq!(cert.rank, 2);
        // Reference triangle (0,0), (1,0), (1/2, √3/2) has the same metric.
        let reference = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
        let w = cert.witness.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let a = w.space.geodesic_distance(&w.points[i], &w.points[j]).unwrap();
                let b = ((reference[i][0] - reference[j][0]).powi(2)
                    + (reference[i][1] - reference[j][1]).powi(2))
                .sqrt();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn path_on_a_line() {
        let d = DistanceMatrix::from_rows(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]])
            .unwrap();
        let cert = euclidean_feasibility(&d, 1, DEFAULT_TOL).unwrap();
        assert!(cert.feasible);
        let w = cert.witness.unwrap();
        let xs: Vec<f64> = w.points.iter().map(|p| p.coords()[0]).collect();
        assert!(((xs[0] - xs[1]).abs() - 1.0).abs() < 1e-12);
        assert!(((xs[0] - xs[2]).abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn four_cycle_is_not_euclidean() {
        let d = metric(Family::Cycle { vertices: 4 });
        for n in 1..=6 {
            let cert = euclidean_feasibility(&d, n, DEFAULT_TOL).unwrap();
            assert_eq!(cert.reason, Some(InfeasibleReason::NegativeEigenvalue));
            assert!(cert.witness.is_none());
        }
        // Circulant D∘D = circ(0,1,4,1): centered spectrum {2, 2, 0, -1}.
        let cert = euclidean_feasibility(&d, 3, DEFAULT_TOL).unwrap();
        let expected = [2.0, 2.0, 0.0, -1.0];
        for (got, want) in cert.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{:?}", cert.eigenvalues);
        }
    }

    #[test]
    fn infinite_and_empty_inputs() {
        let d = distance_matrix(&crate::graph::Graph::empty(2));
        for cert in [
            euclidean_feasibility(&d, 2, DEFAULT_TOL).unwrap(),
            sphere_feasibility(&d, 2, 1.0, DEFAULT_TOL).unwrap(),
            hyperbolic_feasibility(&d, 2, DEFAULT_TOL).unwrap(),
        ] {
            assert_eq!(cert.reason, Some(InfeasibleReason::InfiniteDistance));
        }
        let empty = DistanceMatrix::from_rows(&[]).unwrap();
        assert_eq!(euclidean_feasibility(&empty, 1, DEFAULT_TOL), Err(OracleError::EmptyMatrix));
        assert!(sphere_feasibility(&metric(Family::Path { vertices: 2 }), 2, 0.0, DEFAULT_TOL).is_err());
    }

    #[test]
    fn octahedron_on_the_dual_point_sphere() {
        let d = metric(Family::CocktailParty { n: 2 });
        let cert = sphere_feasibility(&d, 2, FRAC_2_PI, DEFAULT_TOL).unwrap();
        assert!(cert.feasible);
        assert_eq!(cert.rank, 3);
        let r2 = FRAC_2_PI * FRAC_2_PI;
        for k in 0..3 {
            assert!((cert.eigenvalues[k] - 2.0 * r2).abs() < 1e-12);
            assert!(cert.eigenvalues[k + 3].abs() < 1e-12);
        }
        let w = cert.witness.unwrap();
        // Antipodal pairs (i, i+3) and mutually orthogonal axes.
        for i in 0..3 {
            let a = w.points[i].coords();
            let b = w.points[i + 3].coords();
            assert!(a.iter().zip(b).all(|(x, y)| (x + y).abs() < 1e-12));
        }
    }

    #[test]
    fn tetrahedron_radius() {
        let r = tetra_radius();
        // Central angle of a regular tetrahedron, from vertices (1,1,1) and (1,-1,-1).
        let cos_central = (1.0 - 1.0 - 1.0) / 3.0;
        assert!(((1.0 / r).cos() - cos_central).abs() < 1e-14);
        assert!((r - 0.523_386_687).abs() < 1e-9);
        let d = metric(Family::Complete { vertices: 4 });
        let cert = sphere_feasibility(&d, 2, r, DEFAULT_TOL).unwrap();
        assert!(cert.feasible, "{cert:?}");
        assert_eq!(cert.rank, 3);
        let r2 = r * r;
        for k in 0..3 {
            assert!((cert.eigenvalues[k] - 4.0 / 3.0 * r2).abs() < 1e-12);
        }
        assert!(cert.eigenvalues[3].abs() < 1e-12);
        assert!(cert.residual.unwrap() <= 1e-9);
    }

    #[test]
    fn k4_on_a_larger_sphere_needs_four_dimensions() {
        let d = metric(Family::Complete { vertices: 4 });
        let cert = sphere_feasibility(&d, 2, 0.6, DEFAULT_TOL).unwrap();
        assert_eq!(cert.reason, Some(InfeasibleReason::RankExceedsDim));
        assert_eq!(cert.rank, 4);
        // Scaled Gram spectrum {1 - c (x3), 1 + 3c} with c = cos(1/r).
        let c = (1.0f64 / 0.6).cos();
        let r2 = 0.36;
        assert!((cert.eigenvalues[0] - (1.0 - c) * r2).abs() < 1e-12);
        assert!((cert.eigenvalues[3] - (1.0 + 3.0 * c) * r2).abs() < 1e-12);
        assert!(sphere_feasibility(&d, 3, 0.6, DEFAULT_TOL).unwrap().feasible);
    }

    #[test]
    fn too_long_for_the_sphere() {
        let d = metric(Family::Path { vertices: 4 });
        let cert = sphere_feasibility(&d, 2, 0.5, DEFAULT_TOL).unwrap();
        assert_eq!(cert.reason, Some(InfeasibleReason::DistanceExceedsDiameter));
    }

    #[test]
    fn hyperbolic_triangle() {
        let d = metric(Family::Complete { vertices: 3 });
        let cert = hyperbolic_feasibility(&d, 2, DEFAULT_TOL).unwrap();
        assert!(cert.feasible);
        // H = (1 - cosh 1) I + cosh 1 · J.
        let c = 1f64.cosh();
        assert!((cert.eigenvalues[0] - (1.0 + 2.0 * c)).abs() < 1e-12);
        assert!((cert.eigenvalues[1] - (1.0 - c)).abs() < 1e-12);
        assert!((cert.eigenvalues[2] - (1.0 - c)).abs() < 1e-12);
        assert!(!hyperbolic_feasibility(&d, 1, DEFAULT_TOL).unwrap().feasible);
    }

    #[test]
    fn hyperbolic_segment() {
        let d = DistanceMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let cert = hyperbolic_feasibility(&d, 1, DEFAULT_TOL).unwrap();
        assert!(cert.feasible);
        let w = cert.witness.unwrap();
        let dist = w.space.geodesic_distance(&w.points[0], &w.points[1]).unwrap();
        assert!((dist - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_cycle_is_not_hyperbolic() {
        let d = metric(Family::Cycle { vertices: 4 });
        let cert = hyperbolic_feasibility(&d, 3, DEFAULT_TOL).unwrap();
        assert!(!cert.feasible);
        assert_eq!(cert.reason, Some(InfeasibleReason::WrongSignature));
    }

    #[test]
    fn single_point_everywhere() {
        let d = DistanceMatrix::from_rows(&[vec![0.0]]).unwrap();
        assert!(euclidean_feasibility(&d, 1, DEFAULT_TOL).unwrap().feasible);
        assert!(sphere_feasibility(&d, 2, 1.0, DEFAULT_TOL).unwrap().feasible);
        assert!(hyperbolic_feasibility(&d, 1, DEFAULT_TOL).unwrap().feasible);
    }

    #[test]
    fn complete_graph_sphere_threshold() {
        // K_m at (n, r) is realizable iff cos(1/r) >= -1/(m-1) and the implied
        // rank (m - 1 on the boundary, m inside) fits in n + 1.
        let radii: [f64; 10] = [0.35, 0.45, 0.477_464_829_275_686, 0.5, 0.523_869, 0.55, 0.6, 0.8, 1.0, 2.0];
        for m in 2..=6usize {
            let d = metric(Family::Complete { vertices: m });
            for n in 1..=6 {
                for &r in &radii {
                    let c = (1.0 / r).cos();
                    let boundary = -1.0 / (m as f64 - 1.0);
                    let psd = c >= boundary - 1e-9;
                    let on_boundary = (c - boundary).abs() <= 1e-9;
                    let rank = if on_boundary { m - 1 } else { m };
                    let fits_diameter = 1.0 <= PI * r;
                    let expected = fits_diameter && psd && rank <= n + 1;
                    let cert = sphere_feasibility(&d, n, r, DEFAULT_TOL).unwrap();
                    assert_eq!(cert.feasible, expected, "K_{m} n={n} r={r}");
                }
            }
        }
    }
}
