use serde::{Deserialize, Serialize};

use crate::graph::DistanceMatrix;

use super::{dense_finite, Embedding, OracleError};

/// Distance residuals of an embedding against a target metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_residual: f64,
    pub mean_residual: f64,
    /// Smallest distance between distinct points; `None` below two points.
    pub min_pairwise: Option<f64>,
    pub injective: bool,
    pub passed: bool,
    pub tol: f64,
}

/// Compares every pairwise geodesic distance with `d`. Passes iff the largest
/// residual is at most `tol` and no two points are within `tol` of each other.
pub fn verify_isometric(
    embedding: &Embedding,
    d: &DistanceMatrix,
    tol: f64,
) -> Result<VerifyReport, OracleError> {
    let n = embedding.len();
    if d.size() != n {
        return Err(OracleError::SizeMismatch {
            left: n,
            right: d.size(),
        });
    }
    let target = dense_finite(d)?;
    for p in &embedding.points {
        embedding.space.validate_point(p)?;
    }

    let mut max_residual = 0.0f64;
    let mut total = 0.0;
    let mut min_pairwise: Option<f64> = None;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let got = embedding
                .space
                .distance_unchecked(embedding.points[i].coords(), embedding.points[j].coords())?;
            let residual = (got - target[i * n + j]).abs();
            max_residual = max_residual.max(residual);
            total += residual;
            pairs += 1;
            min_pairwise = Some(min_pairwise.map_or(got, |m| m.min(got)));
        }
    }
    let mean_residual = if pairs == 0 { 0.0 } else { total / pairs as f64 };
    let injective = min_pairwise.map_or(true, |m| m > tol);
    Ok(VerifyReport {
        max_residual,
        mean_residual,
        min_pairwise,
        injective,
        passed: injective && max_residual <= tol,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{construct_family, distance_matrix, Family};
    use crate::space::{ModelSpace, SpacePoint};
    use std::f64::consts::FRAC_2_PI;

    fn octahedron_witness() -> Embedding {
        let space = ModelSpace::sphere(2, FRAC_2_PI).unwrap();
        let mut points = Vec::new();
        for sign in [1.0, -1.0] {
            for axis in 0..3 {
                let mut c = vec![0.0; 3];
                c[axis] = sign * FRAC_2_PI;
                points.push(SpacePoint::new(c));
            }
        }
        Embedding::new(space, points).unwrap()
    }

    #[test]
    fn paper_octahedron_is_exact() {
        let d = distance_matrix(&construct_family(Family::CocktailParty { n: 2 }).unwrap());
        let report = verify_isometric(&octahedron_witness(), &d, 1e-12).unwrap();
        assert!(report.passed);
        assert!(report.max_residual < 1e-12);
        assert!((report.min_pairwise.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point() {
        let space = ModelSpace::euclidean(2).unwrap();
        let e = Embedding::new(space, vec![SpacePoint::new(vec![0.3, 0.1])]).unwrap();
        let d = DistanceMatrix::from_rows(&[vec![0.0]]).unwrap();
        let report = verify_isometric(&e, &d, 1e-12).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert!(report.passed && report.min_pairwise.is_none());
    }

    #[test]
    fn perturbed_octahedron_fails() {
        let d = distance_matrix(&construct_family(Family::CocktailParty { n: 2 }).unwrap());
        let mut e = octahedron_witness();
        // Nudge one coordinate by 1e-3, then put the point back on the sphere.
        let mut c = e.points[0].coords().to_vec();
        c[1] += 1e-3;
        let len = crate::linalg::norm(&c);
        e.points[0] = SpacePoint::new(c.iter().map(|x| FRAC_2_PI * x / len).collect());
        let report = verify_isometric(&e, &d, 1e-8).unwrap();
        assert!((1e-4..=1e-2).contains(&report.max_residual), "{}", report.max_residual);
        assert!(!report.passed);
    }

    #[test]
    fn rejects_mismatches() {
        let d = distance_matrix(&construct_family(Family::Path { vertices: 3 }).unwrap());
        assert!(matches!(
            verify_isometric(&octahedron_witness(), &d, 1e-9),
            Err(OracleError::SizeMismatch { left: 6, right: 3 })
        ));
        let d = distance_matrix(&crate::graph::Graph::empty(6));
        assert_eq!(
            verify_isometric(&octahedron_witness(), &d, 1e-9),
            Err(OracleError::InfiniteDistance)
        );
    }

    #[test]
    fn coincident_points_are_not_injective() {
        let space = ModelSpace::euclidean(1).unwrap();
        let e = Embedding::new(space, vec![SpacePoint::new(vec![0.0]), SpacePoint::new(vec![0.0])]).unwrap();
        let d = DistanceMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let report = verify_isometric(&e, &d, 1e-9).unwrap();
        assert!(!report.injective && !report.passed);
    }
}
