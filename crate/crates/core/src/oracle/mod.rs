//! Independent numerical oracles for exact-distance embeddings: spectral
//! feasibility tests with witness construction for each model space,
//! residual verification, a stress-minimization cross-check and orthogonal
//! alignment of two embeddings.

mod feasibility;
mod procrustes;
mod stress;
mod verify;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graph::DistanceMatrix;
use crate::linalg::LinalgError;
use crate::space::{ModelSpace, SpaceError, SpacePoint};

pub use feasibility::{euclidean_feasibility, hyperbolic_feasibility, sphere_feasibility};
pub use procrustes::{procrustes_align, Alignment};
pub use stress::{stress_minimize, stress_of, StressOptions, StressResult};
pub use verify::{verify_isometric, VerifyReport};

/// Relative spectral threshold: eigenvalues within `tol · max|λ|` of zero
/// count as zero.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Residual budget a witness must meet for a metric with largest entry
/// `max_d`.
pub fn verification_tol(max_d: f64) -> f64 {
    1e-8 * (1.0 + max_d)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("distance matrix is empty")]
    EmptyMatrix,
    #[error("distance matrix has an infinite entry")]
    InfiniteDistance,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("space mismatch between embeddings")]
    SpaceMismatch,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("witness failed verification (max residual {residual:e})")]
    WitnessFailed { residual: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibleReason {
    NegativeEigenvalue,
    RankExceedsDim,
    DistanceExceedsDiameter,
    InfiniteDistance,
    WrongSignature,
    /// Two vertices land on the same point (only for matrices with zero
    /// off-diagonal entries, never for graph metrics).
    CoincidentPoints,
}

/// An ordered point configuration, one point per vertex index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub space: ModelSpace,
    pub points: Vec<SpacePoint>,
    /// Max distance residual, filled in once the embedding has been verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl Embedding {
    /// Checks every point against the space.
    pub fn new(space: ModelSpace, points: Vec<SpacePoint>) -> Result<Self, SpaceError> {
        for p in &points {
            space.validate_point(p)?;
        }
        Ok(Self {
            space,
            points,
            residual: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Pairwise geodesic distances as a dense row-major matrix.
    pub fn distances(&self) -> Result<Vec<f64>, SpaceError> {
        let n = self.points.len();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.space.geodesic_distance(&self.points[i], &self.points[j])?;
                out[i * n + j] = d;
                out[j * n + i] = d;
            }
        }
        Ok(out)
    }
}

/// Feasibility verdict with its spectral evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedCertificate {
    pub feasible: bool,
    #[serde(serialize_with = "serialize_rounded")]
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Embedding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<InfeasibleReason>,
}

impl EmbedCertificate {
    pub(crate) fn infeasible(reason: InfeasibleReason, eigenvalues: Vec<f64>, rank: usize) -> Self {
        Self {
            feasible: false,
            eigenvalues,
            rank,
            witness: None,
            residual: None,
            reason: Some(reason),
        }
    }
}

/// Rounds to 12 significant digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

fn serialize_rounded<S: Serializer>(values: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|&x| round_significant(x, 12)))
}

/// Dense finite copy of `d`, or the matching error.
pub(crate) fn dense_finite(d: &DistanceMatrix) -> Result<Vec<f64>, OracleError> {
    d.to_dense().ok_or(OracleError::InfiniteDistance)
}
