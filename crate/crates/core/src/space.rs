//! Constant-curvature target geometries.
//!
//! Points live in an ambient coordinate chart: the sphere of radius `r` in
//! `R^(n+1)`, flat `R^n`, and the upper sheet of the hyperboloid
//! `⟨x, x⟩_M = -1` in Minkowski space `R^(n,1)` (time coordinate last).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, norm};

/// Relative tolerance on point membership.
pub const POINT_TOL: f64 = 1e-9;

/// How far an inner-product argument may stray outside its legal interval
/// before it is reported instead of clamped.
pub const CLAMP_TOL: f64 = 1e-9;

/// Default absolute tolerance for [`ModelSpace::has_dual_points_at`].
pub const DUAL_POINT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("point has {found} coordinates, space needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is off the sphere: |p| - r = {excess:e}")]
    OffSphere { excess: f64 },
    #[error("point is off the hyperboloid: <p,p>_M + 1 = {excess:e}")]
    OffHyperboloid { excess: f64 },
    #[error("point is on the lower hyperboloid sheet (last coordinate {last})")]
    WrongSheet { last: f64 },
    #[error("point has a non-finite coordinate")]
    NonFinite,
    #[error("distance argument {argument} is outside its domain by more than the clamp tolerance")]
    ClampExceeded { argument: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Sphere,
    Euclidean,
    Hyperbolic,
}

/// A target geometry: `Sphere(n, r)`, `Euclidean(n)` or `Hyperbolic(n)` with
/// curvature fixed at -1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct ModelSpace {
    kind: SpaceKind,
    dim: usize,
    radius: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    kind: SpaceKind,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl TryFrom<RawSpace> for ModelSpace {
    type Error = SpaceError;
    fn try_from(raw: RawSpace) -> Result<Self, SpaceError> {
        match (raw.kind, raw.radius) {
            (SpaceKind::Sphere, Some(r)) => ModelSpace::sphere(raw.dim, r),
            (SpaceKind::Sphere, None) => Err(SpaceError::InvalidSpace("sphere needs a radius".into())),
            (SpaceKind::Euclidean, None) => ModelSpace::euclidean(raw.dim),
            (SpaceKind::Hyperbolic, None) => ModelSpace::hyperbolic(raw.dim),
            (_, Some(_)) => Err(SpaceError::InvalidSpace("only spheres take a radius".into())),
        }
    }
}

impl From<ModelSpace> for RawSpace {
    fn from(s: ModelSpace) -> Self {
        RawSpace {
            kind: s.kind,
            dim: s.dim,
            radius: s.radius,
        }
    }
}

impl ModelSpace {
    pub fn sphere(dim: usize, radius: f64) -> Result<Self, SpaceError> {
        Self::check_dim(dim)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SpaceError::InvalidSpace(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(Self {
            kind: SpaceKind::Sphere,
            dim,
            radius: Some(radius),
        })
    }

    pub fn euclidean(dim: usize) -> Result<Self, SpaceError> {
        Self::check_dim(dim)?;
        Ok(Self {
            kind: SpaceKind::Euclidean,
            dim,
            radius: None,
        })
    }

    pub fn hyperbolic(dim: usize) -> Result<Self, SpaceError> {
        Self::check_dim(dim)?;
        Ok(Self {
            kind: SpaceKind::Hyperbolic,
            dim,
            radius: None,
        })
    }

    fn check_dim(dim: usize) -> Result<(), SpaceError> {
        if dim == 0 {
            return Err(SpaceError::InvalidSpace("dimension must be at least 1".into()));
        }
        Ok(())
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sphere radius; `None` for the other kinds.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Length of a coordinate vector in this space's chart.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            SpaceKind::Euclidean => self.dim,
            SpaceKind::Sphere | SpaceKind::Hyperbolic => self.dim + 1,
        }
    }

    /// Sphere: the pair is antipodal exactly when `l = πr`, the only distance
    /// carrying two or more shortest geodesics. Euclidean and hyperbolic
    /// space have unique geodesics.
    pub fn has_dual_points_at(&self, l: f64, tol: f64) -> bool {
        match self.kind {
            SpaceKind::Sphere => (l - PI * self.radius.unwrap_or(0.0)).abs() <= tol,
            SpaceKind::Euclidean | SpaceKind::Hyperbolic => false,
        }
    }

    pub fn validate_point(&self, p: &SpacePoint) -> Result<(), SpaceError> {
        let coords = p.coords();
        if coords.len() != self.ambient_dim() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(SpaceError::NonFinite);
        }
        match self.kind {
            SpaceKind::Euclidean => Ok(()),
            SpaceKind::Sphere => {
                let r = self.radius.expect("sphere has a radius");
                let excess = norm(coords) - r;
                if excess.abs() > POINT_TOL * r {
                    return Err(SpaceError::OffSphere { excess });
                }
                Ok(())
            }
            SpaceKind::Hyperbolic => {
                let excess = minkowski_dot(coords, coords) + 1.0;
                let last = coords[coords.len() - 1];
                if last <= 0.0 {
                    return Err(SpaceError::WrongSheet { last });
                }
                if excess.abs() > POINT_TOL * last * last.max(1.0) {
                    return Err(SpaceError::OffHyperboloid { excess });
                }
                Ok(())
            }
        }
    }

    /// Length of the shortest geodesic between two valid points.
    pub fn geodesic_distance(&self, p: &SpacePoint, q: &SpacePoint) -> Result<f64, SpaceError> {
        self.validate_point(p)?;
        self.validate_point(q)?;
        self.distance_unchecked(p.coords(), q.coords())
    }

    /// Distance formula without membership checks; used in inner loops where
    /// points are kept on the manifold by construction.
    pub(crate) fn distance_unchecked(&self, p: &[f64], q: &[f64]) -> Result<f64, SpaceError> {
        match self.kind {
            SpaceKind::Euclidean => Ok(euclidean_distance(p, q)),
            SpaceKind::Sphere => Ok(self.radius.expect("sphere has a radius") * sphere_angle(p, q)),
            SpaceKind::Hyperbolic => hyperbolic_distance(p, q),
        }
    }

    /// Deterministic sample with default sampler settings.
    pub fn random_point(&self, seed: u64) -> SpacePoint {
        self.random_point_with(seed, &SamplerConfig::default())
    }

    pub fn random_point_with(&self, seed: u64, config: &SamplerConfig) -> SpacePoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self.kind {
            SpaceKind::Euclidean => SpacePoint::new(
                (0..self.dim)
                    .map(|_| rng.gen_range(-config.euclidean_box..=config.euclidean_box))
                    .collect(),
            ),
            SpaceKind::Sphere => {
                let r = self.radius.expect("sphere has a radius");
                loop {
                    let v: Vec<f64> = (0..=self.dim).map(|_| rng.sample(StandardNormal)).collect();
                    let len = norm(&v);
                    if len > 1e-12 {
                        return SpacePoint::new(v.into_iter().map(|x| r * x / len).collect());
                    }
                }
            }
            SpaceKind::Hyperbolic => {
                let tangent: Vec<f64> = (0..self.dim)
                    .map(|_| config.hyperbolic_scale * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                SpacePoint::new(hyperboloid_exp_at_apex(&tangent))
            }
        }
    }
}

/// Sampler knobs for [`ModelSpace::random_point_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    /// Euclidean coordinates are uniform in `[-box, box]`.
    pub euclidean_box: f64,
    /// Standard deviation of the tangent sample mapped onto the hyperboloid.
    pub hyperbolic_scale: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            euclidean_box: 2.0,
            hyperbolic_scale: 1.0,
        }
    }
}

/// Coordinates of a point in a space's ambient chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpacePoint(Vec<f64>);

impl SpacePoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

/// Point JSON: `{"space": {...}, "coords": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDocument {
    pub space: ModelSpace,
    pub coords: SpacePoint,
}

/// `Σ xᵢyᵢ - x_t y_t` with the time coordinate last.
pub fn minkowski_dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    dot(&a[..n - 1], &b[..n - 1]) - a[n - 1] * b[n - 1]
}

fn euclidean_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Angle between two nonzero vectors, `arccos(⟨p̂,q̂⟩)` evaluated as
/// `2·atan2(|p̂-q̂|, |p̂+q̂|)` so it stays accurate near 0 and π.
fn sphere_angle(p: &[f64], q: &[f64]) -> f64 {
    let (np, nq) = (norm(p), norm(q));
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (a, b) in p.iter().zip(q) {
        let (x, y) = (a / np, b / nq);
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// `arccosh(-⟨p,q⟩_M)`; near the diagonal it uses the equivalent
/// `2·asinh(|p-q|_M / 2)`, which does not lose digits.
fn hyperbolic_distance(p: &[f64], q: &[f64]) -> Result<f64, SpaceError> {
    let w = -minkowski_dot(p, q);
    let scale = p[p.len() - 1] * q[q.len() - 1];
    if w < 1.0 - CLAMP_TOL * scale.max(1.0) {
        return Err(SpaceError::ClampExceeded { argument: w });
    }
    if w > 2.0 {
        return Ok(w.acosh());
    }
    let delta: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
    let chord2 = minkowski_dot(&delta, &delta).max(0.0);
    Ok(2.0 * (chord2.sqrt() / 2.0).asinh())
}

/// Exponential map at the apex `(0, …, 0, 1)` of a tangent vector in `R^n`.
pub fn hyperboloid_exp_at_apex(tangent: &[f64]) -> Vec<f64> {
    let len = norm(tangent);
    let mut out: Vec<f64> = if len > 0.0 {
        tangent.iter().map(|x| len.sinh() * x / len).collect()
    } else {
        vec![0.0; tangent.len()]
    };
    out.push(len.cosh());
    out
}

/// Lifts spacelike coordinates onto the upper sheet: `t = sqrt(1 + |s|²)`.
pub fn hyperboloid_lift(spacelike: &[f64]) -> Vec<f64> {
    let mut out = spacelike.to_vec();
    out.push((1.0 + dot(spacelike, spacelike)).sqrt());
    out
}

/// Deterministic 64-bit seed derivation (SplitMix64 finalizer over the pair).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
