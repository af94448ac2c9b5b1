//! Structural embeddability decisions.
//!
//! Hadamard targets (Euclidean and hyperbolic space) have unique geodesics,
//! so a graph with a vertex of degree at least three embeds only if it is
//! complete. On spheres the same argument breaks exactly at antipodal pairs,
//! which leaves complete graphs at the tetrahedral radius and complete graphs
//! minus a matching at radius `2/π`. Degree-two graphs are paths and cycles
//! laid out on geodesics.
//!
//! Two modes are offered for spheres: `PaperStrict` applies the structural
//! classification verbatim, `OracleExtended` reports what the spectral test
//! certifies.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_2_PI, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{classify_shape, distance_matrix, DistanceMatrix, Graph, GraphError, ShapeFlags};
use crate::oracle::{
    euclidean_feasibility, hyperbolic_feasibility, sphere_feasibility, verification_tol,
    verify_isometric, EmbedCertificate, Embedding, OracleError, DEFAULT_TOL,
};
use crate::space::{hyperboloid_lift, ModelSpace, SpaceError, SpaceKind, SpacePoint, DUAL_POINT_TOL};

/// Absolute tolerance for comparing a requested radius with a forced one.
pub const RADIUS_TOL: f64 = 1e-9;

/// Radius at which `K_4` sits on a great 2-sphere as a regular tetrahedron
/// with unit edges: `1 / arccos(-1/3)`.
pub fn tetrahedral_radius() -> f64 {
    1.0 / (-1.0f64 / 3.0).acos()
}

/// Radius at which antipodal points are at distance 2.
pub const DUAL_POINT_RADIUS: f64 = FRAC_2_PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("{0:?} space has dual points at distance 2; use the sphere decider")]
    DualPoints(SpaceKind),
    #[error("sphere decisions need n >= 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
    #[error("radius grid is empty")]
    EmptyRadiusGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Embeddable,
    NotEmbeddable,
}

impl Verdict {
    pub fn from_bool(embeddable: bool) -> Self {
        if embeddable {
            Verdict::Embeddable
        } else {
            Verdict::NotEmbeddable
        }
    }

    pub fn is_embeddable(self) -> bool {
        self == Verdict::Embeddable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Embeddable => "embeddable",
            Verdict::NotEmbeddable => "not_embeddable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PaperStrict,
    OracleExtended,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusConstraint {
    ExactRadius { value: f64 },
    MinimumRadius { value: f64 },
    RadiusSet { values: Vec<f64> },
}

impl RadiusConstraint {
    pub fn admits(&self, r: f64) -> bool {
        match self {
            RadiusConstraint::ExactRadius { value } => (r - value).abs() <= RADIUS_TOL,
            RadiusConstraint::MinimumRadius { value } => r >= value - RADIUS_TOL,
            RadiusConstraint::RadiusSet { values } => values.iter().any(|v| (r - v).abs() <= RADIUS_TOL),
        }
    }

    /// Smallest admitted radius.
    pub fn representative(&self) -> Option<f64> {
        match self {
            RadiusConstraint::ExactRadius { value } | RadiusConstraint::MinimumRadius { value } => Some(*value),
            RadiusConstraint::RadiusSet { values } => values.first().copied(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationale {
    CompleteGraph,
    CocktailSubgraph,
    Path,
    Cycle,
    Degree3NotComplete,
    DimensionBound,
    OracleCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_constraint: Option<RadiusConstraint>,
    pub rationale: Rationale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Embedding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<EmbedCertificate>,
    /// Set when the structural classification claims embeddability but no
    /// configuration could be built to back it.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unverified_claim: bool,
}

impl Decision {
    fn new(verdict: Verdict, mode: Mode, rationale: Rationale) -> Self {
        Self {
            verdict,
            mode,
            radius_constraint: None,
            rationale,
            witness: None,
            certificate: None,
            unverified_claim: false,
        }
    }

    fn from_certificate(cert: EmbedCertificate, mode: Mode, rationale: Rationale) -> Self {
        Self {
            verdict: Verdict::from_bool(cert.feasible),
            witness: cert.witness.clone(),
            certificate: Some(cert),
            ..Self::new(Verdict::NotEmbeddable, mode, rationale)
        }
    }

    /// Max residual of the attached witness, if any.
    pub fn residual(&self) -> Option<f64> {
        self.witness.as_ref().and_then(|w| w.residual)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NecessaryForm {
    Path,
    Cycle,
    Complete,
    CocktailSubgraph,
}

/// Which of the structural forms admitted by the classification `graph`
/// matches. An empty set excludes the graph from every embeddable family.
pub fn necessary_form(graph: &Graph) -> Result<BTreeSet<NecessaryForm>, ClassifierError> {
    let flags = classify_shape(graph)?;
    Ok(forms_of(&flags))
}

fn forms_of(flags: &ShapeFlags) -> BTreeSet<NecessaryForm> {
    let mut out = BTreeSet::new();
    if flags.is_path {
        out.insert(NecessaryForm::Path);
    }
    if flags.is_cycle {
        out.insert(NecessaryForm::Cycle);
    }
    if flags.is_complete {
        out.insert(NecessaryForm::Complete);
    }
    if flags.is_complete_minus_matching {
        out.insert(NecessaryForm::CocktailSubgraph);
    }
    out
}

/// Decision for a target without dual points (Euclidean or hyperbolic).
pub fn decide_hadamard(graph: &Graph, space: ModelSpace) -> Result<Decision, ClassifierError> {
    decide_hadamard_with(graph, space, DEFAULT_TOL)
}

pub fn decide_hadamard_with(graph: &Graph, space: ModelSpace, tol: f64) -> Result<Decision, ClassifierError> {
    if space.kind() == SpaceKind::Sphere || space.has_dual_points_at(2.0, DUAL_POINT_TOL) {
        return Err(ClassifierError::DualPoints(space.kind()));
    }
    let flags = classify_shape(graph)?;
    let d = distance_matrix(graph);
    let m = graph.vertex_count();
    let n = space.dim();
    let mode = Mode::PaperStrict;
    let oracle = |d: &DistanceMatrix| match space.kind() {
        SpaceKind::Hyperbolic => hyperbolic_feasibility(d, n, tol),
        _ => euclidean_feasibility(d, n, tol),
    };

    if flags.is_complete {
        if m > n + 1 {
            return Ok(Decision::new(Verdict::NotEmbeddable, mode, Rationale::DimensionBound));
        }
        return Ok(Decision::from_certificate(oracle(&d)?, mode, Rationale::CompleteGraph));
    }
    if flags.max_degree >= 3 {
        return Ok(Decision::new(Verdict::NotEmbeddable, mode, Rationale::Degree3NotComplete));
    }
    if flags.is_path {
        let mut points = vec![SpacePoint::new(Vec::new()); m];
        for (k, v) in walk_order(graph).into_iter().enumerate() {
            points[v] = geodesic_point(space, k as f64);
        }
        let witness = verified(Embedding::new(space, points)?, &d)?;
        return Ok(Decision {
            witness: Some(witness),
            ..Decision::new(Verdict::Embeddable, mode, Rationale::Path)
        });
    }
    // Connected with max degree 2 and not a path: a cycle.
    Ok(Decision::from_certificate(oracle(&d)?, mode, Rationale::OracleCertificate))
}

/// Point at arclength `t` along a fixed geodesic through the origin (apex).
fn geodesic_point(space: ModelSpace, t: f64) -> SpacePoint {
    let n = space.dim();
    let mut spatial = vec![0.0; n];
    match space.kind() {
        SpaceKind::Hyperbolic => {
            spatial[0] = t.sinh();
            SpacePoint::new(hyperboloid_lift(&spatial))
        }
        _ => {
            spatial[0] = t;
            SpacePoint::new(spatial)
        }
    }
}

fn verified(mut embedding: Embedding, d: &DistanceMatrix) -> Result<Embedding, ClassifierError> {
    let report = verify_isometric(&embedding, d, verification_tol(d.max_finite()))?;
    if !report.passed {
        return Err(OracleError::WitnessFailed {
            residual: report.max_residual,
        }
        .into());
    }
    embedding.residual = Some(report.max_residual);
    Ok(embedding)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereOptions {
    /// Spectral threshold handed to the oracle.
    pub tol: f64,
    /// Radii swept by `OracleExtended` when no radius is given.
    pub radius_grid: Vec<f64>,
}

impl Default for SphereOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            radius_grid: Vec::new(),
        }
    }
}

/// Decision for the sphere `S^n`, at radius `r` when given.
pub fn decide_sphere(
    graph: &Graph,
    n: usize,
    r: Option<f64>,
    mode: Mode,
    options: &SphereOptions,
) -> Result<Decision, ClassifierError> {
    if n < 2 {
        return Err(ClassifierError::DimensionTooSmall(n));
    }
    if let Some(r) = r {
        if !(r.is_finite() && r > 0.0) {
            return Err(ClassifierError::InvalidRadius(r));
        }
    }
    let flags = classify_shape(graph)?;
    let d = distance_matrix(graph);
    match mode {
        Mode::PaperStrict => paper_sphere(graph, &flags, &d, n, r, options.tol),
        Mode::OracleExtended => oracle_sphere(&d, n, r, options),
    }
}

fn oracle_sphere(
    d: &DistanceMatrix,
    n: usize,
    r: Option<f64>,
    options: &SphereOptions,
) -> Result<Decision, ClassifierError> {
    let mode = Mode::OracleExtended;
    if let Some(r) = r {
        let cert = sphere_feasibility(d, n, r, options.tol)?;
        return Ok(Decision::from_certificate(cert, mode, Rationale::OracleCertificate));
    }
    if options.radius_grid.is_empty() {
        return Err(ClassifierError::EmptyRadiusGrid);
    }
    let mut feasible = Vec::new();
    let mut first: Option<EmbedCertificate> = None;
    let mut last = None;
    for &radius in &options.radius_grid {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ClassifierError::InvalidRadius(radius));
        }
        let cert = sphere_feasibility(d, n, radius, options.tol)?;
        if cert.feasible {
            feasible.push(radius);
            if first.is_none() {
                first = Some(cert);
                continue;
            }
        }
        last = Some(cert);
    }
    let cert = first.or(last).expect("grid is not empty");
    let mut decision = Decision::from_certificate(cert, mode, Rationale::OracleCertificate);
    if !feasible.is_empty() {
        decision.radius_constraint = Some(RadiusConstraint::RadiusSet { values: feasible });
    }
    Ok(decision)
}

/// One branch of the sphere classification that `graph` falls under.
struct Branch {
    rationale: Rationale,
    constraint: Option<RadiusConstraint>,
}

fn paper_branches(graph: &Graph, flags: &ShapeFlags, n: usize) -> Result<Vec<Branch>, Rationale> {
    let m = graph.vertex_count();
    let branch = |rationale, constraint| Branch {
        rationale,
        constraint: Some(constraint),
    };
    if m == 1 {
        return Ok(vec![Branch {
            rationale: Rationale::CompleteGraph,
            constraint: None,
        }]);
    }
    if flags.is_complete && m <= 3 {
        // K_2 and K_3 fit on a great circle at any radius where the longest
        // distance does not exceed the diameter πr (K_3 needs an arc of 2π/3).
        let min = if m == 2 { 1.0 / PI } else { 3.0 / (2.0 * PI) };
        return Ok(vec![branch(Rationale::CompleteGraph, RadiusConstraint::MinimumRadius { value: min })]);
    }
    if flags.max_degree <= 2 {
        if flags.is_path {
            let diameter = graph.diameter() as f64;
            return Ok(vec![branch(Rationale::Path, RadiusConstraint::MinimumRadius { value: diameter / PI })]);
        }
        return Ok(vec![branch(
            Rationale::Cycle,
            RadiusConstraint::ExactRadius {
                value: m as f64 / (2.0 * PI),
            },
        )]);
    }

    let mut out = Vec::new();
    let mut form_matched = false;
    if flags.is_complete {
        form_matched = true;
        if m <= n + 2 {
            out.push(branch(
                Rationale::CompleteGraph,
                RadiusConstraint::ExactRadius {
                    value: tetrahedral_radius(),
                },
            ));
        }
    }
    if let Some(t) = flags.matching_size {
        form_matched = true;
        // Each matched pair shares an axis; every other vertex needs its own.
        if m - t <= n + 1 {
            out.push(branch(
                Rationale::CocktailSubgraph,
                RadiusConstraint::ExactRadius {
                    value: DUAL_POINT_RADIUS,
                },
            ));
        }
    }
    if out.is_empty() {
        return Err(if form_matched {
            Rationale::DimensionBound
        } else {
            Rationale::Degree3NotComplete
        });
    }
    Ok(out)
}

fn paper_sphere(
    graph: &Graph,
    flags: &ShapeFlags,
    d: &DistanceMatrix,
    n: usize,
    r: Option<f64>,
    tol: f64,
) -> Result<Decision, ClassifierError> {
    let mode = Mode::PaperStrict;
    let branches = match paper_branches(graph, flags, n) {
        Ok(b) => b,
        Err(rationale) => return Ok(Decision::new(Verdict::NotEmbeddable, mode, rationale)),
    };
    let constraint = if branches.len() == 1 {
        branches[0].constraint.clone()
    } else {
        Some(RadiusConstraint::RadiusSet {
            values: branches
                .iter()
                .filter_map(|b| b.constraint.as_ref().and_then(RadiusConstraint::representative))
                .collect(),
        })
    };

    let chosen = match r {
        Some(r) => branches
            .iter()
            .find(|b| b.constraint.as_ref().map_or(true, |c| c.admits(r)))
            .map(|b| (b, Some(r))),
        None => Some((&branches[0], branches[0].constraint.as_ref().and_then(RadiusConstraint::representative))),
    };
    let Some((branch, radius)) = chosen else {
        return Ok(Decision {
            radius_constraint: constraint,
            ..Decision::new(Verdict::NotEmbeddable, mode, branches[0].rationale)
        });
    };

    let mut decision = Decision {
        radius_constraint: constraint,
        ..Decision::new(Verdict::Embeddable, mode, branch.rationale)
    };
    if let Some(radius) = radius {
        let space = ModelSpace::sphere(n, radius)?;
        match sphere_witness(graph, d, space, branch.rationale, tol)? {
            Some(w) => decision.witness = Some(verified(w, d)?),
            None => decision.unverified_claim = true,
        }
    }
    Ok(decision)
}

fn sphere_witness(
    graph: &Graph,
    d: &DistanceMatrix,
    space: ModelSpace,
    rationale: Rationale,
    tol: f64,
) -> Result<Option<Embedding>, ClassifierError> {
    let r = space.radius().expect("sphere has a radius");
    let ambient = space.ambient_dim();
    let m = graph.vertex_count();
    let axis = |k: usize, sign: f64| {
        let mut c = vec![0.0; ambient];
        c[k] = sign * r;
        c
    };
    let points: Vec<Vec<f64>> = match rationale {
        Rationale::CompleteGraph => {
            return Ok(sphere_feasibility(d, space.dim(), r, tol)?.witness);
        }
        Rationale::CocktailSubgraph => {
            let mut coords = vec![Vec::new(); m];
            let mut next = 0;
            let mut placed = vec![false; m];
            for (u, v) in graph.non_edges() {
                coords[u] = axis(next, 1.0);
                coords[v] = axis(next, -1.0);
                placed[u] = true;
                placed[v] = true;
                next += 1;
            }
            for v in 0..m {
                if !placed[v] {
                    coords[v] = axis(next, 1.0);
                    next += 1;
                }
            }
            coords
        }
        Rationale::Path | Rationale::Cycle => {
            let order = walk_order(graph);
            let mut coords = vec![Vec::new(); m];
            for (k, &v) in order.iter().enumerate() {
                let angle = k as f64 / r;
                let mut c = vec![0.0; ambient];
                c[0] = r * angle.cos();
                c[1] = r * angle.sin();
                coords[v] = c;
            }
            coords
        }
        _ => return Ok(None),
    };
    Ok(Some(Embedding::new(space, points.into_iter().map(SpacePoint::new).collect())?))
}

/// Vertices of a path or cycle in traversal order, starting from an endpoint
/// (paths) or vertex 0 (cycles).
fn walk_order(graph: &Graph) -> Vec<usize> {
    let m = graph.vertex_count();
    let start = (0..m).find(|&v| graph.degree(v) <= 1).unwrap_or(0);
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < m {
        let next = graph
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| w != prev && !order.contains(&w))
            .expect("path or cycle");
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
}
