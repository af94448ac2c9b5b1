//! Exhaustive audits of the structural classification against the spectral
//! oracles, with byte-stable JSON and CSV reports.

mod enumerate;
mod report;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_2_PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{
    decide_hadamard_with, decide_sphere, ClassifierError, Decision, Mode, SphereOptions, Verdict,
};
use crate::graph::{classify_shape, distance_matrix, write_graph6, Graph, GraphError, ShapeFlags};
use crate::oracle::{euclidean_feasibility, hyperbolic_feasibility, OracleError, DEFAULT_TOL};
use crate::space::{ModelSpace, SpaceKind};

pub use enumerate::{canonical_form, enumerate_connected_graphs, ConnectedGraphs, MAX_ENUMERATION_VERTICES};
pub use report::{render_report, write_report, ReportFormat, CSV_HEADER};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("vertex count {m} outside 1..={max}")]
    VertexCountOutOfRange { m: usize, max: usize },
    #[error("audit needs at least one radius")]
    EmptyRadiusList,
    #[error("{0:?} space is not a valid target for this audit")]
    UnsupportedSpace(SpaceKind),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot write report to {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Discrepancy classes that do not make an audit fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllowRule {
    /// Complete graphs on `S^n` with `n >= 3`: the spectral test realizes
    /// them at radii other than the tetrahedral one.
    SphereCompleteRadius,
}

impl AllowRule {
    pub fn as_str(self) -> &'static str {
        match self {
            AllowRule::SphereCompleteRadius => "sphere_complete_radius",
        }
    }

    fn matches(self, space: SpaceKind, n: usize, flags: &ShapeFlags) -> bool {
        match self {
            AllowRule::SphereCompleteRadius => space == SpaceKind::Sphere && n >= 3 && flags.is_complete,
        }
    }
}

impl std::str::FromStr for AllowRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sphere_complete_radius" => Ok(AllowRule::SphereCompleteRadius),
            other => Err(format!("unknown allow-list rule {other:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub workers: usize,
    pub allow_list: Vec<AllowRule>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            allow_list: vec![AllowRule::SphereCompleteRadius],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditParameters {
    pub space: SpaceKind,
    pub n: usize,
    pub radii: Vec<f64>,
    pub tol: f64,
    pub max_vertices: usize,
    pub allow_list: Vec<AllowRule>,
    /// K_1 and K_2 count as complete graphs.
    pub small_complete_convention: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub graph6: String,
    pub vertices: usize,
    pub edges: usize,
    pub flags: ShapeFlags,
    pub paper_verdict: Verdict,
    pub oracle_verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Residual of the witness backing whichever side claims embeddability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub discrepancy: bool,
    pub allow_listed: bool,
    /// At the dual-point radius with enough room: whether the oracle verdict
    /// matches the complement-is-a-partial-matching predicate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate_holds: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTally {
    pub rows: usize,
    pub paper_embeddable: usize,
    pub oracle_embeddable: usize,
    pub discrepancies: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub rows: usize,
    pub agreements: usize,
    pub discrepancies: usize,
    pub allow_listed: usize,
    pub unexpected: usize,
    pub predicate_violations: usize,
    pub per_form: BTreeMap<String, FormTally>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub parameters: AuditParameters,
    pub rows: Vec<AuditRow>,
    pub summary: AuditSummary,
}

impl AuditReport {
    /// True when some discrepancy or predicate violation is not allow-listed.
    pub fn has_unexpected(&self) -> bool {
        self.summary.unexpected > 0 || self.summary.predicate_violations > 0
    }
}

fn summarize(rows: &[AuditRow]) -> AuditSummary {
    let mut s = AuditSummary {
        rows: rows.len(),
        ..AuditSummary::default()
    };
    for row in rows {
        if row.discrepancy {
            s.discrepancies += 1;
            if row.allow_listed {
                s.allow_listed += 1;
            } else {
                s.unexpected += 1;
            }
        } else {
            s.agreements += 1;
        }
        if row.predicate_holds == Some(false) {
            s.predicate_violations += 1;
        }
        let tally = s.per_form.entry(row.flags.label()).or_default();
        tally.rows += 1;
        tally.paper_embeddable += usize::from(row.paper_verdict.is_embeddable());
        tally.oracle_embeddable += usize::from(row.oracle_verdict.is_embeddable());
        tally.discrepancies += usize::from(row.discrepancy);
    }
    s
}

/// Every connected graph up to `max_vertices`, one per isomorphism class.
fn audit_graphs(max_vertices: usize) -> Result<Vec<Graph>, HarnessError> {
    let mut out = Vec::new();
    for m in 1..=max_vertices {
        out.extend(enumerate_connected_graphs(m, true)?);
    }
    Ok(out)
}

/// Applies `f` to every graph on up to `workers` threads and concatenates
/// the results in input order.
fn par_map<T, F>(graphs: &[Graph], workers: usize, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(&Graph) -> Result<Vec<T>, HarnessError> + Sync,
{
    let workers = workers.max(1).min(graphs.len().max(1));
    if workers == 1 {
        let mut out = Vec::new();
        for g in graphs {
            out.extend(f(g)?);
        }
        return Ok(out);
    }
    let chunk = graphs.len().div_ceil(workers);
    let results: Vec<Result<Vec<T>, HarnessError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = graphs
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for g in part {
                        out.extend(f(g)?);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("audit worker panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn sort_rows(rows: &mut [AuditRow]) {
    rows.sort_by(|a, b| {
        (a.vertices, &a.graph6)
            .cmp(&(b.vertices, &b.graph6))
            .then(a.radius.unwrap_or(0.0).total_cmp(&b.radius.unwrap_or(0.0)))
    });
}

fn row_base(graph: &Graph, flags: ShapeFlags) -> Result<AuditRow, HarnessError> {
    Ok(AuditRow {
        graph6: write_graph6(graph)?,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        flags,
        paper_verdict: Verdict::NotEmbeddable,
        oracle_verdict: Verdict::NotEmbeddable,
        radius: None,
        residual: None,
        discrepancy: false,
        allow_listed: false,
        predicate_holds: None,
    })
}

fn backing_residual(paper: &Decision, oracle_residual: Option<f64>, oracle_feasible: bool) -> Option<f64> {
    if oracle_feasible {
        oracle_residual
    } else if paper.verdict.is_embeddable() {
        paper.residual()
    } else {
        None
    }
}

/// Structural decision against the spectral oracle for a Euclidean or
/// hyperbolic target, over every connected graph up to `max_vertices`.
pub fn audit_hadamard(max_vertices: usize, space: ModelSpace, tol: f64) -> Result<AuditReport, HarnessError> {
    audit_hadamard_with(max_vertices, space, tol, &AuditOptions::default())
}

pub fn audit_hadamard_with(
    max_vertices: usize,
    space: ModelSpace,
    tol: f64,
    options: &AuditOptions,
) -> Result<AuditReport, HarnessError> {
    let graphs = audit_graphs(max_vertices)?;
    let mut report = audit_hadamard_graphs(&graphs, space, tol, options)?;
    report.parameters.max_vertices = max_vertices;
    Ok(report)
}

/// Hadamard audit over an explicit graph list, e.g. an ingested graph6
/// corpus. Every graph must be connected.
pub fn audit_hadamard_graphs(
    graphs: &[Graph],
    space: ModelSpace,
    tol: f64,
    options: &AuditOptions,
) -> Result<AuditReport, HarnessError> {
    if space.kind() == SpaceKind::Sphere {
        return Err(HarnessError::UnsupportedSpace(space.kind()));
    }
    let max_vertices = graphs.iter().map(Graph::vertex_count).max().unwrap_or(0);
    let n = space.dim();
    let mut rows = par_map(graphs, options.workers, |g| {
        let flags = classify_shape(g)?;
        let paper = decide_hadamard_with(g, space, tol)?;
        let d = distance_matrix(g);
        let cert = match space.kind() {
            SpaceKind::Hyperbolic => hyperbolic_feasibility(&d, n, tol)?,
            _ => euclidean_feasibility(&d, n, tol)?,
        };
        let mut row = row_base(g, flags)?;
        row.paper_verdict = paper.verdict;
        row.oracle_verdict = Verdict::from_bool(cert.feasible);
        row.residual = backing_residual(&paper, cert.residual, cert.feasible);
        row.discrepancy = row.paper_verdict != row.oracle_verdict;
        row.allow_listed = row.discrepancy && options.allow_list.iter().any(|r| r.matches(space.kind(), n, &flags));
        Ok(vec![row])
    })?;
    sort_rows(&mut rows);
    Ok(AuditReport {
        parameters: AuditParameters {
            space: space.kind(),
            n,
            radii: Vec::new(),
            tol,
            max_vertices,
            allow_list: options.allow_list.clone(),
            small_complete_convention: true,
        },
        summary: summarize(&rows),
        rows,
    })
}

/// `PaperStrict` against `OracleExtended` on `S^n` at each radius, over every
/// connected graph up to `max_vertices`.
pub fn audit_sphere(max_vertices: usize, n: usize, radii: &[f64], tol: f64) -> Result<AuditReport, HarnessError> {
    audit_sphere_with(max_vertices, n, radii, tol, &AuditOptions::default())
}

pub fn audit_sphere_with(
    max_vertices: usize,
    n: usize,
    radii: &[f64],
    tol: f64,
    options: &AuditOptions,
) -> Result<AuditReport, HarnessError> {
    if radii.is_empty() {
        return Err(HarnessError::EmptyRadiusList);
    }
    let graphs = audit_graphs(max_vertices)?;
    let mut report = audit_sphere_graphs(&graphs, n, radii, tol, options)?;
    report.parameters.max_vertices = max_vertices;
    Ok(report)
}

/// Sphere audit over an explicit graph list.
pub fn audit_sphere_graphs(
    graphs: &[Graph],
    n: usize,
    radii: &[f64],
    tol: f64,
    options: &AuditOptions,
) -> Result<AuditReport, HarnessError> {
    if radii.is_empty() {
        return Err(HarnessError::EmptyRadiusList);
    }
    if n < 2 {
        return Err(ClassifierError::DimensionTooSmall(n).into());
    }
    let max_vertices = graphs.iter().map(Graph::vertex_count).max().unwrap_or(0);
    let sphere_options = SphereOptions {
        tol,
        radius_grid: Vec::new(),
    };
    let check_predicate = n + 1 >= max_vertices;
    let mut rows = par_map(graphs, options.workers, |g| {
        let flags = classify_shape(g)?;
        let mut out = Vec::with_capacity(radii.len());
        for &r in radii {
            let paper = decide_sphere(g, n, Some(r), Mode::PaperStrict, &sphere_options)?;
            let oracle = decide_sphere(g, n, Some(r), Mode::OracleExtended, &sphere_options)?;
            let mut row = row_base(g, flags)?;
            row.radius = Some(r);
            row.paper_verdict = paper.verdict;
            row.oracle_verdict = oracle.verdict;
            row.residual = backing_residual(&paper, oracle.residual(), oracle.verdict.is_embeddable());
            row.discrepancy = paper.verdict != oracle.verdict;
            row.allow_listed =
                row.discrepancy && options.allow_list.iter().any(|rule| rule.matches(SpaceKind::Sphere, n, &flags));
            if check_predicate && (r - FRAC_2_PI).abs() <= crate::classifier::RADIUS_TOL {
                row.predicate_holds = Some(oracle.verdict.is_embeddable() == g.complement_is_partial_matching());
            }
            out.push(row);
        }
        Ok(out)
    })?;
    sort_rows(&mut rows);
    Ok(AuditReport {
        parameters: AuditParameters {
            space: SpaceKind::Sphere,
            n,
            radii: radii.to_vec(),
            tol,
            max_vertices,
            allow_list: options.allow_list.clone(),
            small_complete_convention: true,
        },
        summary: summarize(&rows),
        rows,
    })
}

/// Default decision tolerance for audits.
pub const DEFAULT_AUDIT_TOL: f64 = DEFAULT_TOL;
