mod args;
mod input;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

use isograph::classifier::{decide_hadamard_with, ClassifierError, SphereOptions};
use isograph::harness::{
    audit_hadamard_graphs, audit_hadamard_with, audit_sphere_graphs, audit_sphere_with, render_report, AllowRule,
    AuditOptions, HarnessError,
};
use isograph::oracle::{verification_tol, verify_isometric, OracleError, DEFAULT_TOL};
use isograph::{
    classify_shape, construct_family, decide_sphere, distance_matrix, enumerate_connected_graphs, necessary_form,
    write_graph6, Decision, Embedding, Family, GraphError, Mode, ModelSpace, ReportFormat, SpaceError,
};

use args::{AuditArgs, Cli, Command, EmbedArgs, FamilyArg, FormatArg, GenArgs, GraphInput, ModeArg, SpaceArg, VerifyArgs};
use input::{load_corpus, load_graph, parse_radius, parse_radius_list, read_text};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Space(s) => s.into(),
            OracleError::SizeMismatch { .. }
            | OracleError::SpaceMismatch
            | OracleError::EmptyMatrix
            | OracleError::InfiniteDistance
            | OracleError::Unsupported(_) => CliError::Usage(e.to_string()),
            OracleError::Linalg(_) | OracleError::WitnessFailed { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::Oracle(o) => o.into(),
            ClassifierError::Graph(g) => g.into(),
            ClassifierError::Space(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Classifier(c) => c.into(),
            HarnessError::Oracle(o) => o.into(),
            HarnessError::Graph(g) => g.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Outcome of a successful run: whether the verdict or check was positive.
struct Outcome {
    text: String,
    positive: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    text
}

/// Decision tolerance, overridable through ISOGRAPH_TOL.
fn decision_tol() -> Result<f64, CliError> {
    match std::env::var("ISOGRAPH_TOL") {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(CliError::Usage(format!("ISOGRAPH_TOL must be a positive number, got {v:?}"))),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn classify(source: &GraphInput) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Classification {
        graph6: String,
        vertices: usize,
        edges: usize,
        flags: isograph::ShapeFlags,
        necessary_form: Vec<isograph::NecessaryForm>,
    }
    let g = load_graph(source)?;
    let out = Classification {
        graph6: write_graph6(&g)?,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        flags: classify_shape(&g)?,
        necessary_form: necessary_form(&g)?.into_iter().collect(),
    };
    Ok(Outcome {
        text: json(&out),
        positive: true,
    })
}

fn embed(a: &EmbedArgs) -> Result<Outcome, CliError> {
    let g = load_graph(&a.source)?;
    let tol = decision_tol()?;
    let radius = a.radius.as_deref().map(parse_radius).transpose()?;
    let decision: Decision = match a.space {
        SpaceArg::Sphere => {
            let mode = match a.mode {
                ModeArg::PaperStrict => Mode::PaperStrict,
                ModeArg::OracleExtended => Mode::OracleExtended,
            };
            let options = SphereOptions {
                tol,
                radius_grid: a.radii.as_deref().map(parse_radius_list).transpose()?.unwrap_or_default(),
            };
            decide_sphere(&g, a.dim, radius, mode, &options)?
        }
        SpaceArg::Euclidean | SpaceArg::Hyperbolic => {
            if radius.is_some() || a.radii.is_some() {
                return Err(CliError::Usage("--radius applies to spheres only".into()));
            }
            let space = if a.space == SpaceArg::Euclidean {
                ModelSpace::euclidean(a.dim)?
            } else {
                ModelSpace::hyperbolic(a.dim)?
            };
            decide_hadamard_with(&g, space, tol)?
        }
    };
    Ok(Outcome {
        text: json(&decision),
        positive: decision.verdict.is_embeddable(),
    })
}

fn load_embedding(path: &Path) -> Result<Embedding, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("embedding JSON: {e}")))?;
    let value = match value.get("witness") {
        Some(w) => w.clone(),
        None if value.get("verdict").is_some() => {
            return Err(CliError::Usage("decision carries no witness".into()));
        }
        None => value,
    };
    let raw: Embedding = serde_json::from_value(value).map_err(|e| CliError::Usage(format!("embedding JSON: {e}")))?;
    // Re-validate every point against its space.
    Ok(Embedding::new(raw.space, raw.points)?)
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let embedding = load_embedding(&a.embedding)?;
    let g = load_graph(&a.source)?;
    let d = distance_matrix(&g);
    let tol = a.tol.unwrap_or_else(|| verification_tol(d.max_finite()));
    let report = verify_isometric(&embedding, &d, tol)?;
    Ok(Outcome {
        positive: report.passed,
        text: json(&report),
    })
}

fn audit(a: &AuditArgs) -> Result<Outcome, CliError> {
    let tol = decision_tol()?;
    let mut allow_list = if a.no_default_allow || !a.allow.is_empty() {
        Vec::new()
    } else {
        AuditOptions::default().allow_list
    };
    for rule in &a.allow {
        allow_list.push(rule.parse::<AllowRule>().map_err(CliError::Usage)?);
    }
    let options = AuditOptions {
        workers: a.workers.max(1),
        allow_list,
    };
    let corpus = a.corpus.as_deref().map(load_corpus).transpose()?;
    let report = match a.space {
        SpaceArg::Sphere => {
            let radii = parse_radius_list(
                a.radii
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("sphere audits need --radii".into()))?,
            )?;
            match &corpus {
                Some(graphs) => audit_sphere_graphs(graphs, a.dim, &radii, tol, &options)?,
                None => audit_sphere_with(a.max_vertices, a.dim, &radii, tol, &options)?,
            }
        }
        SpaceArg::Euclidean | SpaceArg::Hyperbolic => {
            if a.radii.is_some() {
                return Err(CliError::Usage("--radii applies to sphere audits only".into()));
            }
            let space = if a.space == SpaceArg::Euclidean {
                ModelSpace::euclidean(a.dim)?
            } else {
                ModelSpace::hyperbolic(a.dim)?
            };
            match &corpus {
                Some(graphs) => audit_hadamard_graphs(graphs, space, tol, &options)?,
                None => audit_hadamard_with(a.max_vertices, space, tol, &options)?,
            }
        }
    };
    let format = match a.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    };
    let summary = &report.summary;
    eprintln!(
        "audited {} rows: {} agreements, {} discrepancies ({} allow-listed), {} predicate violations",
        summary.rows, summary.agreements, summary.discrepancies, summary.allow_listed, summary.predicate_violations
    );
    Ok(Outcome {
        text: render_report(&report, format)?,
        positive: !report.has_unexpected(),
    })
}

fn gen(a: &GenArgs) -> Result<Outcome, CliError> {
    if let Some(m) = a.connected {
        let mut text = String::new();
        for g in enumerate_connected_graphs(m, !a.labeled)? {
            text.push_str(&write_graph6(&g)?);
            text.push('\n');
        }
        return Ok(Outcome { text, positive: true });
    }
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("this family needs --{flag}")));
    let family = match a.family.expect("clap requires --family or --connected") {
        FamilyArg::Path => Family::Path {
            vertices: need(a.vertices, "vertices")?,
        },
        FamilyArg::Cycle => Family::Cycle {
            vertices: need(a.vertices, "vertices")?,
        },
        FamilyArg::Complete => Family::Complete {
            vertices: need(a.vertices, "vertices")?,
        },
        FamilyArg::Cocktail => Family::CocktailParty { n: need(a.n, "n")? },
        FamilyArg::CompleteMinusMatching => Family::CompleteMinusMatching {
            vertices: need(a.vertices, "vertices")?,
            matching: need(a.matching, "matching")?,
        },
    };
    let g = construct_family(family)?;
    Ok(Outcome {
        text: format!("{}\n", write_graph6(&g)?),
        positive: true,
    })
}

fn distance(source: &GraphInput) -> Result<Outcome, CliError> {
    let g = load_graph(source)?;
    Ok(Outcome {
        text: json(&distance_matrix(&g)),
        positive: true,
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let outcome = match &cli.command {
        Command::Classify(src) => classify(src)?,
        Command::Embed(a) => embed(a)?,
        Command::Verify(a) => verify(a)?,
        Command::Audit(a) => audit(a)?,
        Command::Gen(a) => gen(a)?,
        Command::Distance(src) => distance(src)?,
    };
    emit(cli.output.as_deref(), &outcome.text)?;
    Ok(outcome.positive)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("isograph: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
