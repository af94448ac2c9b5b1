use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use isograph::classifier::tetrahedral_radius;
use isograph::{parse_graph6, Graph};

use crate::args::GraphInput;
use crate::CliError;

fn read_source(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        return read_stdin();
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_stdin() -> Result<String, CliError> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
    Ok(text)
}

/// Parses graph6 or edge-list JSON; a leading '{' selects JSON.
pub fn parse_graph(text: &str) -> Result<Graph, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return Graph::from_edge_list_json(trimmed).map_err(|e| CliError::Usage(e.to_string()));
    }
    let mut lines = trimmed.lines().map(str::trim).filter(|l| !l.is_empty());
    let first = lines.next().ok_or_else(|| CliError::Usage("no graph given".into()))?;
    if lines.next().is_some() {
        return Err(CliError::Usage("expected exactly one graph".into()));
    }
    parse_graph6(first).map_err(|e| CliError::Usage(format!("graph6: {e}")))
}

pub fn load_graph(input: &GraphInput) -> Result<Graph, CliError> {
    let text = match (&input.graph, &input.input) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => read_source(path)?,
        (None, None) => read_stdin()?,
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --graph or --input".into())),
    };
    parse_graph(&text)
}

/// Newline-separated graph6 corpus; blank lines and `#` comments skipped.
pub fn load_corpus(path: &Path) -> Result<Vec<Graph>, CliError> {
    let text = read_source(path)?;
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| parse_graph6(l).map_err(|e| CliError::Usage(format!("line {}: {e}", i + 1))))
        .collect()
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    read_source(path)
}

/// A positive real, or one of the symbolic radii `2/pi`, `1/arccos(-1/3)`,
/// `<x>/pi`, `<x>*pi`, `pi`.
pub fn parse_radius(text: &str) -> Result<f64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || CliError::Usage(format!("invalid radius {text:?}"));
    let value = if s == "1/arccos(-1/3)" || s == "1/acos(-1/3)" {
        tetrahedral_radius()
    } else if s == "pi" {
        PI
    } else if let Some(num) = s.strip_suffix("/pi") {
        num.parse::<f64>().map_err(|_| bad())? / PI
    } else if let Some(num) = s.strip_suffix("*pi") {
        num.parse::<f64>().map_err(|_| bad())? * PI
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn parse_radius_list(text: &str) -> Result<Vec<f64>, CliError> {
    let radii = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_radius)
        .collect::<Result<Vec<_>, _>>()?;
    if radii.is_empty() {
        return Err(CliError::Usage("radius list is empty".into()));
    }
    Ok(radii)
}
