//! Text formats: edge lists with a JSON sidecar, factored transforms,
//! signal CSVs, eigendecomposition and error-surface CSVs.
//!
//! Vertex and mode indices are 1-based on disk. Reals are written with 17
//! significant digits so every value round-trips exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{FgftError, Result};
use crate::graph::{Graph, ModelTag};
use crate::jacobi::{EigenDecomposition, GivensRotation};
use crate::spectral::ErrorSurface;
use crate::transform::{Domain, FactoredTransform, SignalVector};

/// 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| FgftError::parse(line, format!("invalid real '{tok}'")))
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| FgftError::parse(line, format!("invalid integer '{tok}'")))
}

fn parse_index(tok: &str, n: usize, line: usize) -> Result<usize> {
    let i = parse_usize(tok, line)?;
    if i == 0 || i > n {
        return Err(FgftError::parse(line, format!("index {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| FgftError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| FgftError::io(path, e))
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

// ---------------------------------------------------------------------------
// graphs

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (i, j, w) in g.edges() {
        writeln!(out, "{} {} {}", i + 1, j + 1, w).unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| FgftError::parse(1, "empty graph file"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => parse_usize(count, ln)?,
        _ => return Err(FgftError::parse(ln, "expected header 'n <count>'")),
    };
    let mut weights = DMatrix::zeros(n, n);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [a, b, w] = toks[..] else {
            return Err(FgftError::parse(ln, "expected 'i j w'"));
        };
        let i = parse_index(a, n, ln)?;
        let j = parse_index(b, n, ln)?;
        if i == j {
            return Err(FgftError::parse(ln, "self-loops are not allowed"));
        }
        let w = parse_real(w, ln)?;
        weights[(i, j)] = w;
        weights[(j, i)] = w;
    }
    Graph::from_weights(weights, ModelTag::Custom)
}

/// Contents of the `.json` sidecar written next to a graph file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub n: usize,
    #[serde(flatten)]
    pub model: ModelTag,
    pub edges: usize,
    pub mean_degree: f64,
    pub components: usize,
}

impl GraphMetadata {
    pub fn of(g: &Graph) -> Self {
        Self {
            n: g.n(),
            model: g.model().clone(),
            edges: g.edge_count(),
            mean_degree: g.mean_degree(),
            components: g.component_count(),
        }
    }
}

pub fn sidecar_path(graph_path: &Path) -> PathBuf {
    let mut name = graph_path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes the edge list and its metadata sidecar.
pub fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    write_text(path, &format_graph(g))?;
    let meta = serde_json::to_string_pretty(&GraphMetadata::of(g))?;
    write_text(&sidecar_path(path), &(meta + "\n"))
}

/// Reads an edge list; the model tag comes from the sidecar when present.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let g = parse_graph(&read_text(path)?)?;
    let sidecar = sidecar_path(path);
    if !sidecar.exists() {
        return Ok(g);
    }
    let meta: GraphMetadata = serde_json::from_str(&read_text(&sidecar)?)?;
    if meta.n != g.n() {
        return Err(FgftError::DimensionMismatch {
            expected: g.n(),
            got: meta.n,
        });
    }
    Graph::from_weights(g.weights().clone(), meta.model)
}

// ---------------------------------------------------------------------------
// factored transforms

/// Header `n J`, then `p q theta` per rotation, the permutation on one line
/// and the estimated eigenvalues on one line. The stored `J` is the number
/// of rotations actually used.
pub fn format_transform(t: &FactoredTransform) -> String {
    let mut out = format!("{} {}\n", t.n(), t.j_actual());
    for r in t.rotations() {
        writeln!(out, "{} {} {}", r.p() + 1, r.q() + 1, fmt_real(r.theta())).unwrap();
    }
    let perm: Vec<String> = t.perm().iter().map(|i| (i + 1).to_string()).collect();
    writeln!(out, "{}", perm.join(" ")).unwrap();
    let lambdas: Vec<String> = t.lambda_hat().iter().map(|&v| fmt_real(v)).collect();
    writeln!(out, "{}", lambdas.join(" ")).unwrap();
    out
}

pub fn parse_transform(text: &str) -> Result<FactoredTransform> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| FgftError::parse(1, "empty transform file"))?;
    let (n, j) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        [n, j] => (parse_usize(n, ln)?, parse_usize(j, ln)?),
        _ => return Err(FgftError::parse(ln, "expected header 'n J'")),
    };
    let mut rotations = Vec::with_capacity(j);
    for _ in 0..j {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FgftError::parse(0, "missing rotation lines"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [p, q, theta] = toks[..] else {
            return Err(FgftError::parse(ln, "expected 'p q theta'"));
        };
        let p = parse_index(p, n, ln)?;
        let q = parse_index(q, n, ln)?;
        let theta = parse_real(theta, ln)?;
        rotations.push(GivensRotation::new(p, q, theta).map_err(|e| FgftError::parse(ln, e.to_string()))?);
    }
    let (ln, line) = lines
        .next()
        .ok_or_else(|| FgftError::parse(0, "missing permutation line"))?;
    let perm = line
        .split_whitespace()
        .map(|t| parse_index(t, n, ln))
        .collect::<Result<Vec<_>>>()?;
    let (ln, line) = lines
        .next()
        .ok_or_else(|| FgftError::parse(0, "missing eigenvalue line"))?;
    let lambda_hat = line
        .split_whitespace()
        .map(|t| parse_real(t, ln))
        .collect::<Result<Vec<_>>>()?;
    if let Some((ln, _)) = lines.next() {
        return Err(FgftError::parse(ln, "trailing content after eigenvalues"));
    }
    FactoredTransform::new(n, rotations, perm, lambda_hat, j)
}

// ---------------------------------------------------------------------------
// signals

pub fn format_signal(x: &SignalVector) -> String {
    let mut out = format!("n={} domain={}\n", x.len(), x.domain);
    for &v in &x.values {
        writeln!(out, "{}", fmt_real(v)).unwrap();
    }
    out
}

pub fn parse_signal(text: &str) -> Result<SignalVector> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| FgftError::parse(1, "empty signal file"))?;
    let mut n = None;
    let mut domain = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(parse_usize(v, ln)?),
            Some(("domain", v)) => domain = Some(v.parse::<Domain>().map_err(|e| FgftError::parse(ln, e.to_string()))?),
            _ => return Err(FgftError::parse(ln, format!("unexpected header token '{tok}'"))),
        }
    }
    let (Some(n), Some(domain)) = (n, domain) else {
        return Err(FgftError::parse(ln, "expected header 'n=<n> domain=<vertex|spectral>'"));
    };
    let values = lines
        .map(|(ln, line)| parse_real(line, ln))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n {
        return Err(FgftError::parse(
            ln,
            format!("header announces {n} values, found {}", values.len()),
        ));
    }
    Ok(SignalVector { values, domain })
}

// ---------------------------------------------------------------------------
// CSV outputs

/// One row per mode: `k,lambda,u_1,…,u_n` where `u_i` is entry `i` of mode `k`.
pub fn format_eigen_csv(e: &EigenDecomposition) -> String {
    let n = e.n();
    let mut out = String::from("k,lambda");
    for i in 1..=n {
        write!(out, ",u{i}").unwrap();
    }
    out.push('\n');
    for k in 0..n {
        write!(out, "{},{}", k + 1, fmt_real(e.eigenvalues()[k])).unwrap();
        for v in e.mode(k).iter() {
            write!(out, ",{}", fmt_real(*v)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Header `k\J,<J1>,…`, then `k,<values>` per mode.
pub fn format_surface_csv(s: &ErrorSurface) -> String {
    let mut out = String::from("k\\J");
    for j in &s.j_grid {
        write!(out, ",{j}").unwrap();
    }
    out.push('\n');
    for (k, row) in s.values.iter().enumerate() {
        write!(out, "{}", k + 1).unwrap();
        for &v in row {
            write!(out, ",{}", fmt_real(v)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_surface_csv(text: &str) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| FgftError::parse(1, "empty surface file"))?;
    let mut cols = header.split(',');
    if cols.next() != Some("k\\J") {
        return Err(FgftError::parse(ln, "expected header starting with 'k\\J'"));
    }
    let grid = cols.map(|t| parse_usize(t, ln)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (ln, line) in lines {
        let mut toks = line.split(',');
        let k = parse_usize(toks.next().unwrap_or(""), ln)?;
        if k != rows.len() + 1 {
            return Err(FgftError::parse(
                ln,
                format!("expected mode {}, found {k}", rows.len() + 1),
            ));
        }
        let row = toks.map(|t| parse_real(t, ln)).collect::<Result<Vec<_>>>()?;
        if row.len() != grid.len() {
            return Err(FgftError::parse(ln, "row length does not match the J grid"));
        }
        rows.push(row);
    }
    Ok((grid, rows))
}

/// `k,f`.
pub fn format_density_csv(density: &[usize]) -> String {
    let mut out = String::from("k,f\n");
    for (k, f) in density.iter().enumerate() {
        writeln!(out, "{},{f}", k + 1).unwrap();
    }
    out
}

/// `k,err1_sq,err2_sq` at `J = 0`.
pub fn format_baselines_csv(err1_sq: &[f64], err2_sq: &[f64]) -> String {
    let mut out = String::from("k,err1_sq,err2_sq\n");
    for (k, (a, b)) in err1_sq.iter().zip(err2_sq).enumerate() {
        writeln!(out, "{},{},{}", k + 1, fmt_real(*a), fmt_real(*b)).unwrap();
    }
    out
}
