//! Monte Carlo error analysis: per-draw factorization with snapshots along a
//! J grid, then elementwise medians across draws.

mod config;
mod median;
mod output;
mod presets;

use nalgebra::DMatrix;
use serde::Serialize;

pub use config::{
    default_j_grid, ExperimentConfig, GraphModel, ModelKind, DEFAULT_AVERAGE_DEGREE, DEFAULT_COMMUNITIES,
    DEFAULT_DRAWS, DEFAULT_GRID_POINTS, DEFAULT_N, DEFAULT_TAU,
};
pub use median::{count_median, elementwise_median, lower_median, median_defined, vector_median};
pub use output::{gnuplot_script, write_result, SummaryFile};
pub use presets::{reproduce, Preset};

use crate::error::{FgftError, Result};
use crate::graph::{degree_permutation, laplacian, LaplacianMatrix, RngSpec};
use crate::jacobi::{full_jacobi, EigenDecomposition, JacobiRun, DEFAULT_TOLERANCE};
use crate::par::{map_indexed, Execution};
use crate::spectral::{
    eigenvalue_density, err1, err1_baseline, err2, err2_baseline, normalize_surface, orient, ErrorSurface, SurfaceKind,
};

/// Validated, strictly increasing list of rotation counts at which the
/// single-pass factorization is snapshotted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotSchedule {
    points: Vec<usize>,
}

impl SnapshotSchedule {
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn j_max(&self) -> usize {
        self.points.last().copied().unwrap_or(0)
    }
}

pub fn snapshot_schedule(j_max: usize, grid: &[usize]) -> Result<SnapshotSchedule> {
    if grid.is_empty() {
        return Err(FgftError::invalid("empty J grid"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FgftError::invalid("J grid must be strictly increasing"));
    }
    if let Some(&last) = grid.last() {
        if last > j_max {
            return Err(FgftError::invalid(format!(
                "J grid value {last} exceeds budget {j_max}"
            )));
        }
    }
    Ok(SnapshotSchedule { points: grid.to_vec() })
}

/// Squared `err1` and `err2` of every column of `u_hat` (frequency order),
/// each column oriented against its exact counterpart first.
pub fn mode_errors(
    exact: &EigenDecomposition,
    l: &LaplacianMatrix,
    u_hat: &DMatrix<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = exact.n();
    if u_hat.shape() != (n, n) {
        return Err(FgftError::DimensionMismatch {
            expected: n,
            got: u_hat.ncols(),
        });
    }
    let mut e1 = Vec::with_capacity(n);
    let mut e2 = Vec::with_capacity(n);
    for k in 0..n {
        let col = orient(&u_hat.column(k).into_owned(), exact.mode(k));
        e1.push(err1(exact, &col, k)?.powi(2));
        e2.push(err2(exact.eigenvalues(), l, &col, k)?.powi(2));
    }
    Ok((e1, e2))
}

/// Everything measured on one random draw. Error matrices are indexed
/// `[k][grid position]` and hold squared errors.
#[derive(Debug, Clone)]
pub struct DrawResult {
    pub draw: usize,
    pub err1: Vec<Vec<f64>>,
    pub err2: Vec<Vec<f64>>,
    pub err1_norm: Vec<Vec<f64>>,
    pub err2_norm: Vec<Vec<f64>>,
    pub baseline_err1: Vec<f64>,
    pub baseline_err2: Vec<f64>,
    pub density: Vec<usize>,
    pub eigenvalues: Vec<f64>,
    pub summary: DrawSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrawSummary {
    pub draw: usize,
    pub mean_degree: f64,
    pub edges: usize,
    pub components: usize,
    /// Rotations actually applied at the largest grid budget.
    pub rotations_used: usize,
}

fn transpose(cols: Vec<Vec<f64>>, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|k| cols.iter().map(|c| c[k]).collect()).collect()
}

/// Generates draw `d` (stream `d` of the base seed) and evaluates all error
/// kinds at every point of `schedule` in one truncated-Jacobi pass.
pub fn run_draw(
    model: &GraphModel,
    n: usize,
    seed: u64,
    d: usize,
    schedule: &SnapshotSchedule,
    delta: f64,
) -> Result<DrawResult> {
    let graph = model.generate(n, RngSpec::new(seed, d as u64))?;
    let l = laplacian(&graph);
    let exact = full_jacobi(&l, DEFAULT_TOLERANCE)?;
    let sigma = degree_permutation(&graph);
    let lambdas = exact.eigenvalues();

    let mut baseline_err1 = Vec::with_capacity(n);
    let mut baseline_err2 = Vec::with_capacity(n);
    for k in 0..n {
        baseline_err1.push(err1_baseline(&exact, &sigma, k)?.powi(2));
        baseline_err2.push(err2_baseline(&l, lambdas, &sigma, k)?.powi(2));
    }
    let density = eigenvalue_density(lambdas, delta)?;

    let mut run = JacobiRun::with_basis(&l);
    let mut cols1 = Vec::with_capacity(schedule.points().len());
    let mut cols2 = Vec::with_capacity(schedule.points().len());
    for &j in schedule.points() {
        run.advance_to(j);
        let u_hat = run.sorted_basis().expect("basis tracked");
        let (e1, e2) = mode_errors(&exact, &l, &u_hat)?;
        cols1.push(e1);
        cols2.push(e2);
    }
    let grid = schedule.points().to_vec();
    let raw1 = ErrorSurface {
        kind: SurfaceKind::Err1,
        values: transpose(cols1, n),
        j_grid: grid.clone(),
        density: density.clone(),
        baseline: baseline_err1.clone(),
        delta,
    };
    let raw2 = ErrorSurface {
        kind: SurfaceKind::Err2,
        values: transpose(cols2, n),
        baseline: baseline_err2.clone(),
        ..raw1.clone()
    };
    let norm1 = normalize_surface(&raw1)?;
    let norm2 = normalize_surface(&raw2)?;

    Ok(DrawResult {
        draw: d,
        err1: raw1.values,
        err2: raw2.values,
        err1_norm: norm1.values,
        err2_norm: norm2.values,
        baseline_err1,
        baseline_err2,
        density,
        eigenvalues: lambdas.to_vec(),
        summary: DrawSummary {
            draw: d,
            mean_degree: graph.mean_degree(),
            edges: graph.edge_count(),
            components: graph.component_count(),
            rotations_used: run.rotations().len(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config: ExperimentConfig,
    pub version: &'static str,
}

/// Medians over all draws of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub err1: ErrorSurface,
    pub err2: ErrorSurface,
    pub err1_norm: ErrorSurface,
    pub err2_norm: ErrorSurface,
    /// Per-cell counts of undefined entries left out of the normalized medians.
    pub undefined_err1_norm: Vec<Vec<usize>>,
    pub undefined_err2_norm: Vec<Vec<usize>>,
    pub density: Vec<usize>,
    pub baseline_err1: Vec<f64>,
    pub baseline_err2: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub draws: Vec<DrawSummary>,
    pub provenance: Provenance,
}

impl ExperimentResult {
    pub fn surface(&self, kind: SurfaceKind) -> &ErrorSurface {
        match kind {
            SurfaceKind::Err1 => &self.err1,
            SurfaceKind::Err2 => &self.err2,
            SurfaceKind::Err1Norm => &self.err1_norm,
            SurfaceKind::Err2Norm => &self.err2_norm,
        }
    }

    pub fn j_grid(&self) -> &[usize] {
        &self.err1.j_grid
    }
}

/// Merges per-draw results (in draw order) into elementwise medians.
pub fn aggregate(cfg: &ExperimentConfig, draws: &[DrawResult]) -> Result<ExperimentResult> {
    if draws.is_empty() {
        return Err(FgftError::invalid("no draws to aggregate"));
    }
    let grid = cfg.grid();
    let density = count_median(&draws.iter().map(|d| &d.density).collect::<Vec<_>>());
    let baseline_err1 = vector_median(&draws.iter().map(|d| &d.baseline_err1).collect::<Vec<_>>());
    let baseline_err2 = vector_median(&draws.iter().map(|d| &d.baseline_err2).collect::<Vec<_>>());
    let eigenvalues = vector_median(&draws.iter().map(|d| &d.eigenvalues).collect::<Vec<_>>());

    let surface = |kind: SurfaceKind, pick: fn(&DrawResult) -> &Vec<Vec<f64>>| {
        let (values, skipped) = elementwise_median(&draws.iter().map(pick).collect::<Vec<_>>());
        let baseline = match kind {
            SurfaceKind::Err1 | SurfaceKind::Err1Norm => baseline_err1.clone(),
            SurfaceKind::Err2 | SurfaceKind::Err2Norm => baseline_err2.clone(),
        };
        let s = ErrorSurface {
            kind,
            values,
            j_grid: grid.clone(),
            density: density.clone(),
            baseline,
            delta: cfg.delta,
        };
        (s, skipped)
    };
    let (err1, _) = surface(SurfaceKind::Err1, |d| &d.err1);
    let (err2, _) = surface(SurfaceKind::Err2, |d| &d.err2);
    let (err1_norm, undefined_err1_norm) = surface(SurfaceKind::Err1Norm, |d| &d.err1_norm);
    let (err2_norm, undefined_err2_norm) = surface(SurfaceKind::Err2Norm, |d| &d.err2_norm);

    Ok(ExperimentResult {
        err1,
        err2,
        err1_norm,
        err2_norm,
        undefined_err1_norm,
        undefined_err2_norm,
        density,
        baseline_err1,
        baseline_err2,
        eigenvalues,
        draws: draws.iter().map(|d| d.summary.clone()).collect(),
        provenance: Provenance {
            config: cfg.resolved()?,
            version: env!("CARGO_PKG_VERSION"),
        },
    })
}

/// Runs every draw with the given execution mode and aggregates. Any failing
/// draw fails the whole run.
pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Execution) -> Result<ExperimentResult> {
    cfg.validate()?;
    let model = cfg.graph_model()?;
    let grid = cfg.grid();
    let schedule = snapshot_schedule(cfg.j_max(), &grid)?;
    let results = map_indexed(cfg.draws, exec, |d| {
        run_draw(&model, cfg.n, cfg.seed, d, &schedule, cfg.delta)
    });
    let draws = results.into_iter().collect::<Result<Vec<_>>>()?;
    aggregate(cfg, &draws)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(cfg, Execution::default())
}
