//! Per-mode error measures between an approximate basis and the exact one.
//!
//! Mode indices are 0-based. Error functions return plain (unsquared)
//! norms; [`ErrorSurface`] stores squared values, which is what gets
//! aggregated and plotted.

use nalgebra::{DMatrix, DVector, DVectorView};

use crate::error::{FgftError, Result};
use crate::graph::LaplacianMatrix;
use crate::jacobi::EigenDecomposition;

/// Default half-width of the eigenvalue density window.
pub const DEFAULT_DELTA: f64 = 0.25;

/// Squared baselines below this make normalized entries undefined.
pub const BASELINE_FLOOR: f64 = 1e-14;

/// Sentinel stored for undefined normalized entries.
pub const UNDEFINED: f64 = f64::NAN;

pub fn is_undefined(v: f64) -> bool {
    v.is_nan()
}

fn check_mode(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(FgftError::invalid(format!("mode index {k} out of range for n = {n}")));
    }
    Ok(())
}

fn check_len(v: usize, n: usize) -> Result<()> {
    if v != n {
        return Err(FgftError::DimensionMismatch { expected: n, got: v });
    }
    Ok(())
}

/// Returns `û` or `-û`, whichever has a nonnegative inner product with `u`.
pub fn orient(u_hat: &DVector<f64>, u: DVectorView<'_, f64>) -> DVector<f64> {
    if u.dot(u_hat) >= 0.0 {
        u_hat.clone()
    } else {
        -u_hat
    }
}

/// Orients every column of `u_hat` against the matching column of `u`.
pub fn orient_columns(u: &DMatrix<f64>, u_hat: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = u_hat.clone();
    for (k, mut col) in out.column_iter_mut().enumerate() {
        if u.column(k).dot(&col) < 0.0 {
            col.neg_mut();
        }
    }
    out
}

/// `‖δ_k - Uᵀû_k‖₂` for an already oriented `û_k`.
pub fn err1(exact: &EigenDecomposition, u_hat_k: &DVector<f64>, k: usize) -> Result<f64> {
    let n = exact.n();
    check_mode(k, n)?;
    check_len(u_hat_k.len(), n)?;
    let mut coeffs = exact.eigenvectors().tr_mul(u_hat_k);
    coeffs[k] -= 1.0;
    Ok(coeffs.norm())
}

fn impulse(n: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[i] = 1.0;
    e
}

/// `err1` of the zero-rotation basis, whose mode `k` is `δ_σ(k)`.
pub fn err1_baseline(exact: &EigenDecomposition, sigma: &[usize], k: usize) -> Result<f64> {
    let n = exact.n();
    check_len(sigma.len(), n)?;
    check_mode(k, n)?;
    let u_hat = orient(&impulse(n, sigma[k]), exact.mode(k));
    err1(exact, &u_hat, k)
}

/// `‖L·û_k - λ_k·û_k‖₂` with the exact eigenvalue `λ_k`.
pub fn err2(lambdas: &[f64], l: &LaplacianMatrix, u_hat_k: &DVector<f64>, k: usize) -> Result<f64> {
    let n = l.n();
    check_len(lambdas.len(), n)?;
    check_mode(k, n)?;
    check_len(u_hat_k.len(), n)?;
    let r = l.matrix() * u_hat_k - u_hat_k * lambdas[k];
    Ok(r.norm())
}

/// `err2` through the eigen-expansion `Σ_j (λ_j - λ_k)²·(u_jᵀû_k)²`.
pub fn err2_spectral(exact: &EigenDecomposition, u_hat_k: &DVector<f64>, k: usize) -> Result<f64> {
    let n = exact.n();
    check_mode(k, n)?;
    check_len(u_hat_k.len(), n)?;
    let lambdas = exact.eigenvalues();
    let coeffs = exact.eigenvectors().tr_mul(u_hat_k);
    let total: f64 = coeffs
        .iter()
        .zip(lambdas)
        .map(|(c, lj)| {
            let gap = lj - lambdas[k];
            gap * gap * c * c
        })
        .sum();
    Ok(total.sqrt())
}

pub fn err2_baseline(l: &LaplacianMatrix, lambdas: &[f64], sigma: &[usize], k: usize) -> Result<f64> {
    check_len(sigma.len(), l.n())?;
    check_mode(k, l.n())?;
    err2(lambdas, l, &impulse(l.n(), sigma[k]), k)
}

/// `f(k) = #{i : λ_i ∈ [λ_k - Δ, λ_k + Δ]}` for sorted eigenvalues.
pub fn eigenvalue_density(lambdas: &[f64], delta: f64) -> Result<Vec<usize>> {
    if !(delta > 0.0) {
        return Err(FgftError::invalid(format!(
            "density width must be positive, got {delta}"
        )));
    }
    if lambdas.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(FgftError::invalid("eigenvalues must be sorted"));
    }
    Ok(lambdas
        .iter()
        .map(|&lk| {
            let lo = lk - delta;
            let hi = lk + delta;
            let start = lambdas.partition_point(|&x| x < lo);
            let end = lambdas.partition_point(|&x| x <= hi);
            end - start
        })
        .collect())
}

/// `‖U - Û‖_F / ‖U‖_F`; `u_hat` columns must already be oriented.
pub fn global_error(exact: &EigenDecomposition, u_hat: &DMatrix<f64>) -> Result<f64> {
    let u = exact.eigenvectors();
    if u_hat.shape() != u.shape() {
        return Err(FgftError::DimensionMismatch {
            expected: u.nrows(),
            got: u_hat.nrows(),
        });
    }
    Ok((u - u_hat).norm() / u.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Err1,
    Err2,
    Err1Norm,
    Err2Norm,
}

impl SurfaceKind {
    pub const ALL: [SurfaceKind; 4] = [
        SurfaceKind::Err1,
        SurfaceKind::Err2,
        SurfaceKind::Err1Norm,
        SurfaceKind::Err2Norm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SurfaceKind::Err1 => "err1",
            SurfaceKind::Err2 => "err2",
            SurfaceKind::Err1Norm => "err1_norm",
            SurfaceKind::Err2Norm => "err2_norm",
        }
    }

    pub fn is_normalized(&self) -> bool {
        matches!(self, SurfaceKind::Err1Norm | SurfaceKind::Err2Norm)
    }

    fn normalized(&self) -> Option<SurfaceKind> {
        match self {
            SurfaceKind::Err1 => Some(SurfaceKind::Err1Norm),
            SurfaceKind::Err2 => Some(SurfaceKind::Err2Norm),
            _ => None,
        }
    }
}

/// Squared errors over modes `k` (rows) and rotation budgets (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSurface {
    pub kind: SurfaceKind,
    /// `values[k][g]` is the squared error of mode `k` at `j_grid[g]`.
    pub values: Vec<Vec<f64>>,
    pub j_grid: Vec<usize>,
    pub density: Vec<usize>,
    /// Squared error of each mode at `J = 0`.
    pub baseline: Vec<f64>,
    pub delta: f64,
}

impl ErrorSurface {
    pub fn n_modes(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, g: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[g]).collect()
    }

    /// Index of `j` in the grid.
    pub fn grid_position(&self, j: usize) -> Option<usize> {
        self.j_grid.iter().position(|&x| x == j)
    }
}

/// Divides each squared error by its mode's squared baseline. Modes whose
/// baseline is below [`BASELINE_FLOOR`] get [`UNDEFINED`].
pub fn normalize_surface(raw: &ErrorSurface) -> Result<ErrorSurface> {
    let kind = raw.kind.normalized().ok_or(FgftError::AlreadyNormalized)?;
    let values = raw
        .values
        .iter()
        .zip(&raw.baseline)
        .map(|(row, &base)| {
            row.iter()
                .map(|&v| if base < BASELINE_FLOOR { UNDEFINED } else { v / base })
                .collect()
        })
        .collect();
    Ok(ErrorSurface {
        kind,
        values,
        ..raw.clone()
    })
}
