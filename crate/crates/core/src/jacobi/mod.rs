//! Classical (largest-pivot) Jacobi on symmetric matrices, either truncated
//! after a fixed number of rotations or run to convergence.

mod pivot;
mod rotation;

use nalgebra::DMatrix;

pub use pivot::{scan_pivot, PivotIndex};
pub use rotation::{conjugate, conjugate_in_place, offdiag_norm_sq, GivensRotation};

use crate::error::{FgftError, Result};
use crate::graph::{sort_permutation, LaplacianMatrix};
use crate::transform::FactoredTransform;

/// Relative tolerance used for the exact eigendecomposition.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Solves one Jacobi subproblem: the rotation annihilating the largest
/// off-diagonal entry. Returns [`FgftError::AlreadyDiagonal`] when there is
/// no off-diagonal mass left.
pub fn solve_subproblem(m: &DMatrix<f64>) -> Result<GivensRotation> {
    let (p, q, _) = scan_pivot(m).ok_or(FgftError::AlreadyDiagonal)?;
    GivensRotation::annihilating(m, p, q)
}

/// One Jacobi step as it happened.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub rotation: GivensRotation,
    /// Value of the annihilated entry before the rotation.
    pub pivot: f64,
}

/// Incremental Jacobi state: the working matrix `L_j`, the pivot index and
/// the rotations applied so far. Optionally tracks the dense product
/// `S_1⋯S_j`, which lets callers snapshot `Û` at any prefix in O(n²).
#[derive(Debug, Clone)]
pub struct JacobiRun {
    work: DMatrix<f64>,
    pivots: PivotIndex,
    rotations: Vec<GivensRotation>,
    basis: Option<DMatrix<f64>>,
    offdiag_sq: f64,
}

impl JacobiRun {
    pub fn new(l: &LaplacianMatrix) -> Self {
        let work = l.matrix().clone();
        let pivots = PivotIndex::new(&work);
        let offdiag_sq = offdiag_norm_sq(&work);
        Self {
            work,
            pivots,
            rotations: Vec::new(),
            basis: None,
            offdiag_sq,
        }
    }

    pub fn with_basis(l: &LaplacianMatrix) -> Self {
        let mut run = Self::new(l);
        run.basis = Some(DMatrix::identity(l.n(), l.n()));
        run
    }

    pub fn n(&self) -> usize {
        self.work.nrows()
    }

    /// Applies one rotation; `None` once the working matrix is diagonal.
    pub fn step(&mut self) -> Option<Step> {
        let (p, q, _) = self.pivots.best()?;
        let pivot = self.work[(p, q)];
        let rotation = GivensRotation::annihilating(&self.work, p, q).ok()?;
        conjugate_in_place(&mut self.work, &rotation).expect("rotation bound to working dimension");
        // zero in exact arithmetic; drop the rounding residue
        self.work[(p, q)] = 0.0;
        self.work[(q, p)] = 0.0;
        self.pivots.update(&self.work, p, q);
        if let Some(basis) = self.basis.as_mut() {
            rotation.rotate_columns(basis);
        }
        self.offdiag_sq -= 2.0 * pivot * pivot;
        self.rotations.push(rotation);
        Some(Step { rotation, pivot })
    }

    /// Steps until `total` rotations have been applied or the matrix is
    /// diagonal. Returns the rotation count reached.
    pub fn advance_to(&mut self, total: usize) -> usize {
        while self.rotations.len() < total {
            if self.step().is_none() {
                break;
            }
        }
        self.rotations.len()
    }

    /// Steps until `‖L_j‖²_offdiag ≤ tol²·‖L‖²_F`, failing after `cap` total
    /// rotations.
    pub fn run_to_tolerance(&mut self, tol: f64, cap: usize) -> Result<()> {
        if !(tol > 0.0) {
            return Err(FgftError::invalid(format!("tolerance must be positive, got {tol}")));
        }
        // Frobenius norm is invariant under the rotations.
        let threshold = tol * tol * self.work.norm_squared();
        // The running value carries absolute rounding error near eps·‖L‖²,
        // far above the threshold, so it is resynced once per sweep.
        let sweep = (self.n() * self.n().saturating_sub(1) / 2).max(1);
        let mut since_sync = 0;
        loop {
            if self.offdiag_sq <= threshold || since_sync >= sweep {
                let exact = offdiag_norm_sq(&self.work);
                if exact <= threshold {
                    return Ok(());
                }
                self.offdiag_sq = exact;
                since_sync = 0;
            }
            since_sync += 1;
            if self.rotations.len() >= cap {
                return Err(FgftError::NotConverged { steps: cap });
            }
            if self.step().is_none() {
                return Ok(());
            }
        }
    }

    pub fn working_matrix(&self) -> &DMatrix<f64> {
        &self.work
    }

    pub fn rotations(&self) -> &[GivensRotation] {
        &self.rotations
    }

    /// Off-diagonal mass tracked through the exact decrease per step.
    pub fn tracked_offdiag_norm_sq(&self) -> f64 {
        self.offdiag_sq
    }

    pub fn pivot_work(&self) -> u64 {
        self.pivots.work()
    }

    pub fn pivot_index(&self) -> &PivotIndex {
        &self.pivots
    }

    /// Column order sorting the current diagonal nondecreasingly (stable).
    pub fn frequency_order(&self) -> Vec<usize> {
        let diag: Vec<f64> = self.work.diagonal().iter().copied().collect();
        sort_permutation(&diag)
    }

    /// Factored transform for the rotations applied so far.
    pub fn transform(&self, j_requested: usize) -> FactoredTransform {
        let perm = self.frequency_order();
        let lambda_hat = perm.iter().map(|&i| self.work[(i, i)]).collect();
        FactoredTransform::new(self.n(), self.rotations.clone(), perm, lambda_hat, j_requested)
            .expect("jacobi state yields a valid transform")
    }

    /// Dense `Û` with columns in frequency order, if the basis is tracked.
    pub fn sorted_basis(&self) -> Option<DMatrix<f64>> {
        let basis = self.basis.as_ref()?;
        let perm = self.frequency_order();
        Some(basis.select_columns(perm.iter()))
    }
}

/// Truncated Jacobi: at most `j` rotations, fewer only if the matrix becomes
/// exactly diagonal first.
pub fn truncated_jacobi(l: &LaplacianMatrix, j: usize) -> FactoredTransform {
    let mut run = JacobiRun::new(l);
    run.advance_to(j);
    run.transform(j)
}

/// Iteration cap for runs to convergence: 20 sweeps' worth of pivots.
pub fn iteration_cap(n: usize) -> usize {
    20 * n * n.saturating_sub(1) / 2
}

/// Runs the truncated algorithm with no budget, stopping at the same rule as
/// [`full_jacobi`].
pub fn factorize_to_tolerance(l: &LaplacianMatrix, tol: f64) -> Result<FactoredTransform> {
    let mut run = JacobiRun::new(l);
    run.run_to_tolerance(tol, iteration_cap(l.n()))?;
    let used = run.rotations().len();
    Ok(run.transform(used))
}

/// Exact orthonormal eigenbasis with nondecreasing eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors, column `k` paired with eigenvalue `k`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn mode(&self, k: usize) -> nalgebra::DVectorView<'_, f64> {
        self.eigenvectors.column(k)
    }
}

/// Flips each column so its largest-magnitude entry (first one on ties) is
/// positive.
fn normalize_signs(u: &mut DMatrix<f64>) {
    for mut col in u.column_iter_mut() {
        let mut pivot = 0.0f64;
        for &v in col.iter() {
            if v.abs() > pivot.abs() {
                pivot = v;
            }
        }
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
}

/// Jacobi to convergence; the ground-truth eigendecomposition.
pub fn full_jacobi(l: &LaplacianMatrix, tol: f64) -> Result<EigenDecomposition> {
    let mut run = JacobiRun::with_basis(l);
    run.run_to_tolerance(tol, iteration_cap(l.n()))?;
    let perm = run.frequency_order();
    let eigenvalues = perm.iter().map(|&i| run.work[(i, i)]).collect();
    let mut eigenvectors = run.sorted_basis().expect("basis tracked");
    normalize_signs(&mut eigenvectors);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
