//! Approximate fast graph Fourier transforms.
//!
//! A graph Laplacian `L = D - W` is approximately diagonalized by `J` steps
//! of classical Jacobi, giving `L ≈ S_1⋯S_J·Λ̂·S_Jᵀ⋯S_1ᵀ` with each `S_j` a
//! Givens rotation. Applying `Ûᵀ = S_Jᵀ⋯S_1ᵀ` to a signal costs `6J` flops.
//!
//! - [`graph`]: Erdős–Rényi, stochastic block model and random sensor graphs.
//! - [`jacobi`]: the rotation subproblem, truncated Jacobi and the exact
//!   eigendecomposition used as ground truth.
//! - [`transform`]: the factored operator and its dense form.
//! - [`spectral`]: per-mode error measures, baselines and eigenvalue density.
//! - [`experiment`]: multi-draw error surfaces with median aggregation.
//! - [`io`]: text and CSV formats.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod jacobi;
pub mod par;
pub mod spectral;
pub mod transform;

pub use error::{FgftError, Result};
pub use graph::{Graph, LaplacianMatrix, RngSpec};
pub use jacobi::{full_jacobi, truncated_jacobi, EigenDecomposition, GivensRotation, JacobiRun};
pub use transform::{Domain, FactoredTransform, SignalVector};
