//! The approximate Fourier basis `Û = S_1⋯S_J·P` as a sequence of Givens
//! rotations followed by a column permutation `P` that orders modes by
//! estimated frequency.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{FgftError, Result};
use crate::graph::LaplacianMatrix;
use crate::jacobi::GivensRotation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Vertex,
    Spectral,
}

impl Domain {
    pub fn as_str(&self) -> &'static str {
        match self {
            Domain::Vertex => "vertex",
            Domain::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Domain {
    type Err = FgftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(Domain::Vertex),
            "spectral" => Ok(Domain::Spectral),
            other => Err(FgftError::invalid(format!("unknown signal domain '{other}'"))),
        }
    }
}

/// A graph signal tagged with the domain it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVector {
    pub values: Vec<f64>,
    pub domain: Domain,
}

impl SignalVector {
    pub fn vertex(values: Vec<f64>) -> Self {
        Self {
            values,
            domain: Domain::Vertex,
        }
    }

    pub fn spectral(values: Vec<f64>) -> Self {
        Self {
            values,
            domain: Domain::Spectral,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Arithmetic performed by an instrumented transform application.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub mul: u64,
    pub add: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.mul + self.add
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactoredTransform {
    n: usize,
    rotations: Vec<GivensRotation>,
    perm: Vec<usize>,
    lambda_hat: Vec<f64>,
    j_requested: usize,
}

impl FactoredTransform {
    /// `perm[k]` is the column of `S_1⋯S_J` that becomes mode `k`, and
    /// `lambda_hat[k]` its estimated eigenvalue.
    pub fn new(
        n: usize,
        rotations: Vec<GivensRotation>,
        perm: Vec<usize>,
        lambda_hat: Vec<f64>,
        j_requested: usize,
    ) -> Result<Self> {
        if perm.len() != n {
            return Err(FgftError::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        if lambda_hat.len() != n {
            return Err(FgftError::DimensionMismatch {
                expected: n,
                got: lambda_hat.len(),
            });
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(FgftError::invalid("permutation is not a bijection"));
            }
        }
        if lambda_hat.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(FgftError::invalid("estimated eigenvalues must be nondecreasing"));
        }
        for r in &rotations {
            r.check_dimension(n)?;
        }
        Ok(Self {
            n,
            rotations,
            perm,
            lambda_hat,
            j_requested,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rotations(&self) -> &[GivensRotation] {
        &self.rotations
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn lambda_hat(&self) -> &[f64] {
        &self.lambda_hat
    }

    pub fn j_requested(&self) -> usize {
        self.j_requested
    }

    pub fn j_actual(&self) -> usize {
        self.rotations.len()
    }

    fn check_input(&self, x: &SignalVector, domain: Domain) -> Result<()> {
        if x.domain != domain {
            return Err(FgftError::WrongDomain {
                expected: domain.as_str(),
                got: x.domain.as_str(),
            });
        }
        if x.len() != self.n {
            return Err(FgftError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `Ûᵀx = Pᵀ·S_Jᵀ⋯S_1ᵀ·x`, costing 6 flops per rotation.
    pub fn analyze(&self, x: &SignalVector) -> Result<SignalVector> {
        self.check_input(x, Domain::Vertex)?;
        let mut y = x.values.clone();
        for r in &self.rotations {
            r.apply_transpose(&mut y);
        }
        Ok(SignalVector::spectral(self.perm.iter().map(|&i| y[i]).collect()))
    }

    /// [`Self::analyze`] with every multiplication and addition tallied.
    pub fn analyze_counted(&self, x: &SignalVector) -> Result<(SignalVector, OpCount)> {
        self.check_input(x, Domain::Vertex)?;
        let mut ops = OpCount::default();
        let mut y = x.values.clone();
        for r in &self.rotations {
            let (p, q, c, s) = (r.p(), r.q(), r.cos(), r.sin());
            let (cp, sq) = (c * y[p], s * y[q]);
            let (cq, sp) = (c * y[q], s * y[p]);
            ops.mul += 4;
            y[p] = cp + sq;
            y[q] = cq - sp;
            ops.add += 2;
        }
        Ok((SignalVector::spectral(self.perm.iter().map(|&i| y[i]).collect()), ops))
    }

    /// Inverse of [`Self::analyze`]: `Û·x̃ = S_1⋯S_J·P·x̃`.
    pub fn synthesize(&self, xt: &SignalVector) -> Result<SignalVector> {
        self.check_input(xt, Domain::Spectral)?;
        let mut y = vec![0.0; self.n];
        for (k, &i) in self.perm.iter().enumerate() {
            y[i] = xt.values[k];
        }
        for r in self.rotations.iter().rev() {
            r.apply(&mut y);
        }
        Ok(SignalVector::vertex(y))
    }

    /// Dense `Û`; column `k` is the `k`-th approximate mode.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.n, self.n);
        for r in &self.rotations {
            r.rotate_columns(&mut m);
        }
        m.select_columns(self.perm.iter())
    }

    /// `‖L - Û·Λ̂·Ûᵀ‖_F`.
    pub fn approx_laplacian_residual(&self, l: &LaplacianMatrix) -> Result<f64> {
        if l.n() != self.n {
            return Err(FgftError::DimensionMismatch {
                expected: self.n,
                got: l.n(),
            });
        }
        let u = self.to_dense();
        let scaled = &u * DMatrix::from_diagonal(&DVector::from_column_slice(&self.lambda_hat));
        let approx = scaled * u.transpose();
        Ok((l.matrix() - approx).norm())
    }
}
