use nalgebra::DMatrix;

use crate::error::{FgftError, Result};

/// Plane rotation `G(p, q, θ)`: identity except
/// `G[p][p] = G[q][q] = c`, `G[p][q] = -s`, `G[q][p] = s`.
///
/// Indices are 0-based; text formats shift them to 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    p: usize,
    q: usize,
    theta: f64,
    c: f64,
    s: f64,
}

impl GivensRotation {
    pub fn new(p: usize, q: usize, theta: f64) -> Result<Self> {
        if p >= q {
            return Err(FgftError::invalid(format!(
                "rotation indices must satisfy p < q, got ({p}, {q})"
            )));
        }
        if !theta.is_finite() {
            return Err(FgftError::invalid("rotation angle must be finite"));
        }
        Ok(Self {
            p,
            q,
            theta,
            c: theta.cos(),
            s: theta.sin(),
        })
    }

    /// Rotation annihilating entry `(p, q)` of the symmetric matrix `m` under
    /// `GᵀmG`, on the `k = 0` branch `θ = ½·arctan((m_qq - m_pp) / (2 m_pq)) + π/4`.
    ///
    /// The branch is evaluated as `θ = ½·atan2(2|m_pq|, sgn(m_pq)·(m_pp - m_qq))`,
    /// the same angle without the `+ π/4` cancellation: when `m_pq` is tiny
    /// next to the diagonal gap the literal form rounds `θ` to exactly 0 and
    /// the step would leave the entry untouched. The result lies in `(0, π/2)`.
    pub fn annihilating(m: &DMatrix<f64>, p: usize, q: usize) -> Result<Self> {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        let a = m[(p, p)];
        let b = m[(q, q)];
        let d = m[(p, q)];
        if d == 0.0 {
            return Err(FgftError::AlreadyDiagonal);
        }
        let gap = if d < 0.0 { b - a } else { a - b };
        Self::new(p, q, 0.5 * (2.0 * d.abs()).atan2(gap))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos(&self) -> f64 {
        self.c
    }

    pub fn sin(&self) -> f64 {
        self.s
    }

    pub fn check_dimension(&self, n: usize) -> Result<()> {
        if self.q >= n {
            return Err(FgftError::DimensionMismatch {
                expected: self.q + 1,
                got: n,
            });
        }
        Ok(())
    }

    /// `x ← Gᵀx`: four multiplications and two additions.
    #[inline]
    pub fn apply_transpose(&self, x: &mut [f64]) {
        let (xp, xq) = (x[self.p], x[self.q]);
        x[self.p] = self.c * xp + self.s * xq;
        x[self.q] = self.c * xq - self.s * xp;
    }

    /// `x ← Gx`.
    #[inline]
    pub fn apply(&self, x: &mut [f64]) {
        let (xp, xq) = (x[self.p], x[self.q]);
        x[self.p] = self.c * xp - self.s * xq;
        x[self.q] = self.s * xp + self.c * xq;
    }

    /// `m ← m·G`, touching columns `p` and `q` only.
    pub fn rotate_columns(&self, m: &mut DMatrix<f64>) {
        let (c, s) = (self.c, self.s);
        for i in 0..m.nrows() {
            let a = m[(i, self.p)];
            let b = m[(i, self.q)];
            m[(i, self.p)] = c * a + s * b;
            m[(i, self.q)] = c * b - s * a;
        }
    }

    pub fn to_dense(&self, n: usize) -> DMatrix<f64> {
        let mut g = DMatrix::identity(n, n);
        g[(self.p, self.p)] = self.c;
        g[(self.q, self.q)] = self.c;
        g[(self.p, self.q)] = -self.s;
        g[(self.q, self.p)] = self.s;
        g
    }
}

/// `m ← GᵀmG` for symmetric `m`, in O(n): only rows and columns `p`, `q`
/// change. Both triangles are written with identical values.
pub fn conjugate_in_place(m: &mut DMatrix<f64>, g: &GivensRotation) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(FgftError::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    g.check_dimension(n)?;
    let (p, q, c, s) = (g.p, g.q, g.c, g.s);
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let rp = m[(r, p)];
        let rq = m[(r, q)];
        let new_rp = c * rp + s * rq;
        let new_rq = c * rq - s * rp;
        m[(r, p)] = new_rp;
        m[(p, r)] = new_rp;
        m[(r, q)] = new_rq;
        m[(q, r)] = new_rq;
    }
    let a = m[(p, p)];
    let b = m[(q, q)];
    let d = m[(p, q)];
    let (cc, ss, cs) = (c * c, s * s, c * s);
    m[(p, p)] = cc * a + 2.0 * cs * d + ss * b;
    m[(q, q)] = ss * a - 2.0 * cs * d + cc * b;
    let pq = cs * (b - a) + (cc - ss) * d;
    m[(p, q)] = pq;
    m[(q, p)] = pq;
    Ok(())
}

/// Returns `GᵀmG`.
pub fn conjugate(m: &DMatrix<f64>, g: &GivensRotation) -> Result<DMatrix<f64>> {
    let mut out = m.clone();
    conjugate_in_place(&mut out, g)?;
    Ok(out)
}

/// Sum of squared off-diagonal entries.
pub fn offdiag_norm_sq(m: &DMatrix<f64>) -> f64 {
    let mut total = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j {
                total += m[(i, j)] * m[(i, j)];
            }
        }
    }
    total
}
