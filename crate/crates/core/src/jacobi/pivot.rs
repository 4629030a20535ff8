use nalgebra::DMatrix;

/// Per-row maxima of the off-diagonal magnitudes of a symmetric matrix.
///
/// Initialization scans the whole matrix once; after a rotation on `(p, q)`
/// rows `p` and `q` are rescanned, and any other row is rescanned only when
/// its recorded maximum sat in column `p` or `q`. Ties resolve to the
/// smallest column, and [`PivotIndex::best`] resolves ties between rows to
/// the smallest row, which together select the lexicographically smallest
/// `(p, q)` among maximal entries.
#[derive(Debug, Clone)]
pub struct PivotIndex {
    row_max_col: Vec<usize>,
    row_max_val: Vec<f64>,
    work: u64,
}

impl PivotIndex {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut index = Self {
            row_max_col: (0..n).collect(),
            row_max_val: vec![0.0; n],
            work: 0,
        };
        for r in 0..n {
            index.rescan(m, r);
        }
        index
    }

    // Symmetric storage: row r is read as column r, which is contiguous.
    fn rescan(&mut self, m: &DMatrix<f64>, r: usize) {
        let column = m.column(r);
        let mut best_col = r;
        let mut best_val = 0.0;
        for (j, v) in column.iter().enumerate() {
            if j == r {
                continue;
            }
            let v = v.abs();
            if v > best_val {
                best_val = v;
                best_col = j;
            }
        }
        self.work += column.len() as u64;
        self.row_max_col[r] = best_col;
        self.row_max_val[r] = best_val;
    }

    fn offer(&mut self, r: usize, col: usize, v: f64) {
        self.work += 1;
        let cur = self.row_max_val[r];
        if v > cur || (v == cur && v > 0.0 && col < self.row_max_col[r]) {
            self.row_max_val[r] = v;
            self.row_max_col[r] = col;
        }
    }

    /// Refreshes the index after `m` was conjugated by a rotation on `(p, q)`.
    pub fn update(&mut self, m: &DMatrix<f64>, p: usize, q: usize) {
        for r in 0..m.nrows() {
            if r == p || r == q {
                continue;
            }
            let col = self.row_max_col[r];
            if col == p || col == q {
                self.rescan(m, r);
            } else {
                self.offer(r, p, m[(r, p)].abs());
                self.offer(r, q, m[(r, q)].abs());
            }
        }
        self.rescan(m, p);
        self.rescan(m, q);
    }

    /// Largest off-diagonal entry as `(p, q, |m_pq|)` with `p < q`, or `None`
    /// when every off-diagonal entry is zero.
    pub fn best(&mut self) -> Option<(usize, usize, f64)> {
        self.work += self.row_max_val.len() as u64;
        let mut best_row = None;
        let mut best_val = 0.0;
        for (r, &v) in self.row_max_val.iter().enumerate() {
            if v > best_val {
                best_val = v;
                best_row = Some(r);
            }
        }
        let r = best_row?;
        let c = self.row_max_col[r];
        Some((r.min(c), r.max(c), best_val))
    }

    pub fn row_max(&self, r: usize) -> (usize, f64) {
        (self.row_max_col[r], self.row_max_val[r])
    }

    /// Matrix entries examined so far by index maintenance and pivot lookup.
    pub fn work(&self) -> u64 {
        self.work
    }
}

/// Full O(n²) scan for the lexicographically smallest maximal off-diagonal
/// entry of the upper triangle.
pub fn scan_pivot(m: &DMatrix<f64>) -> Option<(usize, usize, f64)> {
    let n = m.nrows();
    let mut best = None;
    let mut best_val = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            let v = m[(p, q)].abs();
            if v > best_val {
                best_val = v;
                best = Some((p, q));
            }
        }
    }
    best.map(|(p, q)| (p, q, best_val))
}
