//! Random graph families and their combinatorial Laplacians.
//!
//! All generators consume a ChaCha8 stream selected by [`RngSpec`]. Draw order
//! is fixed: sensor coordinates first (x then y, vertex by vertex), then one
//! uniform per unordered pair `(i, j)`, `i < j`, in lexicographic order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FgftError, Result};

/// Seed plus stream selector; each draw of an experiment uses its own stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// How a graph was produced, with the parameters needed to regenerate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelTag {
    ErdosRenyi {
        p: f64,
        rng: RngSpec,
    },
    Sbm {
        m: usize,
        c: f64,
        epsilon: f64,
        q1: f64,
        q2: f64,
        rng: RngSpec,
    },
    Sensor {
        tau: f64,
        rng: RngSpec,
        coordinates: Vec<[f64; 2]>,
    },
    Custom,
}

impl ModelTag {
    pub fn name(&self) -> &'static str {
        match self {
            ModelTag::ErdosRenyi { .. } => "erdos_renyi",
            ModelTag::Sbm { .. } => "sbm",
            ModelTag::Sensor { .. } => "sensor",
            ModelTag::Custom => "custom",
        }
    }
}

/// Undirected weighted graph stored as a dense symmetric weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: DMatrix<f64>,
    model: ModelTag,
}

impl Graph {
    /// Builds a graph from a weight matrix, checking symmetry (exact), zero
    /// diagonal and nonnegativity.
    pub fn from_weights(weights: DMatrix<f64>, model: ModelTag) -> Result<Self> {
        let n = weights.nrows();
        if weights.ncols() != n {
            return Err(FgftError::DimensionMismatch {
                expected: n,
                got: weights.ncols(),
            });
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(FgftError::invalid(format!(
                    "nonzero diagonal weight at vertex {}",
                    i + 1
                )));
            }
            for j in (i + 1)..n {
                let w = weights[(i, j)];
                if w != weights[(j, i)] {
                    return Err(FgftError::invalid(format!(
                        "asymmetric weight at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(FgftError::invalid(format!(
                        "invalid weight {w} at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { weights, model })
    }

    /// Builds a custom graph from 0-based `(i, j, w)` triples.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = DMatrix::zeros(n, n);
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(FgftError::invalid(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(FgftError::invalid(format!("self-loop at vertex {i}")));
            }
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
        Self::from_weights(weights, ModelTag::Custom)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn model(&self) -> &ModelTag {
        &self.model
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.weights.row(i).sum()).collect()
    }

    /// Edges `(i, j, w)` with `i < j`, 0-based, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.weights[(i, j)];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn mean_degree(&self) -> f64 {
        self.degrees().iter().sum::<f64>() / self.n() as f64
    }

    /// Number of connected components (isolated vertices count as one each).
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for (u, w) in self.weights.column(v).iter().enumerate() {
                    if *w != 0.0 && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        components
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(FgftError::invalid(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(FgftError::invalid(format!("graph needs at least 2 vertices, got {n}")));
    }
    Ok(())
}

/// Erdős–Rényi graph: each unordered pair is an edge with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, rng: RngSpec) -> Result<Graph> {
    check_size(n)?;
    check_probability("p", p)?;
    let mut source = rng.rng();
    let mut weights = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if source.random::<f64>() < p {
                weights[(i, j)] = 1.0;
                weights[(j, i)] = 1.0;
            }
        }
    }
    Ok(Graph {
        weights,
        model: ModelTag::ErdosRenyi { p, rng },
    })
}

/// Detectability threshold of the symmetric SBM with `m` communities and
/// average degree `c`: `(c - √c) / (c + √c (m - 1))`.
pub fn sbm_epsilon_critical(c: f64, m: usize) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(FgftError::invalid(format!("average degree must be positive, got {c}")));
    }
    if m < 2 {
        return Err(FgftError::invalid(format!("need at least 2 communities, got {m}")));
    }
    let root = c.sqrt();
    Ok((c - root) / (c + root * (m as f64 - 1.0)))
}

/// Intra- and inter-community edge probabilities reaching average degree `c`.
pub fn sbm_probabilities(n: usize, m: usize, c: f64, epsilon: f64) -> Result<(f64, f64)> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(FgftError::invalid(format!(
            "{m} communities do not divide {n} vertices"
        )));
    }
    let block = (n / m) as f64;
    let q1 = c / ((block - 1.0) + epsilon * (n as f64 - block));
    let q2 = epsilon * q1;
    if !q1.is_finite() {
        return Err(FgftError::invalid("degenerate SBM parameters"));
    }
    check_probability("q1", q1)?;
    check_probability("q2", q2)?;
    Ok((q1, q2))
}

/// Community of vertex `v` under contiguous assignment of blocks of size `n / m`.
pub fn sbm_community(v: usize, n: usize, m: usize) -> usize {
    v / (n / m)
}

/// Stochastic block model with `m` equal contiguous communities.
pub fn sbm(n: usize, m: usize, c: f64, epsilon: f64, rng: RngSpec) -> Result<Graph> {
    check_size(n)?;
    let (q1, q2) = sbm_probabilities(n, m, c, epsilon)?;
    let mut source = rng.rng();
    let mut weights = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let q = if sbm_community(i, n, m) == sbm_community(j, n, m) {
                q1
            } else {
                q2
            };
            if source.random::<f64>() < q {
                weights[(i, j)] = 1.0;
                weights[(j, i)] = 1.0;
            }
        }
    }
    Ok(Graph {
        weights,
        model: ModelTag::Sbm {
            m,
            c,
            epsilon,
            q1,
            q2,
            rng,
        },
    })
}

/// Random geometric graph on the unit square: an edge joins two points whose
/// Euclidean distance is strictly below `tau`.
pub fn random_sensor(n: usize, tau: f64, rng: RngSpec) -> Result<Graph> {
    check_size(n)?;
    if !(tau > 0.0) {
        return Err(FgftError::invalid(format!("threshold must be positive, got {tau}")));
    }
    let mut source = rng.rng();
    let coordinates: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let x = source.random::<f64>();
            let y = source.random::<f64>();
            [x, y]
        })
        .collect();
    let mut weights = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = coordinates[i][0] - coordinates[j][0];
            let dy = coordinates[i][1] - coordinates[j][1];
            if dx.hypot(dy) < tau {
                weights[(i, j)] = 1.0;
                weights[(j, i)] = 1.0;
            }
        }
    }
    Ok(Graph {
        weights,
        model: ModelTag::Sensor { tau, rng, coordinates },
    })
}

/// Combinatorial Laplacian `D - W`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix(DMatrix<f64>);

impl LaplacianMatrix {
    /// Wraps an arbitrary symmetric matrix. Only symmetry is checked; the
    /// Jacobi routines accept any real symmetric input.
    pub fn from_symmetric(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(FgftError::DimensionMismatch {
                expected: n,
                got: m.ncols(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(FgftError::invalid(format!(
                        "matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.0.diagonal().iter().copied().collect()
    }
}

pub fn laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.n();
    let mut l = -g.weights.clone();
    for (i, d) in g.degrees().into_iter().enumerate() {
        l[(i, i)] = d;
    }
    debug_assert_eq!(l.nrows(), n);
    LaplacianMatrix(l)
}

/// Stable sort of vertex indices by nondecreasing degree (0-based result).
pub fn degree_permutation(g: &Graph) -> Vec<usize> {
    sort_permutation(&g.degrees())
}

/// Indices that sort `values` nondecreasingly; equal values keep index order.
pub(crate) fn sort_permutation(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}
