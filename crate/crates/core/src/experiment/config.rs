use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{FgftError, Result};
use crate::graph::{erdos_renyi, random_sensor, sbm, sbm_epsilon_critical, Graph, RngSpec};
use crate::io::read_text;
use crate::spectral::DEFAULT_DELTA;

pub const DEFAULT_N: usize = 128;
pub const DEFAULT_DRAWS: usize = 100;
pub const DEFAULT_AVERAGE_DEGREE: f64 = 10.0;
pub const DEFAULT_COMMUNITIES: usize = 8;
pub const DEFAULT_TAU: f64 = 0.161;
/// Points in the default logarithmic J grid (before deduplication).
pub const DEFAULT_GRID_POINTS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    ErdosRenyi,
    Sbm,
    Sensor,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::ErdosRenyi, ModelKind::Sensor, ModelKind::Sbm];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::ErdosRenyi => "erdos_renyi",
            ModelKind::Sbm => "sbm",
            ModelKind::Sensor => "sensor",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = FgftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erdos_renyi" | "er" => Ok(ModelKind::ErdosRenyi),
            "sbm" => Ok(ModelKind::Sbm),
            "sensor" => Ok(ModelKind::Sensor),
            other => Err(FgftError::invalid(format!("unknown model '{other}'"))),
        }
    }
}

/// A random graph family with all parameters fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphModel {
    ErdosRenyi { p: f64 },
    Sbm { m: usize, c: f64, epsilon: f64 },
    Sensor { tau: f64 },
}

impl GraphModel {
    pub fn generate(&self, n: usize, rng: RngSpec) -> Result<Graph> {
        match *self {
            GraphModel::ErdosRenyi { p } => erdos_renyi(n, p, rng),
            GraphModel::Sbm { m, c, epsilon } => sbm(n, m, c, epsilon, rng),
            GraphModel::Sensor { tau } => random_sensor(n, tau, rng),
        }
    }
}

fn default_n() -> usize {
    DEFAULT_N
}

fn default_draws() -> usize {
    DEFAULT_DRAWS
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

/// Experiment description; the JSON config file uses the same field names.
/// Unset model parameters take the defaults of the average-degree-10 setup:
/// `p = 10/(n-1)`, `m = 8`, `c = 10`, `epsilon = ε_c/10`, `tau = 0.161`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            n: DEFAULT_N,
            p: None,
            m: None,
            c: None,
            epsilon: None,
            tau: None,
            draws: DEFAULT_DRAWS,
            j_grid: None,
            seed: 0,
            delta: DEFAULT_DELTA,
            output_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }

    pub fn graph_model(&self) -> Result<GraphModel> {
        match self.model {
            ModelKind::ErdosRenyi => {
                let p = match self.p {
                    Some(p) => p,
                    None => {
                        let c = self.c.unwrap_or(DEFAULT_AVERAGE_DEGREE);
                        (c / (self.n as f64 - 1.0)).min(1.0)
                    }
                };
                Ok(GraphModel::ErdosRenyi { p })
            }
            ModelKind::Sbm => {
                let m = self.m.unwrap_or(DEFAULT_COMMUNITIES);
                let c = self.c.unwrap_or(DEFAULT_AVERAGE_DEGREE);
                let epsilon = match self.epsilon {
                    Some(e) => e,
                    None => sbm_epsilon_critical(c, m)? / 10.0,
                };
                Ok(GraphModel::Sbm { m, c, epsilon })
            }
            ModelKind::Sensor => Ok(GraphModel::Sensor {
                tau: self.tau.unwrap_or(DEFAULT_TAU),
            }),
        }
    }

    pub fn grid(&self) -> Vec<usize> {
        self.j_grid.clone().unwrap_or_else(|| default_j_grid(self.n))
    }

    /// Largest rotation budget in the grid.
    pub fn j_max(&self) -> usize {
        self.grid().last().copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(FgftError::invalid(format!("n must be at least 2, got {}", self.n)));
        }
        if self.draws == 0 {
            return Err(FgftError::invalid("draws must be at least 1"));
        }
        if !(self.delta > 0.0) {
            return Err(FgftError::invalid(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        let grid = self.grid();
        if grid.first() != Some(&0) {
            return Err(FgftError::invalid("j_grid must start at 0"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FgftError::invalid("j_grid must be strictly increasing"));
        }
        // surfaces generator parameter errors before any draw runs
        self.graph_model()?.generate(self.n, RngSpec::new(self.seed, 0))?;
        Ok(())
    }

    /// Copy with every defaulted field filled in and no output path, as
    /// echoed into result directories.
    pub fn resolved(&self) -> Result<Self> {
        let mut out = self.clone();
        match self.graph_model()? {
            GraphModel::ErdosRenyi { p } => out.p = Some(p),
            GraphModel::Sbm { m, c, epsilon } => {
                out.m = Some(m);
                out.c = Some(c);
                out.epsilon = Some(epsilon);
            }
            GraphModel::Sensor { tau } => out.tau = Some(tau),
        }
        out.j_grid = Some(self.grid());
        out.output_dir = None;
        Ok(out)
    }
}

/// `0` followed by 25 log-spaced budgets from 1 to `n(n-1)/4`, rounded.
/// Values that round onto their predecessor are bumped up by one, so the
/// grid has 25 distinct nonzero points whenever `n(n-1)/4 ≥ 25`.
pub fn default_j_grid(n: usize) -> Vec<usize> {
    let j_max = n * n.saturating_sub(1) / 4;
    let mut grid = vec![0];
    if j_max == 0 {
        return grid;
    }
    let top = (j_max as f64).ln();
    for i in 0..DEFAULT_GRID_POINTS {
        let t = i as f64 / (DEFAULT_GRID_POINTS - 1) as f64;
        let j = ((top * t).exp().round() as usize).max(grid.last().unwrap() + 1);
        if j > j_max {
            break;
        }
        grid.push(j);
    }
    if *grid.last().unwrap() != j_max {
        grid.push(j_max);
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_j_grid(128);
        assert_eq!(g[0], 0);
        assert_eq!(g[1], 1);
        assert_eq!(*g.last().unwrap(), 128 * 127 / 4);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.len(), DEFAULT_GRID_POINTS + 1);
        assert_eq!(default_j_grid(16).len(), DEFAULT_GRID_POINTS + 1);
        assert_eq!(default_j_grid(8), (0..=14).collect::<Vec<_>>());
        assert_eq!(default_j_grid(2), vec![0]);
        assert_eq!(default_j_grid(3), vec![0, 1]);
    }

    #[test]
    fn defaults_resolve() {
        let cfg = ExperimentConfig::new(ModelKind::Sbm);
        match cfg.graph_model().unwrap() {
            GraphModel::Sbm { m, c, epsilon } => {
                assert_eq!((m, c), (8, 10.0));
                assert!((epsilon - sbm_epsilon_critical(10.0, 8).unwrap() / 10.0).abs() < 1e-16);
            }
            other => panic!("{other:?}"),
        }
        let er = ExperimentConfig::new(ModelKind::ErdosRenyi);
        assert_eq!(er.graph_model().unwrap(), GraphModel::ErdosRenyi { p: 10.0 / 127.0 });
    }

    #[test]
    fn json_mirrors_field_names() {
        let cfg =
            ExperimentConfig::from_json(r#"{"model":"sensor","n":32,"tau":0.3,"draws":3,"j_grid":[0,5,10],"seed":9}"#)
                .unwrap();
        assert_eq!(cfg.n, 32);
        assert_eq!(cfg.grid(), vec![0, 5, 10]);
        assert_eq!(cfg.delta, DEFAULT_DELTA);
        assert!(ExperimentConfig::from_json(r#"{"model":"sensor","bogus":1}"#).is_err());
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::new(ModelKind::ErdosRenyi);
        cfg.n = 16;
        assert!(cfg.validate().is_ok());
        cfg.j_grid = Some(vec![1, 2]);
        assert!(cfg.validate().is_err());
        cfg.j_grid = Some(vec![0, 5, 5]);
        assert!(cfg.validate().is_err());
        cfg.j_grid = None;
        cfg.draws = 0;
        assert!(cfg.validate().is_err());
        let mut sbm = ExperimentConfig::new(ModelKind::Sbm);
        sbm.n = 12;
        assert!(sbm.validate().is_err());
    }
}
