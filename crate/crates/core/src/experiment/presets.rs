use std::path::Path;

use serde::Serialize;

use super::{gnuplot_script, run_experiment_with, write_result, ExperimentConfig, ExperimentResult, ModelKind};
use crate::error::{FgftError, Result};
use crate::io::write_text;
use crate::par::Execution;
use crate::spectral::SurfaceKind;

/// Named reproductions of the published figures. Each runs the full
/// experiment for its model(s) at `n = 128`; the preset only selects which
/// surfaces it is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: String,
    pub models: Vec<ModelKind>,
    pub kinds: Vec<SurfaceKind>,
    /// Only `J = 0` is evaluated (degree-ordered baselines).
    pub baseline_only: bool,
}

fn panel_model(letter: char) -> Option<ModelKind> {
    match letter {
        'a' => Some(ModelKind::ErdosRenyi),
        'b' => Some(ModelKind::Sensor),
        'c' => Some(ModelKind::Sbm),
        _ => None,
    }
}

impl Preset {
    pub const NAMES: [&'static str; 16] = [
        "fig2", "fig2a", "fig2b", "fig2c", "fig3", "fig3a", "fig3b", "fig3c", "fig4", "fig5", "fig5a", "fig5b",
        "fig5c", "fig5d", "fig5e", "fig5f",
    ];

    pub fn parse(name: &str) -> Result<Self> {
        let unknown = || {
            FgftError::invalid(format!(
                "unknown preset '{name}' (expected one of {})",
                Preset::NAMES.join(", ")
            ))
        };
        let (fig, panel) = match name.len() {
            4 => (name, None),
            5 => (&name[..4], name.chars().nth(4)),
            _ => return Err(unknown()),
        };
        let all = ModelKind::ALL.to_vec();
        let (models, kinds, baseline_only) = match (fig, panel) {
            ("fig2", None) => (all, vec![SurfaceKind::Err1], false),
            ("fig2", Some(p)) => (
                vec![panel_model(p).ok_or_else(unknown)?],
                vec![SurfaceKind::Err1],
                false,
            ),
            ("fig3", None) => (all, vec![SurfaceKind::Err1Norm], false),
            ("fig3", Some(p)) => (
                vec![panel_model(p).ok_or_else(unknown)?],
                vec![SurfaceKind::Err1Norm],
                false,
            ),
            ("fig4", None) => (all, vec![SurfaceKind::Err1, SurfaceKind::Err2], true),
            ("fig5", None) => (all, vec![SurfaceKind::Err2, SurfaceKind::Err2Norm], false),
            ("fig5", Some(p @ 'a'..='c')) => (vec![panel_model(p).unwrap()], vec![SurfaceKind::Err2], false),
            ("fig5", Some(p @ 'd'..='f')) => {
                let shifted = (p as u8 - 3) as char;
                (vec![panel_model(shifted).unwrap()], vec![SurfaceKind::Err2Norm], false)
            }
            _ => return Err(unknown()),
        };
        Ok(Self {
            name: name.to_string(),
            models,
            kinds,
            baseline_only,
        })
    }

    pub fn config(&self, model: ModelKind, draws: usize, seed: u64) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(model);
        cfg.draws = draws;
        cfg.seed = seed;
        if self.baseline_only {
            cfg.j_grid = Some(vec![0]);
        }
        cfg
    }
}

#[derive(Serialize)]
struct PresetFile<'a> {
    preset: &'a str,
    models: Vec<&'static str>,
    surfaces: Vec<&'static str>,
    draws: usize,
    seed: u64,
}

/// Runs a preset and writes its results under `out`. Single-model presets
/// write directly into `out`; multi-model presets use one subdirectory per
/// model.
pub fn reproduce(
    preset: &Preset,
    draws: usize,
    seed: u64,
    out: &Path,
    exec: Execution,
) -> Result<Vec<(ModelKind, ExperimentResult)>> {
    let mut results = Vec::new();
    for &model in &preset.models {
        let cfg = preset.config(model, draws, seed);
        let result = run_experiment_with(&cfg, exec)?;
        let dir = if preset.models.len() == 1 {
            out.to_path_buf()
        } else {
            out.join(model.as_str())
        };
        write_result(&result, &dir, false)?;
        write_text(&dir.join("plot.gp"), &gnuplot_script(&preset.kinds, result.j_grid()))?;
        results.push((model, result));
    }
    let meta = PresetFile {
        preset: &preset.name,
        models: preset.models.iter().map(|m| m.as_str()).collect(),
        surfaces: preset.kinds.iter().map(|k| k.as_str()).collect(),
        draws,
        seed,
    };
    write_text(&out.join("preset.json"), &(serde_json::to_string_pretty(&meta)? + "\n"))?;
    Ok(results)
}
