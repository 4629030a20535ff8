use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{DrawSummary, ExperimentResult, Provenance};
use crate::error::{FgftError, Result};
use crate::io::{fmt_real, format_baselines_csv, format_density_csv, format_surface_csv, write_text};
use crate::spectral::SurfaceKind;

#[derive(Debug, Serialize)]
pub struct SummaryFile<'a> {
    pub provenance: &'a Provenance,
    pub j_grid: &'a [usize],
    pub draws: &'a [DrawSummary],
    pub undefined_total: UndefinedTotals,
    pub undefined_counts: UndefinedCounts<'a>,
}

#[derive(Debug, Serialize)]
pub struct UndefinedTotals {
    pub err1_norm: usize,
    pub err2_norm: usize,
}

#[derive(Debug, Serialize)]
pub struct UndefinedCounts<'a> {
    pub err1_norm: &'a [Vec<usize>],
    pub err2_norm: &'a [Vec<usize>],
}

fn total(m: &[Vec<usize>]) -> usize {
    m.iter().flatten().sum()
}

fn eigenvalues_csv(lambdas: &[f64]) -> String {
    let mut out = String::from("k,lambda\n");
    for (k, v) in lambdas.iter().enumerate() {
        writeln!(out, "{},{}", k + 1, fmt_real(*v)).unwrap();
    }
    out
}

/// Gnuplot script drawing each surface as a heatmap over (grid index, k).
/// `err2` kinds use a logarithmic color scale.
pub fn gnuplot_script(kinds: &[SurfaceKind], j_grid: &[usize]) -> String {
    let mut out = String::new();
    out.push_str("set datafile separator ','\nset terminal pngcairo size 900,700\n");
    out.push_str("set xlabel 'J'\nset ylabel 'k'\nset view map\n");
    let tics: Vec<String> = j_grid
        .iter()
        .enumerate()
        .step_by((j_grid.len() / 8).max(1))
        .map(|(i, j)| format!("'{j}' {i}"))
        .collect();
    writeln!(out, "set xtics ({})", tics.join(", ")).unwrap();
    for kind in kinds {
        let name = kind.as_str();
        if matches!(kind, SurfaceKind::Err2 | SurfaceKind::Err2Norm) {
            out.push_str("set logscale cb\n");
        } else {
            out.push_str("unset logscale cb\n");
        }
        writeln!(out, "set output '{name}.png'\nset title '{name}'").unwrap();
        writeln!(
            out,
            "plot '{name}.csv' matrix rowheaders columnheaders using ($1):($2):($3) with image notitle"
        )
        .unwrap();
        if matches!(kind, SurfaceKind::Err1Norm | SurfaceKind::Err2Norm) {
            writeln!(out, "set output '{name}_density.png'").unwrap();
            writeln!(
                out,
                "plot 'density.csv' using 2:1 skip 1 with lines lc rgb 'red' title 'f(k)'"
            )
            .unwrap();
        }
    }
    out
}

/// Writes `config.json`, one CSV per error kind, `density.csv`,
/// `baselines.csv`, `eigenvalues.csv`, `summary.json` and optionally
/// `plot.gp`. Output bytes depend only on the result.
pub fn write_result(result: &ExperimentResult, dir: &Path, gnuplot: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| FgftError::io(dir, e))?;
    let config = serde_json::to_string_pretty(&result.provenance.config)?;
    write_text(&dir.join("config.json"), &(config + "\n"))?;
    for kind in SurfaceKind::ALL {
        write_text(
            &dir.join(format!("{}.csv", kind.as_str())),
            &format_surface_csv(result.surface(kind)),
        )?;
    }
    write_text(&dir.join("density.csv"), &format_density_csv(&result.density))?;
    write_text(
        &dir.join("baselines.csv"),
        &format_baselines_csv(&result.baseline_err1, &result.baseline_err2),
    )?;
    write_text(&dir.join("eigenvalues.csv"), &eigenvalues_csv(&result.eigenvalues))?;
    let summary = SummaryFile {
        provenance: &result.provenance,
        j_grid: result.j_grid(),
        draws: &result.draws,
        undefined_total: UndefinedTotals {
            err1_norm: total(&result.undefined_err1_norm),
            err2_norm: total(&result.undefined_err2_norm),
        },
        undefined_counts: UndefinedCounts {
            err1_norm: &result.undefined_err1_norm,
            err2_norm: &result.undefined_err2_norm,
        },
    };
    write_text(
        &dir.join("summary.json"),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;
    if gnuplot {
        write_text(
            &dir.join("plot.gp"),
            &gnuplot_script(&SurfaceKind::ALL, result.j_grid()),
        )?;
    }
    Ok(())
}
