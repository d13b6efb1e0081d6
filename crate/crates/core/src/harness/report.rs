//! Stable text formats for experiment output.
//!
//! - results CSV: `strategy,beta,gamma,delta,final_mae,diverged,wall_ms`,
//!   one row per cell in sweep order. Axes a strategy does not use are left
//!   empty, as is `final_mae` for diverged cells.
//! - trace CSV: `iter,cost,fidelity,mae,wall_ms`; `mae` is empty without a
//!   ground truth.
//! - metadata JSON: [`ExperimentMetadata`] via serde.
//!
//! Floats are written with the shortest decimal that parses back to the
//! same `f64`. When timing is disabled the `wall_ms` fields are left empty,
//! which makes reruns byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::sweep::{ExperimentMetadata, ExperimentResult};
use crate::error::Result;
use crate::solvers::IterationTrace;

pub const RESULTS_HEADER: &str = "strategy,beta,gamma,delta,final_mae,diverged,wall_ms";
pub const TRACE_HEADER: &str = "iter,cost,fidelity,mae,wall_ms";

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e15)`.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt_float(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

fn timing(v: f64, enabled: bool) -> String {
    if enabled {
        fmt_float(v)
    } else {
        String::new()
    }
}

pub fn results_csv(result: &ExperimentResult, with_timing: bool) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for cell in &result.cells {
        let mae = if cell.diverged {
            String::new()
        } else {
            fmt_float(cell.final_mae)
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell.key.strategy,
            fmt_float(cell.key.beta),
            opt_float(cell.key.gamma),
            opt_float(cell.key.delta),
            mae,
            cell.diverged,
            timing(cell.wall_ms, with_timing)
        );
    }
    out
}

pub fn trace_csv(trace: &IterationTrace, with_timing: bool) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in trace.records() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.iter,
            fmt_float(r.cost),
            fmt_float(r.fidelity),
            opt_float(r.mae),
            timing(r.wall_ms, with_timing)
        );
    }
    out
}

pub fn metadata_json(meta: &ExperimentMetadata) -> Result<String> {
    Ok(serde_json::to_string_pretty(meta)?)
}

/// Relative path of the trace file for cell `index`.
pub fn trace_file_name(index: usize, result: &ExperimentResult) -> PathBuf {
    let strategy = result.cells[index].key.strategy;
    Path::new("traces").join(format!("{index:04}_{strategy}.csv"))
}

/// Writes `results.csv`, `metadata.json` and `traces/NNNN_<strategy>.csv`
/// under `dir`, returning the paths written.
pub fn write_experiment(dir: &Path, result: &ExperimentResult, with_timing: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir.join("traces"))?;
    let mut written = Vec::with_capacity(result.cells.len() + 2);
    let results = dir.join("results.csv");
    fs::write(&results, results_csv(result, with_timing))?;
    written.push(results);
    let meta = dir.join("metadata.json");
    fs::write(&meta, metadata_json(&result.metadata)?)?;
    written.push(meta);
    for (i, cell) in result.cells.iter().enumerate() {
        let path = dir.join(trace_file_name(i, result));
        fs::write(&path, trace_csv(&cell.trace, with_timing))?;
        written.push(path);
    }
    Ok(written)
}
