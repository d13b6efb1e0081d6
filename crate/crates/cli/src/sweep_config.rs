//! Flat `key = value` sweep configuration.
//!
//! One setting per line, `#` starts a comment. List values are
//! comma-separated; an axis may also be written `1e-4..1e2`, meaning every
//! power of ten between the two bounds. `preset` is applied first no matter
//! where it appears, and the other keys override it.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use sik_core::operators::Boundary;
use sik_core::simulation::{DegradationSpec, PhantomVariant};
use sik_core::harness::SweepGrid;
use sik_core::solvers::{Init, Strategy};

use crate::error::{CliError, CliResult};

pub const KEYS: &[&str] = &[
    "preset",
    "size",
    "variant",
    "kernel",
    "boundary",
    "sigma",
    "noise_seed",
    "levels",
    "strategies",
    "beta",
    "gamma",
    "delta",
    "p",
    "iters",
    "seed",
    "step_safety",
    "init",
    "workers",
    "record_timing",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub size: usize,
    pub variant: PhantomVariant,
    pub degradation: DegradationSpec,
    pub levels: u32,
    pub grid: SweepGrid,
    pub record_timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            size: 64,
            variant: PhantomVariant::Standard,
            degradation: DegradationSpec::default(),
            levels: 2,
            grid: SweepGrid::desk(),
            record_timing: false,
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn bad(path: &Path, line: usize, key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("{}:{line}: `{key}`: {msg}", path.display()))
}

fn scalar<T: FromStr>(path: &Path, key: &str, e: &Entry) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    e.value.parse().map_err(|err| bad(path, e.line, key, err))
}

fn list<T: FromStr>(path: &Path, key: &str, e: &Entry) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<&str> = e.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(bad(path, e.line, key, "empty list"));
    }
    items
        .into_iter()
        .map(|s| s.parse().map_err(|err| bad(path, e.line, key, err)))
        .collect()
}

fn decade_exponent(v: f64) -> Option<i32> {
    let e = v.log10().round();
    (v > 0.0 && 10f64.powi(e as i32) == v).then_some(e as i32)
}

fn axis(path: &Path, key: &str, e: &Entry) -> CliResult<Vec<f64>> {
    if let Some((lo, hi)) = e.value.split_once("..") {
        let bound = |s: &str| -> CliResult<i32> {
            let v: f64 = s.trim().parse().map_err(|err| bad(path, e.line, key, err))?;
            decade_exponent(v).ok_or_else(|| bad(path, e.line, key, format!("{v} is not a power of ten")))
        };
        let (lo, hi) = (bound(lo)?, bound(hi)?);
        if lo > hi {
            return Err(bad(path, e.line, key, "empty range"));
        }
        return Ok((lo..=hi).map(|k| 10f64.powi(k)).collect());
    }
    list(path, key, e)
}

pub fn parse_sweep_config(path: &Path, text: &str) -> CliResult<SweepConfig> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("{}:{line}: expected `key = value`", path.display())))?;
        let key = key.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(bad(path, line, &key, "unknown key"));
        }
        let entry = Entry {
            line,
            value: value.trim().to_string(),
        };
        if let Some(prev) = entries.insert(key.clone(), entry) {
            return Err(bad(path, line, &key, format!("already set on line {}", prev.line)));
        }
    }

    let mut cfg = SweepConfig::default();
    if let Some(e) = entries.get("preset") {
        cfg.grid = match e.value.as_str() {
            "desk" => SweepGrid::desk(),
            "full" => SweepGrid::full(),
            other => return Err(bad(path, e.line, "preset", format!("expected desk or full, got {other:?}"))),
        };
    }
    for (key, e) in &entries {
        let key = key.as_str();
        match key {
            "preset" => {}
            "size" => cfg.size = scalar(path, key, e)?,
            "variant" => {
                cfg.variant = match e.value.to_ascii_lowercase().as_str() {
                    "standard" => PhantomVariant::Standard,
                    "modified" => PhantomVariant::Modified,
                    other => {
                        return Err(bad(path, e.line, key, format!("expected standard or modified, got {other:?}")))
                    }
                }
            }
            "kernel" => cfg.degradation.kernel_size = scalar(path, key, e)?,
            "boundary" => cfg.degradation.boundary = scalar::<Boundary>(path, key, e)?,
            "sigma" => cfg.degradation.sigma = scalar(path, key, e)?,
            "noise_seed" => cfg.degradation.seed = scalar(path, key, e)?,
            "levels" => cfg.levels = scalar(path, key, e)?,
            "strategies" => cfg.grid.strategies = list::<Strategy>(path, key, e)?,
            "beta" => cfg.grid.beta_values = axis(path, key, e)?,
            "gamma" => cfg.grid.gamma_values = axis(path, key, e)?,
            "delta" => cfg.grid.delta_values = axis(path, key, e)?,
            "p" => cfg.grid.p = scalar(path, key, e)?,
            "iters" => cfg.grid.iters_per_cell = scalar(path, key, e)?,
            "seed" => cfg.grid.seed = scalar(path, key, e)?,
            "step_safety" => cfg.grid.step_safety = scalar(path, key, e)?,
            "init" => cfg.grid.init = scalar::<Init>(path, key, e)?,
            "workers" => {
                cfg.grid.workers = match e.value.as_str() {
                    "auto" => None,
                    _ => Some(scalar(path, key, e)?),
                }
            }
            "record_timing" => cfg.record_timing = scalar(path, key, e)?,
            _ => unreachable!("key list and match arms disagree"),
        }
    }
    cfg.grid
        .validate()
        .map_err(|err| CliError::usage(format!("{}: {err}", path.display())))?;
    cfg.degradation
        .validate()
        .map_err(|err| CliError::usage(format!("{}: {err}", path.display())))?;
    Ok(cfg)
}
