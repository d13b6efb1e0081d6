use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::image_io::{write_file, PgmScaling};

pub const MANIFEST_SCHEMA: u32 = 1;

/// Written next to the outputs of every command. `config` holds every
/// resolved setting, so replaying `command` with it reproduces the run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub inputs: BTreeMap<String, PathBuf>,
    pub outputs: BTreeMap<String, PathBuf>,
    pub seeds: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pgm_scaling: Option<PgmScaling>,
    pub tool_version: String,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            schema: MANIFEST_SCHEMA,
            command: command.to_string(),
            argv: std::env::args().collect(),
            config,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            seeds: BTreeMap::new(),
            pgm_scaling: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn input(&mut self, name: &str, path: &Path) -> &mut Self {
        self.inputs.insert(name.to_string(), path.to_path_buf());
        self
    }

    pub fn output(&mut self, name: &str, path: &Path) -> &mut Self {
        self.outputs.insert(name.to_string(), path.to_path_buf());
        self
    }

    pub fn seed(&mut self, name: &str, seed: u64) -> &mut Self {
        self.seeds.insert(name.to_string(), seed);
        self
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut json = serde_json::to_string_pretty(self).map_err(|e| CliError::Core(e.into()))?;
        json.push('\n');
        write_file(path, json)
    }
}
