//! Run manifests: what was run, with what settings, producing what.
//!
//! Every CLI run that writes files also writes a `run-manifest.json`
//! holding the argv echo, the fully resolved settings, the crate
//! version, and the output list. Re-running the recorded argv
//! reproduces the CSV outputs byte for byte; only the manifest's own
//! timestamp differs.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::io::write_text;

/// Ensembles smaller than this are flagged as low-confidence: their
/// variance estimates carry sampling error at the tens-of-percent
/// level.
pub const LOW_CONFIDENCE_SIZE: u32 = 100;

/// The settings a run actually used after merging defaults, config
/// file, and flags. Field names match the TOML config keys.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResolvedConfig {
    pub model: String,
    pub center: f64,
    pub width: f64,
    pub size: u32,
    pub seed: u64,
    pub eps: f64,
    pub e_window_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub cache_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    /// Argv as received, suitable for replaying the run.
    pub command: Vec<String>,
    pub subcommand: String,
    pub config: ResolvedConfig,
    pub version: String,
    pub created_unix: u64,
    /// True when the ensemble is too small for reliable statistics.
    pub low_confidence: bool,
    /// Files the run wrote, relative to its output directory.
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, subcommand: &str, config: ResolvedConfig) -> Self {
        let low_confidence = config.size < LOW_CONFIDENCE_SIZE;
        RunManifest {
            command,
            subcommand: subcommand.to_string(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            low_confidence,
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// Write a manifest as pretty JSON.
pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<()> {
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
    write_text(path, &(json + "\n"))
}

/// Read a manifest back.
pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("manifest {}: {e}", path.display())))
}
