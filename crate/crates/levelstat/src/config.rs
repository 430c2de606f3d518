//! TOML run configuration.
//!
//! A config file provides defaults for the CLI; every key can be
//! overridden by the matching command-line flag. Unknown keys are
//! rejected so typos fail loudly instead of silently running defaults.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Optional file-level settings, mirroring the common CLI flags.
#[derive(Debug, Clone, Default, PartialEq, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// `mk` or `rb`.
    pub model: Option<String>,
    /// Ensemble center (`beta` for mk, `alpha` for rb).
    pub center: Option<f64>,
    /// Gaussian width of the parameter ensemble.
    pub width: Option<f64>,
    /// Number of ensemble members.
    pub size: Option<u32>,
    /// Master seed.
    pub seed: Option<u64>,
    /// Working point on the unfolded axis.
    pub eps: Option<f64>,
    /// Largest window width to tabulate.
    pub e_window_max: Option<f64>,
    /// Number of grid points per curve.
    pub grid_points: Option<usize>,
    /// Directory for cached spectra.
    pub cache_dir: Option<PathBuf>,
}

/// Load and parse a TOML config file.
pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<FileConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    #[test]
    fn full_config_parses() {
        let cfg = parse(
            r#"
model = "mk"
center = 3e6
width = 1.5e5
size = 100
seed = 12345
eps = 2e5
e_window_max = 3400.0
grid_points = 300
cache_dir = "cache"
"#,
        )
        .unwrap();
        assert_eq!(cfg.model.as_deref(), Some("mk"));
        assert_eq!(cfg.center, Some(3.0e6));
        assert_eq!(cfg.grid_points, Some(300));
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("cache")));
    }

    #[test]
    fn partial_and_empty_configs_parse() {
        let cfg = parse("eps = 1e5\n").unwrap();
        assert_eq!(cfg.eps, Some(1.0e5));
        assert_eq!(cfg.model, None);
        assert_eq!(parse("").unwrap(), FileConfig::default());
    }

    #[test]
    fn unknown_keys_and_bad_types_are_rejected() {
        let err = parse("pes = 1e5\n").unwrap_err();
        assert!(err.to_string().contains("pes"), "{err}");
        assert!(parse("size = \"many\"\n").is_err());
    }

    #[test]
    fn missing_file_is_a_config_error() {
        let err = load(Path::new("/nonexistent/levelstat.toml")).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert_eq!(err.exit_code(), 2);
    }
}
