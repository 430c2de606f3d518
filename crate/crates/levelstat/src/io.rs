//! CSV and text output, plus the on-disk spectrum cache.
//!
//! All writes go through a temp-file-plus-rename so readers never see a
//! torn file. Floats are written with Rust's shortest round-trip
//! formatting, so reading a value back yields the identical bits.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numstats::StatCurve;
use crate::spectra::{self, Level, ModelParams, Spectrum};

/// Column header of every statistics curve CSV.
pub const CURVE_CSV_HEADER: &str = "x,y,kind,provenance,model,center,width,size,seed,eps";

/// Column header of every spectrum CSV.
pub const SPECTRUM_CSV_HEADER: &str = "energy,q1,q2";

/// Write `contents` to `path` atomically (temp file in the same
/// directory, then rename), creating parent directories as needed.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let stem = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("levelstat");
    let tmp = dir.join(format!(".{stem}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Atomic text write.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    atomic_write(path, text.as_bytes())
}

/// Serialize one or more curves into a single CSV (shared header, rows
/// concatenated in order; each row repeats its curve's metadata).
pub fn curves_to_csv(curves: &[&StatCurve]) -> Result<String> {
    let mut out = String::new();
    out.push_str(CURVE_CSV_HEADER);
    out.push('\n');
    for curve in curves {
        curve.validate()?;
        let m = &curve.meta;
        for &(x, y) in &curve.points {
            out.push_str(&format!(
                "{x},{y},{},{},{},{},{},{},{},{}\n",
                curve.kind.as_str(),
                curve.provenance.as_str(),
                m.model.as_str(),
                m.center,
                m.width,
                m.size,
                m.seed,
                m.eps
            ));
        }
    }
    Ok(out)
}

/// Write several curves into one CSV file.
pub fn write_curves_csv(path: &Path, curves: &[&StatCurve]) -> Result<()> {
    atomic_write(path, curves_to_csv(curves)?.as_bytes())
}

/// Write a single curve to its own CSV file.
pub fn write_curve_csv(path: &Path, curve: &StatCurve) -> Result<()> {
    write_curves_csv(path, &[curve])
}

/// Serialize a spectrum as `energy,q1,q2` rows.
pub fn spectrum_to_csv(spectrum: &Spectrum) -> String {
    let mut out = String::with_capacity(24 * spectrum.len() + 16);
    out.push_str(SPECTRUM_CSV_HEADER);
    out.push('\n');
    for level in spectrum.levels() {
        out.push_str(&format!("{},{},{}\n", level.energy, level.q1, level.q2));
    }
    out
}

/// Write a spectrum CSV file.
pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<()> {
    atomic_write(path, spectrum_to_csv(spectrum).as_bytes())
}

/// Parse a spectrum CSV produced by [`write_spectrum_csv`] back into a
/// spectrum with the given parameters and cutoff.
pub fn read_spectrum_csv(path: &Path, params: ModelParams, e_max: f64) -> Result<Spectrum> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SPECTRUM_CSV_HEADER => {}
        other => {
            return Err(Error::Config(format!(
                "{}: expected header '{SPECTRUM_CSV_HEADER}', got {other:?}",
                path.display()
            )))
        }
    }
    let mut levels = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parse_err = || {
            Error::Config(format!(
                "{} line {}: malformed spectrum row '{line}'",
                path.display(),
                i + 2
            ))
        };
        let energy: f64 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(parse_err)?;
        let q1: u32 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(parse_err)?;
        let q2: u32 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(parse_err)?;
        if fields.next().is_some() {
            return Err(parse_err());
        }
        levels.push(Level { energy, q1, q2 });
    }
    Spectrum::from_parts(params, e_max, levels)
}

/// Cache key for a generated spectrum: a short content hash of the
/// model, its parameter bits, and the cutoff bits.
pub fn spectrum_cache_key(params: &ModelParams, e_max: f64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(params.model().as_str().as_bytes());
    hasher.update([0u8]);
    hasher.update(params.value().to_le_bytes());
    hasher.update(e_max.to_le_bytes());
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Cache file path for a spectrum under `dir`.
pub fn spectrum_cache_path(dir: &Path, params: &ModelParams, e_max: f64) -> PathBuf {
    dir.join(format!(
        "{}-{}.csv",
        params.model().as_str(),
        spectrum_cache_key(params, e_max)
    ))
}

/// Load a spectrum from the cache directory, or generate it and fill
/// the cache. With no cache directory, always generates.
pub fn load_or_generate(
    cache_dir: Option<&Path>,
    params: &ModelParams,
    e_max: f64,
) -> Result<Spectrum> {
    let Some(dir) = cache_dir else {
        return spectra::generate(params, e_max);
    };
    let path = spectrum_cache_path(dir, params, e_max);
    if path.exists() {
        return read_spectrum_csv(&path, *params, e_max);
    }
    let spectrum = spectra::generate(params, e_max)?;
    write_spectrum_csv(&path, &spectrum)?;
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numstats::{CurveKind, CurveMeta, Provenance};
    use crate::spectra::{MkParams, Model};

    fn sample_curve() -> StatCurve {
        StatCurve {
            kind: CurveKind::Sigma,
            provenance: Provenance::Numeric,
            meta: CurveMeta {
                model: Model::Mk,
                center: 3.0e6,
                width: 1.5e5,
                size: 100,
                seed: 12345,
                eps: 2.0e5,
            },
            points: vec![(0.0, 0.0), (0.5, 1.25), (1.0, 2.0)],
        }
    }

    #[test]
    fn curve_csv_layout_is_stable() {
        let csv = curves_to_csv(&[&sample_curve()]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CURVE_CSV_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "0,0,sigma,numeric,mk,3000000,150000,100,12345,200000"
        );
        assert_eq!(
            lines.next().unwrap(),
            "0.5,1.25,sigma,numeric,mk,3000000,150000,100,12345,200000"
        );
    }

    #[test]
    fn float_columns_round_trip_exactly() {
        let mut curve = sample_curve();
        let awkward = std::f64::consts::PI * 12345.678;
        curve.points = vec![(awkward, awkward / 7.0)];
        let csv = curves_to_csv(&[&curve]).unwrap();
        let row = csv.lines().nth(1).unwrap();
        let mut cols = row.split(',');
        let x: f64 = cols.next().unwrap().parse().unwrap();
        let y: f64 = cols.next().unwrap().parse().unwrap();
        assert_eq!(x.to_bits(), awkward.to_bits());
        assert_eq!(y.to_bits(), (awkward / 7.0).to_bits());
    }

    #[test]
    fn spectrum_csv_round_trips_bit_for_bit() {
        let params = ModelParams::Mk(MkParams::new(50.0).unwrap());
        let spectrum = spectra::generate(&params, 500.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_spectrum_csv(&path, &spectrum).unwrap();
        let back = read_spectrum_csv(&path, params, 500.0).unwrap();
        assert_eq!(back.len(), spectrum.len());
        for (a, b) in spectrum.levels().iter().zip(back.levels()) {
            assert_eq!(a.energy.to_bits(), b.energy.to_bits());
            assert_eq!((a.q1, a.q2), (b.q1, b.q2));
        }
    }

    #[test]
    fn cache_generates_once_then_reads() {
        let params = ModelParams::Mk(MkParams::new(50.0).unwrap());
        let dir = tempfile::tempdir().unwrap();
        let first = load_or_generate(Some(dir.path()), &params, 300.0).unwrap();
        let path = spectrum_cache_path(dir.path(), &params, 300.0);
        assert!(path.exists());
        // Plant a marker: if the second call re-reads the file, it sees
        // the truncated spectrum instead of regenerating.
        let text = std::fs::read_to_string(&path).unwrap();
        let truncated: Vec<&str> = text.lines().take(3).collect();
        std::fs::write(&path, truncated.join("\n") + "\n").unwrap();
        let second = load_or_generate(Some(dir.path()), &params, 300.0).unwrap();
        assert_eq!(second.len(), 2);
        assert!(first.len() > second.len());
        // Different cutoffs key different files.
        let other = spectrum_cache_path(dir.path(), &params, 301.0);
        assert_ne!(path, other);
    }

    #[test]
    fn malformed_cache_rows_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "energy,q1,q2\n1.0,2\n").unwrap();
        let params = ModelParams::Mk(MkParams::new(50.0).unwrap());
        let err = read_spectrum_csv(&path, params, 10.0).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err:?}");
        std::fs::write(&path, "wrong,header\n").unwrap();
        assert!(read_spectrum_csv(&path, params, 10.0).is_err());
    }

    #[test]
    fn atomic_write_replaces_and_creates_dirs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/out.txt");
        write_text(&path, "first").unwrap();
        write_text(&path, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        // No temp litter left behind.
        let entries: Vec<_> = std::fs::read_dir(path.parent().unwrap())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(entries.len(), 1, "{entries:?}");
    }
}
