//! Command-line interface: subcommands, flag/config resolution, and
//! file output.
//!
//! Settings resolve in three layers: built-in defaults, then the TOML
//! config file (`--config`), then explicit flags. `--beta` and
//! `--alpha` are model-specific spellings of `--center` and imply
//! their model when `--model` is absent. Every run that writes files
//! also writes `run-manifest.json` with the argv echo and the resolved
//! settings, so the run can be replayed exactly.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{self, FileConfig};
use crate::ensemble::{average_delta_rho_check, EnsembleSpec};
use crate::error::{Error, Result};
use crate::io;
use crate::manifest::{self, ResolvedConfig, RunManifest};
use crate::numstats::{self, CurveKind, CurveMeta, Provenance, StatCurve};
use crate::spectra::{self, Model, ModelParams};
use crate::svg::{self, Series};
use crate::theory::{self, IndexPair, TheoryConfig, TheoryVariant};

#[derive(Debug, Parser)]
#[command(
    name = "levelstat",
    version,
    about = "Spectral statistics of integrable models: exact spectra, \
             level-number variance, and spectral rigidity"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one exact spectrum and write it as energy,q1,q2 CSV
    Spectrum(SpectrumArgs),
    /// Level-number variance: ensemble estimate plus closed forms
    Variance(VarianceArgs),
    /// Spectral rigidity: window-width curve or working-point sweep
    Rigidity(RigidityArgs),
    /// Variance curves across a family of Kepler-type strengths
    Scaling(ScalingArgs),
    /// Self-consistency checks with measured values and a report
    Diagnostics(DiagnosticsArgs),
    /// Parameter values where orbit-family weights step
    Jumps(JumpsArgs),
}

#[derive(Debug, Args, Clone)]
struct CommonArgs {
    /// Model: mk (Kepler-type) or rb (rectangular billiard)
    #[arg(long)]
    model: Option<String>,
    /// Kepler-type strength; implies --model mk
    #[arg(long, conflicts_with = "alpha", allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Billiard aspect ratio; implies --model rb
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Ensemble center (model-agnostic form of --beta / --alpha)
    #[arg(long, allow_negative_numbers = true)]
    center: Option<f64>,
    /// Gaussian width of the parameter ensemble
    #[arg(long, allow_negative_numbers = true)]
    width: Option<f64>,
    /// Number of ensemble members
    #[arg(long)]
    size: Option<u32>,
    /// Master seed for member sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Working point on the unfolded axis
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Largest window width; for spectrum, the energy cutoff
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Points per tabulated curve
    #[arg(long)]
    grid_points: Option<usize>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// TOML file with defaults for these flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cache directory for generated spectra
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Write SVG plots next to the CSVs (default)
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "no_svg")]
    svg: bool,
    /// Skip SVG plots
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "svg")]
    no_svg: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct VarianceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also average the rb closed form over the aspect-ratio law
    #[arg(long)]
    ensemble_average: bool,
}

#[derive(Debug, Args)]
struct RigidityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sweep the working point instead of the window width
    #[arg(long)]
    sweep: bool,
    /// Lower edge of the sweep range
    #[arg(long)]
    sweep_min: Option<f64>,
    /// Upper edge of the sweep range
    #[arg(long)]
    sweep_max: Option<f64>,
    /// Sweep window width, in leading oscillation periods
    #[arg(long, default_value_t = 6.0)]
    window_periods: f64,
}

#[derive(Debug, Args)]
struct ScalingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also write frequency-normalized curves (auxiliary view)
    #[arg(long)]
    normalized: bool,
}

#[derive(Debug, Args)]
struct DiagnosticsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Scale all pass thresholds (0 forces failures)
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Debug, Args)]
struct JumpsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest orbit index on either axis
    #[arg(long, default_value_t = 8)]
    max_index: u32,
}

/// Fully resolved run settings.
struct Resolved {
    spec: EnsembleSpec,
    eps: f64,
    e_window_max: Option<f64>,
    grid_points: Option<usize>,
    cache_dir: Option<PathBuf>,
    out_dir: PathBuf,
    svg_on: bool,
    /// Whether the parameter center came from a flag or config file
    /// rather than the built-in default.
    explicit_center: bool,
}

fn resolve(common: &CommonArgs) -> Result<Resolved> {
    let file = match &common.config {
        Some(path) => config::load(path)?,
        None => FileConfig::default(),
    };
    let model = if let Some(m) = &common.model {
        m.parse::<Model>()?
    } else if common.beta.is_some() {
        Model::Mk
    } else if common.alpha.is_some() {
        Model::Rb
    } else if let Some(m) = &file.model {
        m.parse::<Model>()?
    } else {
        Model::Mk
    };
    if common.beta.is_some() && model != Model::Mk {
        return Err(Error::Config(
            "--beta sets the Kepler-type strength; use --alpha for the rb model".into(),
        ));
    }
    if common.alpha.is_some() && model != Model::Rb {
        return Err(Error::Config(
            "--alpha sets the billiard aspect ratio; use --beta for the mk model".into(),
        ));
    }
    let param_flag = common.beta.or(common.alpha);
    if let (Some(p), Some(c)) = (param_flag, common.center) {
        if p != c {
            return Err(Error::Config(format!(
                "conflicting parameter values: {p} from --beta/--alpha vs {c} from --center"
            )));
        }
    }
    let defaults = match model {
        Model::Mk => EnsembleSpec::mk_default(),
        Model::Rb => EnsembleSpec::rb_default(),
    };
    let center_source = param_flag.or(common.center).or(file.center);
    let center = center_source.unwrap_or(defaults.center);
    if !center.is_finite() || center <= 0.0 {
        return Err(Error::Config(format!(
            "parameter center must be finite and positive, got {center}"
        )));
    }
    let spec = EnsembleSpec {
        model,
        center,
        width: common.width.or(file.width).unwrap_or(0.05 * center),
        size: common.size.or(file.size).unwrap_or(defaults.size),
        seed: common.seed.or(file.seed).unwrap_or(defaults.seed),
    };
    spec.validate_distribution()?;
    let eps = common.eps.or(file.eps).unwrap_or(match model {
        Model::Mk => 2.0e5,
        Model::Rb => 1.0e5,
    });
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Config(format!(
            "working point must be finite and positive, got {eps}"
        )));
    }
    Ok(Resolved {
        spec,
        eps,
        e_window_max: common.emax.or(file.e_window_max),
        grid_points: common.grid_points.or(file.grid_points),
        cache_dir: common.cache_dir.clone().or(file.cache_dir),
        out_dir: common.out_dir.clone(),
        svg_on: !common.no_svg,
        explicit_center: center_source.is_some(),
    })
}

fn resolved_config(r: &Resolved) -> ResolvedConfig {
    ResolvedConfig {
        model: r.spec.model.as_str().to_string(),
        center: r.spec.center,
        width: r.spec.width,
        size: r.spec.size,
        seed: r.spec.seed,
        eps: r.eps,
        e_window_max: r.e_window_max,
        grid_points: r.grid_points,
        cache_dir: r.cache_dir.as_ref().map(|p| p.display().to_string()),
    }
}

/// Parse argv, execute, and map the outcome to a process exit code:
/// 0 success, 1 failed check, 2 usage or configuration error, 3
/// resource or numerical failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv
        .iter()
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, echo) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, echo: Vec<String>) -> Result<()> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args, echo),
        Command::Variance(args) => cmd_variance(args, echo),
        Command::Rigidity(args) => cmd_rigidity(args, echo),
        Command::Scaling(args) => cmd_scaling(args, echo),
        Command::Diagnostics(args) => cmd_diagnostics(args, echo),
        Command::Jumps(args) => cmd_jumps(args),
    }
}

/// Evenly spaced grid from 0 to `max` inclusive.
fn linear_grid(max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
}

fn theory_meta(spec: &EnsembleSpec, eps: f64) -> CurveMeta {
    // Closed-form curves are evaluated at the ensemble center; width 0
    // distinguishes them from ensemble-averaged results.
    CurveMeta {
        width: 0.0,
        ..CurveMeta::from_spec(spec, eps)
    }
}

fn write_with_manifest(
    r: &Resolved,
    echo: Vec<String>,
    subcommand: &str,
    files: Vec<(String, String)>,
    notes: Vec<String>,
) -> Result<()> {
    let mut m = RunManifest::new(echo, subcommand, resolved_config(r));
    for (name, contents) in &files {
        io::write_text(&r.out_dir.join(name), contents)?;
        m.outputs.push(name.clone());
    }
    m.notes = notes;
    m.outputs.push("run-manifest.json".into());
    manifest::write_manifest(&r.out_dir.join("run-manifest.json"), &m)
}

fn cmd_spectrum(args: SpectrumArgs, echo: Vec<String>) -> Result<()> {
    let r = resolve(&args.common)?;
    if !r.explicit_center {
        return Err(Error::Config(
            "spectrum needs an explicit parameter: --beta for mk, --alpha for rb \
             (or `center` in the config file)"
            .into(),
        ));
    }
    let params = ModelParams::from_value(r.spec.model, r.spec.center)?;
    let e_max = match r.e_window_max {
        Some(e) => e,
        None => spectra::emax_for_eps(&params, r.eps)?,
    };
    let spectrum = io::load_or_generate(r.cache_dir.as_deref(), &params, e_max)?;
    let smooth = match &params {
        ModelParams::Mk(p) => spectra::mk_mean_staircase(e_max, p),
        ModelParams::Rb(p) => spectra::rb_mean_staircase(e_max, p),
    };
    let residual = spectrum.len() as f64 - smooth;
    println!(
        "model {} parameter {} cutoff {e_max}",
        r.spec.model.as_str(),
        r.spec.center
    );
    println!("levels: {}", spectrum.len());
    println!(
        "staircase residual at cutoff: {residual:.3} ({:.3e} relative)",
        residual / smooth.max(1.0)
    );
    write_with_manifest(
        &r,
        echo,
        "spectrum",
        vec![("spectrum.csv".into(), io::spectrum_to_csv(&spectrum))],
        vec![],
    )
}

fn cmd_variance(args: VarianceArgs, echo: Vec<String>) -> Result<()> {
    let r = resolve(&args.common)?;
    let spec = r.spec;
    let params = ModelParams::from_value(spec.model, spec.center)?;
    let window_max = match r.e_window_max {
        Some(e) if e > 0.0 && e.is_finite() => e,
        Some(e) => {
            return Err(Error::Config(format!(
                "largest window width must be positive, got {e}"
            )))
        }
        None => 3.0 * spectra::oscillation_period(&params, r.eps),
    };
    let widths = linear_grid(window_max, r.grid_points.unwrap_or(300));
    let numeric = numstats::number_variance(&spec, r.eps, &widths)?;
    let cfg = TheoryConfig::default();
    let meta = theory_meta(&spec, r.eps);
    let closed = |variant: TheoryVariant, provenance: Provenance| match spec.model {
        Model::Mk => numstats::theory_curve(CurveKind::Sigma, provenance, meta, &widths, |e| {
            theory::mk_variance(r.eps, e, spec.center, &cfg, variant)
        }),
        Model::Rb => numstats::theory_curve(CurveKind::Sigma, provenance, meta, &widths, |e| {
            theory::rb_variance(r.eps, e, spec.center, &cfg, variant)
        }),
    };
    let old = closed(TheoryVariant::Old, Provenance::TheoryOld);
    let coherent = closed(TheoryVariant::Coherent, Provenance::TheoryCoherent);
    let averaged = if args.ensemble_average {
        if spec.model != Model::Rb {
            return Err(Error::Config(
                "--ensemble-average integrates the rb closed form over the \
                 aspect-ratio law; run with --model rb"
                    .into(),
            ));
        }
        let points = widths
            .par_iter()
            .map(|&e| {
                theory::rb_variance_ensemble(r.eps, e, &spec, &cfg, TheoryVariant::Old)
                    .map(|y| (e, y))
            })
            .collect::<Result<Vec<_>>>()?;
        Some(StatCurve {
            kind: CurveKind::Sigma,
            provenance: Provenance::TheoryOld,
            meta: CurveMeta::from_spec(&spec, r.eps),
            points,
        })
    } else {
        None
    };

    let mut files = vec![
        ("variance-numeric.csv".to_string(), io::curves_to_csv(&[&numeric])?),
        ("variance-theory-old.csv".to_string(), io::curves_to_csv(&[&old])?),
        (
            "variance-theory-coherent.csv".to_string(),
            io::curves_to_csv(&[&coherent])?,
        ),
    ];
    if let Some(avg) = &averaged {
        files.push((
            "variance-ensemble-average.csv".to_string(),
            io::curves_to_csv(&[avg])?,
        ));
    }
    if r.svg_on {
        let mut series = vec![
            Series {
                label: "numeric".into(),
                color: svg::provenance_color(Provenance::Numeric),
                points: &numeric.points,
            },
            Series {
                label: "closed form".into(),
                color: svg::provenance_color(Provenance::TheoryOld),
                points: &old.points,
            },
            Series {
                label: "closed form, corrected".into(),
                color: svg::provenance_color(Provenance::TheoryCoherent),
                points: &coherent.points,
            },
        ];
        if let Some(avg) = &averaged {
            series.push(Series {
                label: "ensemble-averaged form".into(),
                color: svg::ENSEMBLE_COLOR,
                points: &avg.points,
            });
        }
        let title = format!(
            "level-number variance, {} at eps = {}",
            spec.model.as_str(),
            r.eps
        );
        files.push((
            "variance.svg".to_string(),
            svg::plot_svg(&title, "window width", "variance", &series, &[]),
        ));
    }
    println!(
        "variance: {} members at eps = {}, {} window widths up to {window_max}",
        spec.size,
        r.eps,
        widths.len()
    );
    write_with_manifest(&r, echo, "variance", files, vec![])
}

fn cmd_rigidity(args: RigidityArgs, echo: Vec<String>) -> Result<()> {
    let r = resolve(&args.common)?;
    let spec = r.spec;
    let cfg = TheoryConfig::default();
    if args.sweep {
        let (lo_default, hi_default) = match spec.model {
            Model::Mk => (5.0e4, 5.0e5),
            Model::Rb => (1.0e4, 1.0e6),
        };
        let lo = args.sweep_min.unwrap_or(lo_default);
        let hi = args.sweep_max.unwrap_or(hi_default);
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(Error::Config(format!(
                "sweep range must satisfy 0 < min < max, got [{lo}, {hi}]"
            )));
        }
        let n = r.grid_points.unwrap_or(60).max(2);
        let grid: Vec<f64> = (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect();
        let numeric = numstats::rigidity_sweep(&spec, &grid, args.window_periods)?;
        let meta = CurveMeta {
            eps: 0.0,
            ..theory_meta(&spec, 0.0)
        };
        let closed = |variant: TheoryVariant, provenance: Provenance| match spec.model {
            Model::Mk => {
                numstats::theory_curve(CurveKind::Delta3, provenance, meta, &grid, |eps| {
                    theory::mk_rigidity(eps, spec.center, &cfg, variant)
                })
            }
            Model::Rb => {
                numstats::theory_curve(CurveKind::Delta3, provenance, meta, &grid, |eps| {
                    theory::rb_rigidity(eps, spec.center, &cfg, variant)
                })
            }
        };
        let old = closed(TheoryVariant::Old, Provenance::TheoryOld);
        let coherent = closed(TheoryVariant::Coherent, Provenance::TheoryCoherent);
        let mut notes = Vec::new();
        let trend = if spec.model == Model::Mk {
            let points: Vec<(f64, f64)> = grid
                .iter()
                .filter_map(|&eps| {
                    let t = theory::mk_rigidity_trend(eps, spec.center);
                    t.valid.then_some((eps, t.value))
                })
                .collect();
            if points.is_empty() {
                notes.push(format!(
                    "growth trend omitted: it applies only for eps >= {} here",
                    spec.center
                ));
                None
            } else {
                Some(StatCurve {
                    kind: CurveKind::Delta3,
                    provenance: Provenance::TheoryOld,
                    meta,
                    points,
                })
            }
        } else {
            None
        };
        let jumps = if spec.model == Model::Mk {
            theory::mk_jump_locations(spec.center, cfg.m_r_max)
                .into_iter()
                .filter(|j| j.eps >= lo && j.eps <= hi)
                .collect()
        } else {
            Vec::new()
        };

        let mut files = vec![
            (
                "rigidity-sweep-numeric.csv".to_string(),
                io::curves_to_csv(&[&numeric])?,
            ),
            (
                "rigidity-sweep-theory-old.csv".to_string(),
                io::curves_to_csv(&[&old])?,
            ),
            (
                "rigidity-sweep-theory-coherent.csv".to_string(),
                io::curves_to_csv(&[&coherent])?,
            ),
        ];
        if let Some(trend) = &trend {
            files.push((
                "rigidity-trend.csv".to_string(),
                io::curves_to_csv(&[trend])?,
            ));
        }
        if !jumps.is_empty() {
            let mut csv = String::from("m_theta,m_r,eps\n");
            for j in &jumps {
                csv.push_str(&format!("{},{},{}\n", j.m_theta, j.m_r, j.eps));
            }
            files.push(("rigidity-jumps.csv".to_string(), csv));
        }
        if r.svg_on {
            let mut series = vec![
                Series {
                    label: "numeric".into(),
                    color: svg::provenance_color(Provenance::Numeric),
                    points: &numeric.points,
                },
                Series {
                    label: "closed form".into(),
                    color: svg::provenance_color(Provenance::TheoryOld),
                    points: &old.points,
                },
                Series {
                    label: "closed form, corrected".into(),
                    color: svg::provenance_color(Provenance::TheoryCoherent),
                    points: &coherent.points,
                },
            ];
            if let Some(trend) = &trend {
                series.push(Series {
                    label: "growth trend".into(),
                    color: svg::TREND_COLOR,
                    points: &trend.points,
                });
            }
            let vlines: Vec<f64> = jumps.iter().map(|j| j.eps).collect();
            let title = format!("saturation rigidity sweep, {}", spec.model.as_str());
            files.push((
                "rigidity-sweep.svg".to_string(),
                svg::plot_svg(&title, "working point", "rigidity", &series, &vlines),
            ));
        }
        println!(
            "rigidity sweep: {} working points in [{lo}, {hi}], windows of {} periods",
            grid.len(),
            args.window_periods
        );
        write_with_manifest(&r, echo, "rigidity", files, notes)
    } else {
        let params = ModelParams::from_value(spec.model, spec.center)?;
        let window_max = r
            .e_window_max
            .unwrap_or(3.0 * spectra::oscillation_period(&params, r.eps));
        if !(window_max.is_finite() && window_max > 0.0) {
            return Err(Error::Config(format!(
                "largest window width must be positive, got {window_max}"
            )));
        }
        let e_grid = linear_grid(window_max, r.grid_points.unwrap_or(300));
        let numeric = numstats::rigidity_curve_numeric(&spec, r.eps, &e_grid)?;
        // E-dependent closed forms come from projecting a dense
        // variance curve through the rigidity kernel.
        let dense = linear_grid(window_max * 1.02, 4000);
        let meta = theory_meta(&spec, r.eps);
        let project = |variant: TheoryVariant, provenance: Provenance| -> Result<StatCurve> {
            let sigma = match spec.model {
                Model::Mk => {
                    numstats::theory_curve(CurveKind::Sigma, provenance, meta, &dense, |e| {
                        theory::mk_variance(r.eps, e, spec.center, &cfg, variant)
                    })
                }
                Model::Rb => {
                    numstats::theory_curve(CurveKind::Sigma, provenance, meta, &dense, |e| {
                        theory::rb_variance(r.eps, e, spec.center, &cfg, variant)
                    })
                }
            };
            let points = e_grid
                .iter()
                .map(|&e| numstats::rigidity_from_sigma(&sigma, e).map(|y| (e, y)))
                .collect::<Result<Vec<_>>>()?;
            Ok(StatCurve {
                kind: CurveKind::Delta3,
                provenance,
                meta,
                points,
            })
        };
        let old = project(TheoryVariant::Old, Provenance::TheoryOld)?;
        let coherent = project(TheoryVariant::Coherent, Provenance::TheoryCoherent)?;
        let saturation = match spec.model {
            Model::Mk => theory::mk_rigidity_old(r.eps, spec.center, &cfg),
            Model::Rb => theory::rb_rigidity_old(r.eps, spec.center, &cfg),
        };
        let mut files = vec![
            (
                "rigidity-width-numeric.csv".to_string(),
                io::curves_to_csv(&[&numeric])?,
            ),
            (
                "rigidity-width-theory-old.csv".to_string(),
                io::curves_to_csv(&[&old])?,
            ),
            (
                "rigidity-width-theory-coherent.csv".to_string(),
                io::curves_to_csv(&[&coherent])?,
            ),
        ];
        if r.svg_on {
            let series = vec![
                Series {
                    label: "numeric".into(),
                    color: svg::provenance_color(Provenance::Numeric),
                    points: &numeric.points,
                },
                Series {
                    label: "closed form".into(),
                    color: svg::provenance_color(Provenance::TheoryOld),
                    points: &old.points,
                },
                Series {
                    label: "closed form, corrected".into(),
                    color: svg::provenance_color(Provenance::TheoryCoherent),
                    points: &coherent.points,
                },
            ];
            let title = format!(
                "spectral rigidity, {} at eps = {}",
                spec.model.as_str(),
                r.eps
            );
            files.push((
                "rigidity-width.svg".to_string(),
                svg::plot_svg(&title, "window width", "rigidity", &series, &[]),
            ));
        }
        println!(
            "rigidity: {} window widths up to {window_max} at eps = {}; \
             saturation (closed form) = {saturation:.4}",
            e_grid.len(),
            r.eps
        );
        write_with_manifest(&r, echo, "rigidity", files, vec![])
    }
}

fn cmd_scaling(args: ScalingArgs, echo: Vec<String>) -> Result<()> {
    let r = resolve(&args.common)?;
    if r.spec.model != Model::Mk {
        return Err(Error::Config(
            "scaling sweeps the Kepler-type strength; run with --model mk".into(),
        ));
    }
    let betas: Vec<f64> = (0..10).map(|k| (2 * k + 1) as f64 * 1.0e6).collect();
    let relative_width = r.spec.width / r.spec.center;
    let n = r.grid_points.unwrap_or(300);
    let cfg = TheoryConfig::default();
    let mut curves: Vec<StatCurve> = Vec::new();
    let mut normalized: Vec<StatCurve> = Vec::new();
    for &beta in &betas {
        let spec_k = EnsembleSpec {
            model: Model::Mk,
            center: beta,
            width: relative_width * beta,
            size: r.spec.size,
            seed: r.spec.seed,
        };
        let params = ModelParams::from_value(Model::Mk, beta)?;
        let period = spectra::oscillation_period(&params, r.eps);
        let widths = linear_grid(3.0 * period, n);
        let numeric = numstats::number_variance(&spec_k, r.eps, &widths)?;
        let closed = numstats::theory_curve(
            CurveKind::Sigma,
            Provenance::TheoryOld,
            theory_meta(&spec_k, r.eps),
            &widths,
            |e| theory::mk_variance_old(r.eps, e, beta, &cfg),
        );
        if args.normalized {
            let omega = (2.0 * beta).sqrt();
            let scale = |c: &StatCurve| StatCurve {
                points: c
                    .points
                    .iter()
                    .map(|&(x, y)| (x / period, y / omega))
                    .collect(),
                ..c.clone()
            };
            normalized.push(scale(&numeric));
            normalized.push(scale(&closed));
        }
        curves.push(numeric);
        curves.push(closed);
    }
    let refs: Vec<&StatCurve> = curves.iter().collect();
    let mut files = vec![("scaling.csv".to_string(), io::curves_to_csv(&refs)?)];
    let mut notes = Vec::new();
    if args.normalized {
        let refs: Vec<&StatCurve> = normalized.iter().collect();
        files.push(("scaling-normalized.csv".to_string(), io::curves_to_csv(&refs)?));
        notes.push(
            "scaling-normalized.csv is an auxiliary view: x in units of the leading \
             oscillation period, y divided by the harmonic frequency"
                .to_string(),
        );
    }
    if r.svg_on {
        let series: Vec<Series> = curves
            .iter()
            .enumerate()
            .map(|(i, c)| Series {
                label: match i {
                    0 => "numeric (one curve per strength)".to_string(),
                    1 => "closed form (one curve per strength)".to_string(),
                    _ => String::new(),
                },
                color: if i % 2 == 0 {
                    svg::provenance_color(Provenance::Numeric)
                } else {
                    svg::provenance_color(Provenance::TheoryOld)
                },
                points: &c.points,
            })
            .collect();
        let title = format!("variance growth across strengths at eps = {}", r.eps);
        files.push((
            "scaling.svg".to_string(),
            svg::plot_svg(&title, "window width", "variance", &series, &[]),
        ));
    }
    println!(
        "scaling: {} strengths, {} curves ({} members each)",
        betas.len(),
        curves.len() + normalized.len(),
        r.spec.size
    );
    write_with_manifest(&r, echo, "scaling", files, notes)
}

enum CheckStatus {
    Pass,
    Fail,
    Skip(String),
}

struct CheckRow {
    name: &'static str,
    measured: f64,
    threshold: f64,
    status: CheckStatus,
}

fn check(name: &'static str, measured: f64, threshold: f64) -> CheckRow {
    let status = if measured <= threshold {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CheckRow {
        name,
        measured,
        threshold,
        status,
    }
}

fn cmd_diagnostics(args: DiagnosticsArgs, echo: Vec<String>) -> Result<()> {
    let r = resolve(&args.common)?;
    if r.spec.model != Model::Mk {
        return Err(Error::Config(
            "diagnostics cover the Kepler-type closed forms; run with --model mk".into(),
        ));
    }
    let ts = args.tol_scale;
    if !ts.is_finite() || ts < 0.0 {
        return Err(Error::Config(format!(
            "--tol-scale must be finite and nonnegative, got {ts}"
        )));
    }
    let beta = r.spec.center;
    let omega = (2.0 * beta).sqrt();
    let cfg = TheoryConfig::default();
    let mut rows: Vec<CheckRow> = Vec::new();

    // Ensemble self-averaging of the density fluctuation. The residual
    // scatter shrinks as 1/sqrt(size), so the threshold tracks it with
    // a floor for systematic effects.
    let n_sqrt = (r.spec.size as f64).sqrt();
    if r.spec.size >= 2 {
        let grid = [0.5 * r.eps, r.eps];
        let v = average_delta_rho_check(&r.spec, &grid)?;
        rows.push(check(
            "density self-averaging",
            v,
            (0.03f64).max(0.2 / n_sqrt) * ts,
        ));
    } else {
        rows.push(CheckRow {
            name: "density self-averaging",
            measured: f64::NAN,
            threshold: 0.03 * ts,
            status: CheckStatus::Skip(
                "needs at least 2 ensemble members; a single member cannot self-average".into(),
            ),
        });
    }

    // Off-diagonal phase products decay under the ensemble average.
    let pairs = [
        (IndexPair { m_theta: 1, m_r: 1 }, IndexPair { m_theta: 1, m_r: 2 }),
        (IndexPair { m_theta: 1, m_r: 2 }, IndexPair { m_theta: 1, m_r: 3 }),
        (IndexPair { m_theta: 2, m_r: 3 }, IndexPair { m_theta: 1, m_r: 1 }),
        (IndexPair { m_theta: 1, m_r: 1 }, IndexPair { m_theta: 2, m_r: 2 }),
    ];
    if r.spec.size >= 2 {
        let worst = theory::diag_offdiag_average(&r.spec, r.eps, 1.1 * r.eps, &pairs)?;
        // Dephased cosines leave scatter of variance 1/(2 size) on each
        // half-average; four sigma of that is the expected ceiling.
        let dephasing = 2.0 / (2.0 * r.spec.size as f64).sqrt();
        rows.push(check(
            "off-diagonal product decay",
            worst,
            (0.05f64).max(dephasing) * ts,
        ));
    } else {
        rows.push(CheckRow {
            name: "off-diagonal product decay",
            measured: f64::NAN,
            threshold: 0.05 * ts,
            status: CheckStatus::Skip(
                "needs at least 2 ensemble members to average phases".into(),
            ),
        });
    }

    // Control: the equal-index difference phase keeps exactly 1/2.
    let control_pair = IndexPair { m_theta: 1, m_r: 1 };
    let (diff, _) =
        theory::pair_product_average(&r.spec, &control_pair, r.eps, &control_pair, r.eps)?;
    rows.push(check("diagonal control offset", (diff - 0.5).abs(), 0.02 * ts));

    // Isolated angular families stay negligible. The threshold tracks
    // the closed-form scaling from the reference point (3e6, 5e5).
    let iso = theory::isolated_orbit_rigidity(5.0e5, beta, &cfg);
    let iso_threshold = 6.0e-4 * (3.0e6 / beta).powf(2.0 / 3.0);
    rows.push(check("isolated-orbit rigidity bound", iso, iso_threshold * ts));

    // Boundary-axis rigidity saturates at 1/48 per family.
    let target = 1.0 / 48.0;
    let worst_axis = [
        theory::AxisFamily::AngularMomentum,
        theory::AxisFamily::RadialMomentum,
    ]
    .into_iter()
    .map(|family| (theory::mk_axis_rigidity(r.eps, beta, family, 100) - target).abs())
    .fold(0.0f64, f64::max);
    rows.push(check("boundary-axis saturation vs 1/48", worst_axis, 1.0e-6 * ts));

    // Energy-independent radial background vs its closed form
    // (37.29 at beta = 3e6).
    let background = theory::mk_rigidity_radial_background(beta, &cfg);
    let exact = omega * theory::ZETA3 / (8.0 * std::f64::consts::PI * std::f64::consts::PI);
    rows.push(check(
        "radial background vs zeta(3) form",
        (background / exact - 1.0).abs(),
        5.0e-3 * ts,
    ));

    let mut report = String::new();
    report.push_str(&format!(
        "diagnostics for mk: beta = {beta}, eps = {}, size = {}, seed = {}, tol-scale = {ts}\n\n",
        r.eps, r.spec.size, r.spec.seed
    ));
    report.push_str(&format!(
        "{:<36} {:>14} {:>14} {:>8}\n",
        "check", "measured", "threshold", "status"
    ));
    let mut failures = 0;
    for row in &rows {
        let status = match &row.status {
            CheckStatus::Pass => "PASS".to_string(),
            CheckStatus::Fail => {
                failures += 1;
                "FAIL".to_string()
            }
            CheckStatus::Skip(_) => "SKIP".to_string(),
        };
        report.push_str(&format!(
            "{:<36} {:>14.6e} {:>14.6e} {:>8}\n",
            row.name, row.measured, row.threshold, status
        ));
        if let CheckStatus::Skip(reason) = &row.status {
            report.push_str(&format!("    skipped: {reason}\n"));
        }
    }
    report.push_str(&format!(
        "\n{} checks, {failures} failed, {} skipped\n",
        rows.len(),
        rows.iter()
            .filter(|r| matches!(r.status, CheckStatus::Skip(_)))
            .count()
    ));
    print!("{report}");
    write_with_manifest(
        &r,
        echo,
        "diagnostics",
        vec![("diagnostics-report.txt".to_string(), report)],
        vec![],
    )?;
    if failures > 0 {
        return Err(Error::CheckFailed(format!(
            "{failures} diagnostics check(s) exceeded tolerance; see diagnostics-report.txt"
        )));
    }
    Ok(())
}

fn cmd_jumps(args: JumpsArgs) -> Result<()> {
    let r = resolve(&args.common)?;
    if r.spec.model != Model::Mk {
        return Err(Error::Config(
            "weight jumps are a Kepler-type feature; run with --model mk".into(),
        ));
    }
    if args.max_index == 0 {
        return Err(Error::Config("--max-index must be at least 1".into()));
    }
    let jumps = theory::mk_jump_locations(r.spec.center, args.max_index);
    println!(
        "weight-step locations for beta = {} (indices up to {})",
        r.spec.center, args.max_index
    );
    println!("{:>8} {:>8} {:>18}", "m_theta", "m_r", "eps");
    for j in &jumps {
        println!("{:>8} {:>8} {:>18.8e}", j.m_theta, j.m_r, j.eps);
    }
    println!("{} locations", jumps.len());
    Ok(())
}
