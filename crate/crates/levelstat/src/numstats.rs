//! Numerical spectral statistics over unfolded spectra and ensembles.
//!
//! Everything here works on the unfolded axis: windows `[center -
//! width/2, center + width/2]` of an [`UnfoldedSpectrum`], counted or
//! least-squares-fitted per ensemble member, then averaged across
//! members. The level-number variance is the ensemble variance of the
//! window count; the spectral rigidity is the ensemble mean of the
//! squared deviation of the staircase from its best linear fit.

use rayon::iter::{IntoParallelIterator, ParallelIterator};

use crate::ensemble::{ensemble_map_reduce, sample_ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::spectra::{self, Model, UnfoldedSpectrum};

/// Which statistic a curve tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Level-number variance of a window.
    Sigma,
    /// Spectral rigidity (least-squares staircase deviation).
    Delta3,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Sigma => "sigma",
            CurveKind::Delta3 => "delta3",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(CurveKind::Sigma),
            "delta3" => Ok(CurveKind::Delta3),
            other => Err(Error::Config(format!("unknown curve kind '{other}'"))),
        }
    }
}

/// How a curve's y values were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    /// Counted from generated spectra.
    Numeric,
    /// Closed-form sum with plain weights.
    TheoryOld,
    /// Closed-form sum with interference-corrected weights.
    TheoryCoherent,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Numeric => "numeric",
            Provenance::TheoryOld => "theory-old",
            Provenance::TheoryCoherent => "theory-coherent",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(Provenance::Numeric),
            "theory-old" => Ok(Provenance::TheoryOld),
            "theory-coherent" => Ok(Provenance::TheoryCoherent),
            other => Err(Error::Config(format!("unknown provenance '{other}'"))),
        }
    }
}

/// Run parameters a curve was produced under; written verbatim into the
/// CSV columns after `x,y,kind,provenance`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CurveMeta {
    pub model: Model,
    pub center: f64,
    pub width: f64,
    pub size: u32,
    pub seed: u64,
    /// Working point on the unfolded axis. Zero for sweep curves whose
    /// x column itself is the working point.
    pub eps: f64,
}

impl CurveMeta {
    pub fn from_spec(spec: &EnsembleSpec, eps: f64) -> Self {
        CurveMeta {
            model: spec.model,
            center: spec.center,
            width: spec.width,
            size: spec.size,
            seed: spec.seed,
            eps,
        }
    }
}

/// One statistic as a function of one axis (window width or working
/// point), tagged with what it is and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct StatCurve {
    pub kind: CurveKind,
    pub provenance: Provenance,
    pub meta: CurveMeta,
    pub points: Vec<(f64, f64)>,
}

impl StatCurve {
    /// Structural validity: nonempty, finite, nonnegative nondecreasing
    /// x.
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Config("curve has no points".into()));
        }
        for &(x, y) in &self.points {
            if !x.is_finite() || !y.is_finite() || x < 0.0 {
                return Err(Error::Config(format!(
                    "curve point ({x}, {y}) is not finite and nonnegative in x"
                )));
            }
        }
        if self.points.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err(Error::Config("curve x values must be nondecreasing".into()));
        }
        Ok(())
    }
}

/// Number of unfolded levels in the closed window
/// `[center - width/2, center + width/2]`. The caller is responsible
/// for keeping the window inside the trusted range `[0, eps_max]`.
pub fn count_in_window(u: &UnfoldedSpectrum, center: f64, width: f64) -> f64 {
    let lo = center - 0.5 * width;
    let hi = center + 0.5 * width;
    let values = u.values();
    let a = values.partition_point(|&v| v < lo);
    let b = values.partition_point(|&v| v <= hi);
    (b - a) as f64
}

/// Least-squares spectral rigidity of one window: the mean squared
/// deviation of the staircase from its best linear fit over
/// `[center - width/2, center + width/2]`. Computed in closed form: with
/// window coordinates `x_k = level - center`, `L = width`, and levels
/// sorted,
///   `Q  = sum_k (2k - 1)(L/2 - x_k)`   (the integral of `N^2`),
///   `S0 = sum_k (L/2 - x_k)`           (the integral of `N`),
///   `S1 = sum_k ((L/2)^2 - x_k^2)/2`   (the integral of `N x`),
/// and the fit residual is `(Q - S0^2/L - 12 S1^2/L^3)/L`, clamped to
/// zero against rounding.
pub fn delta3_window(u: &UnfoldedSpectrum, center: f64, width: f64) -> f64 {
    if width <= 0.0 {
        return 0.0;
    }
    let lo = center - 0.5 * width;
    let hi = center + 0.5 * width;
    let values = u.values();
    let a = values.partition_point(|&v| v < lo);
    let b = values.partition_point(|&v| v <= hi);
    let half = 0.5 * width;
    let (mut q, mut s0, mut s1) = (0.0f64, 0.0f64, 0.0f64);
    for (k, &v) in values[a..b].iter().enumerate() {
        let x = v - center;
        let reach = half - x;
        q += (2.0 * k as f64 + 1.0) * reach;
        s0 += reach;
        s1 += 0.5 * (half * half - x * x);
    }
    let l = width;
    ((q - s0 * s0 / l - 12.0 * s1 * s1 / (l * l * l)) / l).max(0.0)
}

fn check_working_point(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Config(format!(
            "working point must be finite and positive, got {eps}"
        )));
    }
    Ok(())
}

fn check_window_low_edge(eps: f64, w_max: f64) -> Result<()> {
    let lo = eps - 0.5 * w_max;
    if lo < 0.0 {
        return Err(Error::WindowRange {
            lo,
            hi: eps + 0.5 * w_max,
            eps_max: eps + 0.5 * w_max,
        });
    }
    Ok(())
}

fn check_ensemble_size(spec: &EnsembleSpec, what: &str) -> Result<()> {
    spec.validate_distribution()?;
    if spec.size < 2 {
        return Err(Error::Statistics(format!(
            "{what} needs at least 2 ensemble members, got {}",
            spec.size
        )));
    }
    Ok(())
}

/// Level-number variance across the ensemble for each window width, as
/// a curve of `(width, variance)` at working point `eps`. Each member
/// generates its spectrum once and is counted at every width.
pub fn number_variance(spec: &EnsembleSpec, eps: f64, widths: &[f64]) -> Result<StatCurve> {
    check_ensemble_size(spec, "the level-count variance")?;
    check_working_point(eps)?;
    if widths.is_empty() {
        return Err(Error::Config("no window widths supplied".into()));
    }
    if let Some(w) = widths.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::Config(format!(
            "window widths must be finite and nonnegative, got {w}"
        )));
    }
    let w_max = widths.iter().fold(0.0f64, |a, &b| a.max(b));
    check_window_low_edge(eps, w_max)?;
    let draws = sample_ensemble(spec)?;
    let sums = ensemble_map_reduce(
        &draws,
        |draw| {
            let e_max = spectra::emax_for_window(&draw.params, eps + 0.5 * w_max)?;
            let spectrum = spectra::generate(&draw.params, e_max)?;
            let unfolded = spectra::unfold(&spectrum)?;
            let counts: Vec<f64> = widths
                .iter()
                .map(|&w| count_in_window(&unfolded, eps, w))
                .collect();
            Ok(counts)
        },
        vec![(0.0f64, 0.0f64); widths.len()],
        |mut acc: Vec<(f64, f64)>, counts: Vec<f64>| {
            for (a, c) in acc.iter_mut().zip(counts) {
                a.0 += c;
                a.1 += c * c;
            }
            acc
        },
    )?;
    let n = spec.size as f64;
    let points = widths
        .iter()
        .zip(&sums)
        .map(|(&w, &(s, s2))| (w, ((s2 - s * s / n) / (n - 1.0)).max(0.0)))
        .collect();
    Ok(StatCurve {
        kind: CurveKind::Sigma,
        provenance: Provenance::Numeric,
        meta: CurveMeta::from_spec(spec, eps),
        points,
    })
}

/// Ensemble-mean spectral rigidity of a single window of width `e` at
/// working point `eps`.
pub fn rigidity_numeric(spec: &EnsembleSpec, eps: f64, e: f64) -> Result<f64> {
    let curve = rigidity_curve_numeric(spec, eps, &[e])?;
    Ok(curve.points[0].1)
}

/// Ensemble-mean spectral rigidity as a function of window width at a
/// fixed working point: a curve of `(width, delta3)`.
pub fn rigidity_curve_numeric(spec: &EnsembleSpec, eps: f64, e_grid: &[f64]) -> Result<StatCurve> {
    check_ensemble_size(spec, "the rigidity estimate")?;
    check_working_point(eps)?;
    if e_grid.is_empty() {
        return Err(Error::Config("no window widths supplied".into()));
    }
    if let Some(w) = e_grid.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::Config(format!(
            "window widths must be finite and nonnegative, got {w}"
        )));
    }
    let w_max = e_grid.iter().fold(0.0f64, |a, &b| a.max(b));
    check_window_low_edge(eps, w_max)?;
    let draws = sample_ensemble(spec)?;
    let sums = ensemble_map_reduce(
        &draws,
        |draw| {
            let e_max = spectra::emax_for_window(&draw.params, eps + 0.5 * w_max)?;
            let spectrum = spectra::generate(&draw.params, e_max)?;
            let unfolded = spectra::unfold(&spectrum)?;
            let row: Vec<f64> = e_grid
                .iter()
                .map(|&w| delta3_window(&unfolded, eps, w))
                .collect();
            Ok(row)
        },
        vec![0.0f64; e_grid.len()],
        |mut acc: Vec<f64>, row: Vec<f64>| {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += r;
            }
            acc
        },
    )?;
    let n = spec.size as f64;
    let points = e_grid.iter().zip(&sums).map(|(&w, &s)| (w, s / n)).collect();
    Ok(StatCurve {
        kind: CurveKind::Delta3,
        provenance: Provenance::Numeric,
        meta: CurveMeta::from_spec(spec, eps),
        points,
    })
}

/// Ensemble-mean rigidity across working points: at each grid point the
/// window is `window_periods` leading oscillation periods wide (periods
/// taken at the ensemble center, so every member sees the same window).
/// Returns a curve of `(eps, delta3)` with `meta.eps = 0`.
pub fn rigidity_sweep(
    spec: &EnsembleSpec,
    eps_grid: &[f64],
    window_periods: f64,
) -> Result<StatCurve> {
    check_ensemble_size(spec, "the rigidity sweep")?;
    if eps_grid.is_empty() {
        return Err(Error::Config("no working points supplied".into()));
    }
    if !window_periods.is_finite() || window_periods <= 0.0 {
        return Err(Error::Config(format!(
            "window must span a positive number of periods, got {window_periods}"
        )));
    }
    let center_params = spectra::ModelParams::from_value(spec.model, spec.center)?;
    let mut windows = Vec::with_capacity(eps_grid.len());
    let mut reach_max = 0.0f64;
    for &eps in eps_grid {
        check_working_point(eps)?;
        let w = window_periods * spectra::oscillation_period(&center_params, eps);
        check_window_low_edge(eps, w)?;
        reach_max = reach_max.max(eps + 0.5 * w);
        windows.push(w);
    }
    let draws = sample_ensemble(spec)?;
    let sums = ensemble_map_reduce(
        &draws,
        |draw| {
            let e_max = spectra::emax_for_window(&draw.params, reach_max)?;
            let spectrum = spectra::generate(&draw.params, e_max)?;
            let unfolded = spectra::unfold(&spectrum)?;
            let row: Vec<f64> = eps_grid
                .iter()
                .zip(&windows)
                .map(|(&eps, &w)| delta3_window(&unfolded, eps, w))
                .collect();
            Ok(row)
        },
        vec![0.0f64; eps_grid.len()],
        |mut acc: Vec<f64>, row: Vec<f64>| {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += r;
            }
            acc
        },
    )?;
    let n = spec.size as f64;
    let points = eps_grid.iter().zip(&sums).map(|(&x, &s)| (x, s / n)).collect();
    Ok(StatCurve {
        kind: CurveKind::Delta3,
        provenance: Provenance::Numeric,
        meta: CurveMeta::from_spec(spec, 0.0),
        points,
    })
}

/// Project a variance curve onto the rigidity of a window of width `e`:
/// `delta3(E) = (2/E^4) integral_0^E (E^3 - 2 E^2 x + x^3) sigma(x) dx`.
/// The curve is interpolated linearly between its own grid points (it is
/// anchored at the exact value `sigma(0) = 0` and the final panel is cut
/// at `E`), and each panel is integrated exactly. Constant variance `c`
/// maps to `c/2`; the uncorrelated-spectrum line `sigma = x` to `E/15`.
pub fn rigidity_from_sigma(curve: &StatCurve, e: f64) -> Result<f64> {
    if curve.kind != CurveKind::Sigma {
        return Err(Error::Config(
            "rigidity projection needs a variance (sigma) curve".into(),
        ));
    }
    curve.validate()?;
    if !e.is_finite() || e < 0.0 {
        return Err(Error::Config(format!(
            "window width must be finite and nonnegative, got {e}"
        )));
    }
    if e == 0.0 {
        return Ok(0.0);
    }
    let x_max = curve.points.last().expect("validated nonempty").0;
    if e > x_max {
        return Err(Error::WindowRange {
            lo: 0.0,
            hi: e,
            eps_max: x_max,
        });
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(curve.points.len() + 2);
    if curve.points[0].0 > 0.0 {
        pts.push((0.0, 0.0));
    }
    for &(x, y) in &curve.points {
        if x < e {
            pts.push((x, y));
        } else {
            let (x0, y0) = *pts.last().unwrap_or(&(x, y));
            let y_at_e = if x > x0 {
                y0 + (y - y0) * (e - x0) / (x - x0)
            } else {
                y
            };
            pts.push((e, y_at_e));
            break;
        }
    }
    let kernel = |x: f64| e * e * e - 2.0 * e * e * x + x * x * x;
    // Per panel the kernel is cubic and the interpolated variance is
    // linear, so three-point Gauss-Legendre integrates the product
    // exactly; grid spacing only enters through the interpolation.
    const GL_X: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const GL_W: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let mut integral = 0.0;
    for w in pts.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if x1 <= x0 {
            continue;
        }
        let half = 0.5 * (x1 - x0);
        let mid = 0.5 * (x0 + x1);
        let mut panel = 0.0;
        for (&node, gw) in GL_X.iter().zip(GL_W) {
            let x = mid + half * node;
            let y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            panel += gw * kernel(x) * y;
        }
        integral += half * panel;
    }
    Ok((2.0 * integral / e.powi(4)).max(0.0))
}

/// Evaluate a closed-form statistic over a grid in parallel and wrap it
/// as a curve.
pub fn theory_curve<F>(
    kind: CurveKind,
    provenance: Provenance,
    meta: CurveMeta,
    grid: &[f64],
    f: F,
) -> StatCurve
where
    F: Fn(f64) -> f64 + Sync,
{
    let points = grid
        .into_par_iter()
        .map(|&x| (x, f(x)))
        .collect::<Vec<(f64, f64)>>();
    StatCurve {
        kind,
        provenance,
        meta,
        points,
    }
}
