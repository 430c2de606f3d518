//! Exact spectra and unfolding for the two integrable models.
//!
//! Modified Kepler model: levels `E = l^2 + 2*p*omega` over integer
//! `l, p >= 0`, with `omega = sqrt(2*beta)` always derived, never stored.
//! Its smooth staircase is
//! `N(E) = E^{3/2}/(3 omega) + (sqrt(E) + E/(2 omega))/2`.
//!
//! Rectangular billiard: levels `E = pi*(m^2*sqrt(alpha) + n^2/sqrt(alpha))`
//! over `m, n >= 1` for a unit-area rectangle of aspect ratio `alpha`.
//! The Weyl staircase in these units is `eps(E) = (sqrt(E)/2 - c)^2` with
//! `c = (alpha^{1/4} + alpha^{-1/4})/(2 sqrt(pi))`: area term `E/4`, edge
//! term `-c*sqrt(E)`, and the additive constant chosen so the turning
//! point maps to zero. The turning point always sits below the first
//! level, so unfolding only ever sees the monotone branch.
//!
//! Unfolding maps each level through the model's smooth staircase, which
//! produces a nondecreasing sequence with unit mean spacing.

use crate::error::{Error, Result};

/// Levels kept in memory per generated spectrum before we refuse to run.
pub const DEFAULT_LEVEL_BUDGET: usize = 20_000_000;

/// Extra unfolded range, in units of the leading oscillation period,
/// kept beyond the largest requested window edge.
pub const WINDOW_MARGIN_PERIODS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Mk,
    Rb,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Mk => "mk",
            Model::Rb => "rb",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mk" => Ok(Model::Mk),
            "rb" => Ok(Model::Rb),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected 'mk' or 'rb')"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MkParams {
    beta: f64,
}

impl MkParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Config(format!(
                "beta must be finite and positive, got {beta}"
            )));
        }
        Ok(MkParams { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Frequency of the harmonic branch; always `sqrt(2*beta)` exactly.
    pub fn omega(&self) -> f64 {
        (2.0 * self.beta).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbParams {
    alpha: f64,
}

impl RbParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Config(format!(
                "alpha must be finite and positive, got {alpha}"
            )));
        }
        Ok(RbParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Mk(MkParams),
    Rb(RbParams),
}

impl ModelParams {
    pub fn model(&self) -> Model {
        match self {
            ModelParams::Mk(_) => Model::Mk,
            ModelParams::Rb(_) => Model::Rb,
        }
    }

    /// The single scalar parameter (beta or alpha).
    pub fn value(&self) -> f64 {
        match self {
            ModelParams::Mk(p) => p.beta(),
            ModelParams::Rb(p) => p.alpha(),
        }
    }

    pub fn from_value(model: Model, value: f64) -> Result<Self> {
        Ok(match model {
            Model::Mk => ModelParams::Mk(MkParams::new(value)?),
            Model::Rb => ModelParams::Rb(RbParams::new(value)?),
        })
    }
}

/// One exact level with its quantum numbers. For the Kepler-type model
/// `(q1, q2) = (l, p)`; for the billiard `(q1, q2) = (m, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub q1: u32,
    pub q2: u32,
}

/// A complete spectrum below a cutoff, sorted by `(energy, q1, q2)`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    params: ModelParams,
    e_max: f64,
    levels: Vec<Level>,
}

impl Spectrum {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn model(&self) -> Model {
        self.params.model()
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Reassemble a spectrum from parts that already satisfy the sort and
    /// cutoff invariants (combinatorial completeness is the caller's
    /// responsibility; used by the cache loader).
    pub fn from_parts(params: ModelParams, e_max: f64, mut levels: Vec<Level>) -> Result<Self> {
        levels.sort_unstable_by(level_order);
        if let Some(bad) = levels.iter().find(|l| !(l.energy <= e_max)) {
            return Err(Error::Config(format!(
                "level {:.6} exceeds cutoff {:.6}",
                bad.energy, e_max
            )));
        }
        Ok(Spectrum {
            params,
            e_max,
            levels,
        })
    }
}

fn level_order(a: &Level, b: &Level) -> std::cmp::Ordering {
    a.energy
        .total_cmp(&b.energy)
        .then(a.q1.cmp(&b.q1))
        .then(a.q2.cmp(&b.q2))
}

/// A spectrum mapped through its smooth staircase: nondecreasing values
/// with unit mean spacing, trusted on `[0, eps_max]`.
#[derive(Debug, Clone)]
pub struct UnfoldedSpectrum {
    values: Vec<f64>,
    eps_max: f64,
}

impl UnfoldedSpectrum {
    /// Wrap an externally built sequence (synthetic spectra in tests).
    pub fn new(values: Vec<f64>, eps_max: f64) -> Result<Self> {
        if !(eps_max >= 0.0) {
            return Err(Error::Config(format!("eps_max must be >= 0, got {eps_max}")));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("unfolded values must be nondecreasing".into()));
        }
        if values.first().is_some_and(|&v| v < 0.0) || values.last().is_some_and(|&v| v > eps_max) {
            return Err(Error::Config(
                "unfolded values must lie within [0, eps_max]".into(),
            ));
        }
        Ok(UnfoldedSpectrum { values, eps_max })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Smooth staircase of the Kepler-type model at energy `e`.
pub fn mk_mean_staircase(e: f64, params: &MkParams) -> f64 {
    if e <= 0.0 {
        return 0.0;
    }
    let omega = params.omega();
    e.powf(1.5) / (3.0 * omega) + 0.5 * (e.sqrt() + e / (2.0 * omega))
}

/// Smooth (Weyl) staircase of the billiard at energy `e`, clamped to the
/// monotone branch above the small-energy turning point.
pub fn rb_mean_staircase(e: f64, params: &RbParams) -> f64 {
    if e <= 0.0 {
        return 0.0;
    }
    let c = rb_edge_coefficient(params);
    let root = 0.5 * e.sqrt() - c;
    if root <= 0.0 {
        0.0
    } else {
        root * root
    }
}

fn rb_edge_coefficient(params: &RbParams) -> f64 {
    let q = params.alpha().powf(0.25);
    (q + 1.0 / q) / (2.0 * std::f64::consts::PI.sqrt())
}

fn check_e_max(e_max: f64) -> Result<()> {
    if !e_max.is_finite() || e_max < 0.0 {
        return Err(Error::Config(format!(
            "energy cutoff must be finite and nonnegative, got {e_max}"
        )));
    }
    Ok(())
}

fn check_budget(estimate: f64, budget: usize) -> Result<()> {
    if estimate > budget as f64 {
        return Err(Error::Resource(format!(
            "estimated {estimate:.0} levels exceeds the budget of {budget}"
        )));
    }
    Ok(())
}

/// All Kepler-type levels with `E <= e_max`, sorted by `(energy, l, p)`.
pub fn mk_levels(params: &MkParams, e_max: f64) -> Result<Spectrum> {
    mk_levels_with_budget(params, e_max, DEFAULT_LEVEL_BUDGET)
}

pub fn mk_levels_with_budget(params: &MkParams, e_max: f64, budget: usize) -> Result<Spectrum> {
    check_e_max(e_max)?;
    check_budget(mk_mean_staircase(e_max, params) + e_max.sqrt() + 1.0, budget)?;
    let omega = params.omega();
    let two_omega = 2.0 * omega;
    let mut levels = Vec::with_capacity((mk_mean_staircase(e_max, params) * 1.05) as usize + 16);
    let mut l: u32 = 0;
    // The canonical energy expression below is also the membership test,
    // so every admissible pair appears exactly once even at the cutoff.
    let energy = |l: u32, p: u32| (l as f64) * (l as f64) + two_omega * (p as f64);
    while energy(l, 0) <= e_max {
        let mut p_guess = ((e_max - energy(l, 0)) / two_omega).floor();
        if p_guess < 0.0 {
            p_guess = 0.0;
        }
        let mut p_max = p_guess as u32;
        while energy(l, p_max + 1) <= e_max {
            p_max += 1;
        }
        while p_max > 0 && energy(l, p_max) > e_max {
            p_max -= 1;
        }
        for p in 0..=p_max {
            levels.push(Level {
                energy: energy(l, p),
                q1: l,
                q2: p,
            });
        }
        l += 1;
    }
    levels.sort_unstable_by(level_order);
    Ok(Spectrum {
        params: ModelParams::Mk(*params),
        e_max,
        levels,
    })
}

/// All billiard levels with `E <= e_max`, sorted by `(energy, m, n)`.
pub fn rb_levels(params: &RbParams, e_max: f64) -> Result<Spectrum> {
    rb_levels_with_budget(params, e_max, DEFAULT_LEVEL_BUDGET)
}

pub fn rb_levels_with_budget(params: &RbParams, e_max: f64, budget: usize) -> Result<Spectrum> {
    check_e_max(e_max)?;
    check_budget(e_max / 4.0 + 1.0, budget)?;
    let sa = params.alpha().sqrt();
    let inv_sa = 1.0 / sa;
    let pi = std::f64::consts::PI;
    let energy = |m: u32, n: u32| {
        pi * ((m as f64) * (m as f64) * sa + (n as f64) * (n as f64) * inv_sa)
    };
    let mut levels = Vec::with_capacity((e_max / 4.0) as usize + 16);
    let mut m: u32 = 1;
    while energy(m, 1) <= e_max {
        let mut n: u32 = 1;
        while energy(m, n) <= e_max {
            levels.push(Level {
                energy: energy(m, n),
                q1: m,
                q2: n,
            });
            n += 1;
        }
        m += 1;
    }
    levels.sort_unstable_by(level_order);
    Ok(Spectrum {
        params: ModelParams::Rb(*params),
        e_max,
        levels,
    })
}

/// Generate a spectrum for either model.
pub fn generate(params: &ModelParams, e_max: f64) -> Result<Spectrum> {
    match params {
        ModelParams::Mk(p) => mk_levels(p, e_max),
        ModelParams::Rb(p) => rb_levels(p, e_max),
    }
}

/// Unfold a Kepler-type spectrum through its smooth staircase.
pub fn mk_unfold(spectrum: &Spectrum) -> Result<UnfoldedSpectrum> {
    let ModelParams::Mk(p) = spectrum.params else {
        return Err(Error::Config("mk_unfold needs a Kepler-type spectrum".into()));
    };
    let values = spectrum
        .levels
        .iter()
        .map(|lv| mk_mean_staircase(lv.energy, &p))
        .collect();
    UnfoldedSpectrum::new(values, mk_mean_staircase(spectrum.e_max, &p))
}

/// Unfold a billiard spectrum through its Weyl staircase.
pub fn rb_unfold(spectrum: &Spectrum) -> Result<UnfoldedSpectrum> {
    let ModelParams::Rb(p) = spectrum.params else {
        return Err(Error::Config("rb_unfold needs a billiard spectrum".into()));
    };
    let values = spectrum
        .levels
        .iter()
        .map(|lv| rb_mean_staircase(lv.energy, &p))
        .collect();
    UnfoldedSpectrum::new(values, rb_mean_staircase(spectrum.e_max, &p))
}

/// Unfold with the staircase matching the spectrum's model.
pub fn unfold(spectrum: &Spectrum) -> Result<UnfoldedSpectrum> {
    match spectrum.params {
        ModelParams::Mk(_) => mk_unfold(spectrum),
        ModelParams::Rb(_) => rb_unfold(spectrum),
    }
}

/// Period of the leading density oscillation at unfolded position `eps`.
/// This sets window margins and theory-grid spacing.
pub fn oscillation_period(params: &ModelParams, eps: f64) -> f64 {
    match params {
        ModelParams::Mk(p) => (3.0 * p.omega() * eps).cbrt(),
        ModelParams::Rb(_) => (std::f64::consts::PI * eps).sqrt(),
    }
}

/// Invert the smooth staircase: the energy cutoff at which the unfolded
/// range reaches `eps`.
pub fn emax_for_eps(params: &ModelParams, eps: f64) -> Result<f64> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Config(format!(
            "unfolded target must be finite and nonnegative, got {eps}"
        )));
    }
    match params {
        ModelParams::Rb(p) => {
            let c = rb_edge_coefficient(p);
            let root = eps.sqrt() + c;
            Ok(4.0 * root * root)
        }
        ModelParams::Mk(p) => {
            if eps == 0.0 {
                return Ok(0.0);
            }
            let mut hi = (3.0 * p.omega() * eps).powf(2.0 / 3.0).max(1.0);
            while mk_mean_staircase(hi, p) < eps {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if mk_mean_staircase(mid, p) < eps {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(hi)
        }
    }
}

/// Energy cutoff that keeps the generated range a safety margin of
/// [`WINDOW_MARGIN_PERIODS`] oscillation periods beyond the largest
/// unfolded window edge `eps_hi`.
pub fn emax_for_window(params: &ModelParams, eps_hi: f64) -> Result<f64> {
    let margin = WINDOW_MARGIN_PERIODS * oscillation_period(params, eps_hi.max(1.0));
    emax_for_eps(params, eps_hi + margin)
}

// ═══════════════════════════════════════════════════════════════════
