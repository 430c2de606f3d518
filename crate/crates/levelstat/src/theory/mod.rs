//! Closed-form predictions for the two models, built from periodic-orbit
//! harmonics of the level-density fluctuation.
//!
//! Every family enters as a [`HarmonicTerm`]: locally, near a working
//! point `eps` on the unfolded axis, it contributes
//! `weight^(1/2) * amplitude * cos(frequency * (eps' - eps) + phase)`
//! to the density fluctuation. Under parametric ensemble averaging the
//! families decorrelate, so a window of width `E` picks up
//!
//! * number variance: `2 * weight * (amplitude/frequency)^2 * sin^2(frequency*E/2)`,
//! * saturated rigidity: `weight * (amplitude/frequency)^2 / 2`
//!
//! per term, which is what [`variance_from_terms`] and
//! [`saturation_from_terms`] evaluate. The model-specific sums in
//! [`mk`] and [`rb`] carry the same content in explicit closed form.

pub mod diag;
mod fresnel;
pub mod mk;
pub mod rb;

pub use diag::{diag_offdiag_average, pair_product_average, IndexPair};
pub use fresnel::fresnel;
pub use mk::*;
pub use rb::*;

use crate::error::{Error, Result};

/// Truncation and tolerance knobs shared by all theory sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConfig {
    /// Largest radial / first-side repetition index kept.
    pub m_r_max: u32,
    /// Largest angular / second-side repetition index kept.
    pub m_theta_max: u32,
    /// Terms whose saturation contribution falls below this fraction of
    /// the leading term's are dropped.
    pub term_tol: f64,
    /// Spacing parameter of the billiard sums (unity for unit mean spacing).
    pub delta_rb: f64,
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig {
            m_r_max: 32,
            m_theta_max: 32,
            term_tol: 1e-9,
            delta_rb: 1.0,
        }
    }
}

impl TheoryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_r_max == 0 {
            return Err(Error::Config("m_r_max must be at least 1".into()));
        }
        if !(self.term_tol >= 0.0) || self.term_tol >= 1.0 {
            return Err(Error::Config(format!(
                "term_tol must lie in [0, 1), got {}",
                self.term_tol
            )));
        }
        if !(self.delta_rb > 0.0) || !self.delta_rb.is_finite() {
            return Err(Error::Config(format!(
                "delta_rb must be finite and positive, got {}",
                self.delta_rb
            )));
        }
        Ok(())
    }
}

/// Selects between the plain periodic-orbit weights ("old") and the
/// weights corrected for interference with the boundary terms
/// ("coherent").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoryVariant {
    Old,
    Coherent,
}

/// One cosine harmonic of the density fluctuation at a working point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub m_theta: u32,
    pub m_r: u32,
    /// Dimensionless statistical weight multiplying the term's
    /// variance/rigidity contribution.
    pub weight: f64,
    /// Density-fluctuation amplitude.
    pub amplitude: f64,
    /// Local frequency along the unfolded axis, `d(phase)/d(eps)`.
    pub frequency: f64,
    /// Phase at the working point.
    pub phase: f64,
}

impl HarmonicTerm {
    /// Saturated rigidity carried by this term alone.
    pub fn saturation(&self) -> f64 {
        let r = self.amplitude / self.frequency;
        0.5 * self.weight * r * r
    }

    /// Number-variance contribution for a window of width `e`.
    pub fn variance(&self, e: f64) -> f64 {
        let r = self.amplitude / self.frequency;
        let s = (0.5 * self.frequency * e).sin();
        2.0 * self.weight * r * r * s * s
    }
}

/// Number variance of a window of width `e` from a list of decorrelated
/// harmonics.
pub fn variance_from_terms(terms: &[HarmonicTerm], e: f64) -> f64 {
    terms.iter().map(|t| t.variance(e)).sum()
}

/// Saturated spectral rigidity from a list of decorrelated harmonics.
pub fn saturation_from_terms(terms: &[HarmonicTerm]) -> f64 {
    terms.iter().map(|t| t.saturation()).sum()
}

/// Boundary between level-repetition regimes: angular index `m_theta`
/// participates in the radial family `m_r` once
/// `m_theta <= m_r / gamma_cir`. Known values at beta = 3e6:
/// 2.0 at eps = 2.5e5 and 1.0 at eps = 2e6.
pub fn gamma_cir(beta: f64, eps: f64) -> f64 {
    debug_assert!(beta > 0.0 && eps > 0.0);
    (2.0 * beta / (3.0 * eps)).cbrt()
}
