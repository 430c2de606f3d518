//! Closed-form spectral statistics for rectangular billiards.
//!
//! Periodic orbits of a rectangle with aspect ratio `alpha` form a
//! lattice indexed by bounce numbers `(m_1, m_2)`; on the unfolded axis
//! they enter through the scaled lengths `m_tilde_1 = m_1 alpha^(1/4)`
//! and `m_tilde_2 = m_2 alpha^(-1/4)`. Families with both indices
//! nonzero contribute with weight 4; the single-index (side-bouncing)
//! families carry weight 1, reduced by the boundary-interference
//! correction in the coherent variant. `delta_rb` is the mean spacing
//! carried by the unfolding; the default 1 corresponds to the standard
//! normalization.

use std::f64::consts::PI;

use super::{TheoryConfig, TheoryVariant};
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::spectra::Model;

/// Relative disagreement between quadrature refinements above which the
/// ensemble average is reported as not converged.
const QUADRATURE_TOL: f64 = 1.0e-4;

/// Scaled single-family lengths for both lattice axes:
/// `(m alpha^(1/4) for m <= m_theta_max, m alpha^(-1/4) for m <= m_r_max)`.
fn scaled_indices(alpha: f64, config: &TheoryConfig) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(alpha > 0.0);
    let a = alpha.powf(0.25);
    let first = (1..=config.m_theta_max).map(|m| m as f64 * a).collect();
    let second = (1..=config.m_r_max).map(|m| m as f64 / a).collect();
    (first, second)
}

/// Plain weight of a single-index family.
pub fn rb_single_weight_old(_eps: f64, _m_tilde: f64) -> f64 {
    1.0
}

/// Interference-corrected weight of a single-index family:
/// `(1 + (1 - x)^2) / 2` with `x = sqrt(m_tilde) (pi / eps)^(1/4)`.
/// The deviation from 1 is `x (1 - x/2)`, shrinking as `eps^(-1/4)`.
pub fn rb_single_weight_coherent(eps: f64, m_tilde: f64) -> f64 {
    let x = m_tilde.sqrt() * (PI / eps).powf(0.25);
    0.5 * (1.0 + (1.0 - x) * (1.0 - x))
}

fn single_weight(eps: f64, m_tilde: f64, variant: TheoryVariant) -> f64 {
    match variant {
        TheoryVariant::Old => rb_single_weight_old(eps, m_tilde),
        TheoryVariant::Coherent => rb_single_weight_coherent(eps, m_tilde),
    }
}

/// Level-number variance of a window of width `e` at working point
/// `eps`:
/// `sqrt(eps/(pi^5 delta)) [ sum_lattice 4 sin^2(k E r)/r^3
///   + sum_singles w sin^2(k E m_tilde)/m_tilde^3 ]`
/// with `k = sqrt(pi delta / eps)` and `r = sqrt(m_tilde_1^2 +
/// m_tilde_2^2)`.
pub fn rb_variance(eps: f64, e: f64, alpha: f64, config: &TheoryConfig, variant: TheoryVariant) -> f64 {
    let prefactor = (eps / (PI.powi(5) * config.delta_rb)).sqrt();
    let k = (PI * config.delta_rb / eps).sqrt();
    let (first, second) = scaled_indices(alpha, config);
    let mut sum = 0.0;
    for &m1 in &first {
        for &m2 in &second {
            let r = (m1 * m1 + m2 * m2).sqrt();
            let s = (k * e * r).sin();
            sum += 4.0 * s * s / (r * r * r);
        }
    }
    for &m in first.iter().chain(second.iter()) {
        let s = (k * e * m).sin();
        sum += single_weight(eps, m, variant) * s * s / (m * m * m);
    }
    prefactor * sum
}

/// Level-number variance with plain weights.
pub fn rb_variance_old(eps: f64, e: f64, alpha: f64, config: &TheoryConfig) -> f64 {
    rb_variance(eps, e, alpha, config, TheoryVariant::Old)
}

/// Level-number variance with interference-corrected single-family
/// weights.
pub fn rb_variance_coherent(eps: f64, e: f64, alpha: f64, config: &TheoryConfig) -> f64 {
    rb_variance(eps, e, alpha, config, TheoryVariant::Coherent)
}

/// Saturation rigidity: the variance sum with every `sin^2` replaced by
/// its quarter-share saturation average.
pub fn rb_rigidity(eps: f64, alpha: f64, config: &TheoryConfig, variant: TheoryVariant) -> f64 {
    let prefactor = (eps / (PI.powi(5) * config.delta_rb)).sqrt();
    let (first, second) = scaled_indices(alpha, config);
    let mut sum = 0.0;
    for &m1 in &first {
        for &m2 in &second {
            let r = (m1 * m1 + m2 * m2).sqrt();
            sum += 1.0 / (r * r * r);
        }
    }
    for &m in first.iter().chain(second.iter()) {
        sum += 0.25 * single_weight(eps, m, variant) / (m * m * m);
    }
    prefactor * sum
}

/// Saturation rigidity with plain weights. Scales exactly as
/// `sqrt(eps)`.
pub fn rb_rigidity_old(eps: f64, alpha: f64, config: &TheoryConfig) -> f64 {
    rb_rigidity(eps, alpha, config, TheoryVariant::Old)
}

/// Saturation rigidity with interference-corrected weights.
pub fn rb_rigidity_coherent(eps: f64, alpha: f64, config: &TheoryConfig) -> f64 {
    rb_rigidity(eps, alpha, config, TheoryVariant::Coherent)
}

/// Variance averaged over a Gaussian aspect-ratio ensemble by
/// Gauss-Legendre quadrature over `center ± 5 width` (clipped away from
/// zero). The ensemble weight is normalized on the same nodes, so the
/// clipped tail mass cancels. The node count scales with how many
/// oscillation cycles the fastest lattice mode sweeps across the window
/// (capped at 4096), and the estimate must agree with a grid twice as
/// fine to one part in 1e4 (unless both vanish outright); otherwise the
/// integrand oscillates too fast to resolve and the call reports a
/// numerical failure instead of a silently wrong average.
pub fn rb_variance_ensemble(
    eps: f64,
    e: f64,
    ensemble: &EnsembleSpec,
    config: &TheoryConfig,
    variant: TheoryVariant,
) -> Result<f64> {
    if ensemble.model != Model::Rb {
        return Err(Error::Config(format!(
            "aspect-ratio ensemble average requires the rb model, got {}",
            ensemble.model
        )));
    }
    ensemble.validate_distribution()?;
    if ensemble.center <= 0.0 {
        return Err(Error::Config(format!(
            "aspect-ratio center must be positive, got {}",
            ensemble.center
        )));
    }
    let center = ensemble.center;
    let width = ensemble.width;
    let lo = (center - 5.0 * width).max(center * 1.0e-6);
    let hi = center + 5.0 * width;
    let estimate = |n: usize| -> f64 {
        let pdf = |alpha: f64| {
            let z = (alpha - center) / width;
            (-0.5 * z * z).exp()
        };
        let num = integrate(|alpha| rb_variance(eps, e, alpha, config, variant) * pdf(alpha), lo, hi, n);
        let den = integrate(pdf, lo, hi, n);
        num / den
    };
    // Fastest phase in alpha: a mode of scaled length r contributes
    // cos(2 k E r(alpha)) with |dr/dalpha| <= r/(4 alpha), worst for the
    // largest single-axis index. Eight nodes per cycle resolve it.
    let k = (PI * config.delta_rb / eps).sqrt();
    let r_max = (config.m_theta_max as f64 * hi.powf(0.25))
        .max(config.m_r_max as f64 / lo.powf(0.25))
        .max(1.0);
    let swing = 2.0 * k * e.abs() * r_max / (4.0 * lo) * (hi - lo);
    let cycles = swing / (2.0 * PI);
    let n = ((8.0 * cycles).ceil() as usize).clamp(64, 4096);
    let coarse = estimate(n);
    let fine = estimate(2 * n);
    if (fine - coarse).abs() > QUADRATURE_TOL * fine.abs()
        && (fine.abs() > 1.0e-12 || coarse.abs() > 1.0e-12)
    {
        return Err(Error::Numerical(format!(
            "aspect-ratio quadrature did not converge at eps={eps}, window={e}: \
             {n}-node estimate {coarse}, {}-node estimate {fine}",
            2 * n
        )));
    }
    Ok(fine)
}
