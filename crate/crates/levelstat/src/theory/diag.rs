//! Ensemble diagnostics for the diagonal approximation.
//!
//! The variance sums keep only products of an orbit-family term with
//! itself at equal energy. That is justified when cross products average
//! out over the parameter ensemble: each family carries the phase
//! `phi(m_theta, m_r; eps, omega) - pi/4`, and a cosine product splits
//! into difference- and sum-phase halves, `cos A cos B = cos(A - B)/2 +
//! cos(A + B)/2`. Both halves must decay under the ensemble average
//! unless the indices and energies coincide, in which case the
//! difference half is identically 1/2.

use super::mk::mk_term_phase;
use crate::ensemble::{sample_ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::spectra::Model;
use std::f64::consts::PI;

/// Orbit-family winding numbers `(m_theta, m_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexPair {
    pub m_theta: u32,
    pub m_r: u32,
}

/// Ensemble means of the two halves of a cross product between family
/// `a` at `eps1` and family `b` at `eps2`: `(<cos(A - B)>/2,
/// <cos(A + B)>/2)` with `A`, `B` the family phases less `pi/4`.
pub fn pair_product_average(
    spec: &EnsembleSpec,
    a: &IndexPair,
    eps1: f64,
    b: &IndexPair,
    eps2: f64,
) -> Result<(f64, f64)> {
    if spec.model != Model::Mk {
        return Err(Error::Config(format!(
            "phase-product diagnostic requires the mk model, got {}",
            spec.model
        )));
    }
    let draws = sample_ensemble(spec)?;
    let mut diff_sum = 0.0;
    let mut sum_sum = 0.0;
    for draw in &draws {
        let beta = draw.params.value();
        let phase_a = mk_term_phase(eps1, beta, a.m_theta, a.m_r) - PI / 4.0;
        let phase_b = mk_term_phase(eps2, beta, b.m_theta, b.m_r) - PI / 4.0;
        diff_sum += (phase_a - phase_b).cos();
        sum_sum += (phase_a + phase_b).cos();
    }
    let n = draws.len() as f64;
    Ok((0.5 * diff_sum / n, 0.5 * sum_sum / n))
}

/// Largest surviving cross-product average over the supplied pairings,
/// scanning both the difference and the sum phase. Values near zero
/// certify that off-diagonal products self-average away; the
/// equal-index, equal-energy control pairing returns exactly 1/2.
pub fn diag_offdiag_average(
    spec: &EnsembleSpec,
    eps1: f64,
    eps2: f64,
    pairs: &[(IndexPair, IndexPair)],
) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Config(
            "no index pairings supplied for the cross-product diagnostic".into(),
        ));
    }
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let (diff, sum) = pair_product_average(spec, a, eps1, b, eps2)?;
        worst = worst.max(diff.abs()).max(sum.abs());
    }
    Ok(worst)
}
