//! Gaussian parameter ensembles with reproducible per-member seeding.
//!
//! An ensemble is a family of spectra whose control parameter (`beta`
//! or `alpha`) is drawn from a Gaussian law. Every member derives its
//! own seed from the master seed and its index, so members are
//! independent of each other, of the ensemble size, and of evaluation
//! order: growing an ensemble or running it on a different thread count
//! reproduces the same members bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numstats::count_in_window;
use crate::spectra::{self, Model, ModelParams};

/// Draw attempts per member before the positivity rejection gives up.
pub const MAX_REJECTIONS: u32 = 1_000_000;

/// A Gaussian parameter ensemble: `size` members with the model
/// parameter distributed as `Normal(center, width)`, truncated to
/// positive values by rejection.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnsembleSpec {
    pub model: Model,
    pub center: f64,
    pub width: f64,
    pub size: u32,
    pub seed: u64,
}

impl EnsembleSpec {
    /// Kepler-type default: `beta` within 5% of 3e6.
    pub fn mk_default() -> Self {
        EnsembleSpec {
            model: Model::Mk,
            center: 3.0e6,
            width: 1.5e5,
            size: 100,
            seed: 12345,
        }
    }

    /// Billiard default: aspect ratio within 5% of 1.4.
    pub fn rb_default() -> Self {
        EnsembleSpec {
            model: Model::Rb,
            center: 1.4,
            width: 0.07,
            size: 100,
            seed: 12345,
        }
    }

    /// Distribution-level validity: finite center, positive finite
    /// width, at least one member. Enough for sampling and for
    /// quadrature over the parameter law.
    pub fn validate_distribution(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::Config(format!(
                "ensemble center must be finite, got {}",
                self.center
            )));
        }
        if !self.width.is_finite() || self.width <= 0.0 {
            return Err(Error::Config(format!(
                "ensemble width must be finite and positive, got {}",
                self.width
            )));
        }
        if self.size == 0 {
            return Err(Error::Config("ensemble size must be at least 1".into()));
        }
        Ok(())
    }

    /// Full validity for ensemble statistics, which additionally need
    /// at least two members to estimate a variance.
    pub fn validate(&self) -> Result<()> {
        self.validate_distribution()?;
        if self.size < 2 {
            return Err(Error::Config(format!(
                "ensemble statistics need at least 2 members, got {}",
                self.size
            )));
        }
        Ok(())
    }
}

/// One sampled member: its index, the seed its generator started from,
/// and the drawn model parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleDraw {
    pub member_index: u32,
    pub member_seed: u64,
    pub params: ModelParams,
}

/// One step of the splitmix64 generator, used as a stateless mixer.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of member `index` under master seed `master`. Mixing the index
/// through a Weyl increment before the final scramble keeps nearby
/// master seeds and nearby indices statistically unrelated.
pub fn member_seed(master: u64, index: u32) -> u64 {
    let stride = 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1);
    splitmix64(splitmix64(master) ^ stride)
}

/// Draw all members of the ensemble. Nonpositive parameter draws are
/// rejected and redrawn; an ensemble whose law puts essentially no mass
/// on positive values is reported as a configuration error.
pub fn sample_ensemble(spec: &EnsembleSpec) -> Result<Vec<EnsembleDraw>> {
    spec.validate_distribution()?;
    let normal = Normal::new(spec.center, spec.width)
        .map_err(|e| Error::Config(format!("invalid ensemble law: {e}")))?;
    let mut draws = Vec::with_capacity(spec.size as usize);
    for index in 0..spec.size {
        let seed = member_seed(spec.seed, index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let value = (0..MAX_REJECTIONS)
            .map(|_| normal.sample(&mut rng))
            .find(|v| v.is_finite() && *v > 0.0)
            .ok_or_else(|| {
                Error::Config(format!(
                    "member {index} drew {MAX_REJECTIONS} nonpositive values in a row; \
                     Normal({}, {}) puts essentially no mass on positive parameters",
                    spec.center, spec.width
                ))
            })?;
        draws.push(EnsembleDraw {
            member_index: index,
            member_seed: seed,
            params: ModelParams::from_value(spec.model, value)?,
        });
    }
    Ok(draws)
}

/// Evaluate `per_member` over all draws in parallel and fold the
/// results in member order. All members are evaluated and checked
/// before folding, so the reported failure is always the one with the
/// lowest member index and the fold result is independent of the
/// thread count.
pub fn ensemble_map_reduce<T, A, F, G>(
    draws: &[EnsembleDraw],
    per_member: F,
    init: A,
    fold: G,
) -> Result<A>
where
    T: Send,
    F: Fn(&EnsembleDraw) -> Result<T> + Sync,
    G: FnMut(A, T) -> A,
{
    let results: Vec<Result<T>> = draws.par_iter().map(&per_member).collect();
    let mut values = Vec::with_capacity(results.len());
    for (draw, result) in draws.iter().zip(results) {
        match result {
            Ok(v) => values.push(v),
            Err(e) => {
                return Err(Error::Member {
                    index: draw.member_index as usize,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(values.into_iter().fold(init, fold))
}

/// Self-averaging check for the Kepler-type density fluctuation. For
/// each grid point the normalized fluctuation of the level count in a
/// window of a quarter oscillation period, `(N - w)/w`, is averaged
/// over the ensemble; the return value is the largest magnitude over
/// the grid. Individual members fluctuate at the few-percent level, so
/// a sizable ensemble must pull the average toward zero — values that
/// stay large indicate the fluctuation does not self-average.
pub fn average_delta_rho_check(spec: &EnsembleSpec, eps_grid: &[f64]) -> Result<f64> {
    if spec.model != Model::Mk {
        return Err(Error::Config(format!(
            "the density self-averaging check is defined for the mk model, got {}",
            spec.model
        )));
    }
    if eps_grid.is_empty() {
        return Err(Error::Config("empty evaluation grid".into()));
    }
    if let Some(bad) = eps_grid.iter().find(|e| !e.is_finite() || **e <= 0.0) {
        return Err(Error::Config(format!(
            "grid points must be finite and positive, got {bad}"
        )));
    }
    let draws = sample_ensemble(spec)?;
    let eps_hi = eps_grid.iter().fold(0.0f64, |a, &b| a.max(b));
    let sums = ensemble_map_reduce(
        &draws,
        |draw| {
            let e_max = spectra::emax_for_window(&draw.params, eps_hi)?;
            let spectrum = spectra::generate(&draw.params, e_max)?;
            let unfolded = spectra::unfold(&spectrum)?;
            let ModelParams::Mk(mk) = draw.params else {
                unreachable!("model checked above")
            };
            let row: Vec<f64> = eps_grid
                .iter()
                .map(|&eps| {
                    let w = 0.25 * (3.0 * mk.omega() * eps).cbrt();
                    (count_in_window(&unfolded, eps, w) - w) / w
                })
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
    let n = draws.len() as f64;
    Ok(sums.iter().map(|s| (s / n).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk_spec(center: f64, width: f64, size: u32, seed: u64) -> EnsembleSpec {
        EnsembleSpec {
            model: Model::Mk,
            center,
            width,
            size,
            seed,
        }
    }

    #[test]
    fn validation_tiers() {
        let mut s = EnsembleSpec::mk_default();
        assert!(s.validate().is_ok());
        s.size = 1;
        assert!(s.validate().is_err());
        assert!(s.validate_distribution().is_ok());
        s.size = 0;
        assert!(s.validate_distribution().is_err());
        s = EnsembleSpec::mk_default();
        s.width = 0.0;
        assert!(s.validate_distribution().is_err());
        s.width = f64::NAN;
        assert!(s.validate_distribution().is_err());
        s = EnsembleSpec::mk_default();
        s.center = f64::INFINITY;
        assert!(s.validate_distribution().is_err());
    }

    #[test]
    fn sample_moments_match_the_law() {
        let spec = mk_spec(3.0e6, 1.5e5, 10_000, 99);
        let draws = sample_ensemble(&spec).unwrap();
        assert_eq!(draws.len(), 10_000);
        let values: Vec<f64> = draws.iter().map(|d| d.params.value()).collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        assert!(
            (mean - 3.0e6).abs() < 3.0 * 1.5e5 / n.sqrt(),
            "sample mean {mean}"
        );
        assert!(
            (var.sqrt() / 1.5e5 - 1.0).abs() < 0.05,
            "sample sd {}",
            var.sqrt()
        );
    }

    #[test]
    fn sampling_is_deterministic_and_positive() {
        let spec = mk_spec(5.0, 10.0, 1000, 42);
        let a = sample_ensemble(&spec).unwrap();
        let b = sample_ensemble(&spec).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.params.value().to_bits(), y.params.value().to_bits());
            assert!(x.params.value() > 0.0);
        }
        let other = sample_ensemble(&mk_spec(5.0, 10.0, 1000, 43)).unwrap();
        let same = a
            .iter()
            .zip(&other)
            .filter(|(x, y)| x.params.value() == y.params.value())
            .count();
        assert!(same < 5, "{same} collisions between different master seeds");
    }

    #[test]
    fn member_seeds_are_distinct_and_index_stable() {
        let spec = mk_spec(3.0e6, 1.5e5, 1000, 7);
        let draws = sample_ensemble(&spec).unwrap();
        let distinct: std::collections::HashSet<u64> =
            draws.iter().map(|d| d.member_seed).collect();
        assert_eq!(distinct.len(), draws.len());
        // Prefixes agree: member k of a larger ensemble is the same draw.
        let bigger = sample_ensemble(&mk_spec(3.0e6, 1.5e5, 2000, 7)).unwrap();
        for (a, b) in draws.iter().zip(&bigger) {
            assert_eq!(a.params.value().to_bits(), b.params.value().to_bits());
        }
        assert_ne!(member_seed(1, 0), member_seed(2, 0));
    }

    #[test]
    fn hopeless_law_is_rejected_with_context() {
        let err = sample_ensemble(&mk_spec(-1.0e9, 1.0, 2, 1)).unwrap_err();
        match err {
            Error::Config(msg) => assert!(msg.contains("no mass"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn map_reduce_counts_and_orders() {
        let spec = mk_spec(3.0e6, 1.5e5, 64, 3);
        let draws = sample_ensemble(&spec).unwrap();
        let count = ensemble_map_reduce(&draws, |_| Ok(1u32), 0u32, |a, b| a + b).unwrap();
        assert_eq!(count, 64);
        // Member order, not completion order, drives the fold.
        let indices =
            ensemble_map_reduce(&draws, |d| Ok(d.member_index), Vec::new(), |mut acc, i| {
                acc.push(i);
                acc
            })
            .unwrap();
        assert_eq!(indices, (0..64).collect::<Vec<u32>>());
    }

    #[test]
    fn map_reduce_reports_lowest_failing_member() {
        let spec = mk_spec(3.0e6, 1.5e5, 16, 3);
        let draws = sample_ensemble(&spec).unwrap();
        let err = ensemble_map_reduce(
            &draws,
            |d| {
                if d.member_index == 5 || d.member_index == 3 {
                    Err(Error::Statistics("synthetic failure".into()))
                } else {
                    Ok(())
                }
            },
            (),
            |(), ()| (),
        )
        .unwrap_err();
        match err {
            Error::Member { index, source } => {
                assert_eq!(index, 3);
                assert!(matches!(*source, Error::Statistics(_)));
            }
            other => panic!("expected member error, got {other:?}"),
        }
    }

    #[test]
    fn map_reduce_thread_count_invariant() {
        let spec = mk_spec(3.0e6, 1.5e5, 200, 9);
        let draws = sample_ensemble(&spec).unwrap();
        let job = |draws: &[EnsembleDraw]| {
            ensemble_map_reduce(
                draws,
                |d| Ok(d.params.value().sqrt().sin()),
                0.0f64,
                |a, b| a + b,
            )
            .unwrap()
        };
        let default_pool = job(&draws);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| job(&draws));
        assert_eq!(default_pool.to_bits(), single.to_bits());
    }

    #[test]
    fn delta_rho_check_smoke() {
        // Small spectra keep this cheap: omega ~ 40, a few hundred
        // levels per member.
        let spec = mk_spec(800.0, 40.0, 8, 21);
        let v = average_delta_rho_check(&spec, &[500.0, 1000.0]).unwrap();
        assert!(v.is_finite() && v >= 0.0);
        assert!(v < 1.0, "normalized fluctuation {v} out of scale");
        let again = average_delta_rho_check(&spec, &[500.0, 1000.0]).unwrap();
        assert_eq!(v.to_bits(), again.to_bits());
    }

    #[test]
    fn delta_rho_check_rejects_bad_input() {
        let rb = EnsembleSpec::rb_default();
        assert!(matches!(
            average_delta_rho_check(&rb, &[100.0]),
            Err(Error::Config(_))
        ));
        let mk = mk_spec(800.0, 40.0, 4, 1);
        assert!(matches!(
            average_delta_rho_check(&mk, &[]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            average_delta_rho_check(&mk, &[-5.0]),
            Err(Error::Config(_))
        ));
    }
}
