//! Level statistics of two integrable quantum models under parametric
//! ensemble averaging.
//!
//! The crate generates exact spectra for a modified Kepler-type model
//! (levels `E = l^2 + 2*p*omega`, `omega = sqrt(2*beta)`) and for a
//! unit-area rectangular billiard (levels `E = pi*(m^2*sqrt(alpha) +
//! n^2/sqrt(alpha))`), unfolds them to unit mean spacing, and measures
//! two-point statistics across an ensemble of slightly different
//! parameter values:
//!
//! * level number variance, via [`numstats::number_variance`], and
//! * spectral rigidity, via the least-squares estimator
//!   [`numstats::rigidity_numeric`] or the kernel transform
//!   [`numstats::rigidity_from_sigma`].
//!
//! The [`theory`] module carries the matching closed-form predictions
//! built from periodic-orbit harmonics: the plain ("old") sums, the
//! boundary-coherent corrections, Fresnel-envelope exact terms, axis
//! (bouncing-ball) families, saturation trends, and the quantized
//! staircase of rigidity jumps.
//!
//! Everything downstream of a seed is deterministic: ensembles are keyed
//! by `(seed, member index)`, parallel and sequential reductions produce
//! bit-identical results, and every CLI run writes a manifest that
//! replays to byte-identical CSV output.

pub mod config;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod manifest;
pub mod numstats;
pub mod quad;
pub mod spectra;
pub mod svg;
pub mod theory;

pub mod cli;

pub use error::{Error, Result};
