//! Generate an exact Kepler-type spectrum, unfold it on the smooth
//! staircase, and show that the unfolded density is one level per unit.
//!
//! Levels are `E = l^2 + 2 p omega` over nonnegative integer pairs, with
//! `omega = sqrt(2 beta)`; the smooth staircase maps each energy to its
//! expected index.

use levelstat::spectra::{generate, mk_mean_staircase, unfold, MkParams, ModelParams};

fn main() {
    let beta = 50_000.0;
    let params = MkParams::new(beta).expect("beta must be positive");
    let e_max = 40_000.0;
    let spectrum = generate(&ModelParams::Mk(params), e_max).expect("generation fits the budget");
    println!(
        "beta = {beta}, omega = {:.3}: {} levels below E = {e_max}",
        params.omega(),
        spectrum.len()
    );

    // The exact count tracks the smooth staircase to O(sqrt(N)).
    let smooth = mk_mean_staircase(e_max, &params);
    let residual = spectrum.len() as f64 - smooth;
    println!(
        "count {} vs smooth staircase {smooth:.1} (residual {residual:+.1})",
        spectrum.len()
    );
    assert!(
        residual.abs() < 6.0 * smooth.sqrt(),
        "staircase residual {residual} is far outside the fluctuation scale"
    );

    // After unfolding, any wide window holds about one level per unit.
    let unfolded = unfold(&spectrum).expect("spectrum is nonempty");
    let eps_max = unfolded.eps_max();
    for frac in [0.25, 0.5, 0.75] {
        let lo = eps_max * (frac - 0.10);
        let hi = eps_max * (frac + 0.10);
        let count = unfolded
            .values()
            .iter()
            .filter(|&&v| v >= lo && v <= hi)
            .count() as f64;
        let expected = hi - lo;
        println!(
            "window [{lo:.0}, {hi:.0}]: {count} levels for width {expected:.0} \
             (ratio {:.4})",
            count / expected
        );
        assert!(
            (count / expected - 1.0).abs() < 0.05,
            "unfolded density is off: {count} levels in a window of width {expected}"
        );
    }

    // First few levels, with their quantum numbers.
    for level in spectrum.levels().iter().take(5) {
        println!("E = {:10.3}  (l = {}, p = {})", level.energy, level.q1, level.q2);
    }
}
