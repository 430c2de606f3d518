//! Spectral rigidity of the Kepler-type model. The measured rigidity
//! rises with window width and saturates at the closed-form plateau:
//! radial families give an energy-independent background, capped
//! angular sums add the rest.

use levelstat::ensemble::EnsembleSpec;
use levelstat::numstats::rigidity_curve_numeric;
use levelstat::spectra::{oscillation_period, Model, ModelParams};
use levelstat::theory::{
    mk_rigidity_coherent, mk_rigidity_old, mk_rigidity_radial_background, TheoryConfig, ZETA3,
};

fn main() {
    let spec = EnsembleSpec {
        model: Model::Mk,
        center: 100_000.0,
        width: 5_000.0,
        size: 48,
        seed: 31,
    };
    let eps = 20_000.0;
    let cfg = TheoryConfig::default();
    let params = ModelParams::from_value(spec.model, spec.center).unwrap();
    let period = oscillation_period(&params, eps);

    let plain = mk_rigidity_old(eps, spec.center, &cfg);
    let corrected = mk_rigidity_coherent(eps, spec.center, &cfg);
    println!("saturation rigidity at eps = {eps}: plain {plain:.3}, corrected {corrected:.3}");

    // The radial background alone is omega zeta(3) / (8 pi^2).
    let omega = (2.0 * spec.center).sqrt();
    let background = mk_rigidity_radial_background(spec.center, &cfg);
    let closed = omega * ZETA3 / (8.0 * std::f64::consts::PI.powi(2));
    println!("radial background {background:.4} vs closed form {closed:.4}\n");
    assert!(
        (background / closed - 1.0).abs() < 1e-3,
        "background {background} should match {closed}"
    );

    let e_grid: Vec<f64> = (1..=8).map(|i| period * i as f64 / 2.0).collect();
    let curve = rigidity_curve_numeric(&spec, eps, &e_grid).expect("windows fit the spectrum");
    println!("{:>10} {:>12} {:>14}", "window", "numeric", "plain plateau");
    for &(e, d3) in &curve.points {
        println!("{e:>10.1} {d3:>12.3} {plain:>14.3}");
    }
    let tail = curve.points.last().unwrap().1;
    assert!(
        (tail - plain).abs() < 0.35 * plain,
        "rigidity at 4 periods should sit near the plateau: {tail} vs {plain}"
    );
}
