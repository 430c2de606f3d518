//! Rectangular-billiard number variance: the fixed-ratio closed form
//! oscillates forever, while averaging it over an aspect-ratio ensemble
//! damps the swings onto the saturation plateau.

use levelstat::ensemble::EnsembleSpec;
use levelstat::theory::{
    rb_rigidity_old, rb_variance_ensemble, rb_variance_old, TheoryConfig, TheoryVariant,
};

fn main() {
    let eps = 10_000.0;
    let alpha = 1.3;
    let spec = EnsembleSpec {
        model: levelstat::spectra::Model::Rb,
        center: alpha,
        width: 0.09,
        size: 32,
        seed: 9,
    };
    let cfg = TheoryConfig::default();
    let period = (std::f64::consts::PI * eps).sqrt();
    // The variance oscillates around twice the saturation rigidity.
    let plateau = 2.0 * rb_rigidity_old(eps, alpha, &cfg);
    println!("aspect ratio {alpha} +- {}, eps = {eps}", spec.width);
    println!("saturation plateau (2 x rigidity): {plateau:.3}\n");

    println!("{:>10} {:>12} {:>12}", "window", "fixed", "averaged");
    let mut worst_fixed = 0.0f64;
    let mut worst_avg = 0.0f64;
    for i in 1..=12 {
        let e = period * (8.0 + i as f64);
        let fixed = rb_variance_old(eps, e, alpha, &cfg);
        let avg = rb_variance_ensemble(eps, e, &spec, &cfg, TheoryVariant::Old)
            .expect("quadrature converges for moderate windows");
        println!("{e:>10.0} {fixed:>12.3} {avg:>12.3}");
        worst_fixed = worst_fixed.max((fixed - plateau).abs());
        worst_avg = worst_avg.max((avg - plateau).abs());
    }
    println!(
        "\nworst plateau deviation: fixed ratio {worst_fixed:.3}, ensemble {worst_avg:.3}"
    );
    assert!(
        worst_avg < worst_fixed,
        "ensemble averaging should damp the oscillation: {worst_avg} vs {worst_fixed}"
    );
}
