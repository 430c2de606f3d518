//! Rectangular-billiard saturation rigidity: exact sqrt(eps) growth of
//! the plain form, the symmetry under inverting the aspect ratio, and
//! the small boundary-interference correction.

use levelstat::theory::{
    rb_rigidity_coherent, rb_rigidity_old, rb_single_weight_coherent, TheoryConfig,
};

fn main() {
    let cfg = TheoryConfig::default();
    let alpha = 1.3;

    println!("{:>12} {:>12} {:>12} {:>10}", "eps", "plain", "corrected", "ratio");
    let mut previous = None;
    for &eps in &[1.0e4, 1.0e6, 1.0e8] {
        let plain = rb_rigidity_old(eps, alpha, &cfg);
        let corrected = rb_rigidity_coherent(eps, alpha, &cfg);
        let ratio = previous.map(|p: f64| plain / p).unwrap_or(f64::NAN);
        println!("{eps:>12.0e} {plain:>12.4} {corrected:>12.4} {ratio:>10.4}");
        if let Some(p) = previous {
            // Plain weights scale exactly as sqrt(eps): a factor 100 in
            // eps multiplies the plateau by exactly 10.
            assert!(
                (plain / p - 10.0).abs() < 1e-12,
                "sqrt growth violated: ratio {}",
                plain / p
            );
        }
        previous = Some(plain);
        assert!(
            corrected < plain,
            "interference can only reduce single-family weights"
        );
    }

    // A rectangle and its transpose carry identical statistics when the
    // lattice truncation treats both axes alike.
    let square_cfg = TheoryConfig {
        m_theta_max: 24,
        m_r_max: 24,
        ..TheoryConfig::default()
    };
    let there = rb_rigidity_old(5.0e5, 1.7, &square_cfg);
    let back = rb_rigidity_old(5.0e5, 1.0 / 1.7, &square_cfg);
    println!("\naspect 1.7 vs 1/1.7: {there:.10} vs {back:.10}");
    assert!(
        (there - back).abs() < 1e-10 * there,
        "aspect-ratio inversion should be a symmetry: {there} vs {back}"
    );

    // The corrected weight deviates from 1 by x(1 - x/2) with
    // x = sqrt(m) (pi/eps)^(1/4), vanishing for long spectra.
    for &eps in &[1.0e8, 1.0e12, 1.0e16] {
        let deviation = 1.0 - rb_single_weight_coherent(eps, 1.0);
        println!("eps = {eps:.0e}: leading single-family weight deficit {deviation:.3e}");
    }
}
