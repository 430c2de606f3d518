//! Orbit-family weights of the Kepler-type model jump when the working
//! point crosses `eps = (2 beta / 3) (m_theta / m_r)^3` for coprime
//! index pairs. This example tabulates the jump locations and measures
//! the rigidity step across the lowest few.

use levelstat::theory::{mk_jump_locations, mk_rigidity_old, TheoryConfig};

fn main() {
    let beta = 3.0e6;
    let jumps = mk_jump_locations(beta, 6);
    println!("jump locations for beta = {beta:.0e} (coprime pairs up to index 6):");
    println!("{:>8} {:>6} {:>16}", "m_theta", "m_r", "eps");
    for j in &jumps {
        println!("{:>8} {:>6} {:>16.5e}", j.m_theta, j.m_r, j.eps);
    }

    // Crossing a jump absorbs one more angular family into every radial
    // harmonic whose index is a multiple of m_r, so the saturation
    // rigidity steps up by a fixed closed-form amount.
    let cfg = TheoryConfig::default();
    let omega = (2.0 * beta).sqrt();
    println!("\nrigidity step across each jump (measured vs closed form):");
    for j in jumps.iter().take(3) {
        let below = mk_rigidity_old(j.eps * (1.0 - 1e-9), beta, &cfg);
        let above = mk_rigidity_old(j.eps * (1.0 + 1e-9), beta, &cfg);
        let measured = above - below;
        let expected: f64 = (1..=cfg.m_r_max)
            .filter(|m| m % j.m_r == 0)
            .map(|m| omega / (2.0 * std::f64::consts::PI.powi(2) * (m as f64).powi(3)))
            .sum();
        println!(
            "eps = {:>12.5e}: step {measured:.5} vs {expected:.5}",
            j.eps
        );
        assert!(
            (measured - expected).abs() < 1e-6 * expected,
            "step at eps={} should be {expected}, got {measured}",
            j.eps
        );
    }
}
