//! The sharp inclusion rule for orbit families is the stationary-phase
//! shadow of an exact Fresnel-integral amplitude. Far above a family's
//! activation point the two agree; below it the exact amplitude decays
//! instead of vanishing abruptly.

use levelstat::theory::{fresnel, mk_jump_locations, mk_term_exact, mk_term_step};

fn main() {
    // Fresnel integrals at large argument approach (1/2, 1/2).
    for &x in &[1.0, 3.0, 10.0] {
        let (c, s) = fresnel(x);
        println!("fresnel({x:>4}) = ({c:.6}, {s:.6})");
    }
    let (c, s) = fresnel(30.0);
    assert!(
        (c - 0.5).abs() < 0.011 && (s - 0.5).abs() < 0.011,
        "fresnel tail should hug (1/2, 1/2): got ({c}, {s})"
    );

    let beta = 3.0e6;
    let (m_theta, m_r) = (1, 2);
    let activation = mk_jump_locations(beta, 2)
        .into_iter()
        .find(|j| j.m_theta == m_theta && j.m_r == m_r)
        .expect("the (1,2) family has a jump")
        .eps;
    println!("\nfamily ({m_theta},{m_r}) activates at eps = {activation:.3e}");

    // Well above activation, the exact amplitude rides the sharp one.
    println!("{:>12} {:>14} {:>14}", "eps", "exact", "sharp");
    let mut rms = 0.0;
    let samples = 200;
    for i in 0..samples {
        let eps = activation * (3.0 + 2.0 * i as f64 / samples as f64);
        let exact = mk_term_exact(eps, beta, m_theta, m_r);
        let sharp = mk_term_step(eps, beta, m_theta, m_r);
        if i % 40 == 0 {
            println!("{eps:>12.4e} {exact:>14.6e} {sharp:>14.6e}");
        }
        rms += (exact - sharp) * (exact - sharp);
    }
    let rms = (rms / samples as f64).sqrt();
    println!("rms difference well above activation: {rms:.3e}");

    // Well below activation the sharp rule gives exactly zero while the
    // exact amplitude is already small.
    let eps_below = activation * 0.2;
    let exact_below = mk_term_exact(eps_below, beta, m_theta, m_r);
    let sharp_below = mk_term_step(eps_below, beta, m_theta, m_r);
    println!(
        "below activation (eps = {eps_below:.3e}): exact {exact_below:.3e}, sharp {sharp_below}"
    );
    assert!(sharp_below == 0.0, "sharp rule must exclude the family below its jump");
    // Against the would-be active envelope 2 sqrt(omega/m_r) / t the
    // residual amplitude is already down by well over an order.
    let omega = (2.0 * beta).sqrt();
    let t = (3.0 * omega * eps_below).cbrt();
    let envelope = 2.0 * (omega / m_r as f64).sqrt() / t;
    assert!(
        exact_below.abs() < 0.1 * envelope,
        "exact amplitude should be suppressed below activation: {exact_below} vs envelope {envelope}"
    );
}
