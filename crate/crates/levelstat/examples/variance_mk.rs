//! Level-number variance of the Kepler-type model: count statistics
//! over a Gaussian strength ensemble against the closed-form harmonic
//! sum, through the first two oscillation periods.
//!
//! The variance of a window count is an ensemble notion: each member's
//! count is deterministic, and the spread comes from the strength law.
//! The ensemble must be wide enough (a few percent) that members
//! dephase at the working point, yet narrow enough that the oscillation
//! period stays sharp across the window; 5% sits in that band.
//!
//! The closed form rests on the diagonal approximation, so pointwise
//! agreement degrades near resonance activations where cross-family
//! interference is strongest. The robust observables are the
//! period-averaged variance, the zeros at whole periods, and the
//! overall oscillation shape; those are what this example checks.

use levelstat::ensemble::EnsembleSpec;
use levelstat::numstats::number_variance;
use levelstat::spectra::{oscillation_period, Model, ModelParams};
use levelstat::theory::{mk_variance_coherent, mk_variance_old, TheoryConfig};

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (
        a.iter().sum::<f64>() / n,
        b.iter().sum::<f64>() / n,
    );
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va * vb).sqrt()
}

fn main() {
    let spec = EnsembleSpec {
        model: Model::Mk,
        center: 100_000.0,
        width: 5_000.0,
        size: 400,
        seed: 2024,
    };
    let eps = 20_000.0;
    let params = ModelParams::from_value(spec.model, spec.center).unwrap();
    let period = oscillation_period(&params, eps);
    println!(
        "strength ensemble {} +- {} ({} members), working point eps = {eps}",
        spec.center, spec.width, spec.size
    );
    println!("leading oscillation period: {period:.1}\n");

    let widths: Vec<f64> = (1..=16).map(|i| period * i as f64 / 8.0).collect();
    let numeric = number_variance(&spec, eps, &widths).expect("window fits the spectrum");

    let cfg = TheoryConfig::default();
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "E/t", "numeric", "plain", "corrected"
    );
    let mut num = Vec::new();
    let mut plain = Vec::new();
    for &(e, sigma) in &numeric.points {
        let p = mk_variance_old(eps, e, spec.center, &cfg);
        let c = mk_variance_coherent(eps, e, spec.center, &cfg);
        println!("{:>8.3} {sigma:>12.3} {p:>12.3} {c:>12.3}", e / period);
        num.push(sigma);
        plain.push(p);
    }

    // Period-averaged variance: the mean over each full period washes
    // out the interference terms the diagonal sum neglects.
    for p in 0..2 {
        let lo = 8 * p;
        let mean_num = num[lo..lo + 8].iter().sum::<f64>() / 8.0;
        let mean_th = plain[lo..lo + 8].iter().sum::<f64>() / 8.0;
        let rel = (mean_num - mean_th).abs() / mean_th;
        println!(
            "\nperiod {}: mean numeric {mean_num:.2}, mean closed form {mean_th:.2} \
             (relative gap {rel:.3})",
            p + 1
        );
        assert!(
            rel < 0.15,
            "period-averaged variance strays {rel:.3} from the closed form"
        );
    }

    // At whole periods every radial harmonic vanishes; the leftover is
    // period dispersion across the ensemble, far below the plateau.
    for &i in &[7usize, 15] {
        let swing = mk_variance_old(eps, 0.5 * period, spec.center, &cfg);
        assert!(
            num[i] < 0.25 * swing,
            "residue {:.2} at a whole period should stay small",
            num[i]
        );
    }

    // The oscillation shape tracks the closed form.
    let corr = pearson(&num, &plain);
    println!("shape correlation with the closed form: {corr:.3}");
    assert!(corr > 0.6, "oscillation shapes disagree (corr {corr:.3})");
}
