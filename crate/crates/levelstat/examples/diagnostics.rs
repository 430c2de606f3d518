//! Self-consistency checks, straight from the library API: ensemble
//! self-averaging of the density fluctuation and decay of off-diagonal
//! phase products, the two assumptions behind replacing a phase-squared
//! double sum by its diagonal.

use levelstat::ensemble::{average_delta_rho_check, EnsembleSpec};
use levelstat::spectra::Model;
use levelstat::theory::{diag_offdiag_average, pair_product_average, IndexPair};

fn main() {
    let spec = EnsembleSpec {
        model: Model::Mk,
        center: 200_000.0,
        width: 10_000.0,
        size: 200,
        seed: 77,
    };
    let eps_grid = [10_000.0, 20_000.0];

    // The mean relative density fluctuation vanishes over the ensemble.
    let worst = average_delta_rho_check(&spec, &eps_grid).expect("mk ensemble");
    println!(
        "largest |mean delta-rho| over {} members at eps {eps_grid:?}: {worst:.4}",
        spec.size
    );
    assert!(worst < 0.05, "density fluctuation fails to self-average: {worst}");

    // Products of distinct-family phases dephase to zero...
    let pairs = [
        (IndexPair { m_theta: 1, m_r: 1 }, IndexPair { m_theta: 1, m_r: 2 }),
        (IndexPair { m_theta: 1, m_r: 2 }, IndexPair { m_theta: 2, m_r: 1 }),
        (IndexPair { m_theta: 1, m_r: 1 }, IndexPair { m_theta: 2, m_r: 2 }),
    ];
    let offdiag = diag_offdiag_average(&spec, 10_000.0, 12_000.0, &pairs).unwrap();
    println!("largest off-diagonal phase product: {offdiag:.4}");
    assert!(
        offdiag < 4.0 / (2.0 * spec.size as f64).sqrt(),
        "off-diagonal products exceed the dephasing scale: {offdiag}"
    );

    // ...while the diagonal difference phase keeps exactly one half.
    let same = IndexPair { m_theta: 1, m_r: 1 };
    let (diff, sum) = pair_product_average(&spec, &same, 10_000.0, &same, 10_000.0).unwrap();
    println!("diagonal pairing: difference phase {diff:.6}, sum phase {sum:.4}");
    assert!((diff - 0.5).abs() < 1e-12, "diagonal pairing must keep 1/2: {diff}");
    assert!(sum.abs() < 0.2, "diagonal sum phase should dephase: {sum}");
}
