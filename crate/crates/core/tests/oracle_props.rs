mod common;

use common::*;
use proptest::prelude::*;
use ruinkit::oracle::{exact_ruin_rational, mc_aggregate_loss, talbot_ruin};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn rational_and_talbot_agree(m in model_with(hyper_exp(), false)) {
        let exact = exact_ruin_rational(&m).unwrap();
        prop_assert!((exact.density(0.0) - m.rho()).abs() < 1e-12);
        let scale = m.claims().mean() / (1.0 - m.rho());
        for i in 1..=20 {
            let x = 0.25 * scale * i as f64;
            let t = talbot_ruin(&m, x).unwrap();
            prop_assert!((t - exact.density(x)).abs() < 1e-7, "x={x}: {t} vs {}", exact.density(x));
        }
    }

    #[test]
    fn perturbed_rational_and_talbot_agree(m in model_with(hyper_exp(), true)) {
        let exact = exact_ruin_rational(&m).unwrap();
        prop_assert!((exact.density(0.0) - 1.0).abs() < 1e-9);
        let scale = m.claims().mean() / (1.0 - m.rho());
        for i in 1..=20 {
            let x = 0.25 * scale * i as f64;
            let t = talbot_ruin(&m, x).unwrap();
            prop_assert!((t - exact.density(x)).abs() < 1e-7, "x={x}: {t} vs {}", exact.density(x));
        }
    }
}

/// 100 independent trials (own seed, one grid point each) so the
/// coverage count is binomial.
#[test]
fn monte_carlo_interval_coverage() {
    for sigma in [0.0, 0.5] {
        let m = mixed_exp(sigma);
        let exact = exact_ruin_rational(&m).unwrap();
        let mut covered = 0;
        for seed in 0..100u64 {
            let x = 0.5 * (1 + seed % 10) as f64;
            let est = mc_aggregate_loss(&m, &[x], 20_000, seed).unwrap();
            assert!((0.0..=1.0).contains(&est.psi_hat[0]));
            covered += usize::from(est.covers(0, exact.density(x)));
        }
        assert!(covered >= 93, "sigma={sigma}: {covered}/100 covered");
    }
}
