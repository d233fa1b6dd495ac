mod common;

use common::*;
use proptest::prelude::*;
use ruinkit::jtfit::{compare_indices, jt_fit3, jt_index_3};
use ruinkit::{ClaimDistribution, RiskModel};

/// (m1, m2, m3) strictly inside the Stieltjes cone: m2 > m1², m1 m3 > m2².
fn feasible_triple() -> impl Strategy<Value = [f64; 3]> {
    (0.1f64..10.0, 0.01f64..5.0, 0.01f64..5.0).prop_map(|(m1, a, b)| {
        let m2 = m1 * m1 * (1.0 + a);
        [m1, m2, m2 * m2 / m1 * (1.0 + b)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fit_matches_three_moments(m in feasible_triple()) {
        let fit = jt_fit3(&m).unwrap();
        for c in &fit.components {
            prop_assert!(c.weight >= 0.0 && c.stage_mean > 0.0);
        }
        for k in 1..=3 {
            prop_assert!(rel(fit.raw_moment(k), m[k - 1]) < 1e-10, "k={k}");
        }
    }

    #[test]
    fn index_decreases_in_third_moment(m in feasible_triple(), bump in 1.0f64..4.0) {
        let mut hi = m;
        hi[2] *= bump;
        prop_assert!(jt_index_3(&hi).unwrap() <= jt_index_3(&m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fitted_density_is_nonnegative(m in feasible_triple()) {
        let fit = jt_fit3(&m).unwrap();
        let peak = (0..1000).map(|i| fit.density(i as f64 * 0.01 * m[0])).fold(0.0, f64::max);
        for x in geometric_grid(1e-3 * m[0], 50.0 * m[0], 1000) {
            prop_assert!(fit.density(x) >= -1e-12 * peak.max(1.0));
        }
    }

    #[test]
    fn j_and_nu_are_linked(theta in 0.02f64..3.0, shape in 0.2f64..5.0) {
        let m = RiskModel::with_loading(1.0, theta, 0.0, ClaimDistribution::gamma(shape, 1.0).unwrap()).unwrap();
        let r = compare_indices(&m).unwrap();
        prop_assert!(rel(r.partial_j_aggregate, (2.0 - r.nu_l) / (r.nu_l - 1.0)) < 1e-12);
        prop_assert!(rel(r.j_moments, (2.0 - r.nu_moments) / (r.nu_moments - 1.0)) < 1e-12);
    }
}

#[test]
fn uniform_boundary_cases_bump_the_order() {
    let u = ClaimDistribution::uniform(0.0, 1.0).unwrap();
    for (m, formula) in [(u.raw_moments(3).unwrap(), 7), (u.equilibrium_moments(3).unwrap(), 4)] {
        assert_eq!(jt_index_3(&m).unwrap(), formula);
        let fit = jt_fit3(&m).unwrap();
        assert!(fit.order > formula);
        assert!(fit.diagnostics.b2 > 0.0);
        for k in 1..=3 {
            assert!(rel(fit.raw_moment(k), m[k - 1]) < 1e-10);
        }
    }
}
