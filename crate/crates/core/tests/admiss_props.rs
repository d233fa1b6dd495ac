mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use ruinkit::admiss::{numeric_admissibility, ph_density, three_exp_criterion, PhaseType};
use ruinkit::ratlap::ExpTerm;
use ruinkit::ExpPolyMixture;

fn three(w: [f64; 3]) -> ExpPolyMixture {
    ExpPolyMixture::new((0..3).map(|i| ExpTerm::real(w[i], i as f64 + 1.0, 0)).collect(), 0.0)
}

#[test]
fn order_four_phase_type_is_harris() {
    let mut a = DMatrix::zeros(4, 4);
    for i in 0..4 {
        a[(i, i)] = -(i as f64 + 1.0);
        if i < 3 {
            a[(i, i + 1)] = i as f64 + 1.0;
        }
    }
    let ph = PhaseType::new(vec![0.5, 0.0, 0.0, 0.5], a).unwrap();
    let h = three([2.0, -6.0, 6.0]);
    for i in 0..100 {
        let x = i as f64 * 0.1;
        let (p, q) = (ph_density(&ph, x).unwrap(), h.density(x));
        assert!((p / q - 1.0).abs() < 1e-9, "{x}: {p} vs {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn criterion_implies_numeric(w1 in 0.01f64..5.0, w3 in 0.01f64..5.0, t in 0.0f64..1.0) {
        // w2 anywhere in [−2√(w1 w3), 2]
        let lo = -2.0 * (w1 * w3).sqrt();
        let w2 = lo + t * (2.0 - lo);
        let w = [w1, w2, w3];
        prop_assert!(three_exp_criterion(w).unwrap());
        prop_assert!(numeric_admissibility(&three(w)).density_nonneg);
    }
}
