//! A three-exponential mixture with a negative weight that is still a
//! density, its order-4 phase-type representation, and admissibility checks.
//!
//! cargo run --example harris

use nalgebra::DMatrix;
use ruinkit::admiss::{numeric_admissibility, ph_density, three_exp_criterion, PhaseType};
use ruinkit::ratlap::ExpTerm;
use ruinkit::ExpPolyMixture;

fn main() -> ruinkit::Result<()> {
    let g = ExpPolyMixture::new(
        vec![ExpTerm::real(2.0, 1.0, 0), ExpTerm::real(-6.0, 2.0, 0), ExpTerm::real(6.0, 3.0, 0)],
        0.0,
    );
    let mut a = DMatrix::zeros(4, 4);
    for i in 0..4 {
        a[(i, i)] = -(i as f64 + 1.0);
        if i < 3 {
            a[(i, i + 1)] = i as f64 + 1.0;
        }
    }
    let ph = PhaseType::new(vec![0.5, 0.0, 0.0, 0.5], a)?;

    println!("{:>5} {:>14} {:>14}", "x", "mixture", "phase-type");
    for x in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("{x:>5} {:>14.10} {:>14.10}", g.density(x), ph_density(&ph, x)?);
    }

    let r = numeric_admissibility(&g);
    println!("\nnumeric: density >= 0 {}, min {:.6} at x = {:.4}", r.density_nonneg, r.min_density, r.argmin);

    // survival coefficients on e^{-x}, e^{-2x}, e^{-3x}
    for w in [[2.0, -3.0, 2.0], [1.0, -3.0, 1.0]] {
        println!("three-exp criterion {w:?}: {}", three_exp_criterion(w)?);
    }
    Ok(())
}
