//! Diffusion-perturbed model: two-moment and one-moment approximations
//! split into creeping (Ψ_d) and jump (Ψ_j) parts, against the exact answer.
//!
//! cargo run --example perturbed

use ruinkit::approx::{perturbed_1m, perturbed_2m};
use ruinkit::oracle::exact_ruin_rational;
use ruinkit::{ClaimDistribution, RiskModel};

fn main() -> ruinkit::Result<()> {
    let claims = ClaimDistribution::hyper_exponential(
        vec![63.0 / 128.0, 7.0 / 32.0, 9.0 / 64.0, 3.0 / 32.0, 7.0 / 128.0],
        vec![5.0, 4.0, 3.0, 2.0, 1.0],
    )?;
    let model = RiskModel::new(1.0, 0.4, 0.5, claims)?;
    let two = perturbed_2m(&model)?;
    let one = perturbed_1m(&model)?;
    let exact = exact_ruin_rational(&model)?;

    for (k, v) in &two.meta {
        println!("{k:>12} = {v:.9}");
    }
    println!("\n{:>5} {:>11} {:>11} {:>11} {:>11} {:>11}", "x", "exact", "2m", "2m creep", "2m jump", "1m");
    for i in 0..=12 {
        let x = 0.5 * i as f64;
        let (d, j) = two.split(x).expect("perturbed fits carry components");
        println!(
            "{x:>5} {:>11.7} {:>11.7} {:>11.7} {:>11.7} {:>11.7}",
            exact.density(x),
            two.psi(x),
            d,
            j,
            one.psi(x)
        );
    }
    Ok(())
}
