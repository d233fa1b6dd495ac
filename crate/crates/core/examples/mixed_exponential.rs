//! Exact ruin function for a five-term hyperexponential claim law, checked
//! against Talbot inversion and a Monte Carlo estimate.
//!
//! cargo run --release --example mixed_exponential

use ruinkit::oracle::{exact_ruin_rational, mc_aggregate_loss, talbot_ruin};
use ruinkit::{ClaimDistribution, RiskModel};

fn main() -> ruinkit::Result<()> {
    let claims = ClaimDistribution::hyper_exponential(
        vec![63.0 / 128.0, 7.0 / 32.0, 9.0 / 64.0, 3.0 / 32.0, 7.0 / 128.0],
        vec![5.0, 4.0, 3.0, 2.0, 1.0],
    )?;
    let model = RiskModel::new(1.0, 0.4, 0.0, claims)?;

    let psi = exact_ruin_rational(&model)?;
    println!("psi(x) = sum w exp(-r x):");
    for t in &psi.terms {
        println!("  w = {:.10}  (x 32768 = {:>8.3})   r = {}", t.weight.re, t.weight.re * 32768.0, t.rate.re);
    }

    let grid: Vec<f64> = (1..=10).map(|i| 0.5 * i as f64).collect();
    let mc = mc_aggregate_loss(&model, &grid, 200_000, 1)?;
    println!("\n{:>5} {:>12} {:>12} {:>10} {:>9}", "x", "exact", "talbot", "mc", "+/-");
    for (i, x) in grid.iter().enumerate() {
        println!(
            "{x:>5} {:>12.9} {:>12.9} {:>10.6} {:>9.6}",
            psi.density(*x),
            talbot_ruin(&model, *x)?,
            mc.psi_hat[i],
            mc.half_width_95[i]
        );
    }
    Ok(())
}
