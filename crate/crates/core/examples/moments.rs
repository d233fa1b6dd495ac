//! Moments of the maximal aggregate loss, the adjustment coefficient and the
//! Cramér–Lundberg asymptote.
//!
//! cargo run --example moments

use ruinkit::{ClaimDistribution, RiskModel};

fn main() -> ruinkit::Result<()> {
    let claims = ClaimDistribution::gamma(2.5, 1.0)?;
    for sigma in [0.0, 0.5] {
        let m = RiskModel::with_loading(0.4, 0.3, sigma, claims.clone())?;
        let l = m.aggregate_loss_moments(4)?;
        println!("sigma = {sigma}: rho = {:.6}", l.rho);
        for (k, v) in l.lam.iter().enumerate() {
            println!("  lambda_{} = E[L^{}]/{}! = {v:.9}", k + 1, k + 1, k + 1);
        }
        let gamma = m.adjustment_coefficient()?;
        println!("  adjustment coefficient = {gamma:.9}");
        println!("  kappa(-gamma) = {:.2e}", m.laplace_exponent((-gamma).into())?.re);
    }
    Ok(())
}
