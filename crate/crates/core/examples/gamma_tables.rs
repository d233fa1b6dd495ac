//! Ruin probabilities for two gamma-claim portfolios: four closed-form
//! approximations next to a numerically inverted reference.
//!
//! cargo run --example gamma_tables

use ruinkit::oracle::talbot_ruin;
use ruinkit::{ClaimDistribution, Method, RiskModel};

fn table(title: &str, model: &RiskModel, step: f64) -> ruinkit::Result<()> {
    let methods = [Method::Renyi, Method::DeVylder, Method::RamsayPade12, Method::TwoPointRamsay];
    let fits = methods.iter().map(|m| m.run(model)).collect::<ruinkit::Result<Vec<_>>>()?;
    println!("{title}  (rho = {:.6})", model.rho());
    print!("{:>8} {:>11}", "x", "exact");
    for m in &methods {
        print!(" {:>11}", m.name());
    }
    println!();
    for i in 0..=10 {
        let x = i as f64 * step;
        let exact = if x == 0.0 { model.rho() } else { talbot_ruin(model, x)? };
        print!("{x:>8} {exact:>11.6}");
        for f in &fits {
            print!(" {:>11.6}", f.psi(x));
        }
        println!();
    }
    println!();
    Ok(())
}

fn main() -> ruinkit::Result<()> {
    // heavy-ish: shape 0.01, scale 100
    let g1 = RiskModel::with_loading(1.0, 0.1, 0.0, ClaimDistribution::gamma(0.01, 100.0)?)?;
    table("gamma(0.01, 100), lambda = 1, theta = 0.1", &g1, 300.0)?;

    let c = 0.8 * (4.0 * 2f64.sqrt() - 1.0);
    let g2 = RiskModel::new(0.4, c, 0.0, ClaimDistribution::gamma(2.5, 1.0)?)?;
    table("gamma(2.5, 1), lambda = 0.4", &g2, 0.5)?;
    Ok(())
}
