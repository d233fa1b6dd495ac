//! Erlang-mixture fitting for uniform claims: the order needed for the
//! claims, for the ladder heights, and for the aggregate loss.
//!
//! cargo run --example jt_uniform

use ruinkit::approx::{jt_beekman, jt_ramsay};
use ruinkit::jtfit::{compare_indices, jt_fit3, jt_index_3, jt_index_degree};
use ruinkit::oracle::talbot_ruin;
use ruinkit::{ClaimDistribution, RiskModel};

fn main() -> ruinkit::Result<()> {
    let u = ClaimDistribution::uniform(0.0, 1.0)?;
    let raw = u.raw_moments(3)?;
    let eq = u.equilibrium_moments(3)?;
    println!("index(claims) = {}, index(equilibrium) = {}", jt_index_3(&raw)?, jt_index_3(&eq)?);
    println!("degree-5 index(claims) = {}", jt_index_degree(&u.raw_moments(5)?, 5)?);

    let fit = jt_fit3(&eq)?;
    println!("\nequilibrium fit, order {}:", fit.order);
    for c in &fit.components {
        println!("  w = {:.9}  stage mean = {:.9}", c.weight, c.stage_mean);
    }
    for k in 1..=3 {
        println!("  m{k}: fit {:.12}  target {:.12}", fit.raw_moment(k), eq[k - 1]);
    }

    println!("\n{:>5} {:>6} {:>6} {:>9} {:>9}", "theta", "J(Li)", "J(L)", "L easier", "floor<=4");
    for theta in [0.1, 0.5, 1.0, 1.5, 2.0] {
        let m = RiskModel::with_loading(1.0, theta, 0.0, u.clone())?;
        let r = compare_indices(&m)?;
        println!(
            "{theta:>5} {:>6.3} {:>6.3} {:>9} {:>9}",
            r.j_equilibrium,
            r.partial_j_aggregate,
            r.aggregate_easier,
            r.partial_j_aggregate.floor() <= 4.0
        );
    }

    let m = RiskModel::with_loading(1.0, 1.0, 0.0, u)?;
    let a = jt_ramsay(&m, None)?;
    let b = jt_beekman(&m, None)?;
    println!("\ntheta = 1: ladder fit order {}, aggregate fit order {}", a.meta["order"], b.meta["order"]);
    println!("{:>5} {:>11} {:>11} {:>11}", "x", "talbot", "jt_ramsay", "jt_beekman");
    for i in 0..=8 {
        let x = 0.5 * i as f64;
        let ex = if x == 0.0 { m.rho() } else { talbot_ruin(&m, x)? };
        println!("{x:>5} {ex:>11.7} {:>11.7} {:>11.7}", a.psi(x), b.psi(x));
    }
    Ok(())
}
