//! Padé approximants of a moment series, classic and two-point, inverted
//! into exponential mixtures.
//!
//! cargo run --example pade

use num_complex::Complex64;
use ruinkit::ratlap::{pade, partial_fractions, series_of, two_point_pade};
use ruinkit::ClaimDistribution;

fn main() -> ruinkit::Result<()> {
    // f*(s) of gamma(2.5, 1) as c_k = (-1)^k m_k / k!
    let g = ClaimDistribution::gamma(2.5, 1.0)?;
    let m = g.raw_moments(6)?;
    let mut c = vec![1.0];
    let mut fact = 1.0;
    for (k, mk) in m.iter().enumerate() {
        fact *= (k + 1) as f64;
        c.push(if k % 2 == 0 { -mk } else { *mk } / fact);
    }

    for (p, q) in [(0, 1), (1, 2), (2, 3)] {
        let r = pade(&c, p, q)?;
        let back = series_of(&r, p + q + 1)?;
        let s = Complex64::new(0.7, 0.0);
        println!(
            "({p},{q}): f*(0.7) = {:.8} vs {:.8}; series err {:.1e}",
            r.eval(s).re,
            g.laplace(s)?.re,
            back.iter().zip(&c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        );
        let mix = partial_fractions(&r)?;
        println!("        density at 1: {:.6} (true {:.6})", mix.density(1.0), 1.0f64.powf(1.5) * (-1.0f64).exp() / 1.329340388);
    }

    // (1,2) matching c_0, c_1, c_2 at 0 and forcing the 1/s term at infinity to vanish
    let r = two_point_pade(&c, 3, &[0.0], 1, 2)?;
    println!("\ntwo-point (1,2): num {:?} den {:?}", r.num(), r.den());
    Ok(())
}
