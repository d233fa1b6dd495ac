#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use ruinkit::{ClaimDistribution, RiskModel};

/// 2–4 exponential components with well-separated rates.
pub fn hyper_exp() -> impl Strategy<Value = ClaimDistribution> {
    (2usize..=4)
        .prop_flat_map(|k| {
            (
                prop::collection::vec(0.05f64..1.0, k),
                0.2f64..2.0,
                prop::collection::vec(0.3f64..2.0, k),
            )
        })
        .prop_map(|(w, r0, gaps)| {
            let total: f64 = w.iter().sum();
            let weights = w.iter().map(|v| v / total).collect();
            let mut rates = Vec::with_capacity(gaps.len());
            let mut r = r0;
            for g in gaps {
                rates.push(r);
                r += g;
            }
            ClaimDistribution::hyper_exponential(weights, rates).unwrap()
        })
}

pub fn any_claims() -> impl Strategy<Value = ClaimDistribution> {
    prop_oneof![
        hyper_exp(),
        (0.1f64..5.0, 0.2f64..3.0).prop_map(|(a, b)| ClaimDistribution::gamma(a, b).unwrap()),
        (0.0f64..1.0, 0.5f64..3.0).prop_map(|(a, w)| ClaimDistribution::uniform(a, a + w).unwrap()),
        (1u32..6, 0.3f64..3.0).prop_map(|(n, r)| ClaimDistribution::erlang(n, r).unwrap()),
        (0.2f64..5.0).prop_map(|r| ClaimDistribution::exponential(r).unwrap()),
    ]
}

pub fn model_with(claims: impl Strategy<Value = ClaimDistribution>, perturbed: bool) -> impl Strategy<Value = RiskModel> {
    let sig = if perturbed { 0.1f64..1.5 } else { 0.0f64..f64::MIN_POSITIVE };
    (claims, 0.2f64..3.0, 0.05f64..2.0, sig).prop_map(move |(c, lam, theta, s)| {
        let s = if perturbed { s } else { 0.0 };
        RiskModel::with_loading(lam, theta, s, c).unwrap()
    })
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a / b - 1.0).abs()
    }
}

pub fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Taylor coefficients c_0..c_{k_max} of an analytic f at 0 from a circle of radius r.
pub fn taylor<F: Fn(Complex64) -> Complex64>(f: F, r: f64, k_max: usize) -> Vec<f64> {
    let n = 128;
    let pts: Vec<(Complex64, Complex64)> = (0..n)
        .map(|j| {
            let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            (z, f(z))
        })
        .collect();
    (0..=k_max)
        .map(|k| pts.iter().map(|(z, v)| v / z.powi(k as i32)).sum::<Complex64>().re / n as f64)
        .collect()
}

/// The classic five-term hyperexponential model with λ = 1, c = 2/5.
pub fn mixed_exp(sigma: f64) -> RiskModel {
    let w = vec![63.0 / 128.0, 7.0 / 32.0, 9.0 / 64.0, 3.0 / 32.0, 7.0 / 128.0];
    let r = vec![5.0, 4.0, 3.0, 2.0, 1.0];
    RiskModel::new(1.0, 0.4, sigma, ClaimDistribution::hyper_exponential(w, r).unwrap()).unwrap()
}

pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}
