//! Closed-form approximations of the ruin probability. Each method returns
//! Ψ as an exponential-polynomial mixture.

use std::collections::BTreeMap;
use std::fmt;

use crate::claims::factorial;
use crate::error::{Result, RuinError};
use crate::jtfit::{jt_fit3, jt_fit3_at, ErlangMixtureFit};
use crate::poly;
use crate::ratlap::{partial_fractions, ExpPolyMixture, ExpTerm, RationalLT};
use crate::riskmodel::RiskModel;

/// Relative size under which all three Ramsay coefficients count as zero.
const DEGENERATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Renyi,
    DeVylder,
    RamsayPade12,
    TwoPointRamsay,
    Perturbed2M,
    Perturbed1M,
    JtRamsay,
    JtBeekman,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Renyi,
        Method::DeVylder,
        Method::RamsayPade12,
        Method::TwoPointRamsay,
        Method::Perturbed2M,
        Method::Perturbed1M,
        Method::JtRamsay,
        Method::JtBeekman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Renyi => "renyi",
            Method::DeVylder => "devylder",
            Method::RamsayPade12 => "ramsay",
            Method::TwoPointRamsay => "two_point",
            Method::Perturbed2M => "perturbed_2m",
            Method::Perturbed1M => "perturbed_1m",
            Method::JtRamsay => "jt_ramsay",
            Method::JtBeekman => "jt_beekman",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }

    pub fn is_perturbed(self) -> bool {
        matches!(self, Method::Perturbed2M | Method::Perturbed1M)
    }

    /// Runs the method with default options.
    pub fn run(self, model: &RiskModel) -> Result<RuinApprox> {
        match self {
            Method::Renyi => renyi(model),
            Method::DeVylder => devylder(model),
            Method::RamsayPade12 => ramsay_pade12(model),
            Method::TwoPointRamsay => two_point_ramsay(model),
            Method::Perturbed2M => perturbed_2m(model),
            Method::Perturbed1M => perturbed_1m(model),
            Method::JtRamsay => jt_ramsay(model, None),
            Method::JtBeekman => jt_beekman(model, None),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An approximate ruin function.
#[derive(Debug, Clone, PartialEq)]
pub struct RuinApprox {
    pub method: Method,
    /// Inverse transform of Ψ*; its `density` is Ψ itself.
    pub mixture: ExpPolyMixture,
    /// Creeping and jump parts (Ψ_d, Ψ_j) for the perturbed methods.
    pub components: Option<(ExpPolyMixture, ExpPolyMixture)>,
    /// Fitted coefficients, keyed by name.
    pub meta: BTreeMap<String, f64>,
}

impl RuinApprox {
    fn new(method: Method, mixture: ExpPolyMixture) -> Self {
        Self { method, mixture, components: None, meta: BTreeMap::new() }
    }

    fn with(mut self, key: &str, v: f64) -> Self {
        self.meta.insert(key.to_string(), v);
        self
    }

    /// Ψ(x).
    pub fn psi(&self, x: f64) -> f64 {
        self.mixture.density(x)
    }

    /// Ψ_d(x), Ψ_j(x) when available.
    pub fn split(&self, x: f64) -> Option<(f64, f64)> {
        self.components.as_ref().map(|(d, j)| (d.density(x), j.density(x)))
    }
}

fn unperturbed(model: &RiskModel) -> Result<()> {
    if model.is_perturbed() {
        Err(RuinError::PerturbedNotSupported)
    } else {
        Ok(())
    }
}

fn single_exp(weight: f64, rate: f64) -> ExpPolyMixture {
    ExpPolyMixture::new(vec![ExpTerm::real(weight, rate, 0)], 0.0)
}

/// Ψ(x) ≈ ρ exp(−x(1−ρ)/m̃_1).
pub fn renyi(model: &RiskModel) -> Result<RuinApprox> {
    unperturbed(model)?;
    let rho = model.rho();
    let mt1 = model.claims().equilibrium_moments(1)?[0];
    let rate = (1.0 - rho) / mt1;
    Ok(RuinApprox::new(Method::Renyi, single_exp(rho, rate))
        .with("rho", rho)
        .with("rate", rate))
}

/// Ψ*(s) ≈ a/(s + α), the (0,1) Padé of Ψ* at 0.
pub fn devylder(model: &RiskModel) -> Result<RuinApprox> {
    unperturbed(model)?;
    let m = model.claims().raw_moments(3)?;
    let (lam, p) = (model.lambda(), model.p());
    let d = 3.0 * lam * m[1] * m[1] + 2.0 * p * m[2];
    let a = 3.0 * lam * m[1] * m[1] / d;
    let alpha = 6.0 * p * m[1] / d;
    Ok(RuinApprox::new(Method::DeVylder, single_exp(a, alpha))
        .with("a", a)
        .with("alpha", alpha))
}

/// Ψ* = ρ(b2 s + b1 − a1)/(b2 s² + b̃1 s + b̃0), falling back to the
/// one-exponential form when b0, b1, b2 all vanish (exponential-type data).
fn ramsay_form(
    model: &RiskModel,
    method: Method,
    b: [f64; 3],
    scale: f64,
    a1: f64,
) -> Result<RuinApprox> {
    let rho = model.rho();
    let [b0, b1, b2] = b;
    let tagged = |r: RuinApprox| {
        r.with("b0", b0).with("b1", b1).with("b2", b2).with("a1", a1)
    };
    let degenerate = b0.abs() <= DEGENERATE_TOL * scale * scale
        && b1.abs() <= DEGENERATE_TOL * scale.powi(3)
        && b2.abs() <= DEGENERATE_TOL * scale.powi(4);
    if degenerate {
        let mt1 = model.claims().equilibrium_moments(1)?[0];
        let rate = (1.0 - rho) / mt1;
        return Ok(tagged(RuinApprox::new(method, single_exp(rho, rate))).with("degenerate", 1.0));
    }
    let bt1 = b1 - rho * a1;
    let bt0 = (1.0 - rho) * b0;
    let r = RationalLT::new(vec![rho * (b1 - a1), rho * b2], vec![bt0, bt1, b2])?;
    let mix = partial_fractions(&r)?;
    Ok(tagged(RuinApprox::new(method, mix)).with("bt0", bt0).with("bt1", bt1))
}

/// (1,2) Padé–Ramsay approximation from three equilibrium moments.
pub fn ramsay_pade12(model: &RiskModel) -> Result<RuinApprox> {
    unperturbed(model)?;
    let mt = model.claims().equilibrium_moments(3)?;
    let mu: Vec<f64> = mt.iter().enumerate().map(|(i, v)| v / factorial(i + 1)).collect();
    let b0 = mu[1] - mu[0] * mu[0];
    let b1 = mu[2] - mu[1] * mu[0];
    let b2 = mu[0] * mu[2] - mu[1] * mu[1];
    let a1 = b1 - mu[0] * b0;
    ramsay_form(model, Method::RamsayPade12, [b0, b1, b2], mu[0], a1)
}

/// Two-point variant matching Ψ(0) and Ψ'(0) at infinity.
pub fn two_point_ramsay(model: &RiskModel) -> Result<RuinApprox> {
    unperturbed(model)?;
    let m = model.claims().raw_moments(3)?;
    let b2 = (2.0 * m[0] * m[2] - 3.0 * m[1] * m[1]) / 6.0;
    let b1 = (m[2] - 3.0 * m[0] * m[1]) / 3.0;
    let b0 = m[1] - 2.0 * m[0] * m[0];
    let a1 = b2 / m[0];
    ramsay_form(model, Method::TwoPointRamsay, [b0, b1, b2], m[0], a1)
}

/// Ψ_d* = (s + a_d)/D, Ψ_j* = a_j/D, D = s² + (a_d + a_j + 2p/σ²)s + 2p a_d/σ².
fn perturbed_form(model: &RiskModel, method: Method, a_d: f64, a_j: f64) -> Result<RuinApprox> {
    let s2 = model.sigma() * model.sigma();
    let k = 2.0 * model.p() / s2;
    let den = vec![a_d * k, a_d + a_j + k, 1.0];
    let disc = den[1] * den[1] - 4.0 * den[0];
    if disc < -1e-10 * den[1] * den[1] {
        return Err(RuinError::NumericalInconsistency(format!("negative discriminant {disc:e}")));
    }
    let root = disc.max(0.0).sqrt();
    let mu1 = 0.5 * (den[1] - root);
    let mu2 = 0.5 * (den[1] + root);
    let dmix = partial_fractions(&RationalLT::new(vec![a_d, 1.0], den.clone())?)?;
    let jmix = partial_fractions(&RationalLT::new(vec![a_j], den)?)?;
    let mut out = RuinApprox::new(method, dmix.plus(&jmix))
        .with("a_d", a_d)
        .with("a_j", a_j)
        .with("mu1", mu1)
        .with("mu2", mu2)
        .with("discriminant", disc);
    out.components = Some((dmix, jmix));
    Ok(out)
}

/// Creeping/jump decomposition fitted to two claim moments.
pub fn perturbed_2m(model: &RiskModel) -> Result<RuinApprox> {
    if !model.is_perturbed() {
        return Err(RuinError::NotPerturbed);
    }
    let m = model.claims().raw_moments(3)?;
    let s2 = model.sigma() * model.sigma();
    let a_d = 3.0 * m[1] / m[2];
    let a_j = 3.0 * model.lambda() * m[1] * m[1] / (s2 * m[2]);
    perturbed_form(model, Method::Perturbed2M, a_d, a_j)
}

/// Creeping/jump decomposition fitted to the claim mean only.
pub fn perturbed_1m(model: &RiskModel) -> Result<RuinApprox> {
    if !model.is_perturbed() {
        return Err(RuinError::NotPerturbed);
    }
    let m = model.claims().raw_moments(2)?;
    let s2 = model.sigma() * model.sigma();
    let a_j = 2.0 * model.lambda() * m[0] / s2;
    let a_d = 2.0 * m[0] / m[1];
    perturbed_form(model, Method::Perturbed1M, a_d, a_j)
}

fn fit_or_order(m: &[f64], order: Option<usize>) -> Result<ErlangMixtureFit> {
    match order {
        Some(n) => jt_fit3_at(m, n),
        None => jt_fit3(m),
    }
}

fn tag_fit(mut r: RuinApprox, fit: &ErlangMixtureFit) -> RuinApprox {
    r.meta.insert("order".into(), fit.order as f64);
    for (i, c) in fit.components.iter().enumerate() {
        r.meta.insert(format!("w{}", i + 1), c.weight);
        r.meta.insert(format!("x{}", i + 1), c.stage_mean);
    }
    r
}

/// Erlang-mixture fit of the ladder heights, assembled through
/// sΨ*(s) = ρ(1 − f_e*)/(1 − ρ f_e*).
pub fn jt_ramsay(model: &RiskModel, order: Option<usize>) -> Result<RuinApprox> {
    unperturbed(model)?;
    let eq = model.claims().equilibrium_moments(3)?;
    let fit = fit_or_order(&eq, order)?;
    let fe = fit.laplace_rational()?;
    let rho = model.rho();
    let (n, d) = (fe.num(), fe.den());
    // ρ(D − N) vanishes at s = 0; drop that factor of s exactly
    let diff = poly::add(d, &poly::scale(n, -1.0));
    let num: Vec<f64> = diff.iter().skip(1).map(|c| rho * c).collect();
    let den = poly::add(d, &poly::scale(n, -rho));
    let mix = partial_fractions(&RationalLT::new(num, den)?)?;
    Ok(tag_fit(RuinApprox::new(Method::JtRamsay, mix), &fit))
}

/// Erlang-mixture fit of the conditional aggregate loss L | L > 0.
pub fn jt_beekman(model: &RiskModel, order: Option<usize>) -> Result<RuinApprox> {
    unperturbed(model)?;
    let agg = model.aggregate_loss_moments(3)?;
    let rho = agg.rho;
    let cond: Vec<f64> = agg
        .lam
        .iter()
        .enumerate()
        .map(|(i, v)| v * factorial(i + 1) / rho)
        .collect();
    let fit = fit_or_order(&cond, order)?;
    Ok(tag_fit(RuinApprox::new(Method::JtBeekman, fit.survival_mixture(rho)), &fit))
}
