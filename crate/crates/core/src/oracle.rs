//! Independent references for Ψ: exact inversion for rational claims,
//! fixed-Talbot numerical inversion, and Monte Carlo over the ladder
//! decomposition of the maximal aggregate loss.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma};
use rayon::prelude::*;

use crate::claims::ClaimDistribution;
use crate::error::{Result, RuinError};
use crate::poly;
use crate::ratlap::{partial_fractions, ExpPolyMixture, RationalLT};
use crate::riskmodel::RiskModel;

/// Contour nodes for [`talbot_invert`]. Larger counts lose accuracy in
/// double precision because e^{rt} amplifies rounding.
pub const TALBOT_NODES: usize = 24;
/// Monte Carlo work units; fixed so results do not depend on thread count.
const MC_CHUNKS: usize = 64;
const MIN_MC_SAMPLES: usize = 10_000;

/// Ψ*(s) as an exact rational function.
pub fn ruin_transform_rational(model: &RiskModel) -> Result<RationalLT> {
    let f = model.claims().rational_lt()?;
    let (n, q) = (f.num(), f.den());
    // F̄* = R/Q with R = (Q − N)/s
    let r: Vec<f64> = poly::add(q, &poly::scale(n, -1.0)).into_iter().skip(1).collect();
    let s2 = 0.5 * model.sigma() * model.sigma();
    // κ(s)/s = N_D/Q, N_D = (c + σ²s/2)Q − λR
    let nd = poly::add(&poly::mul(&[model.premium(), s2], q), &poly::scale(&r, -model.lambda()));
    // Ψ* = (N_D − pQ)/(s N_D); the numerator vanishes at 0
    let top: Vec<f64> = poly::add(&nd, &poly::scale(q, -model.p())).into_iter().skip(1).collect();
    RationalLT::new(top, nd)
}

/// Exact Ψ for claims with a rational transform.
pub fn exact_ruin_rational(model: &RiskModel) -> Result<ExpPolyMixture> {
    partial_fractions(&ruin_transform_rational(model)?)
}

/// Inverts F at t > 0 along the fixed Talbot contour.
pub fn talbot_invert<F>(f: F, t: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    talbot_invert_with(f, t, TALBOT_NODES)
}

pub fn talbot_invert_with<F>(f: F, t: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(t > 0.0) {
        return Err(RuinError::DomainError(format!("t = {t} must be > 0")));
    }
    let mf = m as f64;
    let r = 2.0 * mf / (5.0 * t);
    let f0 = f(Complex64::new(r, 0.0)).map_err(|_| RuinError::ContourFailure(0))?;
    let mut acc = 0.5 * (f0 * (r * t).exp()).re;
    for k in 1..m {
        let th = k as f64 * std::f64::consts::PI / mf;
        let cot = th.cos() / th.sin();
        let s = Complex64::new(r * th * cot, r * th);
        let sig = th + (th * cot - 1.0) * cot;
        let v = f(s).map_err(|_| RuinError::ContourFailure(k))?;
        let term = ((t * s).exp() * v * Complex64::new(1.0, sig)).re;
        if !term.is_finite() {
            return Err(RuinError::ContourFailure(k));
        }
        acc += term;
    }
    let out = r / mf * acc;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(RuinError::ContourFailure(m))
    }
}

/// Ψ(x) by Talbot inversion of the model's ruin transform.
pub fn talbot_ruin(model: &RiskModel, x: f64) -> Result<f64> {
    talbot_invert(|s| model.ruin_transform(s), x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub grid: Vec<f64>,
    pub psi_hat: Vec<f64>,
    pub half_width_95: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Whether `value` lies inside the 95% interval at grid index `i`.
    pub fn covers(&self, i: usize, value: f64) -> bool {
        (self.psi_hat[i] - value).abs() <= self.half_width_95[i]
    }
}

/// Draws from the equilibrium (stationary excess) law F̄(x)/m_1.
enum EqSampler {
    Mixture { cum: Vec<f64>, exps: Vec<Exp<f64>> },
    /// U times a size-biased draw.
    SizeBiasedGamma(Gamma<f64>),
    SizeBiasedUniform { a2: f64, span: f64 },
}

impl EqSampler {
    fn new(claims: &ClaimDistribution) -> Result<Self> {
        Ok(match claims {
            ClaimDistribution::Exponential { rate } => EqSampler::Mixture {
                cum: vec![1.0],
                exps: vec![Exp::new(*rate).map_err(|_| RuinError::SamplerUnavailable)?],
            },
            ClaimDistribution::HyperExponential { weights, rates } => {
                let m1 = claims.mean();
                let mut cum = Vec::with_capacity(rates.len());
                let mut acc = 0.0;
                for (w, r) in weights.iter().zip(rates) {
                    acc += w / r / m1;
                    cum.push(acc);
                }
                let exps = rates.iter().map(|r| Exp::new(*r).map_err(|_| RuinError::SamplerUnavailable)).collect::<Result<_>>()?;
                EqSampler::Mixture { cum, exps }
            }
            ClaimDistribution::Gamma { shape, scale } => {
                EqSampler::SizeBiasedGamma(Gamma::new(shape + 1.0, *scale).map_err(|_| RuinError::SamplerUnavailable)?)
            }
            ClaimDistribution::Erlang { shape, rate } => {
                EqSampler::SizeBiasedGamma(Gamma::new(*shape as f64 + 1.0, 1.0 / rate).map_err(|_| RuinError::SamplerUnavailable)?)
            }
            ClaimDistribution::Uniform { a, b } => EqSampler::SizeBiasedUniform { a2: a * a, span: b * b - a * a },
            ClaimDistribution::MomentsOnly { .. } => return Err(RuinError::SamplerUnavailable),
        })
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            EqSampler::Mixture { cum, exps } => {
                let u: f64 = rng.random::<f64>() * cum[cum.len() - 1];
                let i = cum.iter().position(|c| u < *c).unwrap_or(cum.len() - 1);
                exps[i].sample(rng)
            }
            EqSampler::SizeBiasedGamma(g) => rng.random::<f64>() * g.sample(rng),
            EqSampler::SizeBiasedUniform { a2, span } => {
                let v: f64 = rng.random();
                rng.random::<f64>() * (a2 + v * span).sqrt()
            }
        }
    }
}

/// Monte Carlo estimate of Ψ on `grid` from `n` ladder-decomposition draws.
pub fn mc_aggregate_loss(model: &RiskModel, grid: &[f64], n: usize, seed: u64) -> Result<McEstimate> {
    if n < MIN_MC_SAMPLES {
        return Err(RuinError::InvalidParameter(format!(
            "need at least {MIN_MC_SAMPLES} samples, got {n}"
        )));
    }
    let sampler = EqSampler::new(model.claims())?;
    let rho = model.rho();
    let creep = if model.is_perturbed() {
        let s2 = model.sigma() * model.sigma();
        Some(Exp::new(2.0 * model.premium() / s2).map_err(|_| RuinError::SamplerUnavailable)?)
    } else {
        None
    };
    let counts = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let len = n / MC_CHUNKS + usize::from(chunk < n % MC_CHUNKS);
            let mut hits = vec![0u64; grid.len()];
            for _ in 0..len {
                let mut l = creep.map_or(0.0, |e| e.sample(&mut rng));
                while rng.random::<f64>() < rho {
                    l += sampler.draw(&mut rng);
                    if let Some(e) = creep {
                        l += e.sample(&mut rng);
                    }
                }
                for (h, x) in hits.iter_mut().zip(grid) {
                    if l > *x {
                        *h += 1;
                    }
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; grid.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    let nf = n as f64;
    let psi_hat: Vec<f64> = counts.iter().map(|c| *c as f64 / nf).collect();
    let half_width_95 = psi_hat.iter().map(|p| 1.96 * (p * (1.0 - p) / nf).sqrt()).collect();
    Ok(McEstimate { grid: grid.to_vec(), psi_hat, half_width_95, n_samples: n, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn mixed_exp() -> RiskModel {
        let w = vec![63.0 / 128.0, 7.0 / 32.0, 9.0 / 64.0, 3.0 / 32.0, 7.0 / 128.0];
        let r = vec![5.0, 4.0, 3.0, 2.0, 1.0];
        RiskModel::new(1.0, 0.4, 0.0, ClaimDistribution::hyper_exponential(w, r).unwrap()).unwrap()
    }

    #[test]
    fn talbot_exponential() {
        let v = talbot_invert(|s| Ok(1.0 / (s + 1.0)), 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn mixed_exponential_closed_form() {
        let mix = exact_ruin_rational(&mixed_exp()).unwrap();
        let mut t: Vec<(f64, f64)> = mix.terms.iter().map(|t| (t.rate.re, t.weight.re)).collect();
        t.sort_by(|a, b| a.0.total_cmp(&b.0));
        // 19845/32768, 735/8192, 567/16384, 135/8192, 245/32768
        let want = [19845.0, 2940.0, 1134.0, 540.0, 245.0];
        for (i, (r, w)) in t.iter().enumerate() {
            assert!((r - (0.5 + i as f64)).abs() < 1e-9);
            assert!((w - want[i] / 32768.0).abs() < 1e-9);
        }
    }

    #[test]
    fn perturbed_exact_starts_at_one() {
        let m = mixed_exp();
        let p = RiskModel::new(1.0, 0.4, 0.5, m.claims().clone()).unwrap();
        let mix = exact_ruin_rational(&p).unwrap();
        assert_eq!(mix.terms.len(), 6);
        assert!((mix.density(0.0) - 1.0).abs() < 1e-9);
        for x in [0.3, 2.0] {
            assert!((talbot_ruin(&p, x).unwrap() - mix.density(x)).abs() < 1e-7);
        }
    }

    #[test]
    fn mc_is_deterministic() {
        let m = mixed_exp();
        let a = mc_aggregate_loss(&m, &[0.0, 1.0], 20_000, 7).unwrap();
        let b = mc_aggregate_loss(&m, &[0.0, 1.0], 20_000, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.psi_hat[0] - m.rho()).abs() < 4.0 * a.half_width_95[0]);
        assert!(mc_aggregate_loss(&m, &[0.0], 100, 7).is_err());
    }
}
