//! The (perturbed) Cramér–Lundberg surplus process
//! `X_t = c t + σ B_t − Σ_{k ≤ N_t} Z_k` and the transforms of its
//! all-time ruin probability Ψ(x).

use num_complex::Complex64;

use crate::claims::{factorial, ClaimDistribution};
use crate::error::{Result, RuinError};
use crate::poly;

/// Largest moment order for which perturbed aggregate-loss moments are
/// produced; series division beyond this loses too many digits.
pub const MAX_PERTURBED_ORDER: usize = 8;

const SERIES_RADIUS: f64 = 0.1;
const SERIES_TERMS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct RiskModel {
    lambda: f64,
    premium_c: f64,
    sigma: f64,
    claims: ClaimDistribution,
}

/// Factorially reduced moments λ_k = E[L^k]/k! of the all-time maximal
/// aggregate loss L, so that E e^{-sL} = 1 + Σ λ_k (−s)^k.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateLossMoments {
    pub lam: Vec<f64>,
    pub rho: f64,
}

impl RiskModel {
    pub fn new(lambda: f64, premium_c: f64, sigma: f64, claims: ClaimDistribution) -> Result<Self> {
        claims.validate()?;
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(RuinError::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(RuinError::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
        }
        let p = premium_c - lambda * claims.mean();
        if !(p.is_finite() && p > 0.0) {
            return Err(RuinError::InvalidParameter(format!(
                "net profit condition fails: c - lambda*m1 = {p}"
            )));
        }
        Ok(Self { lambda, premium_c, sigma, claims })
    }

    /// Model with premium rate c = (1 + θ) λ m_1.
    pub fn with_loading(lambda: f64, theta: f64, sigma: f64, claims: ClaimDistribution) -> Result<Self> {
        let c = (1.0 + theta) * lambda * claims.mean();
        Self::new(lambda, c, sigma, claims)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn premium(&self) -> f64 {
        self.premium_c
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn claims(&self) -> &ClaimDistribution {
        &self.claims
    }

    pub fn is_perturbed(&self) -> bool {
        self.sigma > 0.0
    }

    pub fn m1(&self) -> f64 {
        self.claims.mean()
    }

    /// Drift p = c − λ m_1.
    pub fn p(&self) -> f64 {
        self.premium_c - self.lambda * self.m1()
    }

    pub fn theta(&self) -> f64 {
        self.p() / (self.lambda * self.m1())
    }

    pub fn rho(&self) -> f64 {
        self.lambda * self.m1() / self.premium_c
    }

    /// κ_2 = λ m_2 + σ².
    pub fn kappa2(&self) -> Result<f64> {
        Ok(self.lambda * self.claims.raw_moment(2)? + self.sigma * self.sigma)
    }

    /// κ(s)/s = c − λ F̄*(s) + σ² s / 2.
    fn kappa_over_s(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.premium_c - self.lambda * self.claims.survival_laplace(s)?
            + 0.5 * self.sigma * self.sigma * s)
    }

    /// (m_1 − F̄*(s)) / s, summed from moments near the origin.
    fn survival_slope(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() * self.claims.length_scale() < SERIES_RADIUS {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut pw = Complex64::new(1.0, 0.0);
            for k in 1..=SERIES_TERMS {
                acc += pw * (self.claims.raw_moment(k + 1)? / factorial(k + 1));
                pw *= -s;
            }
            return Ok(acc);
        }
        Ok((self.m1() - self.claims.survival_laplace(s)?) / s)
    }

    /// Laplace exponent κ(s) = log E e^{-s X_1}·(−1)… i.e. s(c − λF̄*(s) + σ²s/2).
    pub fn laplace_exponent(&self, s: Complex64) -> Result<Complex64> {
        Ok(s * self.kappa_over_s(s)?)
    }

    /// Ψ*(s) = ∫ e^{-sx} Ψ(x) dx = 1/s − p/κ(s).
    pub fn ruin_transform(&self, s: Complex64) -> Result<Complex64> {
        let num = self.lambda * self.survival_slope(s)? + 0.5 * self.sigma * self.sigma;
        Ok(cdiv(num, self.kappa_over_s(s)?))
    }

    /// φ(s) = E e^{-sL} = 1 − sΨ*(s).
    pub fn phi(&self, s: Complex64) -> Result<Complex64> {
        Ok(cdiv(self.p().into(), self.kappa_over_s(s)?))
    }

    /// λ_1..λ_K of the maximal aggregate loss.
    pub fn aggregate_loss_moments(&self, k: usize) -> Result<AggregateLossMoments> {
        if k == 0 {
            return Err(RuinError::InvalidParameter("K must be >= 1".into()));
        }
        if self.is_perturbed() && k > MAX_PERTURBED_ORDER {
            return Err(RuinError::NotSupported(format!(
                "perturbed aggregate-loss moments beyond order {MAX_PERTURBED_ORDER}"
            )));
        }
        let m = self.claims.raw_moments(k + 1)?;
        let lam = if self.is_perturbed() {
            // κ(s)/s = p + κ_2 s/2 + Σ_{j≥3} (−1)^j λ m_j s^{j−1}/j!
            let mut den = vec![self.p(), 0.5 * (self.lambda * m[1] + self.sigma * self.sigma)];
            for j in 3..=k + 1 {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                den.push(sign * self.lambda * m[j - 1] / factorial(j));
            }
            let phi = poly::series_div(&[self.p()], &den, k + 1)?;
            phi.iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| if j % 2 == 0 { *c } else { -c })
                .collect()
        } else {
            // θ λ_n = μ̃_n + Σ_{k=1}^{n−1} μ̃_k λ_{n−k}, μ̃_k = m̃_k/k!
            let eq = self.claims.equilibrium_moments(k)?;
            let mu: Vec<f64> = eq.iter().enumerate().map(|(i, v)| v / factorial(i + 1)).collect();
            let theta = self.theta();
            let mut lam: Vec<f64> = Vec::with_capacity(k);
            for n in 1..=k {
                let mut acc = mu[n - 1];
                for j in 1..n {
                    acc += mu[j - 1] * lam[n - j - 1];
                }
                lam.push(acc / theta);
            }
            lam
        };
        Ok(AggregateLossMoments { lam, rho: self.rho() })
    }

    /// The adjustment coefficient γ > 0 with κ(−γ) = 0.
    pub fn adjustment_coefficient(&self) -> Result<f64> {
        let bound = match &self.claims {
            ClaimDistribution::Uniform { .. } | ClaimDistribution::MomentsOnly { .. } => {
                return Err(RuinError::NotSupported(
                    "adjustment coefficient needs a rational or gamma claim transform".into(),
                ))
            }
            c => c.continuation_boundary().unwrap_or(f64::INFINITY),
        };
        let h = |r: f64| -> Result<f64> { Ok(self.kappa_over_s(Complex64::new(-r, 0.0))?.re) };
        let mut lo = 0.0;
        let mut hi = 1e-8;
        let mut expansions = 0;
        while h(hi)? > 0.0 {
            lo = hi;
            hi = (2.0 * hi).min(lo + 0.5 * (bound - lo));
            expansions += 1;
            if expansions > 2000 || hi <= lo {
                return Err(RuinError::NoRoot);
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Ψ'(0)..Ψ''''(0) for σ = 0 from the claim density data f(0), f'(0), f''(0).
    pub fn ruin_derivatives_at_zero(&self, f0: f64, f1: f64, f2: f64) -> Result<[f64; 4]> {
        if self.is_perturbed() {
            return Err(RuinError::PerturbedNotSupported);
        }
        // Ψ^{(n+1)}(0) = (λ/c)(Ψ^{(n)}(0) − G^{(n)}(0)),
        // G(u) = ∫_0^u Ψ(u−y) f(y) dy + F̄(u)
        let a = self.lambda / self.premium_c;
        let rho = self.rho();
        let d1 = a * (rho - 1.0);
        let g1 = -(1.0 - rho) * f0;
        let d2 = a * (d1 - g1);
        let g2 = -(1.0 - rho) * f1 + d1 * f0;
        let d3 = a * (d2 - g2);
        let g3 = -(1.0 - rho) * f2 + d1 * f1 + d2 * f0;
        let d4 = a * (d3 - g3);
        Ok([d1, d2, d3, d4])
    }
}

/// a/b without overflowing |b|² when both sides are huge (entire claim
/// transforms far into the left half-plane).
fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    let k = b.re.abs().max(b.im.abs());
    if k > 1e150 {
        (a / k) / (b / k)
    } else {
        a / b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn expo(theta: f64) -> RiskModel {
        RiskModel::with_loading(1.0, theta, 0.0, ClaimDistribution::exponential(1.0).unwrap()).unwrap()
    }

    #[test]
    fn exponent_basics() {
        let m = RiskModel::new(1.0, 1.1, 0.0, ClaimDistribution::exponential(1.0).unwrap()).unwrap();
        assert_eq!(m.laplace_exponent(c(0.0)).unwrap(), c(0.0));
        assert!((m.laplace_exponent(c(1.0)).unwrap().re - 0.6).abs() < 1e-14);
        let h = 1e-6;
        let d = (m.laplace_exponent(c(h)).unwrap() - m.laplace_exponent(c(-h)).unwrap()).re / (2.0 * h);
        assert!((d - m.p()).abs() < 1e-8);
    }

    #[test]
    fn net_profit_enforced() {
        let e = ClaimDistribution::exponential(1.0).unwrap();
        assert!(RiskModel::new(1.0, 1.0, 0.0, e).is_err());
    }

    #[test]
    fn phi_exponential_closed_form() {
        let m = expo(0.25);
        let rho = m.rho();
        for s in [0.0, 0.01, 0.7, 3.0] {
            let want = (1.0 - rho) * (s + 1.0) / (s + 1.0 - rho);
            assert!((m.phi(c(s)).unwrap().re - want).abs() < 1e-14);
        }
        // the gap to the limit is ρ/s for unit-rate claims
        assert!((m.phi(c(1e6)).unwrap().re / (1.0 - rho) - 1.0).abs() < 1e-6);
        assert!((m.phi(c(1e12)).unwrap().re / (1.0 - rho) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transform_at_zero_is_first_moment() {
        let m = RiskModel::with_loading(1.0, 0.1, 0.0, ClaimDistribution::gamma(0.01, 100.0).unwrap()).unwrap();
        let l = m.aggregate_loss_moments(1).unwrap();
        assert!((l.lam[0] - 505.0).abs() < 1e-9);
        assert!((m.ruin_transform(c(0.0)).unwrap().re / 505.0 - 1.0).abs() < 1e-12);
        assert!((expo(0.1).aggregate_loss_moments(1).unwrap().lam[0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_first_moment() {
        let m = RiskModel::with_loading(2.0, 0.3, 0.7, ClaimDistribution::gamma(2.0, 0.5).unwrap()).unwrap();
        let l = m.aggregate_loss_moments(3).unwrap();
        let want = (2.0 * 1.5 + 0.49) / (2.0 * m.p());
        assert!((l.lam[0] / want - 1.0).abs() < 1e-13);
        assert!(m.aggregate_loss_moments(9).is_err());
    }

    #[test]
    fn adjustment_exponential() {
        let m = RiskModel::new(1.0, 1.1, 0.0, ClaimDistribution::exponential(1.0).unwrap()).unwrap();
        assert!((m.adjustment_coefficient().unwrap() - (1.0 - 1.0 / 1.1)).abs() < 1e-13);
        let u = RiskModel::with_loading(1.0, 0.1, 0.0, ClaimDistribution::uniform(0.0, 1.0).unwrap()).unwrap();
        assert!(matches!(u.adjustment_coefficient(), Err(RuinError::NotSupported(_))));
    }

    #[test]
    fn derivative_matches_exponential_slope() {
        let m = expo(0.1);
        let d = m.ruin_derivatives_at_zero(1.0, -1.0, 1.0).unwrap();
        // Ψ(x) = ρ e^{−(1−ρ)x}
        let (rho, g) = (m.rho(), 1.0 - m.rho());
        for (k, v) in d.iter().enumerate() {
            let want = rho * (-g).powi(k as i32 + 1);
            assert!((v - want).abs() < 1e-14, "order {}", k + 1);
        }
    }
}
