//! Parametric claim-size distributions: raw moments, Laplace transforms of
//! the density and of the survival function, and exact rational transforms
//! where the family has one.

use num_complex::Complex64;

use crate::error::{Result, RuinError};
use crate::poly;
use crate::ratlap::RationalLT;

/// Below `SERIES_RADIUS / scale` the survival transform is summed from the
/// moment series instead of the closed form.
const SERIES_RADIUS: f64 = 0.1;
const SERIES_TERMS: usize = 16;

/// Claim-size model.
///
/// Build values through the checked constructors; every operation assumes
/// the invariants they enforce.
#[derive(Debug, Clone, PartialEq)]
pub enum ClaimDistribution {
    Exponential { rate: f64 },
    HyperExponential { weights: Vec<f64>, rates: Vec<f64> },
    Gamma { shape: f64, scale: f64 },
    Uniform { a: f64, b: f64 },
    Erlang { shape: u32, rate: f64 },
    /// Raw moments `m_1, m_2, ...` without a density model.
    MomentsOnly { moments: Vec<f64> },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(RuinError::InvalidParameter(format!("{name} must be > 0, got {v}")))
    }
}

impl ClaimDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(Self::Exponential { rate })
    }

    pub fn hyper_exponential(weights: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        let d = Self::HyperExponential { weights, rates };
        d.validate()?;
        Ok(d)
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        positive("shape", shape)?;
        positive("scale", scale)?;
        Ok(Self::Gamma { shape, scale })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let d = Self::Uniform { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn erlang(shape: u32, rate: f64) -> Result<Self> {
        if shape == 0 {
            return Err(RuinError::InvalidParameter("Erlang shape must be >= 1".into()));
        }
        positive("rate", rate)?;
        Ok(Self::Erlang { shape, rate })
    }

    pub fn moments_only(moments: Vec<f64>) -> Result<Self> {
        let d = Self::MomentsOnly { moments };
        d.validate()?;
        Ok(d)
    }

    /// Re-checks the invariants of a value built directly from its fields.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Exponential { rate } => positive("rate", *rate),
            Self::HyperExponential { weights, rates } => {
                if weights.is_empty() || weights.len() != rates.len() {
                    return Err(RuinError::InvalidParameter(
                        "hyperexponential needs equally many weights and rates".into(),
                    ));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(RuinError::InvalidParameter("weights must be >= 0".into()));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(RuinError::InvalidParameter(format!(
                        "weights sum to {total}, expected 1"
                    )));
                }
                for &r in rates {
                    positive("rate", r)?;
                }
                for i in 0..rates.len() {
                    for j in 0..i {
                        if rates[i] == rates[j] {
                            return Err(RuinError::InvalidParameter(
                                "hyperexponential rates must be distinct (use Erlang for repeats)"
                                    .into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            Self::Gamma { shape, scale } => {
                positive("shape", *shape)?;
                positive("scale", *scale)
            }
            Self::Uniform { a, b } => {
                if a.is_finite() && b.is_finite() && 0.0 <= *a && a < b {
                    Ok(())
                } else {
                    Err(RuinError::InvalidParameter(format!(
                        "uniform needs 0 <= a < b, got a={a}, b={b}"
                    )))
                }
            }
            Self::Erlang { shape, rate } => {
                if *shape == 0 {
                    return Err(RuinError::InvalidParameter("Erlang shape must be >= 1".into()));
                }
                positive("rate", *rate)
            }
            Self::MomentsOnly { moments } => match moments.first() {
                Some(m1) if m1.is_finite() && *m1 > 0.0 => Ok(()),
                _ => Err(RuinError::InvalidParameter("moments-only model needs m_1 > 0".into())),
            },
        }
    }

    /// E[Z^k] for k >= 1.
    pub fn raw_moment(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        let kf = factorial(k);
        Ok(match self {
            Self::Exponential { rate } => kf / rate.powi(k as i32),
            Self::HyperExponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(w, r)| w * kf / r.powi(k as i32))
                .sum(),
            Self::Gamma { shape, scale } => (0..k).fold(1.0, |acc, j| acc * scale * (shape + j as f64)),
            Self::Uniform { a, b } => {
                let n = (k + 1) as i32;
                // (b^{k+1} - a^{k+1}) / ((k+1)(b-a)) without cancellation
                (0..=k).map(|j| a.powi(j as i32) * b.powi((k - j) as i32)).sum::<f64>() / n as f64
            }
            Self::Erlang { shape, rate } => {
                (0..k).fold(1.0, |acc, j| acc * (*shape as f64 + j as f64) / rate)
            }
            Self::MomentsOnly { moments } => {
                return moments.get(k - 1).copied().ok_or(RuinError::MomentUnavailable(k))
            }
        })
    }

    /// Raw moments m_1..m_k.
    pub fn raw_moments(&self, k: usize) -> Result<Vec<f64>> {
        (1..=k).map(|j| self.raw_moment(j)).collect()
    }

    pub fn mean(&self) -> f64 {
        // m_1 exists for every validated variant
        self.raw_moment(1).unwrap_or(f64::NAN)
    }

    /// Stationary-excess (equilibrium) moments m_{i+1} / ((i+1) m_1), i = 1..K.
    pub fn equilibrium_moments(&self, k: usize) -> Result<Vec<f64>> {
        if let Self::Exponential { .. } = self {
            // memoryless: the excess law is the claim law itself
            return self.raw_moments(k);
        }
        let m1 = self.raw_moment(1)?;
        (1..=k)
            .map(|i| Ok(self.raw_moment(i + 1)? / ((i + 1) as f64 * m1)))
            .collect()
    }

    /// Right end of the real interval (-s_max, 0] on which the transform
    /// continues analytically; `None` when it is entire.
    pub fn continuation_boundary(&self) -> Option<f64> {
        match self {
            Self::Exponential { rate } | Self::Erlang { rate, .. } => Some(*rate),
            Self::HyperExponential { rates, .. } => rates.iter().copied().reduce(f64::min),
            Self::Gamma { scale, .. } => Some(1.0 / scale),
            Self::Uniform { .. } => None,
            Self::MomentsOnly { .. } => Some(0.0),
        }
    }

    /// Characteristic length used to decide when a transform argument is
    /// "small".
    pub(crate) fn length_scale(&self) -> f64 {
        match self {
            Self::Gamma { scale, .. } => *scale,
            Self::Uniform { b, .. } => *b,
            Self::Exponential { rate } | Self::Erlang { rate, .. } => 1.0 / rate,
            Self::HyperExponential { rates, .. } => {
                1.0 / rates.iter().copied().fold(f64::INFINITY, f64::min)
            }
            Self::MomentsOnly { moments } => moments[0],
        }
    }

    fn check_pole(&self, s: Complex64) -> Result<()> {
        let hit = |r: f64| (s + r).norm() == 0.0;
        let bad = match self {
            Self::Exponential { rate } | Self::Erlang { rate, .. } => hit(*rate),
            Self::HyperExponential { rates, .. } => rates.iter().any(|r| hit(*r)),
            Self::Gamma { scale, .. } => {
                let z = Complex64::new(1.0, 0.0) + s * scale;
                z.im == 0.0 && z.re <= 0.0
            }
            _ => false,
        };
        if bad {
            Err(RuinError::DomainError(format!("s = {s} is a singularity of the claim transform")))
        } else {
            Ok(())
        }
    }

    /// f*(s) = E[exp(-s Z)].
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        if let Self::MomentsOnly { .. } = self {
            return Err(RuinError::TransformUnavailable);
        }
        self.check_pole(s)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            Self::Exponential { rate } => *rate / (s + rate),
            Self::HyperExponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(w, r)| *w * r / (s + r))
                .sum(),
            Self::Erlang { shape, rate } => (*rate / (s + rate)).powi(*shape as i32),
            Self::Gamma { shape, scale } => (-(one + s * scale).ln() * shape).exp(),
            Self::Uniform { .. } => one - s * self.survival_laplace(s)?,
            Self::MomentsOnly { .. } => unreachable!(),
        })
    }

    /// F̄*(s) = (1 - f*(s)) / s, with the removable singularity at 0 filled by m_1.
    pub fn survival_laplace(&self, s: Complex64) -> Result<Complex64> {
        if let Self::MomentsOnly { .. } = self {
            return Err(RuinError::TransformUnavailable);
        }
        self.check_pole(s)?;
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::Exponential { rate } => Ok(one / (s + rate)),
            Self::HyperExponential { weights, rates } => {
                Ok(weights.iter().zip(rates).map(|(w, r)| *w / (s + r)).sum())
            }
            Self::Erlang { shape, rate } => {
                let q = *rate / (s + rate);
                let mut acc = Complex64::new(0.0, 0.0);
                let mut qj = one;
                for _ in 0..*shape {
                    acc += qj;
                    qj *= q;
                }
                Ok(acc / (s + rate))
            }
            Self::Gamma { shape, scale } => {
                if s.norm() * scale < SERIES_RADIUS {
                    return self.survival_series(s);
                }
                let w = -(one + s * scale).ln() * shape;
                Ok(-expm1_c(w) / s)
            }
            Self::Uniform { a, b } => {
                if s.norm() * b < SERIES_RADIUS {
                    return self.survival_series(s);
                }
                let f = ((-s * a).exp() - (-s * b).exp()) / (s * (b - a));
                Ok((one - f) / s)
            }
            Self::MomentsOnly { .. } => unreachable!(),
        }
    }

    /// Σ_k (-s)^k m_{k+1} / (k+1)!
    fn survival_series(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 0..SERIES_TERMS {
            acc += pw * (self.raw_moment(k + 1)? / factorial(k + 1));
            pw *= -s;
        }
        Ok(acc)
    }

    /// Whether `s` is small enough that moment series are preferable to
    /// closed forms built on this model.
    pub fn is_small_argument(&self, s: Complex64) -> bool {
        s.norm() * self.length_scale() < 1e-3
    }

    /// Exact numerator/denominator of f*(s) for the rational families.
    pub fn rational_lt(&self) -> Result<RationalLT> {
        match self {
            Self::Exponential { rate } => RationalLT::new(vec![*rate], vec![*rate, 1.0]),
            Self::HyperExponential { weights, rates } => {
                let den = poly::from_neg_roots(rates);
                let mut num = vec![0.0];
                for i in 0..rates.len() {
                    let others: Vec<f64> = rates
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, r)| *r)
                        .collect();
                    let term = poly::scale(&poly::from_neg_roots(&others), weights[i] * rates[i]);
                    num = poly::add(&num, &term);
                }
                RationalLT::new(num, den)
            }
            Self::Erlang { shape, rate } => RationalLT::new(
                vec![rate.powi(*shape as i32)],
                poly::pow(&[*rate, 1.0], *shape as usize),
            ),
            _ => Err(RuinError::NotRational),
        }
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// exp(w) - 1 without cancellation for small |w|.
pub fn expm1_c(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let half = (y / 2.0).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sample_hyper() -> ClaimDistribution {
        ClaimDistribution::hyper_exponential(
            vec![63.0 / 128.0, 7.0 / 32.0, 9.0 / 64.0, 3.0 / 32.0, 7.0 / 128.0],
            vec![5.0, 4.0, 3.0, 2.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn gamma_moments() {
        let g = ClaimDistribution::gamma(0.01, 100.0).unwrap();
        let m = g.raw_moments(3).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-12);
        assert!((m[1] - 101.0).abs() < 1e-10);
        assert!((m[2] - 20301.0).abs() < 1e-8);
    }

    #[test]
    fn uniform_moments() {
        let u = ClaimDistribution::uniform(0.0, 1.0).unwrap();
        let m = u.raw_moments(4).unwrap();
        for (k, v) in m.iter().enumerate() {
            assert!((v - 1.0 / (k as f64 + 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn hyper_mean() {
        assert!((sample_hyper().mean() - 193.0 / 640.0).abs() < 1e-15);
    }

    #[test]
    fn moments_only_short() {
        let d = ClaimDistribution::moments_only(vec![1.0, 2.5]).unwrap();
        assert_eq!(d.raw_moment(3), Err(RuinError::MomentUnavailable(3)));
        assert_eq!(d.laplace(c(1.0)), Err(RuinError::TransformUnavailable));
        assert_eq!(d.rational_lt().unwrap_err(), RuinError::NotRational);
    }

    #[test]
    fn exponential_transform() {
        let e = ClaimDistribution::exponential(1.0).unwrap();
        assert!((e.laplace(c(1.0)).unwrap() - 0.5).norm() < 1e-15);
    }

    #[test]
    fn gamma_transform_normalized_and_domain() {
        let g = ClaimDistribution::gamma(0.01, 100.0).unwrap();
        assert!((g.laplace(c(0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!(matches!(g.laplace(c(-0.02)), Err(RuinError::DomainError(_))));
        // -d/ds f* at 0 = m_1 = 1
        let h = 1e-6;
        let d = (g.laplace(c(-h)).unwrap() - g.laplace(c(h)).unwrap()).re / (2.0 * h);
        assert!((d - 1.0).abs() < 1e-6);
    }

    #[test]
    fn equilibrium_of_uniform() {
        let u = ClaimDistribution::uniform(0.0, 1.0).unwrap();
        let e = u.equilibrium_moments(3).unwrap();
        for (a, b) in e.iter().zip([1.0 / 3.0, 1.0 / 6.0, 0.1]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn equilibrium_of_exponential_is_itself() {
        let e = ClaimDistribution::exponential(2.5).unwrap();
        let (a, b) = (e.equilibrium_moments(4).unwrap(), e.raw_moments(4).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x / y - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn equilibrium_of_gamma() {
        let g = ClaimDistribution::gamma(0.01, 100.0).unwrap();
        assert!((g.equilibrium_moments(1).unwrap()[0] - 50.5).abs() < 1e-10);
    }

    #[test]
    fn rational_forms() {
        let r = ClaimDistribution::exponential(2.0).unwrap().rational_lt().unwrap();
        assert_eq!(r.num(), &[2.0]);
        assert_eq!(r.den(), &[2.0, 1.0]);
        let h = sample_hyper().rational_lt().unwrap();
        assert_eq!(h.num().len(), 5);
        assert_eq!(h.den().len(), 6);
        let mut poles: Vec<f64> = h.poles().unwrap().iter().map(|z| z.re).collect();
        poles.sort_by(f64::total_cmp);
        for (p, want) in poles.iter().zip([-5.0, -4.0, -3.0, -2.0, -1.0]) {
            assert!((p - want).abs() < 1e-10);
        }
        assert_eq!(
            ClaimDistribution::gamma(2.0, 1.0).unwrap().rational_lt().unwrap_err(),
            RuinError::NotRational
        );
    }

    #[test]
    fn survival_transform_small_and_large_agree() {
        for d in [
            ClaimDistribution::gamma(2.5, 1.0).unwrap(),
            ClaimDistribution::uniform(0.5, 2.0).unwrap(),
        ] {
            // straddle the series switch
            let scale = d.length_scale();
            for r in [0.09 / scale, 0.11 / scale] {
                let s = Complex64::new(r, 0.3 * r);
                let direct = (Complex64::new(1.0, 0.0) - d.laplace(s).unwrap()) / s;
                let got = d.survival_laplace(s).unwrap();
                assert!((got - direct).norm() < 1e-9 * got.norm(), "{d:?}");
            }
            let m1 = d.mean();
            assert!((d.survival_laplace(c(0.0)).unwrap().re - m1).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(ClaimDistribution::hyper_exponential(vec![0.5, 0.6], vec![1.0, 2.0]).is_err());
        assert!(ClaimDistribution::hyper_exponential(vec![0.5, 0.5], vec![1.0, 1.0]).is_err());
        assert!(ClaimDistribution::uniform(1.0, 1.0).is_err());
        assert!(ClaimDistribution::gamma(-1.0, 1.0).is_err());
        assert!(ClaimDistribution::moments_only(vec![0.0]).is_err());
    }
}
