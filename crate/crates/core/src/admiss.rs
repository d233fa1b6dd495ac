//! Is a candidate exponential mixture a genuine probability object?

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, RuinError};
use crate::ratlap::ExpPolyMixture;

const GRID_POINTS: usize = 2000;
const HORIZON: f64 = 20.0;
const REL_TOL: f64 = 1e-10;

/// PH(α, A): the absorption time of a Markov chain with subgenerator A.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseType {
    alpha: DVector<f64>,
    a: DMatrix<f64>,
}

impl PhaseType {
    pub fn new(alpha: Vec<f64>, a: DMatrix<f64>) -> Result<Self> {
        let n = alpha.len();
        if a.nrows() != n || a.ncols() != n || n == 0 {
            return Err(RuinError::InvalidSubgenerator(format!(
                "alpha has {n} entries, A is {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if alpha.iter().any(|v| *v < 0.0) || alpha.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(RuinError::InvalidSubgenerator("alpha is not a sub-probability vector".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && a[(i, j)] < 0.0 {
                    return Err(RuinError::InvalidSubgenerator(format!("A[{i},{j}] < 0")));
                }
            }
            if a.row(i).sum() > 1e-12 {
                return Err(RuinError::InvalidSubgenerator(format!("row {i} sums above 0")));
            }
        }
        Ok(Self { alpha: DVector::from_vec(alpha), a })
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.a
    }
}

/// f(x) = α e^{Ax} (−A 1).
pub fn ph_density(ph: &PhaseType, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(RuinError::DomainError(format!("x = {x} must be >= 0")));
    }
    let n = ph.a.nrows();
    let exit = -(&ph.a * DVector::from_element(n, 1.0));
    let e = (&ph.a * x).exp();
    Ok((ph.alpha.transpose() * e * exit)[(0, 0)])
}

/// Canonical survival coefficients w on e^{-x}, e^{-2x}, e^{-3x}:
/// admissible iff −w_2 ≤ 2√(w_1 w_3).
pub fn three_exp_criterion(w: [f64; 3]) -> Result<bool> {
    if !(w[0] > 0.0 && w[2] > 0.0) {
        return Err(RuinError::NotApplicable(format!(
            "needs w1 > 0 and w3 > 0, got {:?}",
            w
        )));
    }
    Ok(-w[1] <= 2.0 * (w[0] * w[2]).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    /// g ≥ −tol everywhere.
    pub density_nonneg: bool,
    /// g nonincreasing (g' ≤ tol), i.e. g is a valid survival function.
    pub survival_monotone: bool,
    pub min_density: f64,
    pub argmin: f64,
}

fn grid(horizon: f64) -> Vec<f64> {
    let lo = horizon * 1e-7;
    let ratio = (horizon / lo).powf(1.0 / (GRID_POINTS - 2) as f64);
    let mut xs = vec![0.0];
    let mut x = lo;
    for _ in 1..GRID_POINTS {
        xs.push(x);
        x *= ratio;
    }
    xs
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum of `f` over the base grid, refined around every local dip.
fn scan<F: Fn(f64) -> f64>(f: F, xs: &[f64]) -> (f64, f64, f64) {
    let ys: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
    let peak = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let mut best = (xs[0], ys[0]);
    for i in 0..ys.len() {
        if ys[i] < best.1 {
            best = (xs[i], ys[i]);
        }
        let left = if i > 0 { ys[i - 1] } else { f64::INFINITY };
        let right = ys.get(i + 1).copied().unwrap_or(f64::INFINITY);
        if ys[i] <= left && ys[i] <= right && i > 0 && i + 1 < ys.len() {
            let (x, y) = golden_min(&f, xs[i - 1], xs[i + 1]);
            if y < best.1 {
                best = (x, y);
            }
        }
    }
    (best.0, best.1, peak)
}

/// Samples g and −g' and reports whether either dips below zero.
pub fn numeric_admissibility(mix: &ExpPolyMixture) -> AdmissibilityReport {
    let rmin = mix.min_rate();
    let horizon = if rmin.is_finite() && rmin > 0.0 { HORIZON / rmin } else { HORIZON };
    let xs = grid(horizon);
    let (argmin, min_density, peak) = scan(|x| mix.density(x), &xs);
    let (_, min_slope, peak_slope) = scan(|x| -mix.derivative(x), &xs);
    let tail = tail_sign(mix);
    AdmissibilityReport {
        density_nonneg: min_density >= -REL_TOL * peak && tail >= 0.0,
        survival_monotone: min_slope >= -REL_TOL * peak_slope && tail >= 0.0,
        min_density,
        argmin,
    }
}

/// Sign of the term that dominates as x → ∞ (smallest rate, then highest power).
fn tail_sign(mix: &ExpPolyMixture) -> f64 {
    let lead = mix
        .terms
        .iter()
        .filter(|t| t.weight.norm() > 0.0)
        .min_by(|a, b| {
            a.rate
                .re
                .total_cmp(&b.rate.re)
                .then(b.power.cmp(&a.power))
        });
    match lead {
        // oscillating leading pair: the sign changes forever
        Some(t) if t.rate.im.abs() > 0.0 => -1.0,
        Some(t) => t.weight.re.signum(),
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlap::ExpTerm;

    fn harris() -> ExpPolyMixture {
        ExpPolyMixture::new(
            vec![ExpTerm::real(2.0, 1.0, 0), ExpTerm::real(-6.0, 2.0, 0), ExpTerm::real(6.0, 3.0, 0)],
            0.0,
        )
    }

    fn e4() -> PhaseType {
        let mut a = DMatrix::zeros(4, 4);
        for i in 0..4 {
            a[(i, i)] = -(i as f64 + 1.0);
            if i < 3 {
                a[(i, i + 1)] = i as f64 + 1.0;
            }
        }
        PhaseType::new(vec![0.5, 0.0, 0.0, 0.5], a).unwrap()
    }

    #[test]
    fn criterion_cases() {
        assert!(three_exp_criterion([2.0, -3.0, 2.0]).unwrap());
        assert!(!three_exp_criterion([1.0, -3.0, 1.0]).unwrap());
        assert!(three_exp_criterion([1.0, 0.0, 1.0]).unwrap());
        assert!(three_exp_criterion([0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn harris_is_a_density() {
        let r = numeric_admissibility(&harris());
        assert!(r.density_nonneg);
        let bad = ExpPolyMixture::new(vec![ExpTerm::real(1.0, 1.0, 0), ExpTerm::real(-1.2, 2.0, 0)], 0.0);
        let r = numeric_admissibility(&bad);
        assert!(!r.density_nonneg && !r.survival_monotone);
        let one = ExpPolyMixture::new(vec![ExpTerm::real(0.3, 2.0, 0)], 0.0);
        let r = numeric_admissibility(&one);
        assert!(r.density_nonneg && r.survival_monotone);
    }

    #[test]
    fn e4_matches_harris() {
        let ph = e4();
        let h = harris();
        for x in [0.0, 0.1, 1.0, 3.0, 10.0] {
            let a = ph_density(&ph, x).unwrap();
            let b = h.density(x);
            assert!((a / b - 1.0).abs() < 1e-9, "{x}: {a} vs {b}");
        }
        assert!((ph_density(&ph, 1.0).unwrap() - 0.2224695931).abs() < 1e-10);
    }

    #[test]
    fn simple_phase_types() {
        let one = PhaseType::new(vec![1.0], DMatrix::from_element(1, 1, -2.0)).unwrap();
        assert!((ph_density(&one, 0.5).unwrap() - 2.0 * (-1.0f64).exp()).abs() < 1e-14);
        let erl = PhaseType::new(vec![1.0, 0.0], DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 0.0, -1.0])).unwrap();
        assert!(ph_density(&erl, 0.0).unwrap().abs() < 1e-15);
        assert!(PhaseType::new(vec![1.0], DMatrix::from_element(1, 1, 1.0)).is_err());
    }
}
