//! Rational Laplace transforms and their inverses.
//!
//! [`RationalLT`] holds P(s)/Q(s) with a monic denominator. Padé and
//! two-point Padé build such functions from expansion coefficients;
//! [`partial_fractions`] turns one into an [`ExpPolyMixture`], the finite sum
//! `Σ w x^k e^{-r x}` whose Laplace transform it is.

use num_complex::Complex64;

use crate::claims::factorial;
use crate::error::{Result, RuinError};
use crate::poly;

/// Relative spacing under which distinct computed poles are merged into
/// one confluent pole.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Largest |Im|/|Re| tolerated when a mixture evaluation should be real.
pub const IMAG_TOL: f64 = 1e-10;

/// P(s)/Q(s) with ascending coefficients and `den` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLT {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl RationalLT {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if den.iter().chain(&num).any(|c| !c.is_finite()) {
            return Err(RuinError::InvalidParameter("non-finite coefficient".into()));
        }
        let den = poly::trim(&den, 1e-14);
        let num = poly::trim(&num, 1e-14);
        let lead = *den.last().unwrap_or(&0.0);
        if lead == 0.0 {
            return Err(RuinError::InvalidParameter("denominator is identically zero".into()));
        }
        if num.len() > den.len() {
            return Err(RuinError::InvalidParameter(format!(
                "numerator degree {} exceeds denominator degree {}",
                num.len() - 1,
                den.len() - 1
            )));
        }
        Ok(Self {
            num: poly::scale(&num, 1.0 / lead),
            den: poly::scale(&den, 1.0 / lead),
        })
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn num_degree(&self) -> usize {
        self.num.len() - 1
    }

    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        poly::eval_c(&self.num, s) / poly::eval_c(&self.den, s)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        poly::roots(&self.den)
    }

    /// Coefficients of the expansion at infinity in powers
    /// s^{deg P - deg Q}, s^{deg P - deg Q - 1}, ...
    pub fn infinity_series(&self, n: usize) -> Vec<f64> {
        // reverse the coefficient order and divide as power series in 1/s
        let rn: Vec<f64> = self.num.iter().rev().copied().collect();
        let rd: Vec<f64> = self.den.iter().rev().copied().collect();
        poly::series_div(&rn, &rd, n).unwrap_or_default()
    }
}

/// First `n` Maclaurin coefficients of `r`.
pub fn series_of(r: &RationalLT, n: usize) -> Result<Vec<f64>> {
    poly::series_div(r.num(), r.den(), n)
}

/// Classic (m, n) Padé approximant of the power series `c_0 + c_1 s + ...`.
pub fn pade(series: &[f64], m: usize, n: usize) -> Result<RationalLT> {
    if series.len() < m + n + 1 {
        return Err(RuinError::InvalidParameter(format!(
            "Padé ({m},{n}) needs {} coefficients, got {}",
            m + n + 1,
            series.len()
        )));
    }
    let c = |i: isize| if i < 0 { 0.0 } else { series[i as usize] };
    // q_0 = 1; rows k = m+1..m+n: Σ_{j=1}^n q_j c_{k-j} = -c_k
    let mut q = vec![1.0];
    if n > 0 {
        let a: Vec<Vec<f64>> = (m + 1..=m + n)
            .map(|k| (1..=n).map(|j| c(k as isize - j as isize)).collect())
            .collect();
        let b: Vec<f64> = (m + 1..=m + n).map(|k| -c(k as isize)).collect();
        match poly::solve(&a, &b) {
            Ok(x) => q.extend(x),
            Err(e @ RuinError::SingularSystem(_)) => return degenerate_pade(series, m, n, e),
            Err(e) => return Err(e),
        }
    }
    let p: Vec<f64> = (0..=m)
        .map(|k| (0..=k.min(n)).map(|j| q[j] * c(k as isize - j as isize)).sum())
        .collect();
    if p.len() > n + 1 && poly::trim(&p, 1e-14).len() > n + 1 {
        return Err(RuinError::NotSupported(
            "Padé with numerator degree above denominator degree".into(),
        ));
    }
    RationalLT::new(p, q)
}

/// Inside a degenerate block of the Padé table (e.g. a series that is
/// itself rational of lower degree) the approximant is the lower-order one,
/// provided it still meets the full order condition.
fn degenerate_pade(series: &[f64], m: usize, n: usize, err: RuinError) -> Result<RationalLT> {
    for k in (0..n).rev() {
        let Ok(r) = pade(series, m, k) else { continue };
        let back = series_of(&r, m + n + 1)?;
        let scale = series[..=m + n].iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if back.iter().zip(series).all(|(a, b)| (a - b).abs() <= 1e-12 * scale.max(b.abs())) {
            return Ok(r);
        }
    }
    Err(err)
}

/// Two-point Padé approximant of type (m, n), m <= n, matching the first
/// `k0` Maclaurin coefficients of `series0` and the leading coefficients
/// `inf_values` of the expansion at infinity in powers s^{m-n}, s^{m-n-1}, ...
pub fn two_point_pade(
    series0: &[f64],
    k0: usize,
    inf_values: &[f64],
    m: usize,
    n: usize,
) -> Result<RationalLT> {
    if m > n {
        return Err(RuinError::InconsistentConstraints(
            "expansion at infinity requires m <= n".into(),
        ));
    }
    if k0 + inf_values.len() != m + n + 1 {
        return Err(RuinError::InconsistentConstraints(format!(
            "{} constraints for a ({m},{n}) rational with {} free coefficients",
            k0 + inf_values.len(),
            m + n + 1
        )));
    }
    if series0.len() < k0 {
        return Err(RuinError::InconsistentConstraints(format!(
            "k0 = {k0} but only {} coefficients at 0",
            series0.len()
        )));
    }
    // unknowns: p_0..p_m then q_0..q_{n-1}; q_n = 1
    let nu = m + n + 1;
    let pi = |k: usize| k;
    let qi = |j: usize| m + 1 + j;
    let mut rows = Vec::with_capacity(nu);
    let mut rhs = Vec::with_capacity(nu);
    for k in 0..k0 {
        let mut row = vec![0.0; nu];
        let mut b = 0.0;
        for j in 0..=k.min(n) {
            let cv = series0[k - j];
            if j == n {
                b -= cv;
            } else {
                row[qi(j)] += cv;
            }
        }
        if k <= m {
            row[pi(k)] -= 1.0;
        }
        rows.push(row);
        rhs.push(b);
    }
    for i in 0..inf_values.len() {
        let mut row = vec![0.0; nu];
        let mut b = 0.0;
        if i <= m {
            row[pi(m - i)] += 1.0;
        }
        for j in n.saturating_sub(i)..=n {
            let dv = inf_values[j + i - n];
            if j == n {
                b += dv;
            } else {
                row[qi(j)] -= dv;
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let x = poly::solve(&rows, &rhs)?;
    let p = x[..=m].to_vec();
    let mut q = x[m + 1..].to_vec();
    q.push(1.0);
    RationalLT::new(p, q)
}

/// One term `w x^k e^{-r x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub weight: Complex64,
    pub rate: Complex64,
    pub power: u32,
}

impl ExpTerm {
    pub fn real(weight: f64, rate: f64, power: u32) -> Self {
        Self {
            weight: Complex64::new(weight, 0.0),
            rate: Complex64::new(rate, 0.0),
            power,
        }
    }
}

/// What [`ExpPolyMixture::eval`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixtureKind {
    /// The function g(x) = Σ w x^k e^{-r x} itself.
    Density,
    /// The tail integral ∫_x^∞ g(y) dy.
    Survival,
}

/// A measure `atom0·δ_0 + g(x) dx` with g an exponential polynomial.
///
/// When the mixture is the inverse of a ruin transform Ψ*(s), g is Ψ itself.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpPolyMixture {
    pub terms: Vec<ExpTerm>,
    pub atom0: f64,
}

impl ExpPolyMixture {
    pub fn new(terms: Vec<ExpTerm>, atom0: f64) -> Self {
        Self { terms, atom0 }
    }

    /// Smallest real part among the rates.
    pub fn min_rate(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.rate.re)
            .fold(f64::INFINITY, f64::min)
    }

    fn sum<F: Fn(&ExpTerm) -> Complex64>(&self, x: f64, f: F) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.rate.re * x < 745.0)
            .map(f)
            .sum()
    }

    fn density_c(&self, x: f64) -> Complex64 {
        self.sum(x, |t| t.weight * x.powi(t.power as i32) * (-t.rate * x).exp())
    }

    fn survival_c(&self, x: f64) -> Complex64 {
        self.sum(x, |t| {
            let k = t.power as usize;
            let rx = t.rate * x;
            let mut poly = Complex64::new(0.0, 0.0);
            let mut pw = Complex64::new(1.0, 0.0);
            for j in 0..=k {
                poly += pw / factorial(j);
                pw *= rx;
            }
            t.weight * factorial(k) / t.rate.powi(k as i32 + 1) * (-rx).exp() * poly
        })
    }

    fn derivative_c(&self, x: f64) -> Complex64 {
        self.sum(x, |t| {
            let k = t.power as i32;
            let lead = if k > 0 { k as f64 * x.powi(k - 1) } else { 0.0 };
            t.weight * (Complex64::new(lead, 0.0) - t.rate * x.powi(k)) * (-t.rate * x).exp()
        })
    }

    /// Real value of g or of its tail at x >= 0, rejecting a non-negligible
    /// imaginary residue. Values below 1e-300 are flushed to zero.
    pub fn eval(&self, x: f64, kind: MixtureKind) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(RuinError::DomainError(format!("x = {x} must be >= 0")));
        }
        let z = match kind {
            MixtureKind::Density => self.density_c(x),
            MixtureKind::Survival => self.survival_c(x),
        };
        let mag: f64 = self.terms.iter().map(|t| t.weight.norm()).sum::<f64>().max(z.re.abs());
        if z.im.abs() > IMAG_TOL * mag.max(f64::MIN_POSITIVE) && z.im.abs() > 1e-300 {
            return Err(RuinError::NumericalInconsistency(format!(
                "imaginary residue {:.3e} at x = {x}",
                z.im
            )));
        }
        Ok(if z.re.abs() < 1e-300 { 0.0 } else { z.re })
    }

    /// g(x), real part.
    pub fn density(&self, x: f64) -> f64 {
        self.density_c(x).re
    }

    /// ∫_x^∞ g, real part.
    pub fn survival(&self, x: f64) -> f64 {
        self.survival_c(x).re
    }

    /// g'(x), real part.
    pub fn derivative(&self, x: f64) -> f64 {
        self.derivative_c(x).re
    }

    /// atom0 + ∫_0^∞ e^{-s x} g(x) dx.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        let body: Complex64 = self
            .terms
            .iter()
            .map(|t| t.weight * factorial(t.power as usize) / (s + t.rate).powi(t.power as i32 + 1))
            .sum();
        body + self.atom0
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { weight: t.weight * k, ..*t })
                .collect(),
            atom0: self.atom0 * k,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        Self { terms, atom0: self.atom0 + other.atom0 }
    }
}

struct Cluster {
    center: Complex64,
    mult: usize,
}

fn cluster_roots(roots: &[Complex64]) -> Vec<Cluster> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![roots[i]];
        for j in i + 1..roots.len() {
            if used[j] {
                continue;
            }
            let scale = roots[i].norm().max(roots[j].norm()).max(1e-300);
            if (roots[i] - roots[j]).norm() <= CLUSTER_TOL * scale {
                used[j] = true;
                members.push(roots[j]);
            }
        }
        let mut center = members.iter().sum::<Complex64>() / members.len() as f64;
        if center.im.abs() <= 1e-12 * center.norm() {
            center.im = 0.0;
        }
        out.push(Cluster { center, mult: members.len() });
    }
    out
}

/// Inverts a rational transform into an exponential-polynomial mixture.
///
/// A numerator of the same degree as the denominator contributes its
/// constant part as `atom0`.
pub fn partial_fractions(r: &RationalLT) -> Result<ExpPolyMixture> {
    let den = r.den();
    let mut num = r.num().to_vec();
    let mut atom0 = 0.0;
    if num.len() == den.len() {
        atom0 = *num.last().unwrap_or(&0.0);
        num = poly::add(&num, &poly::scale(den, -atom0));
        num.pop();
    }
    let roots = r.poles()?;
    if let Some(bad) = roots.iter().find(|z| z.re >= 0.0) {
        return Err(RuinError::UnstablePole(format!("{bad}")));
    }
    let clusters = cluster_roots(&roots);
    let scale_w = num.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut terms = Vec::new();
    for (ci, cl) in clusters.iter().enumerate() {
        if cl.center.im < 0.0 {
            continue;
        }
        let a = cl.center;
        let m = cl.mult;
        // Q̃(a+h) = Π over other clusters (h + a - b)^{mult}
        let mut qt = vec![Complex64::new(1.0, 0.0)];
        for (cj, other) in clusters.iter().enumerate() {
            if cj == ci {
                continue;
            }
            for _ in 0..other.mult {
                let d = a - other.center;
                let mut next = vec![Complex64::new(0.0, 0.0); qt.len() + 1];
                for (k, c) in qt.iter().enumerate() {
                    next[k] += c * d;
                    next[k + 1] += c;
                }
                qt = next;
            }
        }
        let pt = poly::taylor_at(&num, a);
        // g = P(a+h) / Q̃(a+h) to order m-1
        let mut g: Vec<Complex64> = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = pt.get(k).copied().unwrap_or_default();
            for j in 1..=k.min(qt.len() - 1) {
                acc -= qt[j] * g[k - j];
            }
            g.push(acc / qt[0]);
        }
        for j in 1..=m {
            let c = g[m - j];
            let w = c / factorial(j - 1);
            if w.norm() <= 1e-15 * scale_w.max(f64::MIN_POSITIVE) {
                continue;
            }
            let term = ExpTerm { weight: w, rate: -a, power: (j - 1) as u32 };
            terms.push(term);
            if a.im > 0.0 {
                terms.push(ExpTerm {
                    weight: w.conj(),
                    rate: (-a).conj(),
                    power: (j - 1) as u32,
                });
            }
        }
    }
    Ok(ExpPolyMixture { terms, atom0 })
}
