//! Johnson–Taaffe fitting: mixtures of Erlang distributions with a common
//! shape n that match three (or more) moments, and the index n needed for
//! such a mixture to exist.

use nalgebra::DMatrix;

use crate::claims::factorial;
use crate::error::{Result, RuinError};
use crate::poly;
use crate::ratlap::{ExpPolyMixture, ExpTerm, RationalLT};
use crate::riskmodel::RiskModel;

/// Largest common order the searches will consider.
pub const ORDER_CAP: usize = 100_000;
/// Relative threshold for Hankel positivity.
pub const HANKEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErlangComponent {
    pub weight: f64,
    /// Mean of one exponential stage, 1/rate.
    pub stage_mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub discriminant: f64,
}

/// `Σ w_i Erlang(n, 1/x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErlangMixtureFit {
    pub order: usize,
    pub components: Vec<ErlangComponent>,
    pub diagnostics: FitDiagnostics,
}

impl ErlangMixtureFit {
    /// E[Z^k] = n(n+1)…(n+k−1) Σ w x^k.
    pub fn raw_moment(&self, k: usize) -> f64 {
        rising(self.order, k)
            * self
                .components
                .iter()
                .map(|c| c.weight * c.stage_mean.powi(k as i32))
                .sum::<f64>()
    }

    /// The fitted density as an exponential-polynomial mixture.
    pub fn density_mixture(&self) -> ExpPolyMixture {
        let n = self.order;
        let terms = self
            .components
            .iter()
            .map(|c| {
                let r = 1.0 / c.stage_mean;
                ExpTerm::real(c.weight * r.powi(n as i32) / factorial(n - 1), r, (n - 1) as u32)
            })
            .collect();
        ExpPolyMixture::new(terms, 0.0)
    }

    /// The fitted survival function as an exponential-polynomial mixture,
    /// scaled by `mass`.
    pub fn survival_mixture(&self, mass: f64) -> ExpPolyMixture {
        let mut terms = Vec::new();
        for c in &self.components {
            let r = 1.0 / c.stage_mean;
            for j in 0..self.order {
                terms.push(ExpTerm::real(mass * c.weight * r.powi(j as i32) / factorial(j), r, j as u32));
            }
        }
        ExpPolyMixture::new(terms, 0.0)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.density_mixture().density(x)
    }

    /// Laplace transform Σ w (1 + x s)^{-n} as a rational function.
    pub fn laplace_rational(&self) -> Result<RationalLT> {
        let n = self.order;
        let factors: Vec<Vec<f64>> = self
            .components
            .iter()
            .map(|c| poly::pow(&[1.0, c.stage_mean], n))
            .collect();
        let den = factors.iter().fold(vec![1.0], |acc, f| poly::mul(&acc, f));
        let mut num = vec![0.0];
        for (i, c) in self.components.iter().enumerate() {
            let others = factors
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(vec![1.0], |acc, (_, f)| poly::mul(&acc, f));
            num = poly::add(&num, &poly::scale(&others, c.weight));
        }
        RationalLT::new(num, den)
    }
}

/// n(n+1)…(n+k−1).
pub fn rising(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n + j) as f64)
}

/// μ_k = m_k / n_{(k)}.
pub fn erlang_reduce(m: &[f64], n: usize) -> Vec<f64> {
    m.iter()
        .enumerate()
        .map(|(i, v)| v / rising(n, i + 1))
        .collect()
}

fn check_three(m: &[f64]) -> Result<(f64, f64)> {
    if m.len() < 3 {
        return Err(RuinError::InvalidParameter(format!("need 3 moments, got {}", m.len())));
    }
    if !(m[0] > 0.0 && m.iter().all(|v| v.is_finite())) {
        return Err(RuinError::InfeasibleMoments("m_1 must be positive and finite".into()));
    }
    let h2 = m[1] / (m[0] * m[0]);
    let h3 = m[2] / (m[0] * m[1]);
    if !(h2 > 1.0 && h3 > h2) {
        return Err(RuinError::InfeasibleMoments(format!(
            "normalized moments m̂2 = {h2}, m̂3 = {h3} need 1 < m̂2 < m̂3"
        )));
    }
    Ok((h2, h3))
}

/// Ceiling that forgives rounding noise just above an integer.
fn soft_ceil(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        v.ceil()
    }
}

/// Closed-form index ⌈max{1/(m̂2−1), (2m̂2−m̂3)/(m̂3−m̂2)}⌉, at least 1.
pub fn jt_index_3(m: &[f64]) -> Result<usize> {
    let (h2, h3) = check_three(m)?;
    let v = (1.0 / (h2 - 1.0)).max((2.0 * h2 - h3) / (h3 - h2));
    let n = soft_ceil(v).max(1.0);
    if n > ORDER_CAP as f64 {
        return Err(RuinError::OrderCap(ORDER_CAP));
    }
    Ok(n as usize)
}

struct Bs {
    b0: f64,
    b1: f64,
    b2: f64,
    tol0: f64,
    tol2: f64,
}

fn bs(mu: &[f64]) -> Bs {
    let (m1, m2, m3) = (mu[0], mu[1], mu[2]);
    Bs {
        b0: m2 - m1 * m1,
        b1: m3 - m1 * m2,
        b2: m3 * m1 - m2 * m2,
        tol0: HANKEL_TOL * m2.max(m1 * m1),
        tol2: HANKEL_TOL * (m1 * m3).max(m2 * m2),
    }
}

/// Fit at a prescribed common order n.
pub fn jt_fit3_at(m: &[f64], n: usize) -> Result<ErlangMixtureFit> {
    if m.len() < 3 || !(m[0] > 0.0) || m.iter().any(|v| !v.is_finite()) {
        return Err(RuinError::InfeasibleMoments("need three finite moments with m_1 > 0".into()));
    }
    if n == 0 {
        return Err(RuinError::InvalidParameter("order must be >= 1".into()));
    }
    let mu = erlang_reduce(&m[..3], n);
    let b = bs(&mu);
    if b.b0.abs() <= b.tol0 && b.b2.abs() <= b.tol2 {
        return Ok(ErlangMixtureFit {
            order: n,
            components: vec![ErlangComponent { weight: 1.0, stage_mean: mu[0] }],
            diagnostics: FitDiagnostics { b0: b.b0, b1: b.b1, b2: b.b2, discriminant: 0.0 },
        });
    }
    if !(b.b0 > b.tol0 && b.b2 > b.tol2) {
        return Err(RuinError::InfeasibleMoments(format!(
            "order {n}: b0 = {:.3e}, b2 = {:.3e}",
            b.b0, b.b2
        )));
    }
    // stage means solve b0 x² − b1 x + b2 = 0
    let disc = b.b1 * b.b1 - 4.0 * b.b0 * b.b2;
    let q = 0.5 * (b.b1 + disc.max(0.0).sqrt());
    let (x1, x2) = (b.b2 / q, q / b.b0);
    let w1 = (x2 - mu[0]) / (x2 - x1);
    let w2 = 1.0 - w1;
    if w1 < -1e-12 || w2 < -1e-12 {
        return Err(RuinError::NegativeWeight(w1.min(w2)));
    }
    let (w2, x1, x2) = polish(&mu, w2.max(0.0), x1, x2);
    let w1 = 1.0 - w2;
    Ok(ErlangMixtureFit {
        order: n,
        components: vec![
            ErlangComponent { weight: w1.max(0.0), stage_mean: x1 },
            ErlangComponent { weight: w2.max(0.0), stage_mean: x2 },
        ],
        diagnostics: FitDiagnostics { b0: b.b0, b1: b.b1, b2: b.b2, discriminant: disc },
    })
}

fn moment_residual(mu: &[f64], w2: f64, x1: f64, x2: f64) -> [f64; 3] {
    let mut r = [0.0; 3];
    for k in 0..3 {
        let e = k as i32 + 1;
        r[k] = ((1.0 - w2) * x1.powi(e) + w2 * x2.powi(e)) / mu[k] - 1.0;
    }
    r
}

/// Newton steps on (w2, x1, x2) against the reduced moments. Near the
/// feasibility boundary the closed form loses digits to μ1 − x1
/// cancellation; a few steps recover them.
fn polish(mu: &[f64], mut w2: f64, mut x1: f64, mut x2: f64) -> (f64, f64, f64) {
    let norm = |r: [f64; 3]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut res = moment_residual(mu, w2, x1, x2);
    for _ in 0..4 {
        if norm(res) < 1e-15 || w2 <= 0.0 || w2 >= 1.0 {
            break;
        }
        // unknowns scaled by their current size
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                let e = k as i32 + 1;
                let kf = e as f64;
                vec![
                    w2 * (x2.powi(e) - x1.powi(e)) / mu[k],
                    kf * (1.0 - w2) * x1.powi(e) / mu[k],
                    kf * w2 * x2.powi(e) / mu[k],
                ]
            })
            .collect();
        let rhs: Vec<f64> = res.iter().map(|v| -v).collect();
        let Ok(d) = poly::solve(&rows, &rhs) else { break };
        let (nw, n1, n2) = (w2 * (1.0 + d[0]), x1 * (1.0 + d[1]), x2 * (1.0 + d[2]));
        let nres = moment_residual(mu, nw, n1, n2);
        if !(nw > 0.0 && nw < 1.0 && n1 > 0.0 && n2 > 0.0 && norm(nres) < norm(res)) {
            break;
        }
        (w2, x1, x2, res) = (nw, n1, n2, nres);
    }
    (w2, x1, x2)
}

/// Fit at the smallest order ≥ the closed-form index where the fit is
/// strictly feasible.
pub fn jt_fit3(m: &[f64]) -> Result<ErlangMixtureFit> {
    let start = match jt_index_3(m) {
        Ok(n) => n,
        Err(RuinError::InfeasibleMoments(_)) => return jt_fit3_at(m, 1),
        Err(e) => return Err(e),
    };
    for n in start..=ORDER_CAP {
        match jt_fit3_at(m, n) {
            Err(RuinError::InfeasibleMoments(_)) => continue,
            other => return other,
        }
    }
    Err(RuinError::OrderCap(ORDER_CAP))
}

fn hankel_det(seq: &[f64], start: usize, size: usize) -> f64 {
    let h = DMatrix::from_fn(size, size, |i, j| seq[start + i + j]);
    let diag: f64 = (0..size).map(|i| h[(i, i)]).product();
    h.determinant() / diag
}

fn single_atom(mu: &[f64]) -> bool {
    mu.iter()
        .enumerate()
        .all(|(k, v)| (v / mu[0].powi(k as i32 + 1) - 1.0).abs() <= 1e-9)
}

fn stieltjes_feasible(m: &[f64], n: usize) -> bool {
    let mu = erlang_reduce(m, n);
    if mu[0] <= 0.0 {
        return false;
    }
    if single_atom(&mu) {
        return true;
    }
    let mut seq = vec![1.0];
    seq.extend(&mu);
    let deg = m.len();
    // plain Hankel blocks of size 2..=(deg+1)/2+… and shifted ones
    let k = deg.div_ceil(2);
    for size in 2..=k {
        if hankel_det(&seq, 0, size) <= HANKEL_TOL {
            return false;
        }
        if hankel_det(&seq, 1, size) <= HANKEL_TOL {
            return false;
        }
    }
    true
}

/// Smallest n for which the Erlang-reduced sequence (1, μ_1, …, μ_degree)
/// passes the Hankel positivity tests; `degree` is 3 or 5.
pub fn jt_index_degree(m: &[f64], degree: usize) -> Result<usize> {
    if degree != 3 && degree != 5 {
        return Err(RuinError::InvalidParameter(format!("degree must be 3 or 5, got {degree}")));
    }
    if m.len() < degree {
        return Err(RuinError::MomentUnavailable(m.len() + 1));
    }
    let m = &m[..degree];
    if !(m[0] > 0.0) {
        return Err(RuinError::InfeasibleMoments("m_1 must be positive".into()));
    }
    if stieltjes_feasible(m, 1) {
        return Ok(1);
    }
    // the raw sequence must itself be a Stieltjes moment sequence
    let mut raw = vec![1.0];
    raw.extend(m);
    let k = degree.div_ceil(2);
    for size in 2..=k {
        if hankel_det(&raw, 0, size) <= 0.0 || hankel_det(&raw, 1, size) <= 0.0 {
            return Err(RuinError::InfeasibleMoments(format!(
                "Hankel determinant of order {size} is not positive"
            )));
        }
    }
    let mut lo = 1;
    let mut hi = 2;
    while !stieltjes_feasible(m, hi) {
        lo = hi;
        hi *= 2;
        if lo >= ORDER_CAP {
            return Err(RuinError::OrderCap(ORDER_CAP));
        }
        hi = hi.min(ORDER_CAP);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if stieltjes_feasible(m, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// K-point positive measure with moments 1, μ_1, …, μ_{2K−1}.
pub fn prony_fit(mu: &[f64], k: usize) -> Result<Vec<(f64, f64)>> {
    if k == 0 || mu.len() < 2 * k - 1 {
        return Err(RuinError::InvalidParameter(format!(
            "K = {k} needs {} moments, got {}",
            2 * k - 1,
            mu.len()
        )));
    }
    let mut seq = vec![1.0];
    seq.extend(&mu[..2 * k - 1]);
    // monic orthogonal polynomial x^K + Σ c_j x^j
    let a: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| seq[i + j]).collect()).collect();
    let b: Vec<f64> = (0..k).map(|i| -seq[i + k]).collect();
    let mut c = poly::solve(&a, &b)?;
    c.push(1.0);
    let roots = poly::roots(&c)?;
    let mut xs = Vec::with_capacity(k);
    for z in roots {
        if z.im.abs() > 1e-9 * z.norm() || z.re <= 0.0 {
            return Err(RuinError::InfeasibleMoments(format!("support point {z} is not positive real")));
        }
        xs.push(z.re);
    }
    xs.sort_by(f64::total_cmp);
    let v: Vec<Vec<f64>> = (0..k).map(|p| xs.iter().map(|x| x.powi(p as i32)).collect()).collect();
    let w = poly::solve(&v, &seq[..k])?;
    if let Some(neg) = w.iter().copied().find(|x| *x < 0.0) {
        return Err(RuinError::NegativeWeight(neg));
    }
    Ok(w.into_iter().zip(xs).collect())
}

/// Case (b) of the index comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderWindow {
    pub n: usize,
    pub x1: f64,
    pub x2: f64,
    /// x1 < θ m̂̃2 < x2: only the ladder heights admit an order-n fit.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub jt3_claims: usize,
    pub jt3_equilibrium: usize,
    /// x = θ m̂̃2.
    pub x: f64,
    /// J(L) from the closed form in (θ, m̂̃2, m̂̃3).
    pub partial_j_aggregate: f64,
    /// ν(L) = (a x² + 4x + 6)/(x + 2)².
    pub nu_l: f64,
    /// ν(L_i) = m̂̃3/m̂̃2.
    pub nu_li: f64,
    pub j_equilibrium: f64,
    /// Normalized aggregate-loss moments computed from the moments of L.
    pub l2_hat: f64,
    pub l3_hat: f64,
    pub j_moments: f64,
    pub nu_moments: f64,
    /// Case (a): J(L) < J(L_i).
    pub aggregate_easier: bool,
    pub case_a_threshold: f64,
    pub case_b: Option<OrderWindow>,
    /// Case (c): an Erlang-n mixture fits L for every θ once n ≥ this.
    pub case_c_order: usize,
}

/// Compares fitting the ladder heights (Ramsay route) against fitting the
/// aggregate loss (Beekman–Bowers route).
pub fn compare_indices(model: &RiskModel) -> Result<IndexReport> {
    if model.is_perturbed() {
        return Err(RuinError::PerturbedNotSupported);
    }
    let claims = model.claims();
    let raw = claims.raw_moments(3)?;
    let eq = claims.equilibrium_moments(3)?;
    let jt3_claims = jt_index_3(&raw).or_else(|_| jt_fit3(&raw).map(|f| f.order))?;
    let jt3_equilibrium = jt_index_3(&eq).or_else(|_| jt_fit3(&eq).map(|f| f.order))?;
    let h2 = eq[1] / (eq[0] * eq[0]);
    let h3 = eq[2] / (eq[0] * eq[1]);
    let theta = model.theta();
    let x = theta * h2;
    let a = h3 / h2;
    let nu_l = (a * x * x + 4.0 * x + 6.0) / ((x + 2.0) * (x + 2.0));
    let partial_j_aggregate = (2.0 - nu_l) / (nu_l - 1.0);
    let j_equilibrium = (2.0 - a) / (a - 1.0);

    let lam = model.aggregate_loss_moments(3)?.lam;
    let l: Vec<f64> = lam.iter().enumerate().map(|(i, v)| v * factorial(i + 1)).collect();
    let l2_hat = l[1] / (l[0] * l[0]);
    let l3_hat = l[2] / (l[0] * l[1]);
    let j_moments = (2.0 * l2_hat - l3_hat) / (l3_hat - l2_hat);
    let nu_moments = l3_hat / l2_hat;

    let case_a_threshold = (1.5 - a) / (a - 1.0);
    let case_b = (2..=ORDER_CAP)
        .find(|&n| {
            let (nf, lo) = (n as f64, (n + 2) as f64 / (n + 1) as f64);
            lo <= a && a <= (nf + 1.0) / nf
        })
        .filter(|_| a <= 1.5)
        .and_then(|n| {
            let nf = n as f64;
            let lead = (nf + 1.0) * a - (nf + 2.0);
            let rad = nf * nf + nf - a * (nf * nf - 1.0);
            if lead.abs() <= 1e-12 * (nf + 2.0) || rad < 0.0 {
                return None;
            }
            let r = std::f64::consts::SQRT_2 * rad.sqrt();
            let (mut x1, mut x2) = ((2.0 - r) / lead, (2.0 + r) / lead);
            if x1 > x2 {
                std::mem::swap(&mut x1, &mut x2);
            }
            Some(OrderWindow { n, x1, x2, holds: x1 < x && x < x2 })
        });
    let case_c_order = soft_ceil(h3 / (h3 - h2)).max(1.0) as usize;
    Ok(IndexReport {
        jt3_claims,
        jt3_equilibrium,
        x,
        partial_j_aggregate,
        nu_l,
        nu_li: a,
        j_equilibrium,
        l2_hat,
        l3_hat,
        j_moments,
        nu_moments,
        aggregate_easier: x < case_a_threshold,
        case_a_threshold,
        case_b,
        case_c_order,
    })
}
