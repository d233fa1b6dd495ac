//! Dense real polynomials stored as ascending coefficient vectors, plus the
//! small amount of linear algebra the rational-transform code needs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, RuinError};

/// Relative pivot below which a linear system is declared singular.
pub const PIVOT_TOL: f64 = 1e-12;

pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn eval_c(p: &[f64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn eval_cc(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

pub fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Product of linear factors (s + r_i).
pub fn from_neg_roots(rates: &[f64]) -> Vec<f64> {
    rates.iter().fold(vec![1.0], |acc, &r| mul(&acc, &[r, 1.0]))
}

/// Integer power of a polynomial.
pub fn pow(p: &[f64], k: usize) -> Vec<f64> {
    (0..k).fold(vec![1.0], |acc, _| mul(&acc, p))
}

/// Drops trailing coefficients that are zero relative to the largest one.
pub fn trim(p: &[f64], rel: f64) -> Vec<f64> {
    let big = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut out = p.to_vec();
    while out.len() > 1 && out.last().is_some_and(|c| c.abs() <= rel * big) {
        out.pop();
    }
    out
}

/// First `n` Maclaurin coefficients of num/den by long division.
pub fn series_div(num: &[f64], den: &[f64], n: usize) -> Result<Vec<f64>> {
    let d0 = den.first().copied().unwrap_or(0.0);
    if d0 == 0.0 {
        return Err(RuinError::PoleAtZero);
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num.get(k).copied().unwrap_or(0.0);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= den[j] * out[k - j];
        }
        out.push(acc / d0);
    }
    Ok(out)
}

/// Taylor coefficients of `p` about the complex point `a`, i.e. the
/// coefficients of p(a + h) in powers of h.
pub fn taylor_at(p: &[f64], a: Complex64) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let n = c.len();
    // repeated synthetic division
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let t = c[j + 1] * a;
            c[j] += t;
        }
    }
    c
}

/// Complex roots of a real polynomial (ascending coefficients).
///
/// Roots come from the eigenvalues of the companion matrix of the
/// variable-scaled polynomial and are then polished by Newton steps on the
/// original coefficients.
pub fn roots(p: &[f64]) -> Result<Vec<Complex64>> {
    let p = trim(p, 0.0);
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p[deg];
    // leading zero roots
    let zeros = p.iter().take_while(|c| **c == 0.0).count();
    let q: Vec<f64> = p[zeros..].iter().map(|c| c / lead).collect();
    let d = q.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if d == 0 {
        return Ok(out);
    }
    // s = sc * z balances the coefficient magnitudes
    let sc = q[0].abs().powf(1.0 / d as f64).max(f64::MIN_POSITIVE);
    let qs: Vec<f64> = q
        .iter()
        .enumerate()
        .map(|(k, c)| c * sc.powi(k as i32) / sc.powi(d as i32))
        .collect();
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -qs[i];
    }
    let eig = comp.complex_eigenvalues();
    let dp = derivative(&q);
    for z in eig.iter() {
        let mut r = *z * sc;
        for _ in 0..8 {
            let f = eval_c(&q, r);
            let g = eval_c(&dp, r);
            if g.norm() == 0.0 {
                break;
            }
            let step = f / g;
            let cand = r - step;
            if eval_c(&q, cand).norm() < f.norm() {
                r = cand;
            } else {
                break;
            }
            if step.norm() <= 1e-16 * r.norm() {
                break;
            }
        }
        out.push(r);
    }
    // restore exact conjugate symmetry for real polynomials
    for r in out.iter_mut() {
        if r.im.abs() <= 1e-14 * r.norm().max(1e-300) {
            r.im = 0.0;
        }
    }
    Ok(out)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting on the
/// row-equilibrated system.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for i in 0..n {
        let s = m[i].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if s == 0.0 {
            return Err(RuinError::SingularSystem(0.0));
        }
        m[i].iter_mut().for_each(|v| *v /= s);
        rhs[i] /= s;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        if m[piv][col].abs() < PIVOT_TOL {
            return Err(RuinError::SingularSystem(m[piv][col].abs()));
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for k in i + 1..n {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_product() {
        let p = from_neg_roots(&[1.0, 2.0, 3.0]);
        let mut r: Vec<f64> = roots(&p).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-3.0, -2.0, -1.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_pair() {
        // s^2 + 2s + 5 -> -1 +/- 2i
        let r = roots(&[5.0, 2.0, 1.0]).unwrap();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.re + 1.0).abs() < 1e-13 && (z.im.abs() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn taylor_shift() {
        // (1+h)^2 = 1 + 2h + h^2
        let t = taylor_at(&[0.0, 0.0, 1.0], Complex64::new(1.0, 0.0));
        assert!((t[0].re - 1.0).abs() < 1e-15);
        assert!((t[1].re - 2.0).abs() < 1e-15);
        assert!((t[2].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(solve(&a, &[1.0, 2.0]), Err(RuinError::SingularSystem(_))));
    }

    #[test]
    fn series_of_geometric() {
        let s = series_div(&[1.0], &[1.0, -1.0], 5).unwrap();
        assert_eq!(s, vec![1.0; 5]);
    }
}
