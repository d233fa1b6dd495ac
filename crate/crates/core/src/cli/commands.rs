use std::fmt::Write as _;

use crate::admiss::{numeric_admissibility, three_exp_criterion};
use crate::approx::{Method, RuinApprox};
use crate::claims::ClaimDistribution;
use crate::error::RuinError;
use crate::jtfit::{compare_indices, jt_fit3, jt_index_3, jt_index_degree, ErlangMixtureFit};
use crate::oracle::{exact_ruin_rational, mc_aggregate_loss, talbot_ruin};
use crate::ratlap::{ExpPolyMixture, ExpTerm};
use crate::riskmodel::RiskModel;

use super::config::{OracleKind, RunConfig};
use super::CliError;

const DEFAULT_MC_SAMPLES: usize = 1_000_000;

/// Tabular command output plus diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// False when some requested column could not be produced.
    pub complete: bool,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
    /// Human-readable summary for stdout.
    pub text: Option<String>,
}

/// Nine significant digits; NaN becomes an empty cell.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return String::new();
    }
    if v == 0.0 || v.is_infinite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn row(cells: &[f64]) -> Vec<String> {
    cells.iter().map(|v| fmt_num(*v)).collect()
}

fn kv(rows: &mut Vec<Vec<String>>, key: &str, v: f64) {
    rows.push(vec![key.to_string(), fmt_num(v)]);
}

/// Ψ at x by the configured oracle, or the natural default for the model.
enum Exact {
    Mixture(ExpPolyMixture),
    Talbot,
}

fn exact_for(model: &RiskModel, kind: OracleKind) -> Result<Exact, RuinError> {
    match kind {
        OracleKind::Talbot => Ok(Exact::Talbot),
        OracleKind::Rational => exact_ruin_rational(model).map(Exact::Mixture),
        _ => match exact_ruin_rational(model) {
            Ok(m) => Ok(Exact::Mixture(m)),
            Err(RuinError::NotRational) => Ok(Exact::Talbot),
            Err(e) => Err(e),
        },
    }
}

fn exact_at(model: &RiskModel, e: &Exact, x: f64) -> Result<f64, RuinError> {
    match e {
        Exact::Mixture(m) => Ok(m.density(x)),
        Exact::Talbot if x == 0.0 => Ok(if model.is_perturbed() { 1.0 } else { model.rho() }),
        Exact::Talbot => talbot_ruin(model, x),
    }
}

fn exact_column(model: &RiskModel, kind: OracleKind, xs: &[f64]) -> Result<Vec<f64>, RuinError> {
    let e = exact_for(model, kind)?;
    xs.iter().map(|x| exact_at(model, &e, *x)).collect()
}

fn mc_columns(cfg: &RunConfig, model: &RiskModel, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let n = cfg.oracle.n.unwrap_or(DEFAULT_MC_SAMPLES);
    let est = mc_aggregate_loss(model, xs, n, cfg.seed()?)?;
    Ok((est.psi_hat, est.half_width_95))
}

fn run_methods(model: &RiskModel, methods: &[Method], notes: &mut Vec<String>) -> Vec<Option<RuinApprox>> {
    methods
        .iter()
        .map(|m| match m.run(model) {
            Ok(a) => Some(a),
            Err(e) => {
                notes.push(format!("{m}: {e}"));
                None
            }
        })
        .collect()
}

/// Approximations on the grid, with optional exact and relative-error columns.
pub fn cmd_approx(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = cfg.model()?;
    let xs = cfg.grid_points()?;
    let methods = cfg.methods(model.is_perturbed());
    let mut rep = Report { complete: true, ..Default::default() };
    let approx = run_methods(&model, &methods, &mut rep.notes);
    rep.complete = approx.iter().all(Option::is_some);

    let exact = match cfg.oracle.kind {
        OracleKind::None => None,
        OracleKind::Mc => Some(mc_columns(cfg, &model, &xs)?.0),
        k => Some(exact_column(&model, k, &xs)?),
    };
    rep.header.push("x".into());
    rep.header.extend(methods.iter().map(|m| m.name().to_string()));
    if exact.is_some() {
        rep.header.push("exact".into());
        rep.header.extend(methods.iter().map(|m| format!("{m}_relerr")));
    }
    for (i, x) in xs.iter().enumerate() {
        let vals: Vec<f64> = approx
            .iter()
            .map(|a| a.as_ref().map_or(f64::NAN, |a| a.psi(*x)))
            .collect();
        let mut cells = vec![*x];
        cells.extend(&vals);
        if let Some(e) = &exact {
            cells.push(e[i]);
            cells.extend(vals.iter().map(|v| (v - e[i]).abs() / e[i]));
        }
        rep.rows.push(row(&cells));
    }
    Ok(rep)
}

/// The reference ruin function, optionally with Monte Carlo columns.
pub fn cmd_exact(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = cfg.model()?;
    let xs = cfg.grid_points()?;
    let kind = if cfg.oracle.kind == OracleKind::Mc { OracleKind::None } else { cfg.oracle.kind };
    let psi = exact_column(&model, kind, &xs)?;
    let mc = if cfg.oracle.kind == OracleKind::Mc { Some(mc_columns(cfg, &model, &xs)?) } else { None };
    let mut rep = Report { complete: true, ..Default::default() };
    rep.header = vec!["x".into(), "psi".into()];
    if mc.is_some() {
        rep.header.extend(["psi_mc".to_string(), "half_width_95".to_string()]);
    }
    for (i, x) in xs.iter().enumerate() {
        let mut cells = vec![*x, psi[i]];
        if let Some((p, h)) = &mc {
            cells.extend([p[i], h[i]]);
        }
        rep.rows.push(row(&cells));
    }
    Ok(rep)
}

/// Creeping and jump components of the perturbed approximations.
pub fn cmd_perturbed(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = cfg.model()?;
    if !model.is_perturbed() {
        return Err(RuinError::NotPerturbed.into());
    }
    let xs = cfg.grid_points()?;
    let methods = cfg.methods(true);
    let mut rep = Report { complete: true, ..Default::default() };
    let approx = run_methods(&model, &methods, &mut rep.notes);
    rep.complete = approx.iter().all(Option::is_some);
    let kind = if cfg.oracle.kind == OracleKind::Mc { OracleKind::None } else { cfg.oracle.kind };
    let exact = exact_column(&model, kind, &xs)?;
    rep.header.push("x".into());
    for m in &methods {
        rep.header.extend([m.name().to_string(), format!("{m}_d"), format!("{m}_j")]);
    }
    rep.header.push("exact".into());
    for (i, x) in xs.iter().enumerate() {
        let mut cells = vec![*x];
        for a in &approx {
            match a.as_ref().and_then(|a| a.split(*x).map(|s| (a.psi(*x), s))) {
                Some((t, (d, j))) => cells.extend([t, d, j]),
                None => cells.extend([f64::NAN; 3]),
            }
        }
        cells.push(exact[i]);
        rep.rows.push(row(&cells));
    }
    Ok(rep)
}

fn describe_fit(out: &mut String, label: &str, fit: &ErlangMixtureFit) {
    let _ = writeln!(out, "{label}: Erlang order {}", fit.order);
    for (i, c) in fit.components.iter().enumerate() {
        let _ = writeln!(
            out,
            "  component {}: weight {}, stage mean {}",
            i + 1,
            fmt_num(c.weight),
            fmt_num(c.stage_mean)
        );
    }
    let adm = numeric_admissibility(&fit.density_mixture());
    let _ = writeln!(out, "  density nonnegative: {}", adm.density_nonneg);
}

/// Johnson–Taaffe indices and fits for the claims and, given a model, for
/// the ladder heights and the aggregate loss.
pub fn cmd_jt(cfg: &RunConfig) -> Result<Report, CliError> {
    let claims = cfg.claims()?;
    let available = match &claims {
        ClaimDistribution::MomentsOnly { moments } => moments.len().min(5),
        _ => 5,
    };
    let m = claims.raw_moments(available.max(3))?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let j3 = jt_index_3(&m)?;
    let h3 = jt_index_degree(&m, 3)?;
    let _ = writeln!(text, "claims: JT index {j3} (closed form), {h3} (Hankel, degree 3)");
    kv(&mut rows, "claims_jt3", j3 as f64);
    kv(&mut rows, "claims_hankel3", h3 as f64);
    if m.len() >= 5 {
        let h5 = jt_index_degree(&m, 5)?;
        let _ = writeln!(text, "claims: JT index of degree 5 = {h5}");
        kv(&mut rows, "claims_hankel5", h5 as f64);
    }
    let fit = jt_fit3(&m)?;
    describe_fit(&mut text, "claims fit", &fit);
    kv(&mut rows, "claims_fit_order", fit.order as f64);
    for (i, c) in fit.components.iter().enumerate() {
        kv(&mut rows, &format!("claims_fit_w{}", i + 1), c.weight);
        kv(&mut rows, &format!("claims_fit_x{}", i + 1), c.stage_mean);
    }

    let mut complete = true;
    let mut notes = Vec::new();
    if cfg.model.is_some() && !matches!(claims, ClaimDistribution::MomentsOnly { .. }) {
        let model = cfg.model()?;
        if !model.is_perturbed() {
            let eq = claims.equilibrium_moments(3)?;
            let efit = jt_fit3(&eq)?;
            describe_fit(&mut text, "equilibrium fit", &efit);
            kv(&mut rows, "equilibrium_fit_order", efit.order as f64);
            let r = compare_indices(&model)?;
            let _ = writeln!(
                text,
                "equilibrium: JT index {}; partial J of aggregate loss {} (theta = {})",
                r.jt3_equilibrium,
                fmt_num(r.partial_j_aggregate),
                fmt_num(model.theta())
            );
            let _ = writeln!(
                text,
                "nu(L) = {}, nu(L_i) = {}; aggregate loss needs fewer phases: {}",
                fmt_num(r.nu_l),
                fmt_num(r.nu_li),
                r.aggregate_easier
            );
            if let Some(b) = r.case_b {
                let _ = writeln!(
                    text,
                    "order {} window ({}, {}) contains theta*m2: {}",
                    b.n,
                    fmt_num(b.x1),
                    fmt_num(b.x2),
                    b.holds
                );
            }
            let _ = writeln!(text, "any theta is covered from order {}", r.case_c_order);
            kv(&mut rows, "equilibrium_jt3", r.jt3_equilibrium as f64);
            kv(&mut rows, "partial_j_aggregate", r.partial_j_aggregate);
            kv(&mut rows, "nu_l", r.nu_l);
            kv(&mut rows, "nu_li", r.nu_li);
            kv(&mut rows, "j_moments", r.j_moments);
            kv(&mut rows, "case_c_order", r.case_c_order as f64);
            for m in [Method::JtRamsay, Method::JtBeekman] {
                match m.run(&model) {
                    Ok(a) => kv(&mut rows, &format!("{m}_order"), a.meta["order"]),
                    Err(e) => {
                        complete = false;
                        notes.push(format!("{m}: {e}"));
                    }
                }
            }
        }
    }
    Ok(Report {
        header: vec!["quantity".into(), "value".into()],
        rows,
        complete,
        notes,
        text: Some(text),
    })
}

/// Claim, ladder-height and aggregate-loss moments and model scalars.
pub fn cmd_moments(cfg: &RunConfig) -> Result<Report, CliError> {
    let claims = cfg.claims()?;
    let mut rows = Vec::new();
    for k in 1..=4 {
        if let Ok(v) = claims.raw_moment(k) {
            kv(&mut rows, &format!("m{k}"), v);
        }
    }
    for (i, v) in claims.equilibrium_moments(3).unwrap_or_default().iter().enumerate() {
        kv(&mut rows, &format!("eq_m{}", i + 1), *v);
    }
    let mut notes = Vec::new();
    if cfg.model.is_some() {
        let model = cfg.model()?;
        kv(&mut rows, "p", model.p());
        kv(&mut rows, "theta", model.theta());
        kv(&mut rows, "rho", model.rho());
        if let Ok(k2) = model.kappa2() {
            kv(&mut rows, "kappa2", k2);
        }
        let order = (1..=4).rev().find(|k| model.aggregate_loss_moments(*k).is_ok());
        if let Some(k) = order {
            for (i, v) in model.aggregate_loss_moments(k)?.lam.iter().enumerate() {
                kv(&mut rows, &format!("lambda{}", i + 1), *v);
            }
        }
        match model.adjustment_coefficient() {
            Ok(g) => kv(&mut rows, "adjustment_coefficient", g),
            Err(e) => notes.push(format!("adjustment coefficient: {e}")),
        }
    }
    Ok(Report {
        header: vec!["quantity".into(), "value".into()],
        rows,
        complete: true,
        notes,
        text: None,
    })
}

/// Admissibility of an explicit mixture, or of each configured method.
pub fn cmd_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report { complete: true, ..Default::default() };
    rep.header = ["subject", "density_nonneg", "survival_monotone", "min_density", "argmin", "three_exp"]
        .map(String::from)
        .to_vec();
    let mut subjects: Vec<(String, ExpPolyMixture)> = Vec::new();
    if let Some(m) = &cfg.mixture {
        if m.weights.len() != m.rates.len() {
            return Err(CliError::Config("mixture.weights and mixture.rates differ in length".into()));
        }
        let powers = m.powers.clone().unwrap_or_else(|| vec![0; m.rates.len()]);
        let terms = m
            .weights
            .iter()
            .zip(&m.rates)
            .zip(&powers)
            .map(|((w, r), k)| ExpTerm::real(*w, *r, *k))
            .collect();
        subjects.push(("mixture".into(), ExpPolyMixture::new(terms, 0.0)));
    } else {
        let model = cfg.model()?;
        let methods = cfg.methods(model.is_perturbed());
        for (m, a) in methods.iter().zip(run_methods(&model, &methods, &mut rep.notes)) {
            match a {
                Some(a) => subjects.push((m.name().to_string(), a.mixture)),
                None => rep.complete = false,
            }
        }
    }
    for (name, mix) in subjects {
        let adm = numeric_admissibility(&mix);
        // canonical survival coordinates on e^{-x}, e^{-2x}, e^{-3x}
        let three = canonical_three(&mix).and_then(|w| three_exp_criterion(w).ok());
        rep.rows.push(vec![
            name,
            adm.density_nonneg.to_string(),
            adm.survival_monotone.to_string(),
            fmt_num(adm.min_density),
            fmt_num(adm.argmin),
            three.map(|b| b.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(rep)
}

fn canonical_three(mix: &ExpPolyMixture) -> Option<[f64; 3]> {
    let mut w = [0.0; 3];
    if mix.terms.len() != 3 {
        return None;
    }
    for t in &mix.terms {
        let r = t.rate.re;
        if t.power != 0 || t.rate.im != 0.0 || r.fract() != 0.0 || !(1.0..=3.0).contains(&r) {
            return None;
        }
        w[r as usize - 1] = t.weight.re / r;
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5297431234567), "0.529743123");
        assert_eq!(fmt_num(300.0), "300");
        assert_eq!(fmt_num(1.23456789012e-7), "1.23456789e-7");
        assert_eq!(fmt_num(f64::NAN), "");
        assert_eq!(fmt_num(0.0), "0");
    }
}
