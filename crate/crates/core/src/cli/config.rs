//! Run configuration: a TOML file plus `key=value` overrides.
//!
//! ```toml
//! [model]
//! lambda = 1.0
//! theta = 0.1        # or: c = 1.1
//! sigma = 0.0
//!
//! [claims]
//! type = "gamma"     # exponential | hyper_exponential | gamma | uniform | erlang | moments
//! shape = 0.01
//! scale = 100.0
//!
//! [grid]
//! min = 0.0
//! max = 3000.0
//! count = 11
//! spacing = "linear" # or "geometric"
//!
//! methods = ["renyi", "devylder", "ramsay", "two_point"]
//!
//! [oracle]
//! kind = "talbot"    # none | rational | talbot | mc
//! ```

use std::path::Path;

use serde::Deserialize;
use toml::{Table, Value};

use crate::approx::Method;
use crate::claims::ClaimDistribution;
use crate::riskmodel::RiskModel;

use super::CliError;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub lambda: f64,
    pub c: Option<f64>,
    pub theta: Option<f64>,
    #[serde(default)]
    pub sigma: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClaimSpec {
    Exponential { rate: f64 },
    HyperExponential { weights: Vec<f64>, rates: Vec<f64> },
    Gamma { shape: f64, scale: f64 },
    Uniform { a: f64, b: f64 },
    Erlang { shape: u32, rate: f64 },
    Moments { moments: Vec<f64> },
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    #[default]
    None,
    Rational,
    Talbot,
    Mc,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default)]
    pub kind: OracleKind,
    pub n: Option<usize>,
    pub seed: Option<u64>,
}

/// Explicit mixture for `check`: Σ w x^k e^{-r x}.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MixtureSpec {
    pub weights: Vec<f64>,
    pub rates: Vec<f64>,
    pub powers: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelSpec>,
    pub claims: ClaimSpec,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub methods: Vec<String>,
    #[serde(default)]
    pub oracle: OracleSpec,
    pub mixture: Option<MixtureSpec>,
    pub output: Option<String>,
}

/// Sets `a.b.c = value` in a TOML table, creating intermediate tables.
fn set_dotted(table: &mut Table, key: &str, raw: &str) -> Result<(), CliError> {
    let value = parse_value(raw);
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| {
        CliError::Config(format!("--set {key}={raw}: empty key"))
    })?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(CliError::Config(format!("--set {key}: `{p}` is not a table"))),
        };
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// A TOML literal if the text parses as one, otherwise a bare string.
fn parse_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    doc.parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

impl RunConfig {
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        for kv in overrides {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects K=V, got `{kv}`")))?;
            set_dotted(&mut table, k.trim(), v.trim())?;
        }
        let cfg: RunConfig = Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::parse(&text, overrides)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(g) = &self.grid {
            if g.count < 2 {
                return Err(CliError::Config(format!("grid.count must be >= 2, got {}", g.count)));
            }
            if !(g.max > g.min) {
                return Err(CliError::Config("grid.max must exceed grid.min".into()));
            }
            if g.spacing == Spacing::Geometric && !(g.min > 0.0) {
                return Err(CliError::Config("geometric grid needs grid.min > 0".into()));
            }
        }
        if let Some(m) = &self.model {
            if m.c.is_some() == m.theta.is_some() {
                return Err(CliError::Config("model needs exactly one of `c` and `theta`".into()));
            }
        }
        for name in &self.methods {
            let Some(method) = Method::parse(name) else {
                return Err(CliError::Config(format!("unknown method `{name}`")));
            };
            if let Some(m) = &self.model {
                if method.is_perturbed() != (m.sigma > 0.0) {
                    return Err(CliError::Config(format!(
                        "method `{name}` is incompatible with sigma = {}",
                        m.sigma
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn claims(&self) -> Result<ClaimDistribution, CliError> {
        Ok(match &self.claims {
            ClaimSpec::Exponential { rate } => ClaimDistribution::exponential(*rate)?,
            ClaimSpec::HyperExponential { weights, rates } => {
                ClaimDistribution::hyper_exponential(weights.clone(), rates.clone())?
            }
            ClaimSpec::Gamma { shape, scale } => ClaimDistribution::gamma(*shape, *scale)?,
            ClaimSpec::Uniform { a, b } => ClaimDistribution::uniform(*a, *b)?,
            ClaimSpec::Erlang { shape, rate } => ClaimDistribution::erlang(*shape, *rate)?,
            ClaimSpec::Moments { moments } => ClaimDistribution::moments_only(moments.clone())?,
        })
    }

    pub fn model(&self) -> Result<RiskModel, CliError> {
        let m = self
            .model
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [model] section".into()))?;
        let claims = self.claims()?;
        Ok(match (m.c, m.theta) {
            (Some(c), _) => RiskModel::new(m.lambda, c, m.sigma, claims)?,
            (None, Some(t)) => RiskModel::with_loading(m.lambda, t, m.sigma, claims)?,
            (None, None) => unreachable!("validated"),
        })
    }

    pub fn grid_points(&self) -> Result<Vec<f64>, CliError> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [grid] section".into()))?;
        let k = (g.count - 1) as f64;
        Ok((0..g.count)
            .map(|i| {
                let t = i as f64 / k;
                match g.spacing {
                    Spacing::Linear => g.min + t * (g.max - g.min),
                    Spacing::Geometric => g.min * (g.max / g.min).powf(t),
                }
            })
            .collect())
    }

    /// Requested methods, or the defaults for the model's σ.
    pub fn methods(&self, perturbed: bool) -> Vec<Method> {
        if self.methods.is_empty() {
            if perturbed {
                vec![Method::Perturbed2M, Method::Perturbed1M]
            } else {
                vec![Method::Renyi, Method::DeVylder, Method::RamsayPade12, Method::TwoPointRamsay]
            }
        } else {
            self.methods.iter().filter_map(|m| Method::parse(m)).collect()
        }
    }

    /// MC seed: config, then `RUINKIT_SEED`, then a fixed default.
    pub fn seed(&self) -> Result<u64, CliError> {
        if let Some(s) = self.oracle.seed {
            return Ok(s);
        }
        match std::env::var("RUINKIT_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("RUINKIT_SEED is not an unsigned integer: `{v}`"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_240_917;

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA1: &str = r#"
        [model]
        lambda = 1.0
        theta = 0.1
        [claims]
        type = "gamma"
        shape = 0.01
        scale = 100.0
        [grid]
        min = 0.0
        max = 3000.0
        count = 11
    "#;

    #[test]
    fn parses_and_overrides() {
        let c = RunConfig::parse(GAMMA1, &["model.theta=0.2".into(), "oracle.kind=talbot".into()]).unwrap();
        assert_eq!(c.model.as_ref().unwrap().theta, Some(0.2));
        assert_eq!(c.oracle.kind, OracleKind::Talbot);
        let g = c.grid_points().unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[1], 300.0);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::parse(GAMMA1, &["grid.count=1".into()]).is_err());
        assert!(RunConfig::parse(GAMMA1, &["model.c=2.0".into()]).is_err());
        assert!(RunConfig::parse(GAMMA1, &["methods=[\"perturbed_2m\"]".into()]).is_err());
        assert!(RunConfig::parse(GAMMA1, &["methods=[\"bogus\"]".into()]).is_err());
        let e = RunConfig::parse("[model]\nlambda = \n", &[]).unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
    }
}
