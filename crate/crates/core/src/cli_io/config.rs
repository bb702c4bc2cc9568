//! Simulation configuration: JSON schema, defaults, validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::NewtonConfig;
use crate::lagrangians::Side;
use crate::lie_core::{algebra_dim, GroupElement, Momentum};
use crate::rigid_body::{inertia_apply, InertiaSpec};
use crate::sampling::{random_momentum, rng};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_REORTHO_EVERY: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DepMv,
    DepChart,
    SplittingFirst,
    SplittingLeapfrog,
    Rk4,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::DepMv,
        Method::DepChart,
        Method::SplittingFirst,
        Method::SplittingLeapfrog,
        Method::Rk4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::DepMv => "dep_mv",
            Method::DepChart => "dep_chart",
            Method::SplittingFirst => "splitting_first",
            Method::SplittingLeapfrog => "splitting_leapfrog",
            Method::Rk4 => "rk4",
        }
    }

    pub fn is_dep(self) -> bool {
        matches!(self, Method::DepMv | Method::DepChart)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown method {s:?}")))
    }
}

/// How a two-point scheme is seeded from one-point data `(g₀, ξ₀)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Initializer {
    /// `Π₀ = J(ξ₀)` is taken as the momentum at step 0.
    #[default]
    Momentum,
    /// `f_{0,−1} = exp(−hξ₀)`.
    Exp,
    /// `f_{0,−1} = cay(−hξ₀)`.
    Cayley,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Validation(format!("unknown format {s:?}"))),
        }
    }
}

/// Initial data: `g0` (row-major) with either `xi0` or `Pi0`, in so(n)
/// coordinates `ξ_ij`, `i < j`. For right-invariant runs these are the
/// spatial velocity and momentum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi0: Option<Vec<f64>>,
    #[serde(rename = "Pi0", default, skip_serializing_if = "Option::is_none")]
    pub pi0: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_reortho() -> usize {
    DEFAULT_REORTHO_EVERY
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub n: usize,
    pub lambda: Vec<f64>,
    pub h: f64,
    pub steps: usize,
    pub method: Method,
    #[serde(default)]
    pub side: Side,
    /// When absent, `Π₀` is drawn from `seed` with unit coordinate norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialData>,
    #[serde(default)]
    pub init: Initializer,
    #[serde(default)]
    pub newton: NewtonConfig,
    /// Re-orthonormalize g every this many steps (0 disables).
    #[serde(default = "default_reortho")]
    pub reortho_every: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

impl SimulationConfig {
    /// A config with defaults for everything but the physics.
    pub fn new(lambda: Vec<f64>, h: f64, steps: usize, method: Method) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: lambda.len(),
            lambda,
            h,
            steps,
            method,
            side: Side::Left,
            initial: None,
            init: Initializer::Momentum,
            newton: NewtonConfig::default(),
            reortho_every: DEFAULT_REORTHO_EVERY,
            seed: 0,
            output: OutputSpec::default(),
        }
    }

    pub fn with_pi0(mut self, coords: Vec<f64>) -> Self {
        self.initial = Some(InitialData {
            pi0: Some(coords),
            ..self.initial.unwrap_or_default()
        });
        self
    }

    pub fn inertia(&self) -> Result<InertiaSpec> {
        InertiaSpec::new(self.lambda.clone()).map_err(|e| match e {
            Error::DegenerateInertia { .. } => Error::Validation(format!("lambda violates Λ_i+Λ_j>0 ({e})")),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::Validation(msg));
        if self.schema_version != SCHEMA_VERSION {
            return invalid(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.n < 2 {
            return invalid(format!("n must be at least 2, got {}", self.n));
        }
        if self.lambda.len() != self.n {
            return invalid(format!("lambda has {} entries, n = {}", self.lambda.len(), self.n));
        }
        self.inertia()?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return invalid(format!("h must be positive and finite, got {}", self.h));
        }
        self.newton.validate()?;
        let splitting = matches!(self.method, Method::SplittingFirst | Method::SplittingLeapfrog);
        if splitting && self.n != 3 {
            return invalid(format!("{} requires n = 3", self.method));
        }
        if !self.method.is_dep() && self.init != Initializer::Momentum {
            return invalid(format!("init = {:?} applies to dep methods only", self.init));
        }
        if let Some(init) = &self.initial {
            let d = algebra_dim(self.n);
            match (&init.xi0, &init.pi0) {
                (Some(_), Some(_)) => return invalid("initial: give either xi0 or Pi0, not both".into()),
                (None, None) => return invalid("initial: one of xi0 or Pi0 is required".into()),
                (Some(xi), None) => {
                    if !self.method.is_dep() {
                        return invalid(format!("{} requires initial.Pi0", self.method));
                    }
                    if xi.len() != d {
                        return invalid(format!("xi0 has {} coordinates, so({}) has {d}", xi.len(), self.n));
                    }
                }
                (None, Some(pi)) => {
                    if pi.len() != d {
                        return invalid(format!("Pi0 has {} coordinates, so({}) has {d}", pi.len(), self.n));
                    }
                }
            }
            if let Some(g) = &init.g0 {
                if !self.method.is_dep() {
                    return invalid(format!("{} evolves momentum only; drop initial.g0", self.method));
                }
                if g.len() != self.n * self.n {
                    return invalid(format!("g0 has {} entries, expected {}", g.len(), self.n * self.n));
                }
                GroupElement::from_row_slice(self.n, g)
                    .map_err(|e| Error::Validation(format!("g0 is not in SO({}): {e}", self.n)))?;
            }
            let all_finite = [&init.g0, &init.xi0, &init.pi0]
                .into_iter()
                .flatten()
                .flatten()
                .all(|v| v.is_finite());
            if !all_finite {
                return invalid("initial data must be finite".into());
            }
        }
        Ok(())
    }

    /// `(g₀, Π₀)`, with `Π₀ = J(ξ₀)` when a velocity is given.
    pub fn initial_state(&self, inertia: &InertiaSpec) -> Result<(GroupElement, Momentum)> {
        let n = self.n;
        let Some(init) = &self.initial else {
            let mut r = rng(self.seed);
            let pi = random_momentum(n, 2f64.sqrt(), &mut r);
            return Ok((GroupElement::identity(n), pi));
        };
        let g0 = match &init.g0 {
            Some(g) => GroupElement::from_row_slice(n, g)?,
            None => GroupElement::identity(n),
        };
        let pi0 = match (&init.pi0, &init.xi0) {
            (Some(p), _) => Momentum::from_coords(n, p)?,
            (None, Some(x)) => inertia_apply(inertia, &crate::lie_core::AlgebraElement::from_coords(n, x)?)?,
            (None, None) => return Err(Error::Validation("initial: one of xi0 or Pi0 is required".into())),
        };
        Ok((g0, pi0))
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let cfg: SimulationConfig = serde_json::from_str(text).map_err(parse_error)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SimulationConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

pub fn config_to_string(cfg: &SimulationConfig) -> Result<String> {
    serde_json::to_string_pretty(cfg).map_err(|e| Error::Validation(format!("cannot serialize config: {e}")))
}

pub fn save_config(cfg: &SimulationConfig, path: impl AsRef<Path>) -> Result<()> {
    let mut text = config_to_string(cfg)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"n": 3, "lambda": [1, 2, 3], "h": 0.01, "steps": 10, "method": "dep_mv",
        "initial": {"Pi0": [0.1, 0.2, 0.3]}}"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.reortho_every, 100);
        assert_eq!(cfg.newton.tol_residual, 1e-12);
        assert_eq!(cfg.newton.max_iters, 50);
        assert_eq!(cfg.side, Side::Left);
        assert_eq!(cfg.init, Initializer::Momentum);
        assert_eq!(cfg.output.format, OutputFormat::Csv);
        assert_eq!(cfg.schema_version, SCHEMA_VERSION);
    }

    #[test]
    fn degenerate_lambda_is_a_validation_error() {
        let text = r#"{"n": 2, "lambda": [1, -1], "h": 0.1, "steps": 1, "method": "dep_mv", "initial": {"Pi0": [1]}}"#;
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("Λ_i+Λ_j>0"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_config("{\n  \"n\": 3,\n  \"lambda\": [1, 2,, 3]\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            e => panic!("unexpected {e:?}"),
        }
        let err = parse_config(r#"{"n": 3, "lambda": [1,2,3], "h": 0.1, "steps": 1, "method": "leapfrog"}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn invariants_are_enforced() {
        let base = parse_config(MINIMAL).unwrap();
        let mut c = base.clone();
        c.h = 0.0;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.lambda = vec![1.0, 2.0];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.method = Method::Rk4;
        c.initial = Some(InitialData {
            xi0: Some(vec![0.1, 0.2, 0.3]),
            ..Default::default()
        });
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.initial.as_mut().unwrap().g0 = Some(vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0]);
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.n = 4;
        c.lambda = vec![1.0, 2.0, 3.0, 4.0];
        c.method = Method::SplittingLeapfrog;
        assert!(c.validate().is_err());
        let mut c = base;
        c.schema_version = 7;
        assert!(c.validate().is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let mut cfg = parse_config(MINIMAL).unwrap();
        cfg.h = 0.1 + 0.2;
        cfg.lambda = vec![1.0 / 3.0, std::f64::consts::PI, 2.5e-7];
        cfg.output.path = Some("out.csv".into());
        let back = parse_config(&config_to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn seeded_initial_momentum_is_reproducible() {
        let mut cfg = parse_config(MINIMAL).unwrap();
        cfg.initial = None;
        cfg.seed = 5;
        let j = cfg.inertia().unwrap();
        let (_, a) = cfg.initial_state(&j).unwrap();
        let (_, b) = cfg.initial_state(&j).unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 2f64.sqrt()).abs() < 1e-14);
    }
}
