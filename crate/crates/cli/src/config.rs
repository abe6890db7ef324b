//! JSON run configuration. See the README for the schema.

use crate::output::Format;
use polyharm::annular_models::ModelDefinition;
use polyharm::operator_core::{ExpPolynomial, ExponentRule};
use polyharm::C64;
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Fundamental,
    Expand,
    Radius,
    Flc,
    Jet,
    Extend,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fundamental => "fundamental",
            Command::Expand => "expand",
            Command::Radius => "radius",
            Command::Flc => "flc",
            Command::Jet => "jet",
            Command::Extend => "extend",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numeric {
    /// Highest log-derivative order.
    pub n: usize,
    /// Coefficients per Laurent part.
    pub j: usize,
    pub k_max: usize,
    /// Quadrature band on the sphere.
    pub quad_nodes: usize,
    pub tol: f64,
}

impl Default for Numeric {
    fn default() -> Self {
        Self {
            n: 40,
            j: 20,
            k_max: 12,
            quad_nodes: 24,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// `count` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| {
                let (a, b) = ((self.count - 1 - i) as f64, i as f64);
                (a * self.min + b * self.max) / (a + b)
            })
            .collect()
    }

    fn check(&self, name: &str, errors: &mut Vec<String>) {
        if self.count == 0 || !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            errors.push(format!("{name}: need finite min <= max and count >= 1"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FundamentalParams {
    pub exponents: ExponentRule,
    /// Operator order; the prefix has `n + 1` exponents.
    pub n: usize,
    pub re: Range,
    pub im: Range,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandParams {
    pub function: ExpPolynomial,
    pub exponents: ExponentRule,
    #[serde(default)]
    pub x0: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

fn default_n_max() -> usize {
    40
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusParams {
    pub coeffs: Vec<C64>,
    #[serde(default)]
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlcParams {
    pub k: usize,
    pub l: usize,
    pub r: Range,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetParams {
    pub k: usize,
    pub l: usize,
    pub v0: f64,
}

/// Points `base` with coordinate `axis` replaced by `x + iy`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendParams {
    pub base: Vec<C64>,
    #[serde(default)]
    pub axis: usize,
    pub x: Range,
    pub y: Range,
    /// Optional file for the coefficient dump.
    #[serde(default)]
    pub coefficients_out: Option<PathBuf>,
    /// Evaluate a previously dumped coefficient array instead of building one.
    /// The model still supplies `d`, the annulus and the claimed type.
    #[serde(default)]
    pub coefficients_in: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub model: Option<ModelDefinition>,
    pub numeric: Numeric,
    pub output: OutputSpec,
    pub threads: Option<usize>,
    pub fundamental: Option<FundamentalParams>,
    pub expand: Option<ExpandParams>,
    pub radius: Option<RadiusParams>,
    pub flc: Option<FlcParams>,
    pub jet: Option<JetParams>,
    pub extend: Option<ExtendParams>,
}

impl RunConfig {
    /// Every problem found, in a fixed order.
    pub fn validate(&self, command: Command) -> Vec<String> {
        let mut errors = Vec::new();
        let n = &self.numeric;
        for (name, v) in [("n", n.n), ("j", n.j), ("k_max", n.k_max), ("quad_nodes", n.quad_nodes)] {
            if v == 0 {
                errors.push(format!("numeric.{name} must be positive"));
            }
        }
        if !(n.tol > 0.0 && n.tol <= 1e-2) {
            errors.push(format!("numeric.tol = {} outside (0, 1e-2]", n.tol));
        }
        if n.quad_nodes < n.k_max {
            errors.push(format!("numeric.quad_nodes = {} below k_max = {}", n.quad_nodes, n.k_max));
        }
        if self.threads == Some(0) {
            errors.push("threads must be positive".into());
        }
        let needs_model = matches!(command, Command::Flc | Command::Jet | Command::Extend);
        if needs_model && self.model.is_none() {
            errors.push(format!("{} needs a model", command.name()));
        }
        let missing = |errors: &mut Vec<String>| errors.push(format!("missing section \"{}\"", command.name()));
        match command {
            Command::Fundamental => match &self.fundamental {
                Some(p) => {
                    p.re.check("fundamental.re", &mut errors);
                    p.im.check("fundamental.im", &mut errors);
                }
                None => missing(&mut errors),
            },
            Command::Expand => match &self.expand {
                Some(p) if p.function.terms.is_empty() => errors.push("expand.function has no terms".into()),
                Some(_) => {}
                None => missing(&mut errors),
            },
            Command::Radius => {
                if self.radius.is_none() {
                    missing(&mut errors)
                }
            }
            Command::Flc => match &self.flc {
                Some(p) => p.r.check("flc.r", &mut errors),
                None => missing(&mut errors),
            },
            Command::Jet => {
                if self.jet.is_none() {
                    missing(&mut errors)
                }
            }
            Command::Extend => match &self.extend {
                Some(p) => {
                    if 2 * n.j > n.n + 1 {
                        errors.push(format!("numeric.j = {} needs numeric.n >= {}", n.j, 2 * n.j - 1));
                    }
                    p.x.check("extend.x", &mut errors);
                    p.y.check("extend.y", &mut errors);
                    if p.axis >= p.base.len() {
                        errors.push(format!("extend.axis = {} outside base of length {}", p.axis, p.base.len()));
                    }
                    if let Some(m) = &self.model {
                        if p.base.len() != m.d {
                            errors.push(format!("extend.base has {} entries, model has d = {}", p.base.len(), m.d));
                        }
                    }
                }
                None => missing(&mut errors),
            },
            Command::Verify => {}
        }
        errors
    }
}
