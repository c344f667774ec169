//! Run configuration: a TOML file with one block per command, overridable
//! from the command line (flags win over the file, which wins over
//! defaults). The `SOLVFLOW_SEED` environment variable sits between flags
//! and file for the verification seed.

use serde::Deserialize;
use solvflow_core::ode::{IntegratorOptions, Method};
use solvflow_core::Params;

use crate::CliError;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub output: Option<OutputBlock>,
    pub translator: Option<TranslatorBlock>,
    pub reaper: Option<ReaperBlock>,
    pub evolve: Option<EvolveBlock>,
    pub verify: Option<VerifyBlock>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<String>,
    pub formats: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslatorBlock {
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub z0: f64,
    #[serde(default = "default_theta0")]
    pub theta0: f64,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub mu: f64,
    /// Scales (beta, mu); unit speed by default.
    #[serde(default = "one")]
    pub speed: f64,
    #[serde(flatten)]
    pub integrator: IntegratorBlock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReaperBlock {
    #[serde(default)]
    pub f0: f64,
    #[serde(default)]
    pub fz0: f64,
    #[serde(default)]
    pub z0: f64,
    pub span: [f64; 2],
    #[serde(flatten)]
    pub integrator: IntegratorBlock,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct IntegratorBlock {
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_span")]
    pub max_arclength: f64,
    #[serde(default = "default_nodes")]
    pub output_nodes: usize,
    #[serde(default = "default_blow_up")]
    pub blow_up: f64,
    #[serde(default = "default_min_step")]
    pub min_step: f64,
    #[serde(default = "default_domain")]
    pub domain_bound: f64,
}

impl Default for IntegratorBlock {
    fn default() -> Self {
        IntegratorBlock {
            method: default_method(),
            tol: default_tol(),
            step: default_step(),
            max_arclength: default_span(),
            output_nodes: default_nodes(),
            blow_up: default_blow_up(),
            min_step: default_min_step(),
            domain_bound: default_domain(),
        }
    }
}

impl IntegratorBlock {
    pub fn to_options(&self, span: f64) -> Result<IntegratorOptions, CliError> {
        let method = match self.method.as_str() {
            "rkf45" => Method::Rkf45 { tol: self.tol },
            "rk4" => Method::Rk4 { step: self.step },
            other => return Err(CliError::config(format!("unknown integrator method `{other}`"))),
        };
        let opts = IntegratorOptions {
            method,
            max_arclength: span,
            output_nodes: self.output_nodes,
            blow_up: self.blow_up,
            min_step: self.min_step,
            domain_bound: self.domain_bound,
        };
        opts.validate().map_err(|e| CliError::config(format!("invalid integrator options: {e}")))?;
        Ok(opts)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveBlock {
    /// "curve" or "graph".
    pub kind: String,
    pub time: f64,
    pub dt: Option<f64>,
    #[serde(default = "default_boundary")]
    pub boundary: String,
    /// Edge speed for the "translating" graph boundary.
    #[serde(default = "one")]
    pub boundary_speed: f64,
    /// Killing coefficients for the "killing" curve boundary.
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_repar")]
    pub repar_every: usize,
    #[serde(default)]
    pub snapshot_every: usize,
    pub source: SourceBlock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceBlock {
    /// "csv", "run-dir" or "shape".
    pub kind: String,
    pub path: Option<String>,
    pub shape: Option<String>,
    #[serde(default)]
    pub value: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub width: f64,
    pub grid: Option<GridBlock>,
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub z0: f64,
    #[serde(default = "default_dx")]
    pub dy: f64,
    #[serde(default = "default_dx")]
    pub dz: f64,
    #[serde(default = "default_n")]
    pub ny: usize,
    #[serde(default = "default_n")]
    pub nz: usize,
    /// Node count when sampling curve shapes.
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock {
            y0: 0.0,
            z0: 0.0,
            dy: default_dx(),
            dz: default_dx(),
            ny: default_n(),
            nz: default_n(),
            nodes: default_nodes(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub suites: Vec<String>,
}

fn default_theta0() -> f64 {
    std::f64::consts::FRAC_PI_4
}
fn one() -> f64 {
    1.0
}
fn default_method() -> String {
    "rkf45".to_string()
}
fn default_tol() -> f64 {
    1e-10
}
fn default_step() -> f64 {
    0.01
}
fn default_span() -> f64 {
    2.0
}
fn default_nodes() -> usize {
    201
}
fn default_blow_up() -> f64 {
    1e6
}
fn default_min_step() -> f64 {
    1e-12
}
fn default_domain() -> f64 {
    1e3
}
fn default_boundary() -> String {
    "frozen".to_string()
}
fn default_repar() -> usize {
    10
}
fn default_dx() -> f64 {
    0.05
}
fn default_n() -> usize {
    41
}

/// Command-line overrides collected by the argument parser.
#[derive(Debug, Default)]
pub struct Overrides {
    pub config: Option<String>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub out: Option<String>,
    pub formats: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub speed: Option<f64>,
}

/// Fully resolved run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub params: Params,
    pub out_dir: String,
    pub formats: Vec<String>,
    pub file: FileConfig,
    pub seed: u64,
    pub speed: Option<f64>,
}

pub fn load(over: &Overrides, require_config: bool) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &over.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read config `{path}`: {e}")))?;
            toml::from_str(&text)
                .map_err(|e| CliError::config(format!("malformed config `{path}`: {e}")))?
        }
        None if require_config => {
            return Err(CliError::config("missing required --config <path>".to_string()))
        }
        None => FileConfig::default(),
    };

    let lambda1 = over.lambda1.or(file.lambda1).unwrap_or(1.0);
    let lambda2 = over.lambda2.or(file.lambda2).unwrap_or(-1.0);
    if !lambda1.is_finite() || !lambda2.is_finite() {
        return Err(CliError::config("lambda parameters must be finite".to_string()));
    }

    let out_dir = over
        .out
        .clone()
        .or_else(|| file.output.as_ref().and_then(|o| o.dir.clone()))
        .unwrap_or_else(|| "out".to_string());

    let formats = over
        .formats
        .clone()
        .or_else(|| file.output.as_ref().and_then(|o| o.formats.clone()))
        .unwrap_or_else(|| vec!["csv".to_string(), "json".to_string()]);
    if formats.is_empty() {
        return Err(CliError::config("output formats must be nonempty".to_string()));
    }
    for f in &formats {
        if !matches!(f.as_str(), "csv" | "json" | "svg") {
            return Err(CliError::config(format!("unknown output format `{f}`")));
        }
    }

    // seed precedence: flag > env > file > default
    let env_seed = match std::env::var("SOLVFLOW_SEED") {
        Ok(s) => Some(
            s.parse::<u64>()
                .map_err(|_| CliError::config(format!("SOLVFLOW_SEED is not a u64: `{s}`")))?,
        ),
        Err(_) => None,
    };
    let seed = over
        .seed
        .or(env_seed)
        .or_else(|| file.verify.as_ref().and_then(|v| v.seed))
        .unwrap_or(42);

    Ok(RunConfig {
        params: Params::new(lambda1, lambda2),
        out_dir,
        formats,
        file,
        seed,
        speed: over.speed,
    })
}

impl RunConfig {
    pub fn wants(&self, format: &str) -> bool {
        self.formats.iter().any(|f| f == format)
    }
}
