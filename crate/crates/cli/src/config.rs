use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ffexpand::{Error, FieldSpec};

#[derive(Parser, Debug)]
#[command(name = "ffexpand", version, about = "Finite-field incidence and expansion experiments")]
pub struct Cli {
    /// Run the experiment described by a JSON config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Option<Experiment>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Report destination: JSON, or per-instance CSV when the path ends in `.csv`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Long-format metrics CSV (q, kernel, metric, value).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Append-only JSONL results store.
    #[arg(long, global = true, default_value = "results.jsonl")]
    pub store: PathBuf,
    #[arg(long, global = true)]
    pub no_store: bool,
    /// Write the effective experiment config as JSON.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// One experiment with all parameters that determine its output.
#[derive(Subcommand, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Experiment {
    /// Largest and second eigenvalues of the incidence graph.
    Spectrum(SpectrumArgs),
    /// Compare cube entries of the adjacency matrix with curve point counts.
    CubeAudit(CubeAuditArgs),
    /// Classify the curves of a kernel and check point counts.
    CurveSweep(CurveSweepArgs),
    /// Random incidence instances for lines, polynomial graphs or kernel curves.
    Incidence(IncidenceArgs),
    /// Value-set sizes of F(x, G(y,z)) + H(y,z) + J(x).
    Expand(ExpandArgs),
    /// Run every invariant check at one field and kernel.
    Verify(VerifyArgs),
    /// Composition and additive polynomial harnesses.
    Composition(CompositionArgs),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Spectrum(_) => "spectrum",
            Experiment::CubeAudit(_) => "cube-audit",
            Experiment::CurveSweep(_) => "curve-sweep",
            Experiment::Incidence(_) => "incidence",
            Experiment::Expand(_) => "expand",
            Experiment::Verify(_) => "verify",
            Experiment::Composition(_) => "composition",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub const DEFAULT_KERNEL: &str = "(a+x)^2";

fn default_kernel() -> String {
    DEFAULT_KERNEL.into()
}
fn default_method() -> String {
    "exact".into()
}
fn default_trials() -> u64 {
    10
}
fn default_degree() -> u32 {
    2
}
fn default_densities() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}
fn default_verify_trials() -> u64 {
    500
}
fn default_composition_trials() -> u64 {
    500
}
fn default_max_deg() -> usize {
    2
}
fn yes() -> bool {
    true
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    /// Fields as p^n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub field: Vec<String>,
    #[arg(long, default_value = DEFAULT_KERNEL)]
    #[serde(default = "default_kernel")]
    pub kernel: String,
    /// exact | iter
    #[arg(long, default_value = "exact")]
    #[serde(default = "default_method")]
    pub method: String,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CubeAuditArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, default_value = DEFAULT_KERNEL)]
    #[serde(default = "default_kernel")]
    pub kernel: String,
    /// Number of sampled parameter tuples; all q^4 when absent.
    #[arg(long)]
    #[serde(default)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    #[arg(long, hide = true)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inject_fault: bool,
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurveSweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub field: Vec<String>,
    #[arg(long, default_value = DEFAULT_KERNEL)]
    #[serde(default = "default_kernel")]
    pub kernel: String,
    #[arg(long)]
    #[serde(default)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IncidenceArgs {
    /// 1: lines, 2: graphs of polynomials of degree <= n, 3: kernel curves.
    #[arg(long)]
    pub theorem: u8,
    #[arg(long, value_delimiter = ',', required = true)]
    pub field: Vec<String>,
    #[arg(long, default_value = DEFAULT_KERNEL)]
    #[serde(default = "default_kernel")]
    pub kernel: String,
    /// Degree bound n for polynomial graphs.
    #[arg(long, default_value_t = 2)]
    #[serde(default = "default_degree")]
    pub degree: u32,
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Set sizes used for both |P| and |Q|; defaults to q, q^(3/2), q^2/4.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExpandArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub field: Vec<String>,
    /// `erdos:k=K` for (x - y)^K + z.
    #[arg(long)]
    #[serde(default)]
    pub preset: Option<String>,
    /// Kernel F(u, v).
    #[arg(long = "F")]
    #[serde(default, rename = "F")]
    pub f: Option<String>,
    /// G(y, z).
    #[arg(long = "G")]
    #[serde(default, rename = "G")]
    pub g: Option<String>,
    /// H(y, z).
    #[arg(long = "H")]
    #[serde(default, rename = "H")]
    pub h: Option<String>,
    /// J(x).
    #[arg(long = "J")]
    #[serde(default, rename = "J")]
    pub j: Option<String>,
    /// Fixed |X|,|Y|,|Z|; overrides densities.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub sizes: Vec<usize>,
    /// Fractions of q used for all three sets, one setting each.
    #[arg(long, value_delimiter = ',', default_values_t = default_densities())]
    #[serde(default = "default_densities")]
    pub densities: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, default_value = DEFAULT_KERNEL)]
    #[serde(default = "default_kernel")]
    pub kernel: String,
    /// Random trials for the mixing and lemma checks.
    #[arg(long, default_value_t = 500)]
    #[serde(default = "default_verify_trials")]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Args, Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CompositionArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub field: Vec<String>,
    #[arg(long, default_value_t = 500)]
    #[serde(default = "default_composition_trials")]
    pub trials: u64,
    /// Degree bound for the exhaustive (P, Q) scan.
    #[arg(long, default_value_t = 2)]
    #[serde(default = "default_max_deg")]
    pub max_deg: usize,
    /// Run the exhaustive scan.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    #[serde(default = "yes")]
    pub exhaustive: bool,
    /// Degree bound for the additive check; p^2 when absent on prime fields.
    #[arg(long)]
    #[serde(default)]
    pub additive_max_deg: Option<usize>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

pub fn parse_fields(list: &[String]) -> Result<Vec<FieldSpec>, Error> {
    if list.is_empty() {
        return Err(Error::InvalidArgument("at least one field is required".into()));
    }
    list.iter().map(|s| s.parse()).collect()
}

/// Size caps, adjustable through `FFEXPAND_CAP_OVERRIDE=key=value,...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub graph_q: u32,
    pub dense_q: u32,
    pub sweep_q: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            graph_q: ffexpand::graph::DEFAULT_GRAPH_MAX_Q,
            dense_q: ffexpand::graph::DEFAULT_DENSE_MAX_Q,
            sweep_q: ffexpand::curves::EXHAUSTIVE_SWEEP_MAX_Q,
        }
    }
}

pub const CAP_ENV: &str = "FFEXPAND_CAP_OVERRIDE";

impl Caps {
    pub fn parse(spec: &str) -> Result<Caps, Error> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("{CAP_ENV}: expected key=value, got `{item}`")))?;
            let v: u32 = v.trim().parse().map_err(|_| Error::Parse(format!("{CAP_ENV}: bad value in `{item}`")))?;
            match k.trim() {
                "graph_q" => caps.graph_q = v,
                "dense_q" => caps.dense_q = v,
                "sweep_q" => caps.sweep_q = v,
                other => return Err(Error::Parse(format!("{CAP_ENV}: unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Caps, Error> {
        match std::env::var(CAP_ENV) {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }
}
