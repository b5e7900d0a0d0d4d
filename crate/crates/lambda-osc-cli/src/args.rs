use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambda_osc::verify::Group;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::output::Format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "lambda-osc",
    version,
    about = "Nonlinear deformed oscillators: classical flows, spectra and checks"
)]
pub struct Cli {
    /// JSON file holding option values for the subcommand; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a classical model; writes the trajectory and a drift summary.
    #[command(allow_negative_numbers = true)]
    Simulate(FlowArgs),
    /// Integrate a classical model and tabulate its first integrals.
    #[command(allow_negative_numbers = true)]
    Invariants(FlowArgs),
    /// Map a point to separable chart coordinates and evaluate the chart integrals.
    #[command(allow_negative_numbers = true)]
    Chart(ChartArgs),
    /// Compare series, ladder and oracle energies of the 1D quantum oscillator.
    #[command(allow_negative_numbers = true)]
    Spectrum1d(Spectrum1dArgs),
    /// List the 2D spectrum up to a total quantum number.
    #[command(allow_negative_numbers = true)]
    Spectrum2d(Spectrum2dArgs),
    /// Coefficients of the deformed Hermite polynomials.
    #[command(allow_negative_numbers = true)]
    Polynomials(PolynomialsArgs),
    /// Run the built-in numerical checks.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Invariants(_) => "invariants",
            Command::Chart(_) => "chart",
            Command::Spectrum1d(_) => "spectrum1d",
            Command::Spectrum2d(_) => "spectrum2d",
            Command::Polynomials(_) => "polynomials",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Ml1d,
    Plane,
    Rational,
    #[value(name = "curved_sw")]
    CurvedSw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Deformation parameter [default: 0].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Oscillator frequency [default: 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Isotonic barrier of the 1D model [default: 0].
    #[arg(long)]
    pub k: Option<f64>,
    /// Barrier strength in x [default: 0].
    #[arg(long)]
    pub k2: Option<f64>,
    /// Barrier strength in y [default: 0].
    #[arg(long)]
    pub k3: Option<f64>,
    /// Base frequency of the rational oscillator [default: 1].
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub n1: Option<u32>,
    #[arg(long)]
    pub n2: Option<u32>,
    /// Curvature of the curved_sw model [default: 0].
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Initial position (rho for curved_sw).
    #[arg(long)]
    pub x0: Option<f64>,
    /// Initial second coordinate (phi for curved_sw) [default: 0].
    #[arg(long)]
    pub y0: Option<f64>,
    /// Initial velocity of the first coordinate [default: 0].
    #[arg(long, visible_alias = "vx0")]
    pub v0: Option<f64>,
    /// Initial velocity of the second coordinate [default: 0].
    #[arg(long)]
    pub vy0: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Integrator [default: rk4].
    #[arg(long, value_enum)]
    pub method: Option<MethodName>,
    /// Step of rk4 [default: 1e-3].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Error tolerance of rk45 [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Keep every n-th step [default: 1].
    #[arg(long)]
    pub every: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Where to write the JSON summary; stdout when --output is set, stderr otherwise.
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ChartArgs {
    /// zx_y, x_zy, polar, cartesian, geodesic_polar or gnomonic.
    #[arg(long)]
    pub chart: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    /// With a velocity the chart integrals are evaluated too.
    #[arg(long)]
    pub vx: Option<f64>,
    #[arg(long)]
    pub vy: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    #[arg(long)]
    pub k3: Option<f64>,
    /// Read --x, --y as chart coordinates and map them back.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub inverse: Option<bool>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct Spectrum1dArgs {
    /// [default: 1]
    #[arg(long)]
    pub beta: Option<f64>,
    /// One or more values, comma separated; each is run in parallel.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Option<Vec<f64>>,
    /// Number of levels, starting at n = 0.
    #[arg(long)]
    pub levels: Option<u64>,
    /// [default: 1]
    #[arg(long)]
    pub mass: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Oracle grid intervals [default: 2000].
    #[arg(long)]
    pub points: Option<usize>,
    /// Largest accepted discrepancy between the three energies [default: 1e-4].
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct Spectrum2dArgs {
    /// Dimensionless deformation.
    #[arg(long = "Lambda", visible_alias = "big-lambda")]
    #[serde(alias = "Lambda")]
    pub big_lambda: Option<f64>,
    /// Largest total quantum number m + n.
    #[arg(long = "max-N", visible_alias = "max-n")]
    #[serde(alias = "max_N")]
    pub max_n: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PolynomialsArgs {
    #[arg(long = "Lambda", visible_alias = "big-lambda")]
    #[serde(alias = "Lambda")]
    pub big_lambda: Option<f64>,
    /// Explicit G; otherwise G = 1 - Lambda m.
    #[arg(long)]
    pub g: Option<f64>,
    /// Quantum number fixing G [default: 0].
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyArgs {
    /// Restrict to these groups (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<Group>>,
    /// Restrict to the checks of these acceptance criteria.
    #[arg(long, value_delimiter = ',')]
    pub criterion: Option<Vec<u8>>,
    /// Replace every check's tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Seed of the random test functions.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

/// Overlays the flags given on the command line onto the config file values.
pub fn merge<T>(
    flags: &T,
    config: Option<&Map<String, Value>>,
    command: &str,
) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned + Default,
{
    let known = match serde_json::to_value(T::default()) {
        Ok(Value::Object(m)) => m,
        _ => unreachable!("argument structs serialize to objects"),
    };
    let mut merged = Map::new();
    if let Some(cfg) = config {
        for (k, v) in cfg {
            if k == "command" {
                if v.as_str() != Some(command) {
                    return Err(CliError::Usage(format!(
                        "config is for command {v}, not '{command}'"
                    )));
                }
                continue;
            }
            let key = canonical(k);
            if !known.contains_key(&key) {
                return Err(CliError::Usage(format!(
                    "unknown config key '{k}' for '{command}'"
                )));
            }
            merged.insert(key, v.clone());
        }
    }
    if let Value::Object(given) =
        serde_json::to_value(flags).map_err(|e| CliError::Usage(e.to_string()))?
    {
        for (k, v) in given {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("config: {e}")))
}

fn canonical(key: &str) -> String {
    match key {
        "Lambda" => "big_lambda".into(),
        "max_N" => "max_n".into(),
        k => k.replace('-', "_"),
    }
}

/// The merged options plus the command name, enough to replay a run.
pub fn effective<T: Serialize>(args: &T, command: &str) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        m.retain(|_, v| !v.is_null());
        m.insert("command".into(), Value::from(command));
    }
    v
}

pub fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("missing required option --{flag}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let cfg: Map<String, Value> = serde_json::from_str(
            r#"{"command": "spectrum1d", "beta": 2.0, "levels": 4, "max-N": 1}"#,
        )
        .unwrap();
        assert!(merge(&Spectrum1dArgs::default(), Some(&cfg), "spectrum1d").is_err());
        let cfg: Map<String, Value> =
            serde_json::from_str(r#"{"beta": 2.0, "levels": 4, "format": "json"}"#).unwrap();
        let flags = Spectrum1dArgs {
            levels: Some(7),
            ..Default::default()
        };
        let m = merge(&flags, Some(&cfg), "spectrum1d").unwrap();
        assert_eq!(
            (m.beta, m.levels, m.out.format),
            (Some(2.0), Some(7), Some(Format::Json))
        );
        let cfg: Map<String, Value> = serde_json::from_str(r#"{"command": "verify"}"#).unwrap();
        assert!(merge(&flags, Some(&cfg), "spectrum1d").is_err());
    }

    #[test]
    fn aliases_in_config() {
        let cfg: Map<String, Value> =
            serde_json::from_str(r#"{"Lambda": 0.1, "max_N": 3}"#).unwrap();
        let m = merge(&Spectrum2dArgs::default(), Some(&cfg), "spectrum2d").unwrap();
        assert_eq!((m.big_lambda, m.max_n), (Some(0.1), Some(3)));
        let e = effective(&m, "spectrum2d");
        assert_eq!(e["command"], "spectrum2d");
        assert_eq!(e["big_lambda"], 0.1);
    }
}
