//! Subcommand parameters and the serializable run configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use lossyphase::analytic::{Mode, QuantumNorm, ScanStrategy};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::output::Format;

/// Evenly spaced grid written `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        lossyphase::imperfect::linspace(self.lo, self.hi, self.n)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("grid `{s}` is not of the form lo:hi:n"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("grid `{s}`: {e}"))
        };
        let grid = Grid {
            lo: num(lo)?,
            hi: num(hi)?,
            n: n.trim().parse().map_err(|e| format!("grid `{s}`: {e}"))?,
        };
        if grid.n == 0 || !grid.lo.is_finite() || !grid.hi.is_finite() || grid.lo > grid.hi {
            return Err(format!("grid `{s}` needs lo <= hi and n >= 1"));
        }
        Ok(grid)
    }
}

impl TryFrom<String> for Grid {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.to_string()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Sm,
    Tm,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sm => Mode::Sm,
            ModeArg::Tm => Mode::Tm,
        }
    }
}

/// Quantum reference used to normalize precisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    /// Continuous-k limit of the quantum bound.
    Continuous,
    /// Best whole-pass quantum bound (one pass).
    Discrete,
}

impl From<NormArg> for QuantumNorm {
    fn from(n: NormArg) -> QuantumNorm {
        match n {
            NormArg::Continuous => QuantumNorm::ContinuousLimit,
            NormArg::Discrete => QuantumNorm::DiscreteOptimum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    #[value(name = "classical_mp_discrete")]
    ClassicalMpDiscrete,
    #[value(name = "classical_mp_continuous")]
    ClassicalMpContinuous,
    #[value(name = "quantum_bound_discrete")]
    QuantumBoundDiscrete,
    #[value(name = "quantum_bound_limit")]
    QuantumBoundLimit,
}

impl From<StrategyArg> for ScanStrategy {
    fn from(s: StrategyArg) -> ScanStrategy {
        match s {
            StrategyArg::ClassicalMpDiscrete => ScanStrategy::ClassicalMpDiscrete,
            StrategyArg::ClassicalMpContinuous => ScanStrategy::ClassicalMpContinuous,
            StrategyArg::QuantumBoundDiscrete => ScanStrategy::QuantumBoundDiscrete,
            StrategyArg::QuantumBoundLimit => ScanStrategy::QuantumBoundLimit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Table1,
    Table2,
    Fig2a,
    Fig2b,
    Fig4,
    Constants,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Fig2a => "fig2a",
            Target::Fig2b => "fig2b",
            Target::Fig4 => "fig4",
            Target::Constants => "constants",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsArgs {}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointArgs {
    /// Sample transmissivity
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub eta: Option<f64>,
    /// Transmissivity grid lo:hi:n
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Passes through the sample; the optimum when omitted
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Sm)]
    pub mode: ModeArg,
    /// Whole numbers of passes only
    #[arg(long)]
    #[serde(default)]
    pub discrete: bool,
    /// Quantum reference for normalized_precision
    #[arg(long, value_enum, default_value_t = NormArg::Continuous)]
    pub norm: NormArg,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdvantageArgs {
    /// Sample transmissivity
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub eta: Option<f64>,
    /// Transmissivity grid lo:hi:n
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Whole numbers of passes only
    #[arg(long)]
    #[serde(default)]
    pub discrete: bool,
    /// Quantum reference
    #[arg(long, value_enum, default_value_t = NormArg::Continuous)]
    pub norm: NormArg,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2aArgs {
    /// Transmissivity grid lo:hi:n
    #[arg(long, default_value = "0.01:0.99:99")]
    pub grid: Grid,
    #[arg(long, value_enum, default_value_t = ModeArg::Sm)]
    pub mode: ModeArg,
    /// Quantum reference
    #[arg(long, value_enum, default_value_t = NormArg::Continuous)]
    pub norm: NormArg,
    /// Curves to emit; all when omitted
    #[arg(long, value_enum, value_delimiter = ',')]
    #[serde(default)]
    pub strategies: Vec<StrategyArg>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianArgs {
    /// Sample transmissivity
    #[arg(long)]
    pub eta: f64,
    /// Coherent amplitude
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Squeezing parameter
    #[arg(long, conflicts_with = "nsq", required_unless_present = "nsq")]
    pub r: Option<f64>,
    /// Squeezing photons sinh²r
    #[arg(long)]
    pub nsq: Option<f64>,
    /// Homodyne angle; locked to π/2 - theta when omitted
    #[arg(long)]
    pub varphi: Option<f64>,
    /// Phase at which the information is evaluated
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2bArgs {
    /// Transmissivity grid lo:hi:n
    #[arg(long, default_value = "0.01:0.99:99")]
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkEvalArgs {
    /// Sample transmissivity
    #[arg(long)]
    pub eta: f64,
    /// Number of modules
    #[arg(long)]
    pub h: u32,
    /// Passes per module
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Beam-splitter angle
    #[arg(long, conflicts_with = "h_xi", required_unless_present = "h_xi")]
    pub xi: Option<f64>,
    /// Beam-splitter angle times h
    #[arg(long)]
    pub h_xi: Option<f64>,
    /// Control phase
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkOptArgs {
    /// Sample transmissivities, comma separated; 0.1..0.9 when omitted
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub eta: Vec<f64>,
    /// Largest module count (default 64, or 2048 with --continuous)
    #[arg(long)]
    pub h_max: Option<u32>,
    /// Optimize the total module transmissivity as a continuous variable
    #[arg(long)]
    #[serde(default)]
    pub continuous: bool,
    /// Optimize the control phase instead of fixing it to zero
    #[arg(long)]
    #[serde(default)]
    pub free_phi: bool,
    /// Search the whole beam-splitter bracket instead of its lower edge
    #[arg(long)]
    #[serde(default)]
    pub global_xi: bool,
    /// Lower edge of the h·xi bracket
    #[arg(long, default_value_t = 0.01)]
    pub xi_min: f64,
    /// Upper edge of the h·xi bracket
    #[arg(long, default_value_t = 6.0)]
    pub xi_max: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImperfectArgs {
    /// Sample transmissivity
    #[arg(long)]
    pub eta: f64,
    /// Preparation transmissivity
    #[arg(long, default_value_t = 1.0)]
    pub eta_p: f64,
    /// Round-trip transmissivity between passes
    #[arg(long, default_value_t = 1.0)]
    pub eta_r: f64,
    /// Measurement transmissivity
    #[arg(long, default_value_t = 1.0)]
    pub eta_m: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig4Args {
    /// Points per axis
    #[arg(long, default_value_t = 10)]
    pub grid_n: usize,
    /// Use the 150 x 150 grid
    #[arg(long, conflicts_with = "grid_n")]
    #[serde(default)]
    pub full: bool,
    /// Bisection width for each threshold
    #[arg(long, default_value_t = 8e-5)]
    pub precision: f64,
    /// Smallest axis value
    #[arg(long, default_value_t = 0.01)]
    pub axis_min: f64,
    /// Largest axis value
    #[arg(long, default_value_t = 0.99)]
    pub axis_max: f64,
}

impl Fig4Args {
    pub fn points_per_axis(&self) -> usize {
        if self.full {
            150
        } else {
            self.grid_n
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Points per axis for fig4
    #[arg(long, default_value_t = 10)]
    pub grid_n: usize,
    /// Largest module count for table1 / table2
    #[arg(long)]
    pub h_max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    /// Lambert-W constants of optimal classical multi-pass estimation
    Constants(ConstantsArgs),
    /// Classical multi-pass Fisher information per lost photon
    ClassicalMp(PointArgs),
    /// Quantum bound per lost photon for k passes
    QuantumBound(PointArgs),
    /// Classical-to-quantum precision ratio
    Advantage(AdvantageArgs),
    /// Normalized precision of every strategy over transmissivity
    Fig2a(Fig2aArgs),
    /// Homodyne Fisher information of a squeezed coherent probe
    GaussianFisher(GaussianArgs),
    /// Squeezing needed to match the best classical strategy
    Fig2b(Fig2bArgs),
    /// Evaluate one interferometric network
    NetworkEval(NetworkEvalArgs),
    /// Optimize the interferometric network
    NetworkOpt(NetworkOptArgs),
    /// Quantum advantage with preparation, round-trip and measurement loss
    ImperfectAdvantage(ImperfectArgs),
    /// Round-trip thresholds for a >20% RMSE reduction
    Fig4Surface(Fig4Args),
    /// Regenerate a table or figure and check it against reference values
    Reproduce(ReproduceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::ClassicalMp(_) => "classical-mp",
            Command::QuantumBound(_) => "quantum-bound",
            Command::Advantage(_) => "advantage",
            Command::Fig2a(_) => "fig2a",
            Command::GaussianFisher(_) => "gaussian-fisher",
            Command::Fig2b(_) => "fig2b",
            Command::NetworkEval(_) => "network-eval",
            Command::NetworkOpt(_) => "network-opt",
            Command::ImperfectAdvantage(_) => "imperfect-advantage",
            Command::Fig4Surface(_) => "fig4-surface",
            Command::Reproduce(_) => "reproduce",
        }
    }

    /// JSON for single results, CSV for tables.
    pub fn default_format(&self) -> Format {
        match self {
            Command::Constants(_)
            | Command::GaussianFisher(_)
            | Command::NetworkEval(_)
            | Command::ImperfectAdvantage(_) => Format::Json,
            Command::ClassicalMp(a) | Command::QuantumBound(a) if a.eta.is_some() => Format::Json,
            Command::Advantage(a) if a.eta.is_some() => Format::Json,
            Command::NetworkOpt(a) if a.eta.len() == 1 || a.continuous => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct RunConfig {
    pub command: Command,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    subcommand: String,
    #[serde(default)]
    parameters: Value,
    output_format: Format,
    #[serde(default)]
    output_path: Option<PathBuf>,
}

impl TryFrom<RawConfig> for RunConfig {
    type Error = String;

    fn try_from(raw: RawConfig) -> Result<Self, String> {
        let parameters = match raw.parameters {
            Value::Null => Value::Object(Default::default()),
            p => p,
        };
        let tagged = serde_json::json!({ "subcommand": raw.subcommand, "parameters": parameters });
        let command = serde_json::from_value(tagged).map_err(|e| e.to_string())?;
        Ok(RunConfig {
            command,
            output_format: raw.output_format,
            output_path: raw.output_path,
        })
    }
}

impl From<RunConfig> for RawConfig {
    fn from(c: RunConfig) -> RawConfig {
        let tagged = serde_json::to_value(&c.command).expect("parameters serialize");
        RawConfig {
            subcommand: c.command.name().to_owned(),
            parameters: tagged["parameters"].clone(),
            output_format: c.output_format,
            output_path: c.output_path,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::validation("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.1:0.9:9".parse().unwrap();
        assert_eq!(g.points().len(), 9);
        assert_eq!(g.to_string(), "0.1:0.9:9");
        assert!("0.1:0.9".parse::<Grid>().is_err());
        assert!("0.9:0.1:3".parse::<Grid>().is_err());
        assert!("0.1:0.9:0".parse::<Grid>().is_err());
    }

    #[test]
    fn config_round_trip() {
        let cfg = RunConfig {
            command: Command::NetworkOpt(NetworkOptArgs {
                eta: vec![0.5],
                h_max: None,
                continuous: false,
                free_phi: false,
                global_xi: true,
                xi_min: 0.01,
                xi_max: 6.0,
            }),
            output_format: Format::Json,
            output_path: None,
        };
        let text = cfg.to_json();
        assert!(text.contains("\"subcommand\": \"network-opt\""));
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad_top =
            r#"{"subcommand":"constants","parameters":{},"output_format":"json","extra":1}"#;
        assert!(RunConfig::from_json(bad_top).is_err());
        let bad_param = r#"{"subcommand":"fig2b","parameters":{"grid":"0.1:0.9:3","x":1},"output_format":"csv"}"#;
        assert!(RunConfig::from_json(bad_param).is_err());
        let bad_name = r#"{"subcommand":"nope","parameters":{},"output_format":"csv"}"#;
        assert!(RunConfig::from_json(bad_name).is_err());
        let ok = r#"{"subcommand":"constants","output_format":"json"}"#;
        assert!(RunConfig::from_json(ok).is_ok());
    }
}
