//! Command-line front end: argument parsing, run configurations, output
//! files and reference checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod golden;
pub mod output;
pub mod reproduce;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{Format, Table};

/// Directory for outputs when `--output` is not given.
pub const OUT_DIR_ENV: &str = "LOSSYPHASE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "lossyphase",
    version,
    about = "Phase estimation per lost photon: strategies, bounds and optimizers"
)]
pub struct Cli {
    /// Output format [default: json for single results, csv for tables]
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Save the run configuration as JSON before running
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: TopLevel,
}

#[derive(Debug, Subcommand)]
pub enum TopLevel {
    #[command(flatten)]
    Compute(Command),
    /// Run a saved configuration
    Run {
        /// JSON file written by --save-config
        #[arg(long)]
        config: PathBuf,
    },
}

/// Resolve the arguments into a self-contained configuration.
pub fn build_config(cli: &Cli, out_dir: Option<&Path>) -> Result<RunConfig, CliError> {
    match &cli.command {
        TopLevel::Compute(command) => {
            let output_format = cli.format.unwrap_or_else(|| command.default_format());
            let output_path = cli.output.clone().or_else(|| {
                out_dir.map(|d| {
                    d.join(format!(
                        "{}.{}",
                        artifact_stem(command),
                        output_format.extension()
                    ))
                })
            });
            Ok(RunConfig {
                command: command.clone(),
                output_format,
                output_path,
            })
        }
        TopLevel::Run { config } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
            RunConfig::from_json(&text)
        }
    }
}

fn artifact_stem(command: &Command) -> String {
    match command {
        Command::Reproduce(a) => format!("reproduce-{}", a.target.name()),
        c => c.name().to_owned(),
    }
}

/// Result of one run.
pub struct Executed {
    pub table: Table,
    /// Campaign data produced alongside a reproduction report.
    pub data: Option<Table>,
    pub failures: Vec<String>,
}

pub fn execute(command: &Command) -> Result<Executed, CliError> {
    use crate::commands::*;
    let table = match command {
        Command::Constants(_) => constants_table(),
        Command::ClassicalMp(a) => classical_mp(a)?,
        Command::QuantumBound(a) => quantum_bound(a)?,
        Command::Advantage(a) => advantage_cmd(a)?,
        Command::Fig2a(a) => fig2a(a)?,
        Command::GaussianFisher(a) => gaussian_fisher(a)?,
        Command::Fig2b(a) => fig2b(a)?,
        Command::NetworkEval(a) => network_eval(a)?,
        Command::NetworkOpt(a) => network_opt(a)?,
        Command::ImperfectAdvantage(a) => imperfect_advantage(a)?,
        Command::Fig4Surface(a) => fig4_surface(a)?,
        Command::Reproduce(a) => {
            let r = crate::reproduce::reproduce(a)?;
            let failures = r.failures();
            return Ok(Executed {
                table: r.report,
                data: Some(r.data),
                failures,
            });
        }
    };
    Ok(Executed {
        table,
        data: None,
        failures: Vec::new(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn data_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}-data.csv"))
}

/// Run a configuration, writing its artifacts.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let executed = execute(&config.command)?;
    let text = executed.table.render(config.output_format);
    match &config.output_path {
        Some(path) => {
            write_file(path, &text)?;
            if let Some(data) = &executed.data {
                write_file(&data_path(path), &data.to_csv())?;
            }
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    if executed.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Checks(format!(
            "failed checks: {}",
            executed.failures.join(", ")
        )))
    }
}

fn clap_error_line(e: &clap::Error) -> CliError {
    let rendered = e.to_string();
    let first = rendered.lines().next().unwrap_or_default();
    CliError::validation("arguments", first.trim_start_matches("error: ").trim())
}

/// Full command-line entry point; returns the exit status.
pub fn main_with(
    args: impl IntoIterator<Item = OsString>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(stdout, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                    2
                } else {
                    0
                };
            }
            let err = clap_error_line(&e);
            let _ = writeln!(stderr, "{err}");
            return err.exit_code();
        }
    };
    let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let result = build_config(&cli, out_dir.as_deref()).and_then(|config| {
        if let Some(path) = &cli.save_config {
            write_file(path, &config.to_json())?;
        }
        run(&config, stdout)
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{err}");
            err.exit_code()
        }
    }
}
