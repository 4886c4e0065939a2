//! Command-line front end: operator derivation, module diagrams,
//! classification and the full check suite.

pub mod classify;
pub mod derive;
pub mod diagram;
pub mod dot;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tdo_core::algebra::{Chart, Rational};
use tdo_core::reps::{global_module, Family, Sl2Module, DEFAULT_WINDOW};
use tdo_core::suite::{run_suite, SuiteConfig, SuiteReport};
use thiserror::Error;

use classify::ClassifyDoc;
use derive::DeriveDoc;
use diagram::DiagramDoc;

/// Smallest window accepted on the command line.
pub const MIN_WINDOW: i64 = 8;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or an invalid combination of parameters; exit code 2.
    #[error("{0}")]
    Config(String),
    /// Malformed input document; exit code 2.
    #[error("{0}")]
    Input(String),
    /// A check failed; exit code 1.
    #[error("{0}")]
    CheckFailed(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(e: impl fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn internal(e: impl fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) | CliError::Internal(_) => 1,
            CliError::Config(_) | CliError::Input(_) | CliError::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
pub enum Format {
    #[default]
    Text,
    Json,
    Dot,
    Ascii,
}

#[derive(Debug, Parser)]
#[command(
    name = "tdo",
    version,
    about = "Twisted differential operators on P^1 and their sl(2)-modules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the chart operators of E, F, H and the Casimir constant.
    Derive(CommonArgs),
    /// Print the action diagram of a module over the window.
    Module(ModuleArgs),
    /// Identify the global sections of a family.
    Classify(ModuleArgs),
    /// Run every structural check over t = 1..6 and the standard etas.
    CheckAll(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Twist parameter; the line bundle is O(t-1).
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub t: i64,
    /// Whittaker character, an exact rational such as 3/2.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub eta: String,
    /// Basis indices examined on each side of the origin.
    #[arg(long, default_value_t = DEFAULT_WINDOW, allow_hyphen_values = true)]
    pub window: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// One of finite-o, verma-point, dual-verma-open, delta-infinity,
    /// principal-even, principal-odd, whittaker-open.
    #[arg(long)]
    pub family: String,
    /// zero or infinity; omit for the global sections.
    #[arg(long)]
    pub chart: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Perturb one published coefficient to exercise the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// Validated parameters shared by the subcommands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub chart: Option<Chart>,
    pub t: i64,
    pub eta: Rational,
    pub window: i64,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(
        common: &CommonArgs,
        family: Option<&str>,
        chart: Option<&str>,
    ) -> Result<Self, CliError> {
        if common.window < MIN_WINDOW {
            return Err(CliError::Config(format!(
                "--window must be at least {MIN_WINDOW}, got {}",
                common.window
            )));
        }
        let eta: Rational = common
            .eta
            .parse()
            .map_err(|e| CliError::Config(format!("--eta: {e}")))?;
        Ok(RunConfig {
            family: family
                .map(str::parse)
                .transpose()
                .map_err(CliError::Config)?,
            chart: chart
                .map(str::parse)
                .transpose()
                .map_err(CliError::Config)?,
            t: common.t,
            eta,
            window: common.window,
            format: common.format,
        })
    }

    fn family(&self) -> Result<Family, CliError> {
        self.family
            .ok_or_else(|| CliError::Config("--family is required".into()))
    }

    /// The module selected by family and chart: the local module when a
    /// chart is given, the global sections otherwise.
    pub fn module(&self) -> Result<Sl2Module, CliError> {
        let family = self.family()?;
        let t = Rational::from(self.t);
        match self.chart {
            Some(chart) => Sl2Module::local(family, chart, &t, &self.eta),
            None => global_module(family, &t, &self.eta),
        }
        .map_err(CliError::config)
    }
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Config(format!(
        "{command} does not support --format {}",
        format
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    ))
}

pub fn cmd_derive(cfg: &RunConfig) -> Result<String, CliError> {
    let doc = DeriveDoc::compute(cfg.t)?;
    match cfg.format {
        Format::Text => Ok(doc.to_text()),
        Format::Json => Ok(doc.to_json()),
        f => Err(unsupported("derive", f)),
    }
}

/// The diagram document for `module`, with identification and certificate
/// of the global sections attached when no chart is selected.
pub fn module_diagram(cfg: &RunConfig) -> Result<DiagramDoc, CliError> {
    let m = cfg.module()?;
    let mut doc = DiagramDoc::build(&m, cfg.t, cfg.window);
    if cfg.chart.is_none() {
        let c = ClassifyDoc::compute(m.family, cfg.t, &cfg.eta, cfg.window)?;
        doc.identifications.push(c.identification);
        doc.certificates.push(c.certificate);
        doc.certificates.push(format!("casimir = {}", c.casimir));
    }
    Ok(doc)
}

pub fn cmd_module(cfg: &RunConfig) -> Result<String, CliError> {
    let doc = module_diagram(cfg)?;
    Ok(match cfg.format {
        Format::Json => doc.to_json(),
        Format::Dot => doc.to_dot(),
        Format::Ascii | Format::Text => doc.to_ascii(),
    })
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<String, CliError> {
    let doc = ClassifyDoc::compute(cfg.family()?, cfg.t, &cfg.eta, cfg.window)?;
    match cfg.format {
        Format::Text => Ok(doc.to_text()),
        Format::Json => Ok(doc.to_json()),
        f => Err(unsupported("classify", f)),
    }
}

/// Renders a suite report; the error carries the rendering when a check
/// failed.
pub fn cmd_check_all(cfg: &RunConfig, inject_fault: bool) -> Result<String, CliError> {
    let report = run_suite(&SuiteConfig {
        window: cfg.window,
        inject_fault,
        ..SuiteConfig::default()
    });
    let rendered = match cfg.format {
        Format::Text => render_report(&report),
        Format::Json => {
            let value = serde_json::to_value(&report).expect("report serializes");
            serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
        }
        f => return Err(unsupported("check-all", f)),
    };
    if report.passed() {
        Ok(rendered)
    } else {
        Err(CliError::CheckFailed(rendered))
    }
}

fn render_report(report: &SuiteReport) -> String {
    let total = report.checks.len();
    match report.first_failure() {
        None => format!("all {total} checks passed\n"),
        Some(first) => {
            let failed = report.failures().count();
            let mut out = format!("{failed} of {total} checks failed\n");
            for c in report.failures() {
                out.push_str(&format!(
                    "FAIL [{}] {}: {}\n",
                    c.group,
                    c.label,
                    c.detail.as_deref().unwrap_or("")
                ));
            }
            out.push_str(&format!("first counterexample: {}\n", first.label));
            out
        }
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (common, result) = match &cli.command {
        Command::Derive(a) => (
            a,
            RunConfig::from_args(a, None, None).and_then(|c| cmd_derive(&c)),
        ),
        Command::Module(a) => (
            &a.common,
            RunConfig::from_args(&a.common, Some(&a.family), a.chart.as_deref())
                .and_then(|c| cmd_module(&c)),
        ),
        Command::Classify(a) => (
            &a.common,
            RunConfig::from_args(&a.common, Some(&a.family), a.chart.as_deref())
                .and_then(|c| cmd_classify(&c)),
        ),
        Command::CheckAll(a) => (
            &a.common,
            RunConfig::from_args(&a.common, None, None)
                .and_then(|c| cmd_check_all(&c, a.inject_fault)),
        ),
    };
    let result = result.and_then(|text| write_output(common.out.as_ref(), &text));
    match result {
        Ok(()) => 0,
        Err(CliError::CheckFailed(text)) => {
            let code = 1;
            if let Err(e) = write_output(common.out.as_ref(), &text) {
                eprintln!("error: {e}");
            }
            eprint!(
                "{}",
                text.lines()
                    .last()
                    .map(|l| format!("{l}\n"))
                    .unwrap_or_default()
            );
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
