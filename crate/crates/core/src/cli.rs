//! The `mebn` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O error, 2 usage or parse error, 3 validation or grounding
//! error, 4 inference error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dsl::{self, Diagnostics, ParseDiagnostic};
use crate::grounding::{self, GroundingOptions};
use crate::inference;
use crate::model::validate_mtheory;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GROUNDING: i32 = 3;
pub const EXIT_INFERENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mebn", version, about = "Multi-entity Bayesian network reasoner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model file for structural problems.
    Validate {
        /// Model file.
        model: PathBuf,
    },
    /// Ground a model against findings and print the query posterior.
    Infer(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Variable elimination.
    Ve,
    /// Full joint enumeration.
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunConfig {
    /// Model file.
    #[arg(long)]
    pub model: PathBuf,
    /// Findings file.
    #[arg(long)]
    pub findings: PathBuf,
    /// Query, e.g. `SeverityLevel(region_1)?`.
    #[arg(long)]
    pub query: String,
    #[arg(long, value_enum, default_value = "ve")]
    pub engine: Engine,
    /// Write the grounded network to this path.
    #[arg(long, value_name = "PATH")]
    pub dump_ssbn: Option<PathBuf>,
    /// Format of the network written by --dump-ssbn.
    #[arg(long, value_enum, default_value = "dot")]
    pub format: ExportFormat,
    /// Keep barren nodes in the grounded network.
    #[arg(long)]
    pub no_prune: bool,
    /// Report network size and warnings on stderr.
    #[arg(short, long)]
    pub verbose: bool,
}

/// A failed command: its exit code and message.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(EXIT_IO, format!("{}: {}", path.display(), e)))
}

fn parse_failure(diags: Diagnostics) -> CliError {
    CliError::new(EXIT_PARSE, diags.to_string())
}

fn report_warnings(err: &mut dyn Write, warnings: &[ParseDiagnostic]) {
    for w in warnings {
        let _ = writeln!(err, "{}", w);
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{}", text)
            } else {
                write!(out, "{}", text)
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { model } => cmd_validate(&model, out, err),
        Command::Infer(config) => cmd_infer(&config, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message.trim_end());
            f.code
        }
    }
}

/// Parses and validates a model, printing `OK` or one line per violation.
pub fn cmd_validate(model: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = read(model)?;
    let parsed = dsl::parse_model_named(&model.display().to_string(), &text).map_err(parse_failure)?;
    report_warnings(err, &parsed.warnings);
    let report = validate_mtheory(&parsed.value);
    if report.is_empty() {
        let _ = writeln!(out, "OK");
        Ok(())
    } else {
        let _ = write!(out, "{}", report);
        Err(CliError::new(
            EXIT_GROUNDING,
            format!("{} violation(s) in {}", report.len(), model.display()),
        ))
    }
}

/// Parses, grounds, and solves one query, printing `<state> <probability>` per line.
pub fn cmd_infer(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let model_text = read(&config.model)?;
    let findings_text = read(&config.findings)?;
    let model = dsl::parse_model_named(&config.model.display().to_string(), &model_text).map_err(parse_failure)?;
    report_warnings(err, &model.warnings);
    let theory = model.value;
    let report = validate_mtheory(&theory);
    if !report.is_empty() {
        let _ = write!(err, "{}", report);
        return Err(CliError::new(EXIT_GROUNDING, "model failed validation"));
    }
    let findings = dsl::parse_findings_named(&config.findings.display().to_string(), &findings_text, &theory)
        .map_err(parse_failure)?;
    report_warnings(err, &findings.warnings);
    let findings = findings.value;
    let query = dsl::parse_query_unresolved(&config.query, &theory).map_err(parse_failure)?;

    let options = GroundingOptions {
        prune: !config.no_prune,
        ..GroundingOptions::default()
    };
    let grounded = grounding::ground(&theory, &findings, &query, &options)
        .map_err(|e| CliError::new(EXIT_GROUNDING, e.to_string()))?;
    for w in &grounded.warnings {
        let _ = writeln!(err, "warning: {}", w);
    }
    let ssbn = grounded.ssbn;
    if config.verbose {
        let _ = writeln!(
            err,
            "ssbn: {} nodes, {} edges, {} evidence",
            ssbn.len(),
            ssbn.edge_count(),
            ssbn.evidence().len()
        );
    }
    if let Some(path) = &config.dump_ssbn {
        let text = match config.format {
            ExportFormat::Dot => grounding::to_dot(&ssbn),
            ExportFormat::Json => grounding::to_json(&ssbn),
        };
        fs::write(path, text).map_err(|e| CliError::new(EXIT_IO, format!("{}: {}", path.display(), e)))?;
    }

    let posterior = match config.engine {
        Engine::Ve => inference::posterior_ve(&ssbn),
        Engine::Enumerate => inference::posterior_enumerate(&ssbn),
    }
    .map_err(|e| CliError::new(EXIT_INFERENCE, e.to_string()))?;
    write!(out, "{}", posterior).map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    Ok(())
}
