//! Command-line front end: JSON configuration in, CSV or JSON tables out.
//!
//! Exit codes: 0 on success, 1 on a numerical failure (JSON payload on
//! stderr), 2 on a configuration failure (JSON list of problems on stderr).

pub mod commands;
pub mod config;
pub mod gate;
pub mod output;

use clap::Parser;
use commands::{Artifact, Exec};
use config::{Command, RunConfig};
use output::{Format, Table};
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "polyharm", version, about = "Polyharmonic expansions and complex extension on annuli")]
pub struct Cli {
    /// Subcommand; overrides `command` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
}

enum Failure {
    Config(Vec<String>),
    Numeric(polyharm::Error),
}

impl From<polyharm::Error> for Failure {
    fn from(e: polyharm::Error) -> Self {
        if e.is_config() {
            Failure::Config(vec![e.to_string()])
        } else {
            Failure::Numeric(e)
        }
    }
}

fn error_kind(e: &polyharm::Error) -> &'static str {
    use polyharm::Error::*;
    match e {
        InvalidInput(_) => "invalid_input",
        Config(_) => "config",
        Domain(_) => "domain",
        LieDomain { .. } => "lie_domain",
        Truncation { .. } => "truncation",
        Capability { .. } => "capability",
        Precondition(_) => "precondition",
        WrongBranch(_) => "wrong_branch",
        Invariant(_) => "invariant",
    }
}

fn load(cli: &Cli) -> Result<(Command, RunConfig), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(vec![format!("{}: {e}", path.display())]))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| Failure::Config(vec![format!("{}: {e}", path.display())]))?
        }
        None => RunConfig::default(),
    };
    let n = &mut cfg.numeric;
    n.tol = cli.tol.unwrap_or(n.tol);
    n.n = cli.n.unwrap_or(n.n);
    n.j = cli.j.unwrap_or(n.j);
    n.k_max = cli.k_max.unwrap_or(n.k_max);
    n.quad_nodes = cli.quad_nodes.unwrap_or(n.quad_nodes);
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if cli.out.is_some() {
        cfg.output.path = cli.out.clone();
    }
    if cli.format.is_some() {
        cfg.output.format = cli.format;
    }
    let command = cli
        .command
        .or(cfg.command)
        .ok_or_else(|| Failure::Config(vec!["no command given".into()]))?;
    let mut errors = cfg.validate(command);
    if let Some(path) = &cfg.output.path {
        if let Err(e) = std::fs::File::create(path) {
            errors.push(format!("output {}: {e}", path.display()));
        }
    }
    if let Some(path) = cfg.extend.as_ref().and_then(|e| e.coefficients_out.as_ref()) {
        if command == Command::Extend {
            if let Err(e) = std::fs::File::create(path) {
                errors.push(format!("coefficients_out {}: {e}", path.display()));
            }
        }
    }
    if errors.is_empty() {
        Ok((command, cfg))
    } else {
        Err(Failure::Config(errors))
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let (command, cfg) = load(cli)?;
    let exec = Exec::new(cfg.threads)?;
    let format = cfg
        .output
        .format
        .unwrap_or(if command == Command::Verify { Format::Json } else { Format::Csv });
    let (bytes, ok) = match commands::run(command, &cfg, &exec)? {
        Artifact::Table(t) => (t.render(format), true),
        Artifact::Report(value, criteria, ok) => {
            let bytes = match format {
                Format::Json => output::json_bytes(&value),
                Format::Csv => {
                    let mut t = Table::new("verify", &["id", "title", "passed", "detail"]);
                    for c in criteria {
                        t.push(vec![(c.id as usize).into(), c.title.into(), c.passed.into(), c.detail.into()]);
                    }
                    t.to_csv()
                }
            };
            (bytes, ok)
        }
    };
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| {
            Failure::Numeric(polyharm::Error::Invariant(format!("writing {}: {e}", path.display())))
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Numeric(polyharm::Error::Invariant(format!("stdout: {e}"))))?;
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Numeric(polyharm::Error::Invariant("verification criteria failed".into())))
    }
}

fn emit_error(value: serde_json::Value) {
    let _ = std::io::stderr().write_all(&output::json_bytes(&value));
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            emit_error(json!({"errors": [e.to_string()]}));
            return 2;
        }
    };
    let outcome = std::panic::catch_unwind(|| execute(&cli));
    match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(Failure::Config(errors))) => {
            emit_error(json!({ "errors": errors }));
            2
        }
        Ok(Err(Failure::Numeric(e))) => {
            emit_error(json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}));
            1
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            emit_error(json!({"error": {"kind": "panic", "message": msg}}));
            1
        }
    }
}
