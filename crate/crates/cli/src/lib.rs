//! Command-line front end: JSON formats, run configuration and the
//! subcommand dispatcher.

pub mod commands;
pub mod config;
pub mod io;

use std::path::Path;

use clap::Parser;
use serde_json::{json, Value};

use commands::{CliError, Command, Outcome, Verdict};
use config::RunConfig;
use io::{to_pretty, InputError};

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gext", version, about = "Finite groupoid extensions")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// A finished run: exit status, report text and files to write.
pub struct Finished {
    pub status: i32,
    pub report: String,
    pub files: Vec<(String, String)>,
}

fn header(cmd: &Command, cfg: &RunConfig) -> Value {
    json!({
        "tool": "gext",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd.name(),
        "config": cfg.describe(),
    })
}

fn error_value(e: &CliError) -> Value {
    match e {
        CliError::Input(InputError::Parse(p)) => json!({
            "kind": "ParseError",
            "file": p.file,
            "locus": p.locus,
            "message": p.message,
        }),
        CliError::Input(InputError::Groupoid(g)) => {
            let v: Vec<Value> = g.violations.iter().map(|(k, m)| json!({ "kind": k, "message": m })).collect();
            json!({ "kind": "InvalidGroupoid", "file": g.file, "violations": v })
        }
        CliError::Rejected { kind, message } => json!({ "kind": kind, "message": message }),
        CliError::Io(m) => json!({ "kind": "IoError", "message": m }),
    }
}

/// Runs one command without touching the file system for output.
pub fn execute(cli: &Cli) -> Finished {
    let mut report = header(&cli.command, &cli.config);
    match commands::run(&cli.command, &cli.config) {
        Ok(Outcome { verdict, result, files }) => {
            report["verdict"] = json!(match verdict {
                Verdict::Positive => "positive",
                Verdict::Negative => "negative",
            });
            report["result"] = result;
            report["files"] = json!(files.iter().map(|(n, _)| n).collect::<Vec<_>>());
            let status = if verdict == Verdict::Positive { EXIT_POSITIVE } else { EXIT_NEGATIVE };
            Finished { status, report: to_pretty(&report), files }
        }
        Err(e) => {
            report["verdict"] = json!("error");
            report["error"] = error_value(&e);
            Finished { status: EXIT_INPUT, report: to_pretty(&report), files: Vec::new() }
        }
    }
}

/// Writes `report.json` and the witness files into `dir`.
pub fn write_outputs(dir: &Path, f: &Finished) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("report.json"), &f.report).map_err(io)?;
    for (name, contents) in &f.files {
        std::fs::write(dir.join(name), contents).map_err(io)?;
    }
    Ok(())
}
