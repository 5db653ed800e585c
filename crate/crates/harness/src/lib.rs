//! Batch experiments on the gamma-weight polymer: constants tables,
//! identity checks, Laplace-transform cross-validation, zero-temperature
//! laws and Tracy–Widom fluctuations. Every run writes CSV tables and a
//! JSON summary.

pub mod cli;
pub mod commands;
pub mod error;
pub mod grid;
pub mod output;
pub mod summary;

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

pub use cli::{Cli, Command, Common};
pub use commands::Report;
pub use error::{HarnessError, Result};
use output::{output_path, unix_timestamp};
pub use summary::{RunSummary, Runtime, Status};

/// Exit status of a run whose checks failed.
pub const EXIT_VALIDATION: i32 = 3;

/// Replica count for `command`: the flag if given, else the subcommand's default.
pub fn replicas_for(command: &Command, flag: Option<usize>) -> Option<usize> {
    let default = match command {
        Command::LaplaceCheck(_) => commands::laplace::DEFAULT_REPLICAS,
        Command::Lln(_) => commands::lln::DEFAULT_REPLICAS,
        Command::LueCompare(_) => commands::lue::DEFAULT_REPLICAS,
        Command::Tw(_) => commands::tw::DEFAULT_REPLICAS,
        _ => return None,
    };
    Some(flag.unwrap_or(default))
}

/// Checks the whole configuration without computing anything.
pub fn validate(command: &Command, replicas: Option<usize>) -> Result<()> {
    let r = replicas.unwrap_or(0);
    match command {
        Command::Constants(a) => commands::constants::validate(a),
        Command::VerifyIdentities(a) => commands::identities::validate(a),
        Command::LaplaceCheck(a) => commands::laplace::validate(a, r).map(|_| ()),
        Command::Lln(a) => commands::lln::validate(a, r),
        Command::LueCompare(a) => commands::lue::validate(a, r),
        Command::Tw(a) => commands::tw::validate(a, r),
        Command::TwTable(a) => commands::tw_table::validate(a),
    }
}

/// Runs `command` on the current rayon pool.
pub fn compute(command: &Command, replicas: Option<usize>, seed: u64) -> Result<Report> {
    let r = replicas.unwrap_or(0);
    match command {
        Command::Constants(a) => commands::constants::run(a),
        Command::VerifyIdentities(a) => commands::identities::run(a, seed),
        Command::LaplaceCheck(a) => commands::laplace::run(a, r, seed),
        Command::Lln(a) => commands::lln::run(a, r, seed),
        Command::LueCompare(a) => commands::lue::run(a, r, seed),
        Command::Tw(a) => commands::tw::run(a, r, seed),
        Command::TwTable(a) => commands::tw_table::run(a),
    }
}

fn config_echo(command: &Command, replicas: Option<usize>) -> Result<Value> {
    let args = match command {
        Command::Constants(a) => serde_json::to_value(a)?,
        Command::VerifyIdentities(a) => serde_json::to_value(a)?,
        Command::LaplaceCheck(a) => serde_json::to_value(a)?,
        Command::Lln(a) => serde_json::to_value(a)?,
        Command::LueCompare(a) => serde_json::to_value(a)?,
        Command::Tw(a) => serde_json::to_value(a)?,
        Command::TwTable(a) => serde_json::to_value(a)?,
    };
    let mut v = json!({ "args": args });
    if let Some(r) = replicas {
        v["replicas"] = json!(r);
    }
    Ok(v)
}

/// Validates, computes, writes the tables (and the summary with `--json`)
/// into `--out`, and returns the summary.
pub fn run(cli: &Cli) -> Result<RunSummary> {
    let start = Instant::now();
    let common = &cli.common;
    let name = cli.command.name();
    let replicas = replicas_for(&cli.command, common.replicas);
    validate(&cli.command, replicas)?;
    let config = config_echo(&cli.command, replicas)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads)
        .build()
        .map_err(|e| error::config(format!("thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let report = pool.install(|| compute(&cli.command, replicas, common.seed))?;

    fs::create_dir_all(&common.out)?;
    let stamp = unix_timestamp();
    let mut outputs = Vec::new();
    for table in &report.tables {
        let path = output_path(&common.out, name, &table.name, stamp, "csv");
        fs::write(&path, table.to_csv()?)?;
        outputs.push(file_name(&path));
    }
    let json_path = output_path(&common.out, name, "", stamp, "json");
    if common.json {
        outputs.push(file_name(&json_path));
    }
    let summary = RunSummary {
        version: gamma_polymer::VERSION.into(),
        subcommand: name.into(),
        seed: common.seed,
        generator: gamma_polymer::rng::GENERATOR_ID.into(),
        config,
        constants: report.constants,
        statistics: report.statistics,
        status: if report.failures.is_empty() {
            Status::Ok
        } else {
            Status::ValidationFailed
        },
        failures: report.failures,
        runtime: Runtime {
            threads,
            wall_time_s: start.elapsed().as_secs_f64(),
            outputs,
        },
    };
    if common.json {
        fs::write(&json_path, summary.to_json()?)?;
    }
    Ok(summary)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(String::new, |f| f.to_string_lossy().into_owned())
}

/// Exit code for a finished run.
pub fn exit_code(summary: &RunSummary) -> i32 {
    match summary.status {
        Status::Ok => 0,
        Status::ValidationFailed => EXIT_VALIDATION,
    }
}
