use std::process::ExitCode;

use clap::Parser;
use gamma_polymer_harness::{exit_code, run, Cli};

fn main() -> ExitCode {
    // clap's own failure code is 2, which is reserved for numerical errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(summary) => {
            if cli.common.json {
                match summary.to_json() {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            } else {
                println!(
                    "{} {:?} in {:.2}s: {}",
                    summary.subcommand,
                    summary.status,
                    summary.runtime.wall_time_s,
                    summary.runtime.outputs.join(", ")
                );
            }
            for f in &summary.failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(exit_code(&summary) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
