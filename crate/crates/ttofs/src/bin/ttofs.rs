//! Command-line front end: run experiments from JSON configs, validate
//! configs, and list the built-in zero families.
//!
//! Exit codes: 0 success, 1 assertion failure (expected outcomes not met),
//! 2 config error, 3 resolution error (requested accuracy unattainable at the
//! configured grid/window sizes).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ttofs::cli::{error_record, families_text, run_config_file, validate_config_file};
use ttofs::Error;

#[derive(Parser)]
#[command(
    name = "ttofs",
    about = "Finite-section diagnostics for truncated Toeplitz operators on model spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Run {
        /// Path to the config file.
        config: PathBuf,
    },
    /// Parse and validate a config file without running it.
    Validate {
        /// Path to the config file.
        config: PathBuf,
    },
    /// List the built-in zero families and symbol descriptors.
    ListFamilies,
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { config } => {
            let artifacts = run_config_file(&config)?;
            println!("ok: wrote {}", artifacts.result_path.display());
            for path in &artifacts.table_paths {
                println!("ok: wrote {}", path.display());
            }
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = validate_config_file(&config)?;
            println!(
                "ok: '{}' describes a valid {} experiment",
                config.display(),
                cfg.experiment.name()
            );
            Ok(())
        }
        Command::ListFamilies => {
            print!("{}", families_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // Clap usage errors are malformed invocations: report them in the same
    // exit class as malformed configs.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 2 } else { 0 };
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = error_record(&e);
            eprintln!("{record:#}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
