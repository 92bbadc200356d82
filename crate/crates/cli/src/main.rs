use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kmuforge::{
    cmd_classify, cmd_models, cmd_report, json, models, ClassifyInput, CliError, ErrorRecord,
    RunConfig,
};
use kmuforge_core::space_forms::SignatureKind;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "kmuforge",
    version,
    about = "Contact metric (k,μ) checks on tangent sphere and hyperquadric bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline for one space form.
    Report {
        #[arg(long)]
        kind: SignatureKind,
        /// Sectional curvature of the base.
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Base dimension n + 1.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
        dim: u32,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(8..))]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Omit the timestamp and wall-clock fields.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// List the model spaces realizing a Boeckx invariant.
    Classify {
        #[arg(long, allow_negative_numbers = true, required_unless_present = "k", conflicts_with_all = ["k", "mu"])]
        invariant: Option<f64>,
        #[arg(long, allow_negative_numbers = true, requires = "mu")]
        k: Option<f64>,
        #[arg(long, allow_negative_numbers = true, requires = "k")]
        mu: Option<f64>,
    },
    /// Show the two model families.
    Models {
        #[arg(long)]
        json: bool,
    },
}

fn emit<T: Serialize>(value: &T, path: Option<&PathBuf>) -> Result<(), CliError> {
    let text = json::to_string(value)?;
    match path {
        Some(p) => json::write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, (CliError, Option<PathBuf>)> {
    match cli.command {
        Command::Report {
            kind,
            c,
            dim,
            samples,
            seed,
            json,
            no_timestamp,
        } => {
            let fail = |e: CliError| (e, json.clone());
            let mut config =
                RunConfig::new(kind, c, dim as usize, samples as usize, seed).map_err(fail)?;
            if no_timestamp {
                config = config.without_timestamp();
            }
            let report = cmd_report(&config).map_err(fail)?;
            emit(&report, json.as_ref()).map_err(fail)?;
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("failed checks: {}", report.failed_checks.join(", "));
                Ok(ExitCode::from(1))
            }
        }
        Command::Classify { invariant, k, mu } => {
            let input = match (invariant, k, mu) {
                (Some(i), _, _) => ClassifyInput::Invariant(i),
                (None, Some(k), Some(mu)) => ClassifyInput::Kmu { k, mu },
                _ => {
                    return Err((
                        CliError::Usage("give --invariant or both --k and --mu".into()),
                        None,
                    ))
                }
            };
            let result = cmd_classify(input).map_err(|e| (e, None))?;
            emit(&result, None).map_err(|e| (e, None))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Models { json } => {
            let table = cmd_models();
            if json {
                emit(&table, None).map_err(|e| (e, None))?;
            } else {
                print!("{}", models::render_text(&table));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((err, path)) => {
            eprintln!("error: {err}");
            let record = ErrorRecord::from(&err);
            if let Err(e) = emit(&record, path.as_ref()) {
                eprintln!("error: could not write error record: {e}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
