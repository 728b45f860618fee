// SPDX-License-Identifier: Apache-2.0

//! `wstate`: dissipative W-state preparation experiments from the command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wstate::analysis::{
    fit_points, fit_scaling, run_simulate, run_sweep, weak_field_warnings, with_suffix,
    workers_from_env, MethodChoice, RunConfig, SweepAxis, SweepResult, SweepSpec,
};
use wstate::effective::{assemble_rate_matrix, compare_closed_forms, MatchStatus};
use wstate::model::check_weak_field;
use wstate::Error;

#[derive(Parser)]
#[command(
    name = "wstate",
    version,
    about = "Dissipative W-state preparation in a lossy cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write it as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// rate, full_time_dependent, full_independent, effective_master or both.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Treat weak-field warnings as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Write the 8x8 effective rate matrix.
    Rates {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        /// Also write `<output>_closed_form.csv` comparing with the analytic rates.
        #[arg(long)]
        compare_closed_form: bool,
    },
    /// Steady-state fidelity and purity along one parameter axis.
    Sweep {
        /// cooperativity, gamma_over_kappa or omega_over_g.
        #[arg(long)]
        axis: String,
        #[arg(long, required_unless_present = "values")]
        from: Option<f64>,
        #[arg(long, required_unless_present = "values")]
        to: Option<f64>,
        #[arg(long, required_unless_present = "values")]
        points: Option<usize>,
        /// Explicit comma-separated grid instead of from/to/points.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "points"])]
        values: Option<Vec<f64>>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Fit 1 - F = a/C to a cooperativity sweep CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::WeakField(_) => 3,
        e if e.is_numerical() => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn load_config(path: Option<&Path>) -> wstate::Result<RunConfig> {
    match path {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    }
}

fn run(command: Command) -> wstate::Result<()> {
    match command {
        Command::Simulate {
            config,
            method,
            output,
            strict,
        } => {
            let mut cfg = RunConfig::from_file(&config)?;
            if let Some(m) = method {
                cfg.method = MethodChoice::parse(&m)?;
            }
            if output.is_some() {
                cfg.output = output;
            }
            cfg.validate()?;
            if !strict {
                for w in weak_field_warnings(&check_weak_field(&cfg.params)?) {
                    eprintln!("warning: {w}");
                }
            }
            let report = run_simulate(&cfg, strict)?;
            for r in &report.runs {
                println!("{}", r.line());
            }
        }
        Command::Rates {
            config,
            output,
            compare_closed_form,
        } => {
            let cfg = load_config(config.as_deref())?;
            for w in weak_field_warnings(&check_weak_field(&cfg.params)?) {
                eprintln!("warning: {w}");
            }
            let mu = assemble_rate_matrix(&cfg.params)?;
            std::fs::write(&output, mu.to_csv())?;
            println!("rates={}", output.display());
            if compare_closed_form {
                let report = compare_closed_forms(&cfg.params)?;
                let path = with_suffix(&output, "closed_form");
                std::fs::write(&path, report.to_csv())?;
                let count = |s: MatchStatus| report.rows.iter().filter(|r| r.status() == s).count();
                println!(
                    "closed_form={} rows={} corrected={} mismatches={} pair_asymmetry={:.3e}",
                    path.display(),
                    report.rows.len(),
                    count(MatchStatus::Corrected),
                    count(MatchStatus::Mismatch),
                    report.pair_asymmetry
                );
            }
        }
        Command::Sweep {
            axis,
            from,
            to,
            points,
            values,
            config,
            output,
        } => {
            let axis = SweepAxis::parse(&axis)?;
            let fixed = load_config(config.as_deref())?.params;
            let spec = match values {
                Some(v) => SweepSpec::explicit(axis, v, fixed)?,
                None => SweepSpec::linear(
                    axis,
                    from.expect("required by clap"),
                    to.expect("required by clap"),
                    points.expect("required by clap"),
                    fixed,
                )?,
            };
            let result = run_sweep(&spec, workers_from_env()?)?;
            result.write_csv(&output)?;
            let failed = result.rows.iter().filter(|r| !r.is_ok()).count();
            println!(
                "sweep={} rows={} failed={}",
                output.display(),
                result.rows.len(),
                failed
            );
        }
        Command::Fit { input } => {
            let sweep = SweepResult::read_csv(&input)?;
            let points = fit_points(&sweep)?;
            let skipped = sweep.rows.len() - points.len();
            let fit = fit_scaling(&points)?;
            println!("{fit} skipped={skipped}");
        }
    }
    Ok(())
}
