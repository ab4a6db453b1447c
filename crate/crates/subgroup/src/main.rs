use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subgroup::commands::{self, parse_grid, Variant};
use subgroup::format::{plan_csv, plan_notes, plan_summary, rate_map_csv, report_csv};
use subgroup::parallel::default_workers;
use subgroup::{CliError, CliResult, ScenarioArgs, ScenarioConfig};

/// Adaptive subcarrier grouping for MIMO-OFDM precoding.
///
/// `--snr-db` is the per-antenna SNR γ; the total transmit power is γ·n_t.
/// `antenna-sweep` is the exception: there the value is the total power ρ_t,
/// shared equally by the antennas.
///
/// Exit codes: 0 success, 1 invalid input, 2 infeasible threshold,
/// 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "subgroup", version)]
struct Cli {
    /// INI scenario file with a [scenario] section
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master random seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for Monte Carlo work (output does not depend on it)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan the grouping and print its summary
    Plan {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Write the membership CSV (n,k,center_n,center_k,group_id)
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Relative capacity loss over SNR for several mismatch variances
    LossSweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Per-antenna SNR grid in dB: start:stop:step or a,b,c
        #[arg(long, default_value = "-10:30:1", allow_hyphen_values = true)]
        snr_grid: String,
        /// Mismatch variances σ_m²
        #[arg(long, default_value = "0.01,0.05,0.1")]
        sigma_m2_list: String,
    },
    /// Relative capacity loss versus antenna count at fixed total power
    AntennaSweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 80)]
        n_max: usize,
        /// Correlation between member and center (σ_m² = 2 − 2β)
        #[arg(long, default_value_t = 0.95)]
        beta: f64,
    },
    /// Group dimensions over a threshold grid while varying one parameter
    GroupSweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Loss thresholds: start:stop:step or a,b,c
        #[arg(long, default_value = "0.02:0.3:0.02")]
        zeta_grid: String,
        /// Parameter to vary: snr, env or speed
        #[arg(long)]
        vary: String,
        /// Values of the varied parameter, comma-separated
        #[arg(long)]
        values: String,
    },
    /// Monte Carlo trial report and the end-to-end grouping rate map
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Write the rate map CSV (n,k,group_id,gamma_e,rate_bits)
        #[arg(long)]
        rates: Option<PathBuf>,
        /// Write the correlated channel grid as a trace CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Estimate correlation marginals from a trace CSV
    Estimate {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_lag_f: usize,
        #[arg(long, default_value_t = 5)]
        max_lag_t: usize,
    },
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let config = cli.config.as_ref();
    let scenario = |args: &ScenarioArgs| ScenarioConfig::resolve(config, args, cli.seed);
    let workers = cli.workers.unwrap_or_else(default_workers).max(1);
    let out = cli.out.as_ref();

    match &cli.command {
        Command::Plan {
            scenario: args,
            export,
        } => {
            let cfg = scenario(args)?;
            let plan = commands::plan(&cfg)?;
            for note in plan_notes(&plan) {
                eprintln!("note: {note}");
            }
            if let Some(path) = export {
                write_file(path, &plan_csv(&plan))?;
            }
            emit(out, &plan_summary(&plan))
        }
        Command::LossSweep {
            scenario: args,
            snr_grid,
            sigma_m2_list,
        } => {
            let cfg = scenario(args)?;
            emit(
                out,
                &commands::loss_sweep(&cfg, &parse_grid(snr_grid)?, &parse_grid(sigma_m2_list)?)?,
            )
        }
        Command::AntennaSweep {
            scenario: args,
            n_max,
            beta,
        } => {
            let cfg = scenario(args)?;
            if !(*beta > 0.0 && *beta <= 1.0) {
                return Err(CliError::input(format!(
                    "beta must lie in (0, 1], got {beta}"
                )));
            }
            emit(
                out,
                &commands::antenna_sweep(&cfg, *n_max, 2.0 - 2.0 * beta)?,
            )
        }
        Command::GroupSweep {
            scenario: args,
            zeta_grid,
            vary,
            values,
        } => {
            let cfg = scenario(args)?;
            let variant = Variant::parse(vary, values)?;
            emit(
                out,
                &commands::group_sweep(&cfg, &parse_grid(zeta_grid)?, &variant)?,
            )
        }
        Command::Simulate {
            scenario: args,
            rates,
            trace,
        } => {
            let cfg = scenario(args)?;
            let (report, run) = commands::simulate(&cfg, workers)?;
            eprintln!(
                "note: outage fraction {}, mean group deficit {}",
                run.outage_fraction, run.mean_group_deficit
            );
            if let Some(path) = rates {
                write_file(path, &rate_map_csv(&run))?;
            }
            if let Some(path) = trace {
                write_file(path, &commands::trace(&cfg)?)?;
            }
            emit(out, &report_csv(&report))
        }
        Command::Estimate {
            trace,
            max_lag_f,
            max_lag_t,
        } => emit(out, &commands::estimate(trace, *max_lag_f, *max_lag_t)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
