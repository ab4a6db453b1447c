//! Command implementations. Each returns the text it would print or write.

use std::path::Path;

use subgroup_core::capacity::{
    asymptotic_relative_loss, ergodic_loss, esnr_from_gamma, relative_loss_at, AntennaConfig,
    LinkBudget, MismatchSolution,
};
use subgroup_core::channel::{estimate_correlation, CorrelationModel, DopplerSpec};
use subgroup_core::grouping::{plan_dimensions, tile_plan, GroupingPlan};
use subgroup_core::sim::{sample_correlated_grid, Algorithm1Report, TrialReport};

use crate::config::{resolve_profile, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::format::{correlation_csv, csv_string, fmt_f64, read_trace, trace_csv};
use crate::parallel;

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::input(format!("bad grid `{spec}`: use start:stop:step or a,b,c"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let [a, b, step] = [parts[0], parts[1], parts[2]].map(|p| p.trim().parse::<f64>());
        let (a, b, step) = (
            a.map_err(|_| bad())?,
            b.map_err(|_| bad())?,
            step.map_err(|_| bad())?,
        );
        if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        let count = ((b - a) / step + 1e-9).floor() as usize;
        if count > 1_000_000 {
            return Err(bad());
        }
        // Rounded to 12 digits so 0.02 + 2·0.02 prints as 0.06.
        return Ok((0..=count)
            .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    spec.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| bad()).and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(bad())
                }
            })
        })
        .collect()
}

fn below_floor(zeta_r: f64, floor: f64) -> CliError {
    CliError::Infeasible(format!(
        "loss threshold {} is at or below the zero-mismatch loss floor {}; even single-point groups along both the frequency and time axes exceed it",
        fmt_f64(zeta_r),
        fmt_f64(floor)
    ))
}

/// Builds the grouping plan; a threshold below the loss floor is infeasible.
pub fn plan(cfg: &ScenarioConfig) -> CliResult<GroupingPlan> {
    let p = tile_plan(
        &cfg.model()?,
        &cfg.grid()?,
        cfg.zeta_r,
        cfg.antennas()?,
        cfg.budget()?,
    )?;
    if let MismatchSolution::Degenerate { floor } = p.solution {
        return Err(below_floor(cfg.zeta_r, floor));
    }
    Ok(p)
}

/// Relative and absolute loss over an SNR grid (per-antenna, dB) for each
/// mismatch variance.
pub fn loss_sweep(cfg: &ScenarioConfig, snr_db: &[f64], sigma_m2: &[f64]) -> CliResult<String> {
    let antennas = cfg.antennas()?;
    let mut rows = Vec::with_capacity(snr_db.len() * sigma_m2.len());
    for &s in sigma_m2 {
        for &db in snr_db {
            let gamma = 10f64.powf(db / 10.0);
            let gamma_e = esnr_from_gamma(gamma, antennas, s)?;
            let r = ergodic_loss(antennas, gamma, gamma_e)?;
            rows.push(vec![
                fmt_f64(db),
                fmt_f64(s),
                fmt_f64(r.rel_loss),
                fmt_f64(r.abs_loss),
                fmt_f64(r.upper_center),
                fmt_f64(r.lower_offset),
            ]);
        }
    }
    Ok(csv_string(
        &[
            "snr_db", "sigma_m2", "rel_loss", "abs_loss", "upper", "lower",
        ],
        rows,
    ))
}

/// Relative loss of `n × n` systems for `n = 1..=n_max` at a fixed total
/// power `ρ_t = 10^(snr_db/10)`, shared equally by the `n` antennas.
pub fn antenna_sweep(cfg: &ScenarioConfig, n_max: usize, sigma_m2: f64) -> CliResult<String> {
    if n_max == 0 {
        return Err(CliError::input("n_max must be at least 1"));
    }
    let rho_t = 10f64.powf(cfg.snr_db / 10.0);
    let asymptote = asymptotic_relative_loss(rho_t, sigma_m2)?;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let antennas = AntennaConfig::square(n)?;
        let budget = LinkBudget::from_total_power(rho_t, antennas)?;
        let rel = relative_loss_at(antennas, budget.gamma(), sigma_m2)?;
        rows.push(vec![n.to_string(), fmt_f64(rel), fmt_f64(asymptote)]);
    }
    Ok(csv_string(&["n", "rel_loss", "asymptote"], rows))
}

/// Parameter varied across a group sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    SnrDb(Vec<f64>),
    Environment(Vec<String>),
    Speed(Vec<f64>),
}

impl Variant {
    pub fn parse(kind: &str, values: &str) -> CliResult<Self> {
        match kind {
            "snr" => Ok(Variant::SnrDb(parse_grid(values)?)),
            "speed" => Ok(Variant::Speed(parse_grid(values)?)),
            "env" => Ok(Variant::Environment(
                values.split(',').map(|s| s.trim().to_string()).collect(),
            )),
            _ => Err(CliError::input(format!(
                "unknown variant `{kind}` (use snr, env or speed)"
            ))),
        }
    }

    fn scenarios(&self, base: &ScenarioConfig) -> Vec<(String, ScenarioConfig)> {
        let mut out = Vec::new();
        match self {
            Variant::SnrDb(v) => {
                for &x in v {
                    out.push((
                        fmt_f64(x),
                        ScenarioConfig {
                            snr_db: x,
                            ..base.clone()
                        },
                    ));
                }
            }
            Variant::Speed(v) => {
                for &x in v {
                    out.push((
                        fmt_f64(x),
                        ScenarioConfig {
                            speed_mps: x,
                            ..base.clone()
                        },
                    ));
                }
            }
            Variant::Environment(v) => {
                for e in v {
                    out.push((
                        e.clone(),
                        ScenarioConfig {
                            environment: e.clone(),
                            ..base.clone()
                        },
                    ));
                }
            }
        }
        out
    }
}

/// One row of a group sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variant: String,
    pub zeta_r: f64,
    pub sigma_m2: f64,
    pub beta: f64,
    pub s_f: usize,
    pub s_t: usize,
    pub group_size: usize,
}

/// Group dimensions over a threshold grid for each variant. Thresholds
/// below the loss floor give single-point groups.
pub fn group_sweep_rows(
    base: &ScenarioConfig,
    zetas: &[f64],
    variant: &Variant,
) -> CliResult<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (label, cfg) in variant.scenarios(base) {
        cfg.validate()
            .map_err(|e| e.context(format!("variant {label}")))?;
        let model = CorrelationModel::new(
            resolve_profile(&cfg.environment)?,
            DopplerSpec::new(cfg.carrier_hz, cfg.speed_mps)?,
        );
        let (grid, antennas, budget) = (cfg.grid()?, cfg.antennas()?, cfg.budget()?);
        for &z in zetas {
            let sizing = plan_dimensions(&model, &grid, z, antennas, budget).map_err(|e| {
                CliError::from(e).context(format!("variant {label}, zeta_r {}", fmt_f64(z)))
            })?;
            rows.push(SweepRow {
                variant: label.clone(),
                zeta_r: z,
                sigma_m2: sizing.solution.sigma_m2(),
                beta: sizing.beta,
                s_f: sizing.dims.s_f,
                s_t: sizing.dims.s_t,
                group_size: sizing.group_size(),
            });
        }
    }
    Ok(rows)
}

pub fn group_sweep(base: &ScenarioConfig, zetas: &[f64], variant: &Variant) -> CliResult<String> {
    let rows = group_sweep_rows(base, zetas, variant)?;
    Ok(csv_string(
        &[
            "variant",
            "zeta_r",
            "sigma_m2",
            "beta",
            "s_f",
            "s_t",
            "group_size",
        ],
        rows.into_iter().map(|r| {
            vec![
                r.variant,
                fmt_f64(r.zeta_r),
                fmt_f64(r.sigma_m2),
                fmt_f64(r.beta),
                r.s_f.to_string(),
                r.s_t.to_string(),
                r.group_size.to_string(),
            ]
        }),
    ))
}

/// Monte Carlo trial report plus the end-to-end grouping run.
pub fn simulate(
    cfg: &ScenarioConfig,
    workers: usize,
) -> CliResult<(TrialReport, Algorithm1Report)> {
    let (model, grid, antennas, budget) =
        (cfg.model()?, cfg.grid()?, cfg.antennas()?, cfg.budget()?);
    let run = parallel::run_algorithm1(
        &model, &grid, antennas, budget, cfg.zeta_r, cfg.seed, workers,
    )?;
    let sigma_m2 = cfg.sigma_m2.unwrap_or(run.plan.sigma_m2_star);
    let report = parallel::run_trials(antennas, budget, sigma_m2, cfg.trials, cfg.seed, workers)?;
    Ok((report, run))
}

/// Correlated channel grid of the scenario as trace CSV.
pub fn trace(cfg: &ScenarioConfig) -> CliResult<String> {
    let t = sample_correlated_grid(&cfg.model()?, &cfg.grid()?, cfg.antennas()?, cfg.seed)?;
    Ok(trace_csv(&t))
}

pub fn estimate(trace_path: &Path, max_lag_f: usize, max_lag_t: usize) -> CliResult<String> {
    let t = read_trace(trace_path)?;
    Ok(correlation_csv(&estimate_correlation(
        &t, max_lag_f, max_lag_t,
    )?))
}
