//! Deterministic multi-threaded drivers.
//!
//! Work items are split into contiguous index ranges, one per worker, and
//! the results are concatenated back in index order before any reduction.
//! Output therefore does not depend on the worker count.

use std::num::NonZeroUsize;
use std::thread;

use subgroup_core::capacity::{AntennaConfig, LinkBudget};
use subgroup_core::channel::CorrelationModel;
use subgroup_core::grouping::GridSpec;
use subgroup_core::sim::{
    aggregate_trials, capacity_trial_sample, Algorithm1, Algorithm1Report, TrialReport, MIN_TRIALS,
};
use subgroup_core::{Error, Result};

pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// `f(0), …, f(len − 1)` on up to `workers` threads, in index order.
pub fn par_map<T, E, F>(len: usize, workers: usize, f: F) -> std::result::Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> std::result::Result<T, E> + Sync,
{
    let workers = workers.clamp(1, len.max(1));
    if workers == 1 {
        return (0..len).map(&f).collect();
    }
    let chunk = len.div_ceil(workers);
    let parts: Vec<std::result::Result<Vec<T>, E>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                let range = (w * chunk).min(len)..((w + 1) * chunk).min(len);
                s.spawn(move || range.map(f).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(len);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Parallel [`subgroup_core::sim::run_capacity_trial`].
pub fn run_trials(
    antennas: AntennaConfig,
    budget: LinkBudget,
    sigma_m2: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<TrialReport> {
    if trials < MIN_TRIALS {
        return Err(Error::Domain {
            what: "trial count",
            value: trials as f64,
        });
    }
    let samples = par_map(trials, workers, |i| {
        capacity_trial_sample(antennas, budget, sigma_m2, seed, i as u64)
    })?;
    aggregate_trials(&samples)
}

/// Parallel [`subgroup_core::sim::run_algorithm1`].
pub fn run_algorithm1(
    model: &CorrelationModel,
    grid: &GridSpec,
    antennas: AntennaConfig,
    budget: LinkBudget,
    zeta_r: f64,
    seed: u64,
    workers: usize,
) -> Result<Algorithm1Report> {
    let run = Algorithm1::prepare(model, grid, antennas, budget, zeta_r, seed)?;
    let rates = par_map(grid.len(), workers, |i| run.assess(i))?;
    run.finish(rates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order() {
        for w in [1, 2, 3, 8, 100] {
            let v: Vec<usize> = par_map(37, w, |i| Ok::<_, ()>(i * i)).unwrap();
            assert_eq!(v, (0..37).map(|i| i * i).collect::<Vec<_>>());
        }
        let empty: Vec<usize> = par_map(0, 4, Ok::<_, ()>).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn par_map_reports_first_error() {
        let r: std::result::Result<Vec<usize>, usize> =
            par_map(50, 4, |i| if i % 20 == 19 { Err(i) } else { Ok(i) });
        assert_eq!(r.unwrap_err(), 19);
    }
}
