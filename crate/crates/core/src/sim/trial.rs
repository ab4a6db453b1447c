use alloc::vec::Vec;

use super::channel::{iid_with, offset_with};
use super::rng::{pairwise_sum, SubstreamRng};
use crate::capacity::{
    capacity_lower_bound, esnr, instantaneous_capacity, AntennaConfig, LinkBudget,
};
use crate::error::{domain, Result};

/// Smallest trial count accepted by [`run_capacity_trial`].
pub const MIN_TRIALS: usize = 100;

/// Outcome of one paired trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSample {
    /// `log2 det(I + γ S)` of the offset channel.
    pub capacity: f64,
    /// Mismatch lower bound of the same channel at `γ_e`.
    pub bound: f64,
    /// Mean `|H − H_c|²` over the matrix entries.
    pub mismatch_power: f64,
}

/// Aggregated Monte Carlo statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialReport {
    pub mean_capacity_center: f64,
    pub mean_capacity_bound: f64,
    pub empirical_sigma_m2: f64,
    pub trials: usize,
    pub std_err_center: f64,
    pub std_err_bound: f64,
    /// Trials where the bound exceeded the capacity.
    pub violations: usize,
}

/// Trial `index`: draw `H_c`, offset it at `ρ = 1 − σ_m²/2` and evaluate
/// both capacities on the offset channel.
pub fn capacity_trial_sample(
    antennas: AntennaConfig,
    budget: LinkBudget,
    sigma_m2: f64,
    seed: u64,
    index: u64,
) -> Result<TrialSample> {
    let gamma_e = esnr(budget, antennas, sigma_m2)?;
    let mut rng = SubstreamRng::new(seed, index);
    let center = iid_with(antennas, &mut rng);
    let h = offset_with(&center, 1.0 - sigma_m2 / 2.0, &mut rng)?;
    let diff: Vec<f64> = h
        .entries()
        .as_slice()
        .iter()
        .zip(center.entries().as_slice())
        .map(|(a, b)| (a - b).norm_sqr())
        .collect();
    Ok(TrialSample {
        capacity: instantaneous_capacity(h.entries(), budget.gamma())?,
        bound: capacity_lower_bound(h.entries(), gamma_e)?,
        mismatch_power: pairwise_sum(&diff) / diff.len() as f64,
    })
}

fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, libm::sqrt(var / n))
}

/// Summarizes samples given in trial-index order.
pub fn aggregate_trials(samples: &[TrialSample]) -> Result<TrialReport> {
    if samples.is_empty() {
        return Err(domain("trial count", 0.0));
    }
    let cap: Vec<f64> = samples.iter().map(|s| s.capacity).collect();
    let bound: Vec<f64> = samples.iter().map(|s| s.bound).collect();
    let mis: Vec<f64> = samples.iter().map(|s| s.mismatch_power).collect();
    let (mean_capacity_center, std_err_center) = mean_and_std_err(&cap);
    let (mean_capacity_bound, std_err_bound) = mean_and_std_err(&bound);
    Ok(TrialReport {
        mean_capacity_center,
        mean_capacity_bound,
        empirical_sigma_m2: pairwise_sum(&mis) / mis.len() as f64,
        trials: samples.len(),
        std_err_center,
        std_err_bound,
        violations: samples.iter().filter(|s| s.bound > s.capacity).count(),
    })
}

/// Runs `trials` paired trials sequentially.
pub fn run_capacity_trial(
    antennas: AntennaConfig,
    budget: LinkBudget,
    sigma_m2: f64,
    trials: usize,
    seed: u64,
) -> Result<TrialReport> {
    if trials < MIN_TRIALS {
        return Err(domain("trial count", trials as f64));
    }
    let samples = (0..trials as u64)
        .map(|i| capacity_trial_sample(antennas, budget, sigma_m2, seed, i))
        .collect::<Result<Vec<_>>>()?;
    aggregate_trials(&samples)
}
