use alloc::vec::Vec;

use super::channel::{sample_correlated_grid, ChannelTrace};
use super::precode::{precoder_from_channel, Precoder};
use super::rng::pairwise_sum;
use crate::capacity::{
    capacity_lower_bound, esnr_from_gamma, instantaneous_capacity, AntennaConfig, LinkBudget,
};
use crate::channel::{combined_correlation, CorrelationModel};
use crate::error::{Error, Result};
use crate::grouping::{tile_plan, GridSpec, GroupingPlan};
use crate::linalg::CMatrix;

/// Rate decision for one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub k: usize,
    pub group_id: usize,
    /// Statistical mismatch `2(1 − R)` at the lag to the center.
    pub sigma_m2: f64,
    pub gamma_e: f64,
    /// Assigned rate: center capacity evaluated at `γ_e`.
    pub rate_bits: f64,
    /// Capacity of the point's own channel at `γ`.
    pub realized_bits: f64,
    /// `1 − rate / center rate`.
    pub relative_deficit: f64,
}

/// Rate map plus diagnostics of one grouping run.
#[derive(Debug, Clone, PartialEq)]
pub struct Algorithm1Report {
    pub plan: GroupingPlan,
    /// One entry per grid point, in [`GridSpec::index`] order.
    pub rates: Vec<RatePoint>,
    /// Center rate of each group (capacity at `γ`).
    pub center_rates: Vec<f64>,
    /// Fraction of points whose realized capacity is below the assigned rate.
    pub outage_fraction: f64,
    /// Average over groups of the mean member deficit.
    pub mean_group_deficit: f64,
    /// Average over groups of the largest member deficit.
    pub mean_worst_deficit: f64,
    /// Centers whose precoder had to be completed with null-space columns.
    pub rank_deficient_centers: usize,
}

/// Relative slack below which a realized rate still counts as supported.
pub const OUTAGE_TOLERANCE: f64 = 1e-9;

/// Prepared grouping run: plan, channel grid and center precoders.
///
/// [`Algorithm1::assess`] is independent per point, so callers may evaluate
/// points in any order or in parallel and hand the results to
/// [`Algorithm1::finish`].
#[derive(Debug, Clone)]
pub struct Algorithm1 {
    pub model: CorrelationModel,
    pub antennas: AntennaConfig,
    pub budget: LinkBudget,
    pub plan: GroupingPlan,
    pub trace: ChannelTrace,
    pub precoders: Vec<Precoder>,
    /// `H_c · F` for each center.
    effective: Vec<CMatrix>,
    center_rates: Vec<f64>,
}

impl Algorithm1 {
    pub fn prepare(
        model: &CorrelationModel,
        grid: &GridSpec,
        antennas: AntennaConfig,
        budget: LinkBudget,
        zeta_r: f64,
        seed: u64,
    ) -> Result<Self> {
        let plan = tile_plan(model, grid, zeta_r, antennas, budget)?;
        let trace = sample_correlated_grid(model, grid, antennas, seed)?;
        Self::with_trace(model, antennas, budget, plan, trace)
    }

    /// Uses a given plan and trace, e.g. to swap in another precoder.
    pub fn with_trace(
        model: &CorrelationModel,
        antennas: AntennaConfig,
        budget: LinkBudget,
        plan: GroupingPlan,
        trace: ChannelTrace,
    ) -> Result<Self> {
        if trace.grid() != &plan.grid {
            return Err(Error::Dimension("trace and plan grids differ"));
        }
        let mut precoders = Vec::with_capacity(plan.group_count());
        let mut effective = Vec::with_capacity(plan.group_count());
        let mut center_rates = Vec::with_capacity(plan.group_count());
        for &(n, k) in plan.centers() {
            let h = trace.at(n, k);
            let p = precoder_from_channel(h)?;
            let hf = h.entries().matmul(&p.f)?;
            center_rates.push(capacity_lower_bound(&hf, budget.gamma())?);
            effective.push(hf);
            precoders.push(p);
        }
        Ok(Self {
            model: model.clone(),
            antennas,
            budget,
            plan,
            trace,
            precoders,
            effective,
            center_rates,
        })
    }

    /// Replaces the precoder of group `g` by any `n_t × n_t` matrix.
    pub fn override_precoder(&mut self, g: usize, f: CMatrix) -> Result<()> {
        let (n, k) = self.plan.centers()[g];
        self.effective[g] = self.trace.at(n, k).entries().matmul(&f)?;
        self.precoders[g].f = f;
        Ok(())
    }

    /// Rate decision for grid point `idx`.
    pub fn assess(&self, idx: usize) -> Result<RatePoint> {
        let grid = &self.plan.grid;
        let (n, k) = grid.point(idx);
        let g = self.plan.group_of(n, k);
        let (nc, kc) = self.plan.centers()[g];
        let corr = combined_correlation(
            &self.model,
            k.abs_diff(kc) as f64 * grid.bf_hz(),
            n.abs_diff(nc) as f64 * grid.bt_s(),
        );
        let sigma_m2 = (2.0 * (1.0 - corr)).clamp(0.0, 2.0);
        let gamma_e = esnr_from_gamma(self.budget.gamma(), self.antennas, sigma_m2)?;
        let rate_bits = capacity_lower_bound(&self.effective[g], gamma_e)?;
        let realized_bits =
            instantaneous_capacity(self.trace.at(n, k).entries(), self.budget.gamma())?;
        let center = self.center_rates[g];
        let relative_deficit = if center > 0.0 {
            1.0 - rate_bits / center
        } else {
            0.0
        };
        Ok(RatePoint {
            n,
            k,
            group_id: g,
            sigma_m2,
            gamma_e,
            rate_bits,
            realized_bits,
            relative_deficit,
        })
    }

    /// Collects per-point results given in index order.
    pub fn finish(self, rates: Vec<RatePoint>) -> Result<Algorithm1Report> {
        if rates.len() != self.plan.grid.len() {
            return Err(Error::Dimension("one rate decision per grid point"));
        }
        let groups = self.plan.group_count();
        let mut members: Vec<Vec<f64>> = (0..groups).map(|_| Vec::new()).collect();
        for r in &rates {
            members[r.group_id].push(r.relative_deficit);
        }
        let group_means: Vec<f64> = members
            .iter()
            .map(|m| pairwise_sum(m) / m.len() as f64)
            .collect();
        let group_worst: Vec<f64> = members
            .iter()
            .map(|m| m.iter().copied().fold(0.0, f64::max))
            .collect();
        let outages = rates
            .iter()
            .filter(|r| r.realized_bits < r.rate_bits - OUTAGE_TOLERANCE * r.rate_bits.max(1.0))
            .count();
        Ok(Algorithm1Report {
            outage_fraction: outages as f64 / rates.len() as f64,
            mean_group_deficit: pairwise_sum(&group_means) / groups as f64,
            mean_worst_deficit: pairwise_sum(&group_worst) / groups as f64,
            rank_deficient_centers: self.precoders.iter().filter(|p| p.rank_deficient).count(),
            center_rates: self.center_rates,
            plan: self.plan,
            rates,
        })
    }
}

/// Plans the grid, samples a correlated channel and assigns every point the
/// center capacity at its mismatch-reduced SNR.
pub fn run_algorithm1(
    model: &CorrelationModel,
    grid: &GridSpec,
    antennas: AntennaConfig,
    budget: LinkBudget,
    zeta_r: f64,
    seed: u64,
) -> Result<Algorithm1Report> {
    let run = Algorithm1::prepare(model, grid, antennas, budget, zeta_r, seed)?;
    let rates = (0..grid.len())
        .map(|i| run.assess(i))
        .collect::<Result<Vec<_>>>()?;
    run.finish(rates)
}
