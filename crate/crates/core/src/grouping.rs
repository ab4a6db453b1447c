//! Subcarrier grouping: from a loss threshold to a correlation threshold,
//! rhombus dimensions, group size and a full time-frequency tiling.
//!
//! Grid points are addressed as `(n, k)`: OFDM block `n` and subcarrier `k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::capacity::{sigma_m_from_loss, AntennaConfig, LinkBudget, MismatchSolution};
use crate::channel::{
    combined_correlation, inverse_freq_correlation, inverse_time_correlation, CorrelationModel,
};
use crate::error::{domain, Axis, Error, Result};

/// Slack allowed when comparing a correlation against the threshold.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// OFDM time-frequency resource grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    k_subcarriers: usize,
    m_blocks: usize,
    bf_hz: f64,
    bt_s: f64,
}

impl GridSpec {
    /// Default subcarrier spacing, Hz.
    pub const DEFAULT_BF_HZ: f64 = 14_000.0;
    /// Default OFDM block interval, s.
    pub const DEFAULT_BT_S: f64 = 7.1e-5;

    pub fn new(k_subcarriers: usize, m_blocks: usize, bf_hz: f64, bt_s: f64) -> Result<Self> {
        if k_subcarriers == 0 {
            return Err(domain("subcarrier count", 0.0));
        }
        if m_blocks == 0 {
            return Err(domain("block count", 0.0));
        }
        if !(bf_hz > 0.0) || !bf_hz.is_finite() {
            return Err(domain("subcarrier spacing", bf_hz));
        }
        if !(bt_s > 0.0) || !bt_s.is_finite() {
            return Err(domain("block interval", bt_s));
        }
        Ok(Self {
            k_subcarriers,
            m_blocks,
            bf_hz,
            bt_s,
        })
    }

    /// Grid with the default 14 kHz / 71 µs spacing.
    pub fn with_default_spacing(k_subcarriers: usize, m_blocks: usize) -> Result<Self> {
        Self::new(
            k_subcarriers,
            m_blocks,
            Self::DEFAULT_BF_HZ,
            Self::DEFAULT_BT_S,
        )
    }

    pub fn k_subcarriers(&self) -> usize {
        self.k_subcarriers
    }

    pub fn m_blocks(&self) -> usize {
        self.m_blocks
    }

    pub fn bf_hz(&self) -> f64 {
        self.bf_hz
    }

    pub fn bt_s(&self) -> f64 {
        self.bt_s
    }

    pub fn len(&self) -> usize {
        self.k_subcarriers * self.m_blocks
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index of `(n, k)`.
    pub fn index(&self, n: usize, k: usize) -> usize {
        n * self.k_subcarriers + k
    }

    /// Inverse of [`GridSpec::index`].
    pub fn point(&self, idx: usize) -> (usize, usize) {
        (idx / self.k_subcarriers, idx % self.k_subcarriers)
    }
}

/// `β = (2 − σ_m²) / 2`.
pub fn correlation_threshold(sigma_m2: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&sigma_m2) {
        return Err(domain("mismatch variance", sigma_m2));
    }
    Ok((2.0 - sigma_m2) / 2.0)
}

/// Whether `(n, k)` may share the precoder of center `(n_c, k_c)`.
#[allow(clippy::too_many_arguments)]
pub fn membership_check(
    model: &CorrelationModel,
    grid: &GridSpec,
    n: usize,
    k: usize,
    n_c: usize,
    k_c: usize,
    beta: f64,
) -> bool {
    let df = k.abs_diff(k_c) as f64 * grid.bf_hz();
    let dt = n.abs_diff(n_c) as f64 * grid.bt_s();
    combined_correlation(model, df, dt) >= beta - MEMBERSHIP_TOLERANCE
}

/// Rhombus dimensions for a correlation threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupDimensions {
    /// `R_f⁻¹(β)` in Hz; infinite when the frequency coherence is unbounded.
    pub df_star: f64,
    /// `R_t⁻¹(β)` in s; infinite when the time coherence is unbounded.
    pub dt_star: f64,
    pub s_f: usize,
    pub s_t: usize,
    pub unbounded_f: bool,
    pub unbounded_t: bool,
}

fn stages(extent_star: f64, spacing: f64, cap: usize) -> usize {
    if !extent_star.is_finite() {
        return cap;
    }
    let s = libm::floor(2.0 * extent_star / spacing);
    if s >= cap as f64 {
        cap
    } else {
        (s as usize).max(1)
    }
}

/// Inverts both marginals at `beta` and floors the rhombus diagonals against
/// the grid spacings. Stage counts are capped at the grid extent and are at
/// least one. `beta ≤ 0` saturates both axes.
pub fn group_dimensions(
    model: &CorrelationModel,
    grid: &GridSpec,
    beta: f64,
) -> Result<GroupDimensions> {
    if beta.is_nan() || beta > 1.0 {
        return Err(domain("correlation threshold", beta));
    }
    let invert = |axis: Axis| -> Result<(f64, bool)> {
        if beta <= 0.0 {
            return Ok((f64::INFINITY, true));
        }
        let r = match axis {
            Axis::Frequency => inverse_freq_correlation(&model.profile, beta),
            Axis::Time => inverse_time_correlation(&model.doppler, beta),
        };
        match r {
            Ok(x) => Ok((x, false)),
            Err(Error::UnboundedCoherence { .. }) => Ok((f64::INFINITY, true)),
            Err(e) => Err(e),
        }
    };
    let (df_star, unbounded_f) = invert(Axis::Frequency)?;
    let (dt_star, unbounded_t) = invert(Axis::Time)?;
    Ok(GroupDimensions {
        df_star,
        dt_star,
        s_f: stages(df_star, grid.bf_hz(), grid.k_subcarriers()),
        s_t: stages(dt_star, grid.bt_s(), grid.m_blocks()),
        unbounded_f,
        unbounded_t,
    })
}

/// `S = max(1, ⌊s_f · s_t / 2⌋)`, the rhombus area in grid cells.
pub fn group_size(s_f: usize, s_t: usize) -> usize {
    (s_f * s_t / 2).max(1)
}

/// Partition of the grid into groups with one center each.
#[derive(Debug, Clone, PartialEq)]
pub struct Tiling {
    /// Group centers `(n_c, k_c)`, sorted lexicographically; index = group id.
    pub centers: Vec<(usize, usize)>,
    /// Group id of every grid point, indexed by [`GridSpec::index`].
    pub membership: Vec<usize>,
}

impl Tiling {
    pub fn group_count(&self) -> usize {
        self.centers.len()
    }

    /// Number of points in each group.
    pub fn populations(&self) -> Vec<usize> {
        let mut pop = vec![0; self.centers.len()];
        for &g in &self.membership {
            pop[g] += 1;
        }
        pop
    }
}

/// Rhombic center lattice with integer half-diagonals `a` (blocks) and `b`
/// (subcarriers).
///
/// With both half-diagonals positive, centers sit at
/// `(2a·i + a·(j mod 2), b·j)` and the rhombi `|Δn|/a + |Δk|/b ≤ 1` tile the
/// plane. A zero half-diagonal collapses the rhombus to a segment along the
/// other axis, and centers are spaced `2b + 1` (or `2a + 1`) apart.
#[derive(Debug, Clone, Copy)]
struct Lattice {
    a: i64,
    b: i64,
}

impl Lattice {
    /// Scaled L1 distance `|Δn|·b + |Δk|·a`, or `None` off a collapsed axis.
    fn distance(&self, dn: i64, dk: i64) -> Option<i64> {
        let (dn, dk) = (dn.abs(), dk.abs());
        match (self.a, self.b) {
            (0, 0) => (dn == 0 && dk == 0).then_some(0),
            (0, _) => (dn == 0).then_some(dk),
            (_, 0) => (dk == 0).then_some(dn),
            (a, b) => Some(dn * b + dk * a),
        }
    }

    /// Half-diagonal window that must contain the nearest center.
    fn reach(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    /// Nearest lattice center of `(n, k)`; ties go to the lexicographically
    /// smallest center.
    fn nearest(&self, n: i64, k: i64) -> (i64, i64) {
        let (a, b) = (self.a, self.b);
        match (a, b) {
            (0, 0) => (n, k),
            (0, _) => {
                let p = 2 * b + 1;
                (n, (k + b).div_euclid(p) * p)
            }
            (_, 0) => {
                let p = 2 * a + 1;
                ((n + a).div_euclid(p) * p, k)
            }
            _ => {
                let mut best: Option<(i64, (i64, i64))> = None;
                let j0 = k.div_euclid(b);
                for j in (j0 - 1)..=(j0 + 1) {
                    let offset = a * j.rem_euclid(2);
                    let i0 = (n - offset).div_euclid(2 * a);
                    for i in (i0 - 1)..=(i0 + 1) {
                        let c = (2 * a * i + offset, b * j);
                        let d = self
                            .distance(n - c.0, k - c.1)
                            .expect("both half-diagonals positive");
                        let better = match best {
                            None => true,
                            Some((bd, bc)) => d < bd || (d == bd && c < bc),
                        };
                        if better {
                            best = Some((d, c));
                        }
                    }
                }
                best.expect("candidates are non-empty").1
            }
        }
    }
}

/// Tiles the grid with rhombi of `s_f` frequency stages and `s_t` time
/// stages.
///
/// Every point first finds its nearest center on the unbounded lattice.
/// Centers that fall outside the grid are clamped to the border, giving
/// truncated edge groups; points are then reassigned to the nearest of the
/// resulting in-grid centers, so each center belongs to its own group and no
/// point is farther (in scaled L1) from its center than from its original
/// lattice center.
pub fn tile_with_stages(grid: &GridSpec, s_f: usize, s_t: usize) -> Tiling {
    let lattice = Lattice {
        a: (s_t / 2) as i64,
        b: (s_f / 2) as i64,
    };
    let m = grid.m_blocks() as i64;
    let k_len = grid.k_subcarriers() as i64;

    let mut slot: Vec<Option<usize>> = vec![None; grid.len()];
    let mut centers: Vec<(usize, usize)> = Vec::new();
    for n in 0..m {
        for k in 0..k_len {
            let (cn, ck) = lattice.nearest(n, k);
            let c = (cn.clamp(0, m - 1) as usize, ck.clamp(0, k_len - 1) as usize);
            let idx = grid.index(c.0, c.1);
            if slot[idx].is_none() {
                slot[idx] = Some(0);
                centers.push(c);
            }
        }
    }
    centers.sort_unstable();
    for (g, c) in centers.iter().enumerate() {
        slot[grid.index(c.0, c.1)] = Some(g);
    }

    let (reach_n, reach_k) = lattice.reach();
    let mut membership = vec![0; grid.len()];
    for n in 0..m {
        for k in 0..k_len {
            let mut best: Option<(i64, usize)> = None;
            let n_lo = (n - reach_n).max(0);
            let n_hi = (n + reach_n).min(m - 1);
            let k_lo = (k - reach_k).max(0);
            let k_hi = (k + reach_k).min(k_len - 1);
            // Lexicographic scan order makes the first minimum the smallest center.
            for cn in n_lo..=n_hi {
                for ck in k_lo..=k_hi {
                    let Some(g) = slot[grid.index(cn as usize, ck as usize)] else {
                        continue;
                    };
                    let Some(d) = lattice.distance(n - cn, k - ck) else {
                        continue;
                    };
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, g));
                    }
                }
            }
            let (_, g) = best.expect("the clamped lattice center lies within reach");
            membership[grid.index(n as usize, k as usize)] = g;
        }
    }

    Tiling {
        centers,
        membership,
    }
}

/// One group covering the whole grid, centered in the middle.
fn whole_grid(grid: &GridSpec) -> Tiling {
    Tiling {
        centers: vec![((grid.m_blocks() - 1) / 2, (grid.k_subcarriers() - 1) / 2)],
        membership: vec![0; grid.len()],
    }
}

/// Tiles with the plan's rhombus, where an unbounded axis stretches the
/// rhombus into a strip spanning that whole axis.
pub fn tile_dimensions(grid: &GridSpec, dims: &GroupDimensions) -> Tiling {
    let (k_len, m_len) = (grid.k_subcarriers(), grid.m_blocks());
    match (dims.unbounded_f, dims.unbounded_t) {
        (true, true) => whole_grid(grid),
        (true, false) => {
            let line = GridSpec::new(1, m_len, grid.bf_hz(), grid.bt_s())
                .expect("sub-grid of a valid grid");
            let t = tile_with_stages(&line, 1, dims.s_t);
            let mid_k = (k_len - 1) / 2;
            Tiling {
                centers: t.centers.iter().map(|&(n, _)| (n, mid_k)).collect(),
                membership: (0..grid.len())
                    .map(|idx| t.membership[grid.point(idx).0])
                    .collect(),
            }
        }
        (false, true) => {
            let line = GridSpec::new(k_len, 1, grid.bf_hz(), grid.bt_s())
                .expect("sub-grid of a valid grid");
            let t = tile_with_stages(&line, dims.s_f, 1);
            let mid_n = (m_len - 1) / 2;
            Tiling {
                centers: t.centers.iter().map(|&(_, k)| (mid_n, k)).collect(),
                membership: (0..grid.len())
                    .map(|idx| t.membership[grid.point(idx).1])
                    .collect(),
            }
        }
        (false, false) => tile_with_stages(grid, dims.s_f, dims.s_t),
    }
}

/// Complete grouping plan.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupingPlan {
    pub grid: GridSpec,
    pub zeta_r: f64,
    pub solution: MismatchSolution,
    pub sigma_m2_star: f64,
    pub beta: f64,
    pub df_star: f64,
    pub dt_star: f64,
    pub s_f: usize,
    pub s_t: usize,
    pub group_size: usize,
    pub unbounded_f: bool,
    pub unbounded_t: bool,
    pub tiling: Tiling,
}

impl GroupingPlan {
    pub fn centers(&self) -> &[(usize, usize)] {
        &self.tiling.centers
    }

    pub fn group_count(&self) -> usize {
        self.tiling.group_count()
    }

    /// Group id of `(n, k)`.
    pub fn group_of(&self, n: usize, k: usize) -> usize {
        self.tiling.membership[self.grid.index(n, k)]
    }

    /// Center of the group containing `(n, k)`.
    pub fn center_of(&self, n: usize, k: usize) -> (usize, usize) {
        self.tiling.centers[self.group_of(n, k)]
    }

    /// Points whose correlation with their center is below `beta` (after
    /// tolerance). Empty for a valid plan.
    pub fn membership_violations(&self, model: &CorrelationModel) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for idx in 0..self.grid.len() {
            let (n, k) = self.grid.point(idx);
            let (nc, kc) = self.center_of(n, k);
            if !membership_check(model, &self.grid, n, k, nc, kc, self.beta) {
                bad.push((n, k));
            }
        }
        bad
    }
}

/// Builds the plan: loss threshold → admissible mismatch → correlation
/// threshold → rhombus dimensions → tiling.
///
/// A threshold at or below the zero-mismatch loss floor gives single-point
/// groups; a threshold at or above the full-decorrelation loss gives one
/// group spanning the grid.
pub fn tile_plan(
    model: &CorrelationModel,
    grid: &GridSpec,
    zeta_r: f64,
    antennas: AntennaConfig,
    budget: LinkBudget,
) -> Result<GroupingPlan> {
    let sizing = plan_dimensions(model, grid, zeta_r, antennas, budget)?;
    let dims = sizing.dims;
    let tiling = match sizing.solution {
        MismatchSolution::Saturated { .. } => whole_grid(grid),
        _ => tile_dimensions(grid, &dims),
    };
    Ok(GroupingPlan {
        grid: *grid,
        zeta_r,
        solution: sizing.solution,
        sigma_m2_star: sizing.solution.sigma_m2(),
        beta: sizing.beta,
        df_star: dims.df_star,
        dt_star: dims.dt_star,
        s_f: dims.s_f,
        s_t: dims.s_t,
        group_size: group_size(dims.s_f, dims.s_t),
        unbounded_f: dims.unbounded_f,
        unbounded_t: dims.unbounded_t,
        tiling,
    })
}

/// Threshold chain of a plan without the tiling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSizing {
    pub solution: MismatchSolution,
    pub beta: f64,
    pub dims: GroupDimensions,
}

impl PlanSizing {
    pub fn group_size(&self) -> usize {
        group_size(self.dims.s_f, self.dims.s_t)
    }
}

/// Loss threshold → `σ_m²*` → `β` → stage counts.
pub fn plan_dimensions(
    model: &CorrelationModel,
    grid: &GridSpec,
    zeta_r: f64,
    antennas: AntennaConfig,
    budget: LinkBudget,
) -> Result<PlanSizing> {
    let solution = sigma_m_from_loss(antennas, budget, zeta_r)?;
    let beta = correlation_threshold(solution.sigma_m2())?;
    let dims = match solution {
        MismatchSolution::Saturated { .. } => GroupDimensions {
            df_star: f64::INFINITY,
            dt_star: f64::INFINITY,
            s_f: grid.k_subcarriers(),
            s_t: grid.m_blocks(),
            unbounded_f: true,
            unbounded_t: true,
        },
        _ => group_dimensions(model, grid, beta)?,
    };
    Ok(PlanSizing {
        solution,
        beta,
        dims,
    })
}

/// Precoding and correlation-estimation cost proxies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complexity {
    /// `(K·M_t/S)·v³ + K²·M_t + M_t²`.
    pub total_ops: f64,
    /// `v³/S + K + M_t/K`.
    pub per_subcarrier_ops: f64,
}

pub fn complexity_estimate(
    grid: &GridSpec,
    group_size: usize,
    antennas: AntennaConfig,
) -> Result<Complexity> {
    if group_size == 0 {
        return Err(domain("group size", 0.0));
    }
    let k = grid.k_subcarriers() as f64;
    let m = grid.m_blocks() as f64;
    let s = group_size as f64;
    let v = antennas.v() as f64;
    let v3 = v * v * v;
    Ok(Complexity {
        total_ops: k * m / s * v3 + k * k * m + m * m,
        per_subcarrier_ops: v3 / s + k + m / k,
    })
}
