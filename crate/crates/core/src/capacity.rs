//! Closed-form capacity quantities for i.i.d. Rayleigh MIMO subcarriers:
//! log-det capacity, equivalent SNR under CSI mismatch, the ergodic capacity
//! sandwich, absolute and relative ergodic loss, loss-threshold inversion,
//! the many-antenna limit and the interference/noise balance point.
//!
//! Channel entries are unit-variance complex Gaussian and the noise variance
//! is 1, so SNRs are plain linear ratios.

use core::f64::consts::LN_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::linalg::{hermitian_logdet, CMatrix};
use crate::special::{bisect, digamma_int};

/// Transmit/receive antenna counts. `u = max`, `v = min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaConfig {
    n_t: usize,
    n_r: usize,
}

impl AntennaConfig {
    pub fn new(n_t: usize, n_r: usize) -> Result<Self> {
        if n_t == 0 || n_r == 0 {
            return Err(domain("antenna count", 0.0));
        }
        Ok(Self { n_t, n_r })
    }

    /// `n × n` array.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn u(&self) -> usize {
        self.n_t.max(self.n_r)
    }

    pub fn v(&self) -> usize {
        self.n_t.min(self.n_r)
    }
}

/// Total transmit power split equally over the transmit antennas; unit noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    rho_t: f64,
    gamma: f64,
}

impl LinkBudget {
    pub const NOISE_VARIANCE: f64 = 1.0;

    /// From total transmit power.
    pub fn from_total_power(rho_t: f64, antennas: AntennaConfig) -> Result<Self> {
        if !(rho_t > 0.0) || !rho_t.is_finite() {
            return Err(domain("total transmit power", rho_t));
        }
        Ok(Self {
            rho_t,
            gamma: rho_t / antennas.n_t() as f64,
        })
    }

    /// From per-antenna SNR `γ`; `ρ_t = γ · n_t`.
    pub fn from_per_antenna_snr(gamma: f64, antennas: AntennaConfig) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(domain("per-antenna SNR", gamma));
        }
        Ok(Self {
            rho_t: gamma * antennas.n_t() as f64,
            gamma,
        })
    }

    pub fn rho_t(&self) -> f64 {
        self.rho_t
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Mismatch second moment and the resulting equivalent SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MismatchStat {
    pub sigma_m2: f64,
    pub gamma_e: f64,
}

impl MismatchStat {
    pub fn new(gamma: f64, antennas: AntennaConfig, sigma_m2: f64) -> Result<Self> {
        Ok(Self {
            sigma_m2,
            gamma_e: esnr_from_gamma(gamma, antennas, sigma_m2)?,
        })
    }
}

/// Ergodic loss between the center (upper bound at `γ`) and an offset point
/// (lower bound at `γ_e`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    pub upper_center: f64,
    pub lower_offset: f64,
    pub abs_loss: f64,
    pub rel_loss: f64,
}

fn check_sigma_m2(sigma_m2: f64) -> Result<()> {
    if (0.0..=2.0).contains(&sigma_m2) {
        Ok(())
    } else {
        Err(domain("mismatch variance", sigma_m2))
    }
}

/// Equivalent SNR `γ / (v σ_m² γ + 1)` with the mismatch treated as Gaussian
/// interference.
pub fn esnr(budget: LinkBudget, antennas: AntennaConfig, sigma_m2: f64) -> Result<f64> {
    esnr_from_gamma(budget.gamma(), antennas, sigma_m2)
}

pub fn esnr_from_gamma(gamma: f64, antennas: AntennaConfig, sigma_m2: f64) -> Result<f64> {
    check_sigma_m2(sigma_m2)?;
    let interference = antennas.v() as f64 * sigma_m2 * gamma;
    Ok(gamma / (interference + LinkBudget::NOISE_VARIANCE))
}

/// `α_k(γ) = γ^k · v(v−1)…(v−k+1) / k!`, accumulated factor by factor.
pub fn alpha_k(gamma: f64, antennas: AntennaConfig, k: usize) -> Result<f64> {
    let v = antennas.v();
    if k < 1 || k > v {
        return Err(domain("alpha index", k as f64));
    }
    let mut a = 1.0;
    for i in 1..=k {
        a *= gamma * (v - i + 1) as f64 / i as f64;
    }
    Ok(a)
}

/// `log2(1 + Σ_k exp(log_terms[k]))` without overflow.
fn log2_one_plus_exp_sum(log_terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = log_terms.clone().fold(0.0, f64::max);
    if m == 0.0 {
        let s: f64 = log_terms.map(f64::exp).sum();
        return s.ln_1p() / LN_2;
    }
    let s: f64 = (-m).exp() + log_terms.map(|l| (l - m).exp()).sum::<f64>();
    (m + s.ln()) / LN_2
}

/// Natural logs of `α_k(γ)` for `k = 1..=v`.
fn log_alphas(gamma: f64, v: usize) -> impl Iterator<Item = f64> + Clone {
    let lg = gamma.ln();
    (1..=v).scan(0.0, move |acc, k| {
        *acc += lg + ((v - k + 1) as f64).ln() - (k as f64).ln();
        Some(*acc)
    })
}

/// Upper bound on the ergodic log-det capacity of an i.i.d. unit-variance
/// Rayleigh channel: `log2(1 + Σ_{k=1}^{v} α_k(γ) · u!/(u−k)!)`.
///
/// `u!/(u−k)!` is `E det` of a `k × k` principal minor of the Wishart Gram
/// matrix, so the sum is exactly `E det(I + γS)` and Jensen makes its log an
/// upper bound.
pub fn ergodic_capacity_upper(antennas: AntennaConfig, gamma: f64) -> f64 {
    let u = antennas.u();
    let falling = (0..antennas.v()).scan(0.0, move |acc, i| {
        *acc += ((u - i) as f64).ln();
        Some(*acc)
    });
    let terms: alloc::vec::Vec<f64> = log_alphas(gamma, antennas.v())
        .zip(falling)
        .map(|(a, f)| a + f)
        .collect();
    log2_one_plus_exp_sum(terms.iter().copied())
}

/// Lower bound on the ergodic log-det capacity:
/// `log2(1 + Σ_{k=1}^{v} α_k(γ) · exp(Σ_{i=0}^{k−1} ψ(u−i)))`.
pub fn ergodic_capacity_lower(antennas: AntennaConfig, gamma: f64) -> f64 {
    let u = antennas.u();
    let psi_sums = (0..antennas.v()).scan(0.0, move |acc, i| {
        *acc += digamma_int((u - i) as u32).expect("u - i >= 1");
        Some(*acc)
    });
    let terms: alloc::vec::Vec<f64> = log_alphas(gamma, antennas.v())
        .zip(psi_sums)
        .map(|(a, p)| a + p)
        .collect();
    log2_one_plus_exp_sum(terms.iter().copied())
}

/// Ergodic capacity loss of an offset point with ESNR `gamma_e` against its
/// group center at SNR `gamma`.
pub fn ergodic_loss(antennas: AntennaConfig, gamma: f64, gamma_e: f64) -> Result<LossReport> {
    if gamma_e > gamma {
        return Err(domain("equivalent SNR above nominal SNR", gamma_e));
    }
    if !(gamma_e >= 0.0) {
        return Err(domain("equivalent SNR", gamma_e));
    }
    let upper_center = ergodic_capacity_upper(antennas, gamma);
    let lower_offset = ergodic_capacity_lower(antennas, gamma_e);
    let rel_loss = if upper_center > 0.0 {
        1.0 - lower_offset / upper_center
    } else {
        0.0
    };
    Ok(LossReport {
        upper_center,
        lower_offset,
        abs_loss: upper_center - lower_offset,
        rel_loss,
    })
}

/// Relative ergodic loss as a function of the mismatch variance.
pub fn relative_loss_at(antennas: AntennaConfig, gamma: f64, sigma_m2: f64) -> Result<f64> {
    let gamma_e = esnr_from_gamma(gamma, antennas, sigma_m2)?;
    Ok(ergodic_loss(antennas, gamma, gamma_e)?.rel_loss)
}

/// Outcome of inverting a relative-loss threshold into a mismatch variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MismatchSolution {
    /// The threshold does not exceed the loss already present at zero
    /// mismatch: only zero mismatch is admissible (single-point groups).
    Degenerate { floor: f64 },
    /// Unique root in `(0, 2)`.
    Root(f64),
    /// The threshold is at or above the loss at full decorrelation
    /// (`σ_m² = 2`): coherence is effectively unbounded.
    Saturated { ceiling: f64 },
}

impl MismatchSolution {
    /// Admissible mismatch variance (0 for degenerate, 2 for saturated).
    pub fn sigma_m2(&self) -> f64 {
        match *self {
            MismatchSolution::Degenerate { .. } => 0.0,
            MismatchSolution::Root(s) => s,
            MismatchSolution::Saturated { .. } => 2.0,
        }
    }
}

const SIGMA_TOL: f64 = 1e-10;
const SIGMA_MAX_ITER: usize = 200;

/// Solves `1 − lower(γ_e(σ_m²)) / upper(γ) = ζ_r` for `σ_m²` by bisection.
/// The left side increases strictly with `σ_m²`, so the root is unique.
pub fn sigma_m_from_loss(
    antennas: AntennaConfig,
    budget: LinkBudget,
    zeta_r: f64,
) -> Result<MismatchSolution> {
    if zeta_r.is_nan() || zeta_r >= 1.0 {
        return Err(domain("relative loss threshold", zeta_r));
    }
    let gamma = budget.gamma();
    let floor = relative_loss_at(antennas, gamma, 0.0)?;
    if zeta_r <= 0.0 || zeta_r <= floor {
        return Ok(MismatchSolution::Degenerate { floor });
    }
    let ceiling = relative_loss_at(antennas, gamma, 2.0)?;
    if zeta_r >= ceiling {
        return Ok(MismatchSolution::Saturated { ceiling });
    }
    let root = bisect(
        |s| relative_loss_at(antennas, gamma, s).expect("s in [0, 2]") - zeta_r,
        0.0,
        2.0,
        SIGMA_TOL,
        SIGMA_MAX_ITER,
    )?;
    Ok(MismatchSolution::Root(root))
}

/// Limit of the relative loss as the array grows at fixed total power:
/// `1 − ln(1 + ρ_t/(ρ_t σ_m² + 1)) / ln(1 + ρ_t)`.
pub fn asymptotic_relative_loss(rho_t: f64, sigma_m2: f64) -> Result<f64> {
    check_sigma_m2(sigma_m2)?;
    if !(rho_t > 0.0) {
        return Err(domain("total transmit power", rho_t));
    }
    let offset = (rho_t / (rho_t * sigma_m2 + 1.0)).ln_1p();
    Ok(1.0 - offset / rho_t.ln_1p())
}

/// SNR at which mismatch interference `v σ_m² γ` equals the unit noise
/// power, i.e. `γ = 1/(v σ_m²)`.
///
/// Among the doubles nearest `1/(v σ_m²)` the one whose interference product
/// rounds to exactly 1 is returned, so that `esnr` there is exactly `γ/2`.
pub fn optimum_snr(antennas: AntennaConfig, sigma_m2: f64) -> Result<f64> {
    check_sigma_m2(sigma_m2)?;
    if sigma_m2 == 0.0 {
        return Err(domain("mismatch variance (optimum SNR unbounded)", 0.0));
    }
    let p = antennas.v() as f64 * sigma_m2;
    let gamma = 1.0 / p;
    let mut candidate = gamma;
    for _ in 0..4 {
        if p * candidate == 1.0 {
            return Ok(candidate);
        }
        candidate = if p * candidate > 1.0 {
            next_down(candidate)
        } else {
            next_up(candidate)
        };
    }
    Ok(gamma)
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

/// Gram matrix `S` of size `v × v`: `H H†` when `n_t ≥ n_r`, else `H† H`.
pub fn gram(h: &CMatrix) -> CMatrix {
    if h.cols() >= h.rows() {
        h.outer_gram()
    } else {
        h.inner_gram()
    }
}

/// `log2 det(I_v + γ S)` for an `n_r × n_t` channel matrix.
pub fn instantaneous_capacity(h: &CMatrix, gamma: f64) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(domain("SNR", gamma));
    }
    let s = gram(h);
    let n = s.rows();
    let a = CMatrix::from_fn(n, n, |i, j| {
        let scaled = s[(i, j)] * gamma;
        if i == j {
            scaled + Complex64::new(1.0, 0.0)
        } else {
            scaled
        }
    });
    Ok(hermitian_logdet(&a)? / LN_2)
}

/// Mismatch-robust capacity bound: the log-det capacity at `γ_e`.
pub fn capacity_lower_bound(h: &CMatrix, gamma_e: f64) -> Result<f64> {
    instantaneous_capacity(h, gamma_e)
}
