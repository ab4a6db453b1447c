use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::rng::SubstreamRng;
use crate::capacity::AntennaConfig;
use crate::channel::CorrelationModel;
use crate::error::{domain, Error, Result};
use crate::grouping::GridSpec;
use crate::linalg::{psd_factor, CMatrix};
use crate::special::bessel_j0;

/// Pivot cutoff for the per-axis correlation square roots.
const FACTOR_TOLERANCE: f64 = 1e-10;

/// `n_r × n_t` fading matrix tied to its antenna configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: CMatrix,
    dims: AntennaConfig,
}

impl ChannelMatrix {
    pub fn new(entries: CMatrix, dims: AntennaConfig) -> Result<Self> {
        if entries.rows() != dims.n_r() || entries.cols() != dims.n_t() {
            return Err(Error::Dimension("channel matrix must be n_r × n_t"));
        }
        if !entries.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries, dims })
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dims(&self) -> AntennaConfig {
        self.dims
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    fn draw(antennas: AntennaConfig, rng: &mut SubstreamRng) -> Self {
        let entries = CMatrix::from_fn(antennas.n_r(), antennas.n_t(), |_, _| rng.complex_normal());
        Self {
            entries,
            dims: antennas,
        }
    }
}

/// Channel matrices over every point of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrace {
    grid: GridSpec,
    antennas: AntennaConfig,
    samples: Vec<ChannelMatrix>,
}

impl ChannelTrace {
    /// `samples` are indexed by [`GridSpec::index`].
    pub fn new(
        grid: GridSpec,
        antennas: AntennaConfig,
        samples: Vec<ChannelMatrix>,
    ) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Dimension("trace must cover every grid point"));
        }
        if samples.iter().any(|s| s.dims() != antennas) {
            return Err(Error::Dimension(
                "trace entries must share one antenna configuration",
            ));
        }
        Ok(Self {
            grid,
            antennas,
            samples,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn antennas(&self) -> AntennaConfig {
        self.antennas
    }

    /// Channel at block `n`, subcarrier `k`.
    pub fn at(&self, n: usize, k: usize) -> &ChannelMatrix {
        &self.samples[self.grid.index(n, k)]
    }

    pub fn samples(&self) -> &[ChannelMatrix] {
        &self.samples
    }
}

/// I.i.d. unit-variance Rayleigh matrix.
pub fn sample_iid_channel(antennas: AntennaConfig, seed: u64) -> ChannelMatrix {
    ChannelMatrix::draw(antennas, &mut SubstreamRng::new(seed, 0))
}

/// `ρ·H_c + √(1−ρ²)·H_i` with an independent i.i.d. `H_i`, so that
/// `E|H − H_c|² = 2(1 − ρ)` per entry.
pub fn sample_offset_channel(
    h_center: &ChannelMatrix,
    rho: f64,
    seed: u64,
) -> Result<ChannelMatrix> {
    offset_with(h_center, rho, &mut SubstreamRng::new(seed, 0))
}

pub(crate) fn offset_with(
    h_center: &ChannelMatrix,
    rho: f64,
    rng: &mut SubstreamRng,
) -> Result<ChannelMatrix> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(domain("offset correlation", rho));
    }
    let fresh = ChannelMatrix::draw(h_center.dims, rng);
    if rho == 1.0 {
        return Ok(h_center.clone());
    }
    let spread = libm::sqrt(1.0 - rho * rho);
    let c = &h_center.entries;
    let entries = CMatrix::from_fn(c.rows(), c.cols(), |i, j| {
        c[(i, j)] * rho + fresh.entries[(i, j)] * spread
    });
    Ok(ChannelMatrix {
        entries,
        dims: h_center.dims,
    })
}

pub(crate) fn iid_with(antennas: AntennaConfig, rng: &mut SubstreamRng) -> ChannelMatrix {
    ChannelMatrix::draw(antennas, rng)
}

/// Independent i.i.d. matrices at every grid point.
pub fn sample_white_grid(grid: &GridSpec, antennas: AntennaConfig, seed: u64) -> ChannelTrace {
    let mut rng = SubstreamRng::new(seed, 0);
    let samples = (0..grid.len())
        .map(|_| ChannelMatrix::draw(antennas, &mut rng))
        .collect();
    ChannelTrace {
        grid: *grid,
        antennas,
        samples,
    }
}

/// Correlated Rayleigh grid with separable covariance
/// `E[h(n,k) h(n',k')*] = J0(2π f_d (n−n') B_t) · Φ((k−k') B_f)` per entry.
///
/// Each antenna entry is an independent white `r_t × r_f` field colored on
/// the left by the time-axis square root and on the right by the
/// frequency-axis square root.
pub fn sample_correlated_grid(
    model: &CorrelationModel,
    grid: &GridSpec,
    antennas: AntennaConfig,
    seed: u64,
) -> Result<ChannelTrace> {
    let m_len = grid.m_blocks();
    let k_len = grid.k_subcarriers();
    let omega_d = 2.0 * PI * model.doppler.fd_hz();
    let c_t = CMatrix::from_fn(m_len, m_len, |a, b| {
        let lag = a.abs_diff(b) as f64 * grid.bt_s();
        Complex64::new(bessel_j0(omega_d * lag), 0.0)
    });
    let c_f = CMatrix::from_fn(k_len, k_len, |a, b| {
        let lag = (a as f64 - b as f64) * grid.bf_hz();
        if a == b {
            Complex64::new(1.0, 0.0)
        } else {
            model.profile.transform(lag)
        }
    });
    let l_t = psd_factor(&c_t, FACTOR_TOLERANCE)?;
    let l_f_t = psd_factor(&c_f, FACTOR_TOLERANCE)?.transpose();

    let entry_count = antennas.n_r() * antennas.n_t();
    let mut fields = Vec::with_capacity(entry_count);
    let mut rng = SubstreamRng::new(seed, 0);
    for _ in 0..entry_count {
        let white = CMatrix::from_fn(l_t.cols(), l_f_t.rows(), |_, _| rng.complex_normal());
        fields.push(l_t.matmul(&white)?.matmul(&l_f_t)?);
    }

    let samples = (0..grid.len())
        .map(|idx| {
            let (n, k) = grid.point(idx);
            let entries = CMatrix::from_fn(antennas.n_r(), antennas.n_t(), |r, c| {
                fields[r * antennas.n_t() + c][(n, k)]
            });
            ChannelMatrix::new(entries, antennas)
        })
        .collect::<Result<Vec<_>>>()?;
    ChannelTrace::new(*grid, antennas, samples)
}
