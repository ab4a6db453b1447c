use alloc::vec::Vec;

use num_complex::Complex64;

use super::channel::ChannelMatrix;
use super::rng::SubstreamRng;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};

/// Singular values at or below this fraction of the largest count as zero.
const RANK_TOLERANCE: f64 = 1e-12;

/// Unitary precoder built from a center channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    /// `n_t × n_t` unitary; column `i` is the `i`-th right singular vector.
    pub f: CMatrix,
    /// Singular values of the center channel, descending, padded with zeros
    /// to `n_t`.
    pub singular_values: Vec<f64>,
    /// Set when some columns span the null space of the channel.
    pub rank_deficient: bool,
}

/// Right singular vectors of `H_c` by descending singular value, each
/// column rotated so its first nonzero component is real and positive.
pub fn precoder_from_channel(h_center: &ChannelMatrix) -> Result<Precoder> {
    let h = h_center.entries();
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let (values, vectors) = hermitian_eigen(&h.inner_gram())?;
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let singular_values: Vec<f64> = order
        .iter()
        .map(|&i| libm::sqrt(values[i].max(0.0)))
        .collect();
    let largest = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|&&s| s > RANK_TOLERANCE * largest && s > 0.0)
        .count();

    let mut f = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let pivot = (0..n)
            .map(|r| vectors[(r, src)])
            .find(|z| z.norm() > RANK_TOLERANCE)
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        for r in 0..n {
            f[(r, col)] = vectors[(r, src)] * phase;
        }
    }
    Ok(Precoder {
        f,
        singular_values,
        rank_deficient: rank < n,
    })
}

/// One precoded channel use `r = H F x + w`.
#[derive(Debug, Clone, PartialEq)]
pub struct FadedObservation {
    pub x: Vec<Complex64>,
    pub f: CMatrix,
    pub w: Vec<Complex64>,
    pub r: Vec<Complex64>,
}

impl FadedObservation {
    /// Builds the observation from an explicit noise vector.
    pub fn with_noise(
        h: &ChannelMatrix,
        f: &CMatrix,
        x: &[Complex64],
        w: Vec<Complex64>,
    ) -> Result<Self> {
        let dims = h.dims();
        if f.rows() != dims.n_t() || f.cols() != dims.n_t() {
            return Err(Error::Dimension("precoder must be n_t × n_t"));
        }
        if x.len() != dims.n_t() {
            return Err(Error::Dimension("symbol vector must have n_t entries"));
        }
        if w.len() != dims.n_r() {
            return Err(Error::Dimension("noise vector must have n_r entries"));
        }
        let signal = h.entries().matvec(&f.matvec(x)?)?;
        let r = signal.iter().zip(&w).map(|(s, n)| s + n).collect();
        Ok(Self {
            x: x.to_vec(),
            f: f.clone(),
            w,
            r,
        })
    }
}

/// Sends `x` through `H F` with unit-variance complex Gaussian noise.
pub fn transmit(
    h: &ChannelMatrix,
    f: &CMatrix,
    x: &[Complex64],
    noise_seed: u64,
) -> Result<FadedObservation> {
    let mut rng = SubstreamRng::new(noise_seed, 0);
    let w = (0..h.dims().n_r()).map(|_| rng.complex_normal()).collect();
    FadedObservation::with_noise(h, f, x, w)
}
