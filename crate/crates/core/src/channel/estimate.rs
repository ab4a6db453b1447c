use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Axis, Error, Result};
use crate::sim::ChannelTrace;

/// Lag-indexed empirical correlation magnitudes along each grid axis.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCorrelation {
    /// `freq[j]` estimates `R_f(j · B_f)`.
    pub freq: Vec<f64>,
    /// `time[i]` estimates `R_t(i · B_t)`.
    pub time: Vec<f64>,
    /// Number of entry pairs averaged at each frequency lag.
    pub freq_pairs: Vec<usize>,
    /// Number of entry pairs averaged at each time lag.
    pub time_pairs: Vec<usize>,
}

/// Estimates both correlation marginals from a channel trace.
///
/// At each lag the cross-moment `E[h · conj(h_lagged)]` is averaged over all
/// antenna entries and over the orthogonal grid axis, then normalized by
/// the mean entry power. Lag 0 is exactly 1.
pub fn estimate_correlation(
    trace: &ChannelTrace,
    max_lag_f: usize,
    max_lag_t: usize,
) -> Result<EmpiricalCorrelation> {
    let k_len = trace.grid().k_subcarriers();
    let m_len = trace.grid().m_blocks();
    if max_lag_f >= k_len {
        return Err(Error::Estimation {
            axis: Axis::Frequency,
            required: max_lag_f + 1,
            available: k_len,
        });
    }
    if max_lag_t >= m_len {
        return Err(Error::Estimation {
            axis: Axis::Time,
            required: max_lag_t + 1,
            available: m_len,
        });
    }

    let entries = trace.antennas().n_r() * trace.antennas().n_t();
    let at = |n: usize, k: usize| trace.at(n, k).entries().as_slice();

    let mut power = 0.0;
    for n in 0..m_len {
        for k in 0..k_len {
            power += at(n, k).iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    let power = power / (m_len * k_len * entries) as f64;
    if !(power > 0.0) {
        return Err(Error::Estimation {
            axis: Axis::Frequency,
            required: 1,
            available: 0,
        });
    }

    let cross =
        |pairs: &mut dyn Iterator<Item = ((usize, usize), (usize, usize))>| -> (f64, usize) {
            let mut acc = Complex64::zero();
            let mut count = 0usize;
            for (a, b) in pairs {
                for (x, y) in at(a.0, a.1).iter().zip(at(b.0, b.1)) {
                    acc += x * y.conj();
                }
                count += entries;
            }
            (acc.norm() / (count as f64 * power), count)
        };

    let mut freq = Vec::with_capacity(max_lag_f + 1);
    let mut freq_pairs = Vec::with_capacity(max_lag_f + 1);
    for j in 0..=max_lag_f {
        let mut it = (0..m_len).flat_map(|n| (0..k_len - j).map(move |k| ((n, k), (n, k + j))));
        let (r, count) = cross(&mut it);
        freq.push(if j == 0 { 1.0 } else { r });
        freq_pairs.push(count);
    }

    let mut time = Vec::with_capacity(max_lag_t + 1);
    let mut time_pairs = Vec::with_capacity(max_lag_t + 1);
    for i in 0..=max_lag_t {
        let mut it = (0..m_len - i).flat_map(|n| (0..k_len).map(move |k| ((n, k), (n + i, k))));
        let (r, count) = cross(&mut it);
        time.push(if i == 0 { 1.0 } else { r });
        time_pairs.push(count);
    }

    Ok(EmpiricalCorrelation {
        freq,
        time,
        freq_pairs,
        time_pairs,
    })
}
