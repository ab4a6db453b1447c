//! Separable time × frequency correlation of a WSSUS channel and the inverses
//! of its marginals on their first monotone lobes.

use core::f64::consts::PI;

use super::profile::DelayProfile;
use crate::error::{domain, Axis, Error, Result};
use crate::special::{bessel_j0, bisect, J0_FIRST_ZERO};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default carrier frequency in Hz.
pub const DEFAULT_CARRIER_HZ: f64 = 2e9;

/// Residual budget of the inverse correlations.
pub const INVERSE_RESIDUAL: f64 = 1e-9;

const TWO_PI: f64 = 2.0 * PI;

/// Maximum Doppler shift from carrier and terminal speed (Jakes spectrum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerSpec {
    carrier_hz: f64,
    speed_mps: f64,
    fd_hz: f64,
}

impl DopplerSpec {
    pub fn new(carrier_hz: f64, speed_mps: f64) -> Result<Self> {
        if !(carrier_hz > 0.0) || !carrier_hz.is_finite() {
            return Err(domain("carrier frequency", carrier_hz));
        }
        if !(speed_mps >= 0.0) || !speed_mps.is_finite() {
            return Err(domain("speed", speed_mps));
        }
        Ok(Self {
            carrier_hz,
            speed_mps,
            fd_hz: speed_mps * carrier_hz / SPEED_OF_LIGHT,
        })
    }

    /// Builds the spec from a maximum Doppler shift at the default carrier;
    /// the speed is back-computed.
    pub fn from_doppler_hz(fd_hz: f64) -> Result<Self> {
        if !(fd_hz >= 0.0) || !fd_hz.is_finite() {
            return Err(domain("Doppler frequency", fd_hz));
        }
        Ok(Self {
            carrier_hz: DEFAULT_CARRIER_HZ,
            speed_mps: fd_hz * SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ,
            fd_hz,
        })
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn speed_mps(&self) -> f64 {
        self.speed_mps
    }

    pub fn fd_hz(&self) -> f64 {
        self.fd_hz
    }
}

/// Delay profile (frequency marginal) together with Doppler (time marginal).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationModel {
    pub profile: DelayProfile,
    pub doppler: DopplerSpec,
}

impl CorrelationModel {
    pub fn new(profile: DelayProfile, doppler: DopplerSpec) -> Self {
        Self { profile, doppler }
    }

    pub fn freq(&self, delta_f: f64) -> f64 {
        freq_correlation(&self.profile, delta_f)
    }

    pub fn time(&self, delta_t: f64) -> f64 {
        time_correlation(&self.doppler, delta_t)
    }

    pub fn combined(&self, delta_f: f64, delta_t: f64) -> f64 {
        combined_correlation(self, delta_f, delta_t)
    }
}

/// `|Φ(Δf)|`, the magnitude of the normalized profile's Fourier transform.
pub fn freq_correlation(profile: &DelayProfile, delta_f: f64) -> f64 {
    let delta_f = delta_f.abs();
    if delta_f == 0.0 || profile.is_single_delay() {
        return 1.0;
    }
    profile.transform(delta_f).norm().min(1.0)
}

/// `|J0(2π f_d Δt)|` (Jakes).
pub fn time_correlation(doppler: &DopplerSpec, delta_t: f64) -> f64 {
    let arg = TWO_PI * doppler.fd_hz() * delta_t.abs();
    if arg == 0.0 {
        return 1.0;
    }
    bessel_j0(arg).abs().min(1.0)
}

/// `R(Δf, Δt) = R_f(Δf) · R_t(Δt)`.
pub fn combined_correlation(model: &CorrelationModel, delta_f: f64, delta_t: f64) -> f64 {
    freq_correlation(&model.profile, delta_f) * time_correlation(&model.doppler, delta_t)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(domain("correlation threshold", beta))
    }
}

/// Scan resolution: this many steps per `1 / max_delay`.
const SCAN_STEPS_PER_NULL: f64 = 256.0;
const SCAN_MAX_STEPS: usize = 1 << 20;

/// Smallest `Δf ≥ 0` with `R_f(Δf) = beta` on the first monotone lobe.
///
/// The lobe is walked on a grid fine against the profile's largest delay
/// until the correlation first drops to `beta` (then bisected) or turns back
/// up (the first local minimum, reported as the lobe floor). `beta = 1`
/// returns 0.
pub fn inverse_freq_correlation(profile: &DelayProfile, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta == 1.0 {
        return Ok(0.0);
    }
    if profile.is_single_delay() {
        return Err(Error::UnboundedCoherence {
            axis: Axis::Frequency,
        });
    }
    let step = 1.0 / (SCAN_STEPS_PER_NULL * profile.max_delay());
    let mut prev = 1.0;
    for i in 1..=SCAN_MAX_STEPS {
        let f = i as f64 * step;
        let r = freq_correlation(profile, f);
        if r <= beta {
            let lo = (i - 1) as f64 * step;
            let root = bisect(
                |x| freq_correlation(profile, x) - beta,
                lo,
                f,
                f * 1e-15,
                200,
            )?;
            return check_residual(freq_correlation(profile, root), beta, root);
        }
        if r > prev {
            return Err(Error::OutOfLobe {
                axis: Axis::Frequency,
                beta,
                floor: prev,
            });
        }
        prev = r;
    }
    Err(Error::OutOfLobe {
        axis: Axis::Frequency,
        beta,
        floor: prev,
    })
}

/// Smallest `Δt ≥ 0` with `|J0(2π f_d Δt)| = beta`. The first lobe of
/// `|J0|` falls monotonically to zero at `j_{0,1}`, so every `beta` in
/// `(0, 1]` is reachable.
pub fn inverse_time_correlation(doppler: &DopplerSpec, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta == 1.0 {
        return Ok(0.0);
    }
    if doppler.fd_hz() == 0.0 {
        return Err(Error::UnboundedCoherence { axis: Axis::Time });
    }
    let x = bisect(|x| bessel_j0(x) - beta, 0.0, J0_FIRST_ZERO, 1e-16, 200)?;
    let delta_t = x / (TWO_PI * doppler.fd_hz());
    check_residual(time_correlation(doppler, delta_t), beta, delta_t)
}

fn check_residual(r: f64, beta: f64, at: f64) -> Result<f64> {
    if (r - beta).abs() <= INVERSE_RESIDUAL {
        Ok(at)
    } else {
        Err(Error::NoConvergence("correlation inverse"))
    }
}
