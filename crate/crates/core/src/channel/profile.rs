//! Piecewise-exponential power-delay profiles.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MICROSECOND: f64 = 1e-6;

/// One piece of a delay profile: power density
/// `amplitude · exp(−decay · (τ − tau_start))` on `[tau_start, tau_end]`.
///
/// A zero-width segment (`tau_end == tau_start`) is a discrete tap carrying
/// power `amplitude`; its decay is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSegment {
    pub tau_start: f64,
    pub tau_end: f64,
    pub amplitude: f64,
    pub decay: f64,
}

impl ProfileSegment {
    pub fn new(tau_start: f64, tau_end: f64, amplitude: f64, decay: f64) -> Self {
        Self {
            tau_start,
            tau_end,
            amplitude,
            decay,
        }
    }

    /// Segment given in microseconds and decay per microsecond.
    pub fn from_micros(start_us: f64, end_us: f64, amplitude: f64, decay_per_us: f64) -> Self {
        Self::new(
            start_us * MICROSECOND,
            end_us * MICROSECOND,
            amplitude,
            decay_per_us / MICROSECOND,
        )
    }

    fn width(&self) -> f64 {
        self.tau_end - self.tau_start
    }

    fn is_tap(&self) -> bool {
        self.tau_end == self.tau_start
    }

    fn power(&self) -> f64 {
        if self.is_tap() {
            return self.amplitude;
        }
        let dl = self.decay * self.width();
        if dl < 1e-12 {
            self.amplitude * self.width()
        } else {
            self.amplitude * -libm::expm1(-dl) / self.decay
        }
    }

    /// `∫ p(τ) e^{−j2πΔf τ} dτ` over this segment.
    fn transform(&self, delta_f: f64) -> Complex64 {
        let omega = 2.0 * PI * delta_f;
        let shift = Complex64::from_polar(1.0, -omega * self.tau_start);
        if self.is_tap() {
            return shift * self.amplitude;
        }
        let len = self.width();
        let z = Complex64::new(self.decay, omega);
        let w = z * len;
        // (1 − e^{−w}) / z, with a short series where it would cancel.
        let shape = if w.norm() < 1e-3 {
            (Complex64::new(1.0, 0.0) - w / 2.0 + w * w / 6.0 - w * w * w / 24.0) * len
        } else {
            (Complex64::new(1.0, 0.0) - (-w).exp()) / z
        };
        shift * shape * self.amplitude
    }
}

/// Piecewise-exponential power-delay profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayProfile {
    name: String,
    segments: Vec<ProfileSegment>,
}

impl DelayProfile {
    /// Validates segment ordering and parameters. The profile is not
    /// normalized; see [`normalize_profile`].
    pub fn new(name: impl Into<String>, segments: Vec<ProfileSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidProfile("no segments"));
        }
        let mut prev_end = 0.0;
        for s in &segments {
            let finite = [s.tau_start, s.tau_end, s.amplitude, s.decay]
                .iter()
                .all(|x| x.is_finite());
            if !finite {
                return Err(Error::InvalidProfile("non-finite segment parameter"));
            }
            if s.tau_start < 0.0 {
                return Err(Error::InvalidProfile("negative delay"));
            }
            if s.tau_end < s.tau_start {
                return Err(Error::InvalidProfile("segment ends before it starts"));
            }
            if !(s.amplitude > 0.0) {
                return Err(Error::InvalidProfile("amplitude must be positive"));
            }
            if s.decay < 0.0 {
                return Err(Error::InvalidProfile("decay must be non-negative"));
            }
            if s.tau_start < prev_end {
                return Err(Error::InvalidProfile("segments overlap or are unsorted"));
            }
            prev_end = s.tau_end;
        }
        Ok(Self {
            name: name.into(),
            segments,
        })
    }

    /// COST207 rural area: `exp(−9.2τ)` on `[0, 0.7] µs`.
    pub fn rural_area() -> Self {
        Self::preset(
            "RA",
            alloc::vec![ProfileSegment::from_micros(0.0, 0.7, 1.0, 9.2)],
        )
    }

    /// COST207 typical urban: `exp(−τ)` on `[0, 7] µs`.
    pub fn typical_urban() -> Self {
        Self::preset(
            "TU",
            alloc::vec![ProfileSegment::from_micros(0.0, 7.0, 1.0, 1.0)],
        )
    }

    /// COST207 hilly terrain: `exp(−3.5τ)` on `[0, 2] µs` plus
    /// `0.1·exp(15 − τ)` on `[15, 20] µs`.
    pub fn hilly_terrain() -> Self {
        Self::preset(
            "HT",
            alloc::vec![
                ProfileSegment::from_micros(0.0, 2.0, 1.0, 3.5),
                ProfileSegment::from_micros(15.0, 20.0, 0.1, 1.0),
            ],
        )
    }

    /// A single discrete tap: no frequency selectivity at all.
    pub fn single_tap(delay: f64) -> Result<Self> {
        let p = Self::new(
            "tap",
            alloc::vec![ProfileSegment::new(delay, delay, 1.0, 0.0)],
        )?;
        normalize_profile(&p)
    }

    /// Looks up `RA`, `TU` or `HT` (case-insensitive).
    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "RA" => Some(Self::rural_area()),
            "TU" => Some(Self::typical_urban()),
            "HT" => Some(Self::hilly_terrain()),
            _ => None,
        }
    }

    fn preset(name: &str, segments: Vec<ProfileSegment>) -> Self {
        let p = Self::new(name.to_string(), segments).expect("preset profile is valid");
        normalize_profile(&p).expect("preset profile has power")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn segments(&self) -> &[ProfileSegment] {
        &self.segments
    }

    /// Integrated power over delay.
    pub fn total_power(&self) -> f64 {
        self.segments.iter().map(ProfileSegment::power).sum()
    }

    /// Largest delay with nonzero power.
    pub fn max_delay(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.tau_end)
    }

    /// True when all power sits at a single delay, so `|Φ| ≡ 1`.
    pub fn is_single_delay(&self) -> bool {
        let first = self.segments[0].tau_start;
        self.segments
            .iter()
            .all(|s| s.is_tap() && s.tau_start == first)
    }

    /// Fourier transform of the power-delay profile divided by total power
    /// (the complex frequency correlation).
    pub fn transform(&self, delta_f: f64) -> Complex64 {
        let raw: Complex64 = self.segments.iter().map(|s| s.transform(delta_f)).sum();
        raw / self.total_power()
    }
}

/// Rescales the profile so its integrated power is one.
pub fn normalize_profile(profile: &DelayProfile) -> Result<DelayProfile> {
    let total = profile.total_power();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::InvalidProfile("zero total power"));
    }
    let segments = profile
        .segments
        .iter()
        .map(|s| ProfileSegment {
            amplitude: s.amplitude / total,
            ..*s
        })
        .collect();
    Ok(DelayProfile {
        name: profile.name.clone(),
        segments,
    })
}
