//! Physical correlation structure of the doubly-selective channel.

mod correlation;
mod estimate;
mod profile;

pub use correlation::{
    combined_correlation, freq_correlation, inverse_freq_correlation, inverse_time_correlation,
    time_correlation, CorrelationModel, DopplerSpec, DEFAULT_CARRIER_HZ, INVERSE_RESIDUAL,
    SPEED_OF_LIGHT,
};
pub use estimate::{estimate_correlation, EmpiricalCorrelation};
pub use profile::{normalize_profile, DelayProfile, ProfileSegment};
