//! Monte Carlo engine: channel sampling, precoding, capacity trials and the
//! end-to-end grouping run.
//!
//! Every random draw comes from a ChaCha8 substream selected by
//! `(seed, stream)`, so trial `i` sees the same numbers no matter which
//! worker runs it or in what order.

mod algorithm;
mod channel;
mod precode;
mod rng;
mod trial;

pub use algorithm::{run_algorithm1, Algorithm1, Algorithm1Report, RatePoint};
pub use channel::{
    sample_correlated_grid, sample_iid_channel, sample_offset_channel, sample_white_grid,
    ChannelMatrix, ChannelTrace,
};
pub use precode::{precoder_from_channel, transmit, FadedObservation, Precoder};
pub use rng::{pairwise_sum, SubstreamRng};
pub use trial::{
    aggregate_trials, capacity_trial_sample, run_capacity_trial, TrialReport, TrialSample,
    MIN_TRIALS,
};
