//! Adaptive subcarrier grouping for MIMO-OFDM precoding over doubly-selective
//! Rayleigh fading.
//!
//! Given a tolerable relative ergodic capacity loss, the planner solves for the
//! admissible CSI mismatch, turns it into a channel correlation threshold, and
//! inverts the time and frequency correlation marginals to obtain a rhombic
//! tiling of the OFDM time-frequency grid. Every point of a group is precoded
//! with the center point's CSI. The Monte Carlo engine checks each closed-form
//! bound against simulated channels.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the parallel
//! trial driver and the command-line front end live in the `subgroup` crate.
//!
//! Modules:
//! - [`channel`]: delay profiles, Doppler, separable WSSUS correlation, inverses, estimation
//! - [`capacity`]: log-det capacity, ESNR, ergodic bounds and loss inversion
//! - [`grouping`]: thresholds, group dimensions, rhombic tiling, complexity
//! - [`sim`]: channel sampling, precoding, trials and the end-to-end grouping run
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod capacity;
pub mod channel;
mod error;
pub mod grouping;
pub mod linalg;
pub mod sim;
pub mod special;

pub use error::{Axis, Error, Result};
