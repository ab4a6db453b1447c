//! Standard-library companion to `subgroup-core`: scenario configuration,
//! CSV formats, a deterministic multi-threaded trial driver and the command
//! implementations behind the `subgroup` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod parallel;

pub use config::{ScenarioArgs, ScenarioConfig};
pub use error::{CliError, CliResult};
