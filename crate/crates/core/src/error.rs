use core::fmt;

/// Grid axis an error or note refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Frequency,
    Time,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Frequency => f.write_str("frequency"),
            Axis::Time => f.write_str("time"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid delay profile: {0}")]
    InvalidProfile(&'static str),

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),

    #[error("non-finite matrix entry")]
    NonFinite,

    /// The correlation threshold lies below the floor of the first monotone
    /// lobe of the marginal, so no monotone inverse exists.
    #[error("{axis} correlation threshold {beta} is below the first-lobe floor {floor}")]
    OutOfLobe { axis: Axis, beta: f64, floor: f64 },

    /// The marginal never decorrelates (zero Doppler or zero delay spread).
    #[error("{axis} coherence is unbounded")]
    UnboundedCoherence { axis: Axis },

    #[error("insufficient samples along {axis}: need {required}, have {available}")]
    Estimation {
        axis: Axis,
        required: usize,
        available: usize,
    },

    #[error("correlation matrix is not positive semidefinite (pivot {pivot})")]
    NotPositiveSemidefinite { pivot: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
