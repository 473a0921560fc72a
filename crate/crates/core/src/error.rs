use alloc::string::String;
use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands have incompatible lengths or dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// A parameter violates a precondition.
    InvalidParameter(String),
    /// An enumeration or simulation would exceed the configured cap.
    ResourceLimit { required: u64, cap: u64 },
    /// A regression had no usable data points.
    FitFailure(String),
    /// Internal consistency check failed (e.g. probabilities went negative
    /// beyond floating-point tolerance).
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ResourceLimit { required, cap } => {
                write!(f, "resource limit exceeded: need {required}, cap is {cap}")
            }
            Error::FitFailure(msg) => write!(f, "fit failure: {msg}"),
            Error::Internal(msg) => write!(f, "internal consistency error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
