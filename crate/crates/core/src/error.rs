use core::fmt;

use alloc::vec::Vec;

/// Errors produced by the correlation toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its admissible domain.
    Domain(&'static str),
    /// A transform was evaluated exactly at (or too close to) a pole.
    Pole,
    /// Model dimension exceeds the dense-representation cap.
    Capacity { requested: usize, cap: usize },
    /// A numerical procedure failed to converge; carries the polynomial
    /// coefficients (ascending powers) that triggered the failure when
    /// root finding was involved.
    Numeric {
        context: &'static str,
        coefficients: Vec<f64>,
    },
    /// Incompatible shapes (grid mismatch when merging histograms).
    Shape(&'static str),
    /// Estimation was asked for on data that cannot support it.
    Estimation(&'static str),
    /// Input timestamps are not strictly increasing; index of the first
    /// offending entry.
    Unsorted { index: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Pole => write!(f, "evaluation at a pole"),
            Error::Capacity { requested, cap } => {
                write!(f, "dimension {requested} exceeds cap {cap}")
            }
            Error::Numeric { context, .. } => write!(f, "numeric failure: {context}"),
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Estimation(msg) => write!(f, "estimation error: {msg}"),
            Error::Unsorted { index } => {
                write!(f, "timestamps not strictly increasing at index {index}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
