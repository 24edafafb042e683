//! Error type shared by all modules.

use std::fmt;

use crate::exactmath::BigCount;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A rational was constructed with a zero denominator.
    ZeroDenominator,
    /// A probability was constructed with numerator > denominator.
    ProbabilityAboveOne { num: BigCount, den: BigCount },
    /// A path-counting operation received an empty coordinate list.
    EmptyCoordinates,
    /// Exhaustive enumeration was requested for a start point with more
    /// paths than the guard allows.
    TooLargeForEnumeration { paths: BigCount, guard: u64 },
    /// A gap position (x, y) outside the admissible rectangle.
    PositionOutOfRange { x: u64, y: u64, v1: u64, v2: u64, n: u64 },
    /// A gap component of zero, or one exceeding the start coordinate.
    GapComponentOutOfRange { v: u64, n: u64 },
    /// An operation expected a distribution of a different kind.
    WrongDistributionKind { expected: &'static str, actual: &'static str },
    /// The greedy sequence construction scanned past its candidate cap.
    CandidateCapExceeded { cap: u64 },
    /// A parameter failed a precondition not covered by a specific variant.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::ProbabilityAboveOne { num, den } => {
                write!(f, "probability {num}/{den} exceeds 1")
            }
            Error::EmptyCoordinates => write!(f, "coordinate list is empty"),
            Error::TooLargeForEnumeration { paths, guard } => write!(
                f,
                "too large for enumeration: {paths} paths exceeds guard {guard}"
            ),
            Error::PositionOutOfRange { x, y, v1, v2, n } => write!(
                f,
                "gap end ({x},{y}) out of range for gap ({v1},{v2}) at n={n}"
            ),
            Error::GapComponentOutOfRange { v, n } => write!(
                f,
                "gap component {v} outside 1..={} (start coordinate)",
                n + 1
            ),
            Error::WrongDistributionKind { expected, actual } => {
                write!(f, "expected a {expected} distribution, got {actual}")
            }
            Error::CandidateCapExceeded { cap } => {
                write!(f, "candidate scan exceeded cap of {cap}")
            }
            Error::InvalidParameter(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}
