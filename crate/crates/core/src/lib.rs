//! Exact enumerative combinatorics for strictly decreasing lattice jump paths.
//!
//! A *simple jump path* is a chain of lattice points from a start point down to
//! the origin in which every coordinate strictly decreases at every step. This
//! crate counts those paths exactly, computes finite-`n` and limiting
//! distributions of the *gaps* (componentwise differences) between consecutive
//! points, constructs the greedy 2-D Zeckendorf-style lattice sequence whose
//! legal decompositions are exactly these chains, and samples paths uniformly
//! at scales where exhaustive enumeration is impossible.
//!
//! All counts are arbitrary-precision integers and every probability is an
//! exact rational; floating point appears only in Monte Carlo summaries and
//! decimal rendering.

pub mod error;
pub mod exactmath;
pub mod gaps;
pub mod paths;
pub mod sampling;
pub mod sequence;
pub mod verify;

pub use error::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
