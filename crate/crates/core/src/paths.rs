//! Simple jump paths: exact counts, the 2-D closed form, and exhaustive
//! enumeration.
//!
//! A simple jump path starts at a point with all coordinates positive and
//! reaches the origin in steps that strictly decrease *every* coordinate.
//! Enumeration is the ground-truth oracle for every closed form in this
//! crate, so its order is fixed: depth-first, trying candidate next points
//! in descending lexicographic order (the origin last).

use num_traits::{One, Zero};

use crate::exactmath::{binomial, BigCount, ExactRatio};
use crate::{Error, Result};

/// Paths beyond this many are refused by [`enumerate`] unless a larger guard
/// is passed explicitly.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 100_000_000;

/// A lattice point: either all coordinates positive, or the origin.
///
/// Mixed points (some but not all coordinates zero) can never occur on a
/// simple jump path, so the constructor rejects them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<u32>);

impl LatticePoint {
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyCoordinates);
        }
        let zeros = coords.iter().filter(|&&c| c == 0).count();
        if zeros != 0 && zeros != coords.len() {
            return Err(Error::InvalidParameter(format!(
                "point {coords:?} has some but not all coordinates zero"
            )));
        }
        Ok(LatticePoint(coords))
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// True when every coordinate of `other` is strictly below this point's.
    pub fn strictly_dominates(&self, other: &LatticePoint) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a > b)
    }
}

/// An immutable, validated simple jump path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleJumpPath {
    points: Vec<LatticePoint>,
}

impl SimpleJumpPath {
    /// Validates the chain: first point all-positive, last point the origin,
    /// every step strictly decreasing in every coordinate.
    pub fn new(points: Vec<LatticePoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter(
                "a path needs a start point and the origin".into(),
            ));
        }
        if points[0].is_origin() {
            return Err(Error::InvalidParameter("start point is the origin".into()));
        }
        if !points.last().unwrap().is_origin() {
            return Err(Error::InvalidParameter("path does not end at the origin".into()));
        }
        for pair in points.windows(2) {
            if !pair[0].strictly_dominates(&pair[1]) {
                return Err(Error::InvalidParameter(format!(
                    "step {:?} -> {:?} does not decrease every coordinate",
                    pair[0].coords(),
                    pair[1].coords()
                )));
            }
        }
        Ok(SimpleJumpPath { points })
    }

    fn new_unchecked(points: Vec<LatticePoint>) -> Self {
        debug_assert!(SimpleJumpPath::new(points.clone()).is_ok());
        SimpleJumpPath { points }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn start(&self) -> &LatticePoint {
        &self.points[0]
    }

    /// Number of steps (= number of gap vectors).
    pub fn length(&self) -> usize {
        self.points.len() - 1
    }
}

/// Number of simple jump paths of exactly `k` steps from `a` to the origin:
/// the product over coordinates of `C(a_j - 1, k - 1)`. Zero when `k` is 0 or
/// exceeds the smallest coordinate.
pub fn paths_with_length(k: u64, a: &[u32]) -> Result<BigCount> {
    if a.is_empty() {
        return Err(Error::EmptyCoordinates);
    }
    if k == 0 {
        return Ok(BigCount::zero());
    }
    let mut acc = BigCount::one();
    for &aj in a {
        acc *= binomial(aj as i64 - 1, k as i64 - 1);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Total number of simple jump paths from `a` to the origin: the sum of
/// [`paths_with_length`] over all feasible lengths.
pub fn total_paths(a: &[u32]) -> Result<BigCount> {
    if a.is_empty() {
        return Err(Error::EmptyCoordinates);
    }
    let kmax = *a.iter().min().unwrap() as u64;
    let mut acc = BigCount::zero();
    for k in 1..=kmax {
        acc += paths_with_length(k, a)?;
    }
    Ok(acc)
}

/// Closed form for two dimensions: `C(a1 + a2 - 2, a1 - 1)` paths from
/// `(a1, a2)` to the origin. Agrees with [`total_paths`] for all positive
/// starts (Vandermonde collapses the sum of binomial products).
pub fn total_paths_2d(a1: u64, a2: u64) -> BigCount {
    binomial(a1 as i64 + a2 as i64 - 2, a1 as i64 - 1)
}

/// Exact mean number of steps over all paths from `(n+1, n+1)`: `n/2 + 1`.
pub fn mean_path_length(n_plus_1: u64) -> ExactRatio {
    // n/2 + 1 = (n_plus_1 + 1) / 2
    ExactRatio::new(BigCount::from(n_plus_1 + 1), BigCount::from(2u32))
        .expect("nonzero denominator")
}

/// Streaming enumeration of every simple jump path from `a` to the origin.
///
/// Refuses to start when the path count (computed by formula first) exceeds
/// `guard`. Paths come out in depth-first order, candidates at each step in
/// descending lexicographic order, so the sequence is deterministic.
pub fn enumerate(a: &[u32], guard: u64) -> Result<PathEnumerator> {
    let start = LatticePoint::new(a.to_vec())?;
    if start.is_origin() {
        return Err(Error::InvalidParameter("cannot enumerate from the origin".into()));
    }
    let total = total_paths(a)?;
    if total > BigCount::from(guard) {
        return Err(Error::TooLargeForEnumeration { paths: total, guard });
    }
    Ok(PathEnumerator::new(start))
}

#[derive(Debug)]
struct Frame {
    candidates: Vec<LatticePoint>,
    next: usize,
}

/// Pull-based path stream; see [`enumerate`].
#[derive(Debug)]
pub struct PathEnumerator {
    chain: Vec<LatticePoint>,
    stack: Vec<Frame>,
}

impl PathEnumerator {
    fn new(start: LatticePoint) -> Self {
        let frame = Frame { candidates: successors(&start), next: 0 };
        PathEnumerator { chain: vec![start], stack: vec![frame] }
    }
}

/// All legal next points from `p`, in descending lexicographic order.
/// Interior candidates live in the box `[1, c_j - 1]` per coordinate; the
/// origin is always legal and sorts last.
fn successors(p: &LatticePoint) -> Vec<LatticePoint> {
    let coords = p.coords();
    let dim = coords.len();
    let mut out = Vec::new();
    if coords.iter().all(|&c| c >= 2) {
        // mixed-radix countdown from (c_1 - 1, ..., c_d - 1) to (1, ..., 1)
        let mut cur: Vec<u32> = coords.iter().map(|&c| c - 1).collect();
        loop {
            out.push(LatticePoint(cur.clone()));
            let mut j = dim;
            loop {
                if j == 0 {
                    return finish(out, dim);
                }
                j -= 1;
                if cur[j] > 1 {
                    cur[j] -= 1;
                    for t in j + 1..dim {
                        cur[t] = coords[t] - 1;
                    }
                    break;
                }
            }
        }
    }
    finish(out, dim)
}

fn finish(mut out: Vec<LatticePoint>, dim: usize) -> Vec<LatticePoint> {
    out.push(LatticePoint::origin(dim));
    out
}

impl Iterator for PathEnumerator {
    type Item = SimpleJumpPath;

    fn next(&mut self) -> Option<SimpleJumpPath> {
        loop {
            let frame = self.stack.last_mut()?;
            if frame.next >= frame.candidates.len() {
                self.stack.pop();
                self.chain.pop();
                continue;
            }
            let candidate = frame.candidates[frame.next].clone();
            frame.next += 1;
            if candidate.is_origin() {
                let mut points = self.chain.clone();
                points.push(candidate);
                return Some(SimpleJumpPath::new_unchecked(points));
            }
            let next_frame = Frame { candidates: successors(&candidate), next: 0 };
            self.chain.push(candidate);
            self.stack.push(next_frame);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ExactRatio;
    use num_bigint::BigUint;
    use std::collections::HashSet;

    fn b(n: u64) -> BigCount {
        BigUint::from(n)
    }

    fn pt(coords: &[u32]) -> LatticePoint {
        LatticePoint::new(coords.to_vec()).unwrap()
    }

    fn collect(a: &[u32]) -> Vec<SimpleJumpPath> {
        enumerate(a, DEFAULT_ENUMERATION_GUARD).unwrap().collect()
    }

    #[test]
    fn lattice_point_rejects_mixed_zeros() {
        assert!(LatticePoint::new(vec![0, 3]).is_err());
        assert!(LatticePoint::new(vec![0, 0]).is_ok());
        assert!(LatticePoint::new(vec![2, 3]).is_ok());
        assert!(LatticePoint::new(vec![]).is_err());
    }

    #[test]
    fn paths_with_length_examples() {
        // frozen from enumeration below: 4 two-step paths from (3,3)
        assert_eq!(paths_with_length(2, &[3, 3]).unwrap(), b(4));
        assert_eq!(paths_with_length(1, &[5, 7]).unwrap(), b(1));
        // only the full staircase
        assert_eq!(paths_with_length(3, &[3, 3]).unwrap(), b(1));
        assert_eq!(paths_with_length(4, &[3, 3]).unwrap(), b(0));
        assert_eq!(paths_with_length(0, &[3, 3]).unwrap(), b(0));
        assert!(paths_with_length(1, &[]).is_err());
    }

    #[test]
    fn total_paths_examples() {
        assert_eq!(total_paths(&[3, 3]).unwrap(), b(6));
        // d = 1 gives powers of two
        assert_eq!(total_paths(&[6]).unwrap(), b(32));
        assert_eq!(total_paths(&[2, 3]).unwrap(), b(3));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(total_paths_2d(3, 3), b(6));
        assert_eq!(total_paths_2d(3, 3), binomial(4, 2));
        assert_eq!(total_paths_2d(1, 1), b(1));
    }

    #[test]
    fn closed_form_matches_sum_and_is_symmetric() {
        for a1 in 1..=12u64 {
            for a2 in 1..=12u64 {
                let by_sum = total_paths(&[a1 as u32, a2 as u32]).unwrap();
                assert_eq!(total_paths_2d(a1, a2), by_sum, "({a1},{a2})");
                assert_eq!(total_paths_2d(a1, a2), total_paths_2d(a2, a1));
            }
        }
    }

    #[test]
    fn partition_identity() {
        for a in [&[1u32, 1][..], &[2, 3], &[4, 4], &[5, 2], &[3, 3, 3], &[7]] {
            let kmax = *a.iter().min().unwrap() as u64;
            let sum: BigCount = (1..=kmax)
                .map(|k| paths_with_length(k, a).unwrap())
                .sum();
            assert_eq!(sum, total_paths(a).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn one_dimension_specializes_to_binary() {
        for n in 1..=16i64 {
            for k in 1..=n {
                assert_eq!(
                    paths_with_length(k as u64, &[n as u32]).unwrap(),
                    binomial(n - 1, k - 1)
                );
            }
            assert_eq!(
                total_paths(&[n as u32]).unwrap(),
                BigCount::one() << (n - 1) as u32
            );
        }
    }

    #[test]
    fn enumerate_trivial_start() {
        let paths = collect(&[1, 1]);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].points(), &[pt(&[1, 1]), pt(&[0, 0])]);
    }

    #[test]
    fn enumerate_two_by_two_golden_order() {
        let paths = collect(&[2, 2]);
        let got: Vec<Vec<&[u32]>> = paths
            .iter()
            .map(|p| p.points().iter().map(|q| q.coords()).collect())
            .collect();
        // descending-lex DFS: the staircase branch comes before the direct jump
        assert_eq!(
            got,
            vec![
                vec![&[2, 2][..], &[1, 1], &[0, 0]],
                vec![&[2, 2][..], &[0, 0]],
            ]
        );
    }

    #[test]
    fn enumerate_three_by_three_golden() {
        let paths = collect(&[3, 3]);
        let got: Vec<Vec<Vec<u32>>> = paths
            .iter()
            .map(|p| p.points().iter().map(|q| q.coords().to_vec()).collect())
            .collect();
        let expected: Vec<Vec<Vec<u32>>> = vec![
            vec![vec![3, 3], vec![2, 2], vec![1, 1], vec![0, 0]],
            vec![vec![3, 3], vec![2, 2], vec![0, 0]],
            vec![vec![3, 3], vec![2, 1], vec![0, 0]],
            vec![vec![3, 3], vec![1, 2], vec![0, 0]],
            vec![vec![3, 3], vec![1, 1], vec![0, 0]],
            vec![vec![3, 3], vec![0, 0]],
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn enumeration_matches_counts_and_paths_are_valid() {
        for a1 in 1..=7u32 {
            for a2 in 1..=7u32 {
                let paths = collect(&[a1, a2]);
                let expected = total_paths(&[a1, a2]).unwrap();
                assert_eq!(b(paths.len() as u64), expected, "({a1},{a2})");
                assert_eq!(expected, total_paths_2d(a1 as u64, a2 as u64));
                let mut seen = HashSet::new();
                for p in &paths {
                    // re-validate through the checked constructor
                    SimpleJumpPath::new(p.points().to_vec()).unwrap();
                    assert_eq!(p.start(), &pt(&[a1, a2]));
                    assert!(seen.insert(p.clone()), "duplicate path {p:?}");
                }
            }
        }
    }

    #[test]
    fn enumeration_in_three_dimensions() {
        let paths = collect(&[2, 2, 2]);
        assert_eq!(b(paths.len() as u64), total_paths(&[2, 2, 2]).unwrap());
        assert_eq!(paths.len(), 2);
    }

    #[test]
    fn enumeration_guard() {
        let err = enumerate(&[40, 40], DEFAULT_ENUMERATION_GUARD).unwrap_err();
        assert!(matches!(err, Error::TooLargeForEnumeration { .. }));
        // a generous guard admits the same start
        assert!(enumerate(&[10, 10], 48620).is_ok());
        assert!(enumerate(&[10, 10], 48619).is_err());
    }

    #[test]
    fn mean_path_length_examples() {
        assert_eq!(mean_path_length(1), ExactRatio::from_integer(1));
        assert_eq!(mean_path_length(3), ExactRatio::from_integer(2));
        assert_eq!(
            mean_path_length(2),
            ExactRatio::new(b(3), b(2)).unwrap()
        );
    }

    #[test]
    fn mean_path_length_matches_weighted_sum() {
        for n_plus_1 in 1..=12u64 {
            let a = [n_plus_1 as u32, n_plus_1 as u32];
            let total = total_paths(&a).unwrap();
            let weighted: BigCount = (1..=n_plus_1)
                .map(|k| paths_with_length(k, &a).unwrap() * BigCount::from(k))
                .sum();
            let mean = ExactRatio::new(weighted, total).unwrap();
            assert_eq!(mean, mean_path_length(n_plus_1), "n+1 = {n_plus_1}");
        }
    }
}
