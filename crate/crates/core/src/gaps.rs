//! Gap vectors of simple jump paths: exact finite-`n` counts and
//! distributions, their limits, and the brute-force oracle.
//!
//! For paths from `(n+1, n+1)` the number of gap vectors `(v1, v2)` has a
//! closed form built from two binomials; the total gap count over all paths
//! is `(n/2 + 1)·C(2n, n)`. As `n` grows the gap-vector law converges to
//! `1/2^(v1+v2)`, the gap-sum law to `(v-1)/2^v`, and the squared-distance
//! law to the corresponding sum over representations as two positive squares.
//! Every closed form here is checked against exhaustive enumeration in tests.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactmath::{binomial, BigCount, ExactProb, ExactRatio};
use crate::paths::{self, SimpleJumpPath};
use crate::{Error, Result};

/// A gap vector: the componentwise difference of consecutive path points.
/// Every component is at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapVector(Vec<u32>);

impl GapVector {
    pub fn new(components: Vec<u32>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyCoordinates);
        }
        if components.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "gap vector {components:?} has a zero component"
            )));
        }
        Ok(GapVector(components))
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// L1 size: the sum of components.
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Squared L2 size: the sum of squared components (always an integer).
    pub fn sqdistance(&self) -> u64 {
        self.0.iter().map(|&c| (c as u64) * (c as u64)).sum()
    }
}

/// The gap vectors of a path, in step order, including the final jump into
/// the origin. A path of `k` steps yields exactly `k` gap vectors.
pub fn gaps_of_path(path: &SimpleJumpPath) -> Vec<GapVector> {
    path.points()
        .windows(2)
        .map(|pair| {
            let diff: Vec<u32> = pair[0]
                .coords()
                .iter()
                .zip(pair[1].coords())
                .map(|(a, b)| a - b)
                .collect();
            GapVector(diff)
        })
        .collect()
}

pub fn gap_sum(v: &GapVector) -> u64 {
    v.sum()
}

pub fn gap_sqdistance(v: &GapVector) -> u64 {
    v.sqdistance()
}

/// Which scalar (or vector) a distribution is keyed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    Vector,
    Sum,
    SqDistance,
}

impl GapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GapKind::Vector => "vector",
            GapKind::Sum => "sum",
            GapKind::SqDistance => "sqdistance",
        }
    }
}

/// Key of one distribution cell: a full gap vector, or a scalar reduction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GapKey {
    Vector(GapVector),
    Scalar(u64),
}

impl std::fmt::Display for GapKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GapKey::Vector(v) => {
                let parts: Vec<String> =
                    v.components().iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GapKey::Scalar(s) => write!(f, "{s}"),
        }
    }
}

/// How a distribution was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Closed form or exhaustive enumeration.
    Exact,
    /// Monte Carlo tally.
    Empirical,
}

/// A count table over gap keys with its grand total.
///
/// Zero cells are omitted; `probability` treats missing keys as zero. Keys
/// iterate in lexicographic order, so serialized output is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapDistribution {
    n: u64,
    kind: GapKind,
    counts: BTreeMap<GapKey, BigCount>,
    total: BigCount,
    source: Source,
}

impl GapDistribution {
    pub fn new(
        n: u64,
        kind: GapKind,
        counts: BTreeMap<GapKey, BigCount>,
        total: BigCount,
        source: Source,
    ) -> Self {
        GapDistribution { n, kind, counts, total, source }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn kind(&self) -> GapKind {
        self.kind
    }

    pub fn counts(&self) -> &BTreeMap<GapKey, BigCount> {
        &self.counts
    }

    pub fn total(&self) -> &BigCount {
        &self.total
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn count(&self, key: &GapKey) -> BigCount {
        self.counts.get(key).cloned().unwrap_or_else(BigCount::zero)
    }

    /// Exact probability of `key`: its count over the grand total.
    pub fn probability(&self, key: &GapKey) -> Result<ExactProb> {
        ExactProb::new(self.count(key), self.total.clone())
    }

    /// True when the stored cells account for the whole total.
    pub fn is_complete(&self) -> bool {
        let sum: BigCount = self.counts.values().cloned().sum();
        sum == self.total
    }
}

/// Paths from `(a1, a2)` to the origin, extended to degenerate rectangles:
/// one for the empty `(0, 0)` rectangle, zero when exactly one side is zero.
fn rectangle_paths(a1: u64, a2: u64) -> BigCount {
    if a1 == 0 && a2 == 0 {
        return BigCount::from(1u32);
    }
    // C(a2-2, -1) = 0 covers the single-zero cases
    binomial(a1 as i64 + a2 as i64 - 2, a1 as i64 - 1)
}

fn check_components(n: u64, v1: u64, v2: u64) -> Result<()> {
    for v in [v1, v2] {
        if v == 0 || v > n + 1 {
            return Err(Error::GapComponentOutOfRange { v, n });
        }
    }
    Ok(())
}

/// Number of `(v1, v2)` gaps ending at `(x, y)` over all paths from
/// `(n+1, n+1)`: paths into the rectangle above the gap times paths out of
/// the rectangle below it.
///
/// The two rectangles collapse when the gap ends at the origin or starts at
/// the path start; those cells count a single rectangle instead.
pub fn gap_count_at(x: u64, y: u64, v1: u64, v2: u64, n: u64) -> Result<BigCount> {
    check_components(n, v1, v2)?;
    if x > n + 1 - v1 || y > n + 1 - v2 {
        return Err(Error::PositionOutOfRange { x, y, v1, v2, n });
    }
    let at_origin = x == 0 && y == 0;
    let at_start = x == n + 1 - v1 && y == n + 1 - v2;
    if at_origin || at_start {
        return Ok(rectangle_paths(n + 1 - v1, n + 1 - v2));
    }
    let below = binomial(x as i64 + y as i64 - 2, x as i64 - 1);
    let above = binomial(
        2 * n as i64 - (v1 + v2 + x + y) as i64,
        n as i64 - (v1 + x) as i64,
    );
    Ok(below * above)
}

/// Number of `(v1, v2)` gaps over all paths from `(n+1, n+1)`, summed over
/// every position: `(2n-v1-v2-1)·C(2n-v1-v2-2, n-v1-1) + 2·C(2n-v1-v2, n-v1)`
/// for components up to `n`.
///
/// The formula degenerates on the boundary: a component of `n+1` forces the
/// single-jump path, so `(n+1, n+1)` counts exactly 1 and mixed boundaries 0.
pub fn gap_vector_count(n: u64, v1: u64, v2: u64) -> Result<BigCount> {
    check_components(n, v1, v2)?;
    let top1 = v1 == n + 1;
    let top2 = v2 == n + 1;
    if top1 && top2 {
        return Ok(BigCount::from(1u32));
    }
    if top1 || top2 {
        return Ok(BigCount::zero());
    }
    let m = 2 * n as i64 - v1 as i64 - v2 as i64;
    let mut acc = BigCount::zero();
    if m - 1 > 0 {
        acc += BigCount::from((m - 1) as u64)
            * binomial(m - 2, n as i64 - v1 as i64 - 1);
    }
    acc += binomial(m, n as i64 - v1 as i64) * BigCount::from(2u32);
    Ok(acc)
}

/// Total number of gap vectors over all paths from `(n+1, n+1)`:
/// `(n/2 + 1)·C(2n, n)`, evaluated exactly.
///
/// Panics if the rational form fails to be integral, which would mean the
/// arithmetic itself is broken.
pub fn total_gap_count(n: u64) -> BigCount {
    let doubled = BigCount::from(n + 2) * binomial(2 * n as i64, n as i64);
    assert!(
        (&doubled % 2u32).is_zero(),
        "(n+2)·C(2n,n) must be even (n = {n})"
    );
    doubled / 2u32
}

/// Exact probability that a gap vector equals `(v1, v2)` at finite `n`.
pub fn gap_vector_prob(n: u64, v1: u64, v2: u64) -> Result<ExactProb> {
    ExactProb::new(gap_vector_count(n, v1, v2)?, total_gap_count(n))
}

/// Exact gap-vector table for all components up to `v_max`.
///
/// The total is the grand total over *all* gaps, so the table is complete
/// exactly when `v_max = n + 1`.
pub fn gap_vector_distribution(n: u64, v_max: u64) -> Result<GapDistribution> {
    if n == 0 || v_max == 0 || v_max > n + 1 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and 1 <= v_max <= n+1, got n={n}, v_max={v_max}"
        )));
    }
    let mut counts = BTreeMap::new();
    for v1 in 1..=v_max {
        for v2 in 1..=v_max {
            let c = gap_vector_count(n, v1, v2)?;
            if !c.is_zero() {
                counts.insert(
                    GapKey::Vector(GapVector(vec![v1 as u32, v2 as u32])),
                    c,
                );
            }
        }
    }
    Ok(GapDistribution::new(
        n,
        GapKind::Vector,
        counts,
        total_gap_count(n),
        Source::Exact,
    ))
}

/// Limiting probability of the gap vector `(v1, v2)`: `1/2^(v1+v2)`.
pub fn limit_vector_prob(v1: u64, v2: u64) -> Result<ExactProb> {
    if v1 == 0 || v2 == 0 {
        return Err(Error::InvalidParameter(
            "gap vector components must be positive".into(),
        ));
    }
    Ok(ExactProb::exp2_inv(v1 + v2))
}

/// Limiting probability of a gap sum `v`: `(v-1)/2^v` for `v >= 2`, zero for
/// 0 and 1 (every step moves in both dimensions).
pub fn limit_sum_prob(v: u64) -> ExactProb {
    if v < 2 {
        return ExactProb::zero();
    }
    let den = BigCount::from(1u32) << v;
    ExactProb::new(BigCount::from(v - 1), den).expect("v-1 < 2^v")
}

/// Limiting probability of a squared gap distance `g`: the sum of
/// `1/2^(v1+v2)` over ordered pairs of positive integers with
/// `v1² + v2² = g`; zero when no representation exists.
pub fn limit_sqdistance_prob(g: u64) -> ExactProb {
    let mut acc = ExactRatio::zero();
    let mut v1 = 1u64;
    while v1 * v1 < g {
        let rest = g - v1 * v1;
        let r = rest.isqrt();
        if r >= 1 && r * r == rest {
            acc = acc.add(ExactProb::exp2_inv(v1 + r).ratio());
        }
        v1 += 1;
    }
    ExactProb::new(acc.numer().clone(), acc.denom().clone()).expect("subsum of a unit law")
}

/// Regroups a vector-keyed table by gap sum or squared gap distance.
/// The grand total is untouched.
pub fn marginalize(dist: &GapDistribution, kind: GapKind) -> Result<GapDistribution> {
    if dist.kind() != GapKind::Vector {
        return Err(Error::WrongDistributionKind {
            expected: "vector",
            actual: dist.kind().as_str(),
        });
    }
    if kind == GapKind::Vector {
        return Err(Error::WrongDistributionKind {
            expected: "sum or sqdistance",
            actual: "vector",
        });
    }
    let mut counts: BTreeMap<GapKey, BigCount> = BTreeMap::new();
    for (key, count) in dist.counts() {
        let v = match key {
            GapKey::Vector(v) => v,
            GapKey::Scalar(_) => unreachable!("vector table holds vector keys"),
        };
        let scalar = match kind {
            GapKind::Sum => v.sum(),
            GapKind::SqDistance => v.sqdistance(),
            GapKind::Vector => unreachable!(),
        };
        *counts.entry(GapKey::Scalar(scalar)).or_insert_with(BigCount::zero) +=
            count.clone();
    }
    Ok(GapDistribution::new(
        dist.n(),
        kind,
        counts,
        dist.total().clone(),
        dist.source(),
    ))
}

/// Ground-truth gap distribution by streaming every path from `(n+1, n+1)`.
pub fn brute_force_distribution(n: u64, kind: GapKind, guard: u64) -> Result<GapDistribution> {
    let start = [(n + 1) as u32, (n + 1) as u32];
    let mut counts: BTreeMap<GapKey, BigCount> = BTreeMap::new();
    let mut total = BigCount::zero();
    for path in paths::enumerate(&start, guard)? {
        for gap in gaps_of_path(&path) {
            let key = match kind {
                GapKind::Vector => GapKey::Vector(gap),
                GapKind::Sum => GapKey::Scalar(gap.sum()),
                GapKind::SqDistance => GapKey::Scalar(gap.sqdistance()),
            };
            *counts.entry(key).or_insert_with(BigCount::zero) += 1u32;
            total += 1u32;
        }
    }
    Ok(GapDistribution::new(n, kind, counts, total, Source::Exact))
}

/// One row of a convergence table: exact finite-`n` probability against the
/// limit, with exact error terms.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub v: GapVector,
    pub n: u64,
    pub exact: ExactProb,
    pub limit: ExactProb,
    pub abs_err: ExactRatio,
    pub rel_err: ExactRatio,
}

/// Exact convergence table for each requested gap vector and lattice size.
/// Components must not exceed the smallest requested `n`.
pub fn convergence_report(vs: &[GapVector], ns: &[u64]) -> Result<Vec<ConvergenceRow>> {
    let min_n = ns.iter().copied().min().unwrap_or(0);
    for v in vs {
        if v.dim() != 2 {
            return Err(Error::InvalidParameter(
                "convergence report covers two dimensions".into(),
            ));
        }
        if v.components().iter().any(|&c| c as u64 > min_n) {
            return Err(Error::InvalidParameter(format!(
                "gap vector {:?} has a component above min(n) = {min_n}",
                v.components()
            )));
        }
    }
    let mut rows = Vec::with_capacity(vs.len() * ns.len());
    for v in vs {
        let (v1, v2) = (v.components()[0] as u64, v.components()[1] as u64);
        let limit = limit_vector_prob(v1, v2)?;
        for &n in ns {
            let exact = gap_vector_prob(n, v1, v2)?;
            let abs_err = exact.abs_diff(&limit);
            let rel_err = abs_err.div(limit.ratio())?;
            rows.push(ConvergenceRow {
                v: v.clone(),
                n,
                exact,
                limit: limit.clone(),
                abs_err,
                rel_err,
            });
        }
    }
    Ok(rows)
}
