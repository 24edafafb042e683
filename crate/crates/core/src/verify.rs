//! Oracle-equivalence verification: every closed form against exhaustive
//! enumeration, reported check by check with minimal counterexamples.

use num_traits::Zero;

use crate::exactmath::{BigCount, ExactRatio};
use crate::gaps::{
    self, brute_force_distribution, gap_count_at, gap_vector_count, total_gap_count, GapKey,
    GapKind, GapVector,
};
use crate::paths::{self, mean_path_length, total_paths, total_paths_2d};
use crate::Result;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Minimal counterexample, present only on failure.
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub n_max: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn ok(name: String) -> CheckResult {
    CheckResult { name, passed: true, counterexample: None }
}

fn fail(name: String, counterexample: String) -> CheckResult {
    CheckResult { name, passed: false, counterexample: Some(counterexample) }
}

/// Runs the full oracle suite for every `n` up to `n_max`.
pub fn run_verification(n_max: u64, guard: u64) -> Result<VerificationReport> {
    run_verification_with(n_max, guard, &|n, v1, v2| gap_vector_count(n, v1, v2))
}

/// As [`run_verification`] but with a pluggable gap-vector count, so the
/// harness itself can be exercised against a deliberately wrong formula.
pub fn run_verification_with(
    n_max: u64,
    guard: u64,
    gap_count: &dyn Fn(u64, u64, u64) -> Result<BigCount>,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let start = [(n + 1) as u32, (n + 1) as u32];

        // path counts: enumeration vs sum-over-lengths vs closed form
        let enumerated = paths::enumerate(&start, guard)?.count() as u64;
        let by_sum = total_paths(&start)?;
        let closed = total_paths_2d(n + 1, n + 1);
        let name = format!("path count (n={n})");
        if BigCount::from(enumerated) != by_sum || by_sum != closed {
            checks.push(fail(
                name,
                format!("enumeration {enumerated}, length sum {by_sum}, closed form {closed}"),
            ));
        } else {
            checks.push(ok(name));
        }

        // total gaps: enumeration vs (n/2+1)C(2n,n) vs weighted length sum
        let brute_vec = brute_force_distribution(n, GapKind::Vector, guard)?;
        let weighted: BigCount = (1..=n + 1)
            .map(|k| paths::paths_with_length(k, &start).map(|c| c * BigCount::from(k)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let closed_total = total_gap_count(n);
        let name = format!("total gap count (n={n})");
        if brute_vec.total() != &closed_total || weighted != closed_total {
            checks.push(fail(
                name,
                format!(
                    "enumeration {}, weighted sum {weighted}, closed form {closed_total}",
                    brute_vec.total()
                ),
            ));
        } else {
            checks.push(ok(name));
        }

        // per-key gap-vector counts, including the boundary cases
        let name = format!("gap vector counts (n={n})");
        let mut bad = None;
        'keys: for v1 in 1..=n + 1 {
            for v2 in 1..=n + 1 {
                let formula = gap_count(n, v1, v2)?;
                let key = GapKey::Vector(GapVector::new(vec![v1 as u32, v2 as u32])?);
                let oracle = brute_vec.count(&key);
                if formula != oracle {
                    bad = Some(format!(
                        "v=({v1},{v2}): formula {formula} != enumeration {oracle}"
                    ));
                    break 'keys;
                }
            }
        }
        checks.push(match bad {
            None => ok(name),
            Some(detail) => fail(name, detail),
        });

        // marginals of the vector table vs directly tallied scalars
        for kind in [GapKind::Sum, GapKind::SqDistance] {
            let name = format!("{} marginal (n={n})", kind.as_str());
            let direct = brute_force_distribution(n, kind, guard)?;
            let rolled = gaps::marginalize(&brute_vec, kind)?;
            if direct.counts() != rolled.counts() {
                let key = direct
                    .counts()
                    .keys()
                    .chain(rolled.counts().keys())
                    .find(|k| direct.count(k) != rolled.count(k))
                    .cloned();
                checks.push(fail(
                    name,
                    format!(
                        "key {}: direct {} != marginalized {}",
                        key.as_ref().map_or_else(|| "?".into(), |k| k.to_string()),
                        key.as_ref().map_or_else(BigCount::zero, |k| direct.count(k)),
                        key.as_ref().map_or_else(BigCount::zero, |k| rolled.count(k)),
                    ),
                ));
            } else {
                checks.push(ok(name));
            }
        }

        // positional decomposition of each per-key count
        let name = format!("position decomposition (n={n})");
        let mut bad = None;
        'pos: for v1 in 1..=n + 1 {
            for v2 in 1..=n + 1 {
                let mut sum = BigCount::zero();
                for x in 0..=n + 1 - v1 {
                    for y in 0..=n + 1 - v2 {
                        sum += gap_count_at(x, y, v1, v2, n)?;
                    }
                }
                let whole = gap_count(n, v1, v2)?;
                if sum != whole {
                    bad = Some(format!(
                        "v=({v1},{v2}): positions sum to {sum}, count is {whole}"
                    ));
                    break 'pos;
                }
            }
        }
        checks.push(match bad {
            None => ok(name),
            Some(detail) => fail(name, detail),
        });

        // mean number of steps
        let name = format!("mean steps (n={n})");
        let mean = ExactRatio::new(weighted.clone(), total_paths(&start)?)?;
        let closed_mean = mean_path_length(n + 1);
        if mean != closed_mean {
            checks.push(fail(name, format!("weighted {mean} != closed {closed_mean}")));
        } else {
            checks.push(ok(name));
        }
    }
    Ok(VerificationReport { n_max, checks })
}
