//! CSV and JSON rendering. CSV tables have a fixed header and lexicographic
//! key order; exact rationals are always emitted as `p/q` next to a decimal
//! column, so downstream checks never have to parse floats.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use lattice_gaps::exactmath::{BigCount, ExactProb, ExactRatio};
use lattice_gaps::gaps::{
    limit_sqdistance_prob, limit_sum_prob, limit_vector_prob, ConvergenceRow, GapDistribution,
    GapKey, GapKind,
};
use lattice_gaps::sampling::LongestGapStats;
use lattice_gaps::sequence::LatticeSequence;
use lattice_gaps::verify::VerificationReport;

use crate::CliError;

pub fn sequence_json(seq: &LatticeSequence) -> Value {
    let entries: Vec<Value> = seq
        .entries()
        .iter()
        .enumerate()
        .map(|(idx, e)| {
            json!({
                "i": e.pos.0,
                "j": e.pos.1,
                "value": e.value,
                "fill_index": idx + 1,
            })
        })
        .collect();
    json!({
        "schema_version": 1,
        "command": "sequence",
        "diagonals": seq.num_diagonals(),
        "entries": entries,
    })
}

pub fn count_summary_csv(
    n: u64,
    s2: &BigCount,
    total_gaps: &BigCount,
    mean: &ExactRatio,
    digits: usize,
) -> String {
    let mut s = String::from("n,s2,total_gaps,mean_steps,mean_steps_decimal\n");
    s.push_str(&format!(
        "{n},{s2},{total_gaps},{mean},{}\n",
        mean.to_decimal(digits)
    ));
    s
}

pub fn count_lengths_csv(lengths: &[(u64, BigCount)]) -> String {
    let mut s = String::from("k,t2\n");
    for (k, t) in lengths {
        s.push_str(&format!("{k},{t}\n"));
    }
    s
}

pub fn count_json(
    n: u64,
    s2: &BigCount,
    total_gaps: &BigCount,
    mean: &ExactRatio,
    lengths: &[(u64, BigCount)],
    digits: usize,
) -> Value {
    json!({
        "schema_version": 1,
        "command": "count",
        "n": n,
        "s2": s2.to_string(),
        "total_gaps": total_gaps.to_string(),
        "mean_steps": mean.to_string(),
        "mean_steps_decimal": mean.to_decimal(digits),
        "lengths": lengths
            .iter()
            .map(|(k, t)| json!({"k": k, "t2": t.to_string()}))
            .collect::<Vec<_>>(),
    })
}

fn limit_for(kind: GapKind, key: &GapKey) -> Result<ExactProb, CliError> {
    Ok(match (kind, key) {
        (GapKind::Vector, GapKey::Vector(v)) => {
            limit_vector_prob(v.components()[0] as u64, v.components()[1] as u64)?
        }
        (GapKind::Sum, GapKey::Scalar(s)) => limit_sum_prob(*s),
        (GapKind::SqDistance, GapKey::Scalar(s)) => limit_sqdistance_prob(*s),
        _ => {
            return Err(CliError::Usage(
                "limit columns need matching key and kind".into(),
            ))
        }
    })
}

fn limit_cells(
    p: &ExactProb,
    limit: &ExactProb,
    digits: usize,
) -> (String, String, String, String) {
    let abs = p.abs_diff(limit);
    let rel = if limit.is_zero() {
        "inf".to_string()
    } else {
        abs.div(limit.ratio()).expect("nonzero limit").to_decimal(digits)
    };
    (
        limit.to_string(),
        limit.to_decimal(digits),
        abs.to_decimal(digits),
        rel,
    )
}

/// Shared CSV for exact and empirical distributions. Vector tables carry
/// `v1,v2` columns; scalar tables a single `key` column.
pub fn distribution_csv(
    dist: &GapDistribution,
    digits: usize,
    limits: Option<GapKind>,
) -> Result<String, CliError> {
    let vector_keys = dist.kind() == GapKind::Vector;
    let mut s = String::new();
    s.push_str(if vector_keys { "v1,v2" } else { "key" });
    s.push_str(",count,probability,probability_decimal");
    if limits.is_some() {
        s.push_str(",limit,limit_decimal,abs_error_decimal,rel_error_decimal");
    }
    s.push('\n');
    for (key, count) in dist.counts() {
        match key {
            GapKey::Vector(v) => {
                s.push_str(&format!("{},{}", v.components()[0], v.components()[1]))
            }
            GapKey::Scalar(k) => s.push_str(&k.to_string()),
        }
        let p = dist.probability(key)?;
        s.push_str(&format!(",{count},{p},{}", p.to_decimal(digits)));
        if let Some(kind) = limits {
            let limit = limit_for(kind, key)?;
            let (l, ld, a, r) = limit_cells(&p, &limit, digits);
            s.push_str(&format!(",{l},{ld},{a},{r}"));
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn distribution_json(
    dist: &GapDistribution,
    digits: usize,
    limits: Option<GapKind>,
    command: &str,
) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    for (key, count) in dist.counts() {
        let p = dist.probability(key)?;
        let mut row = match key {
            GapKey::Vector(v) => json!({
                "v1": v.components()[0],
                "v2": v.components()[1],
            }),
            GapKey::Scalar(k) => json!({ "key": k }),
        };
        let obj = row.as_object_mut().expect("object row");
        obj.insert("count".into(), json!(count.to_string()));
        obj.insert("probability".into(), json!(p.to_string()));
        obj.insert("probability_decimal".into(), json!(p.to_decimal(digits)));
        if let Some(kind) = limits {
            let limit = limit_for(kind, key)?;
            let (l, ld, a, r) = limit_cells(&p, &limit, digits);
            obj.insert("limit".into(), json!(l));
            obj.insert("limit_decimal".into(), json!(ld));
            obj.insert("abs_error_decimal".into(), json!(a));
            obj.insert("rel_error_decimal".into(), json!(r));
        }
        rows.push(row);
    }
    Ok(json!({
        "schema_version": 1,
        "command": command,
        "n": dist.n(),
        "kind": dist.kind().as_str(),
        "source": match dist.source() {
            lattice_gaps::gaps::Source::Exact => "exact",
            lattice_gaps::gaps::Source::Empirical => "empirical",
        },
        "total": dist.total().to_string(),
        "rows": rows,
    }))
}

/// Drops scalar keys above `v_max`, keeping the grand total.
pub fn truncate_scalar_keys(dist: &GapDistribution, v_max: u64) -> GapDistribution {
    let counts = dist
        .counts()
        .iter()
        .filter(|(key, _)| match key {
            GapKey::Scalar(k) => *k <= v_max,
            GapKey::Vector(_) => true,
        })
        .map(|(k, c)| (k.clone(), c.clone()))
        .collect();
    GapDistribution::new(dist.n(), dist.kind(), counts, dist.total().clone(), dist.source())
}

pub fn verify_json(report: &VerificationReport, guard: u64) -> Value {
    json!({
        "schema_version": 1,
        "command": "verify",
        "n_max": report.n_max,
        "guard": guard,
        "passed": report.passed(),
        "checks": report
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "counterexample": c.counterexample,
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn histogram_csv(histogram: &BTreeMap<u64, u64>) -> String {
    let mut s = String::from("value,count\n");
    for (v, c) in histogram {
        s.push_str(&format!("{v},{c}\n"));
    }
    s
}

pub fn longest_stats_json(stats: &LongestGapStats, n: u64, rng_meta: &Value) -> Value {
    json!({
        "schema_version": 1,
        "command": "sample",
        "mode": "longest",
        "n": n,
        "metric": stats.metric.as_str(),
        "num_paths": stats.num_paths,
        "sample_mean": stats.sample_mean,
        "sample_variance": stats.sample_variance,
        // fair-coin longest-run baseline for scale
        "coin_run_mean": lattice_gaps::sampling::coin_run_mean(n.max(2)),
        "coin_run_variance": lattice_gaps::sampling::coin_run_variance(),
        "histogram": stats
            .histogram
            .iter()
            .map(|(v, c)| json!({"value": v, "count": c}))
            .collect::<Vec<_>>(),
        "rng": rng_meta,
    })
}

pub fn convergence_csv(rows: &[ConvergenceRow], digits: usize) -> String {
    let mut s = String::from(
        "v1,v2,n,exact,exact_decimal,limit,limit_decimal,abs_error_decimal,rel_error_decimal\n",
    );
    for row in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.v.components()[0],
            row.v.components()[1],
            row.n,
            row.exact,
            row.exact.to_decimal(digits),
            row.limit,
            row.limit.to_decimal(digits),
            row.abs_err.to_decimal(digits),
            row.rel_err.to_decimal(digits),
        ));
    }
    s
}

pub fn convergence_json(rows: &[ConvergenceRow], digits: usize) -> Value {
    json!({
        "schema_version": 1,
        "command": "converge",
        "rows": rows
            .iter()
            .map(|row| {
                json!({
                    "v1": row.v.components()[0],
                    "v2": row.v.components()[1],
                    "n": row.n,
                    "exact": row.exact.to_string(),
                    "exact_decimal": row.exact.to_decimal(digits),
                    "limit": row.limit.to_string(),
                    "limit_decimal": row.limit.to_decimal(digits),
                    "abs_error_decimal": row.abs_err.to_decimal(digits),
                    "rel_error_decimal": row.rel_err.to_decimal(digits),
                })
            })
            .collect::<Vec<_>>(),
    })
}
