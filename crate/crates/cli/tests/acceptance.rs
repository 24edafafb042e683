//! Acceptance suite. Each test pins one release criterion at its stated
//! tolerance and prints a single verdict line; run with `--nocapture` to see
//! the lines alongside the harness output.

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use lattice_gaps::exactmath::{binomial, BigCount, ExactRatio};
use lattice_gaps::gaps::{
    self, brute_force_distribution, gap_vector_prob, limit_sum_prob, limit_vector_prob, GapKey,
    GapKind, GapVector,
};
use lattice_gaps::paths::{self, DEFAULT_ENUMERATION_GUARD};
use lattice_gaps::sampling::{self, LongestGapMetric, PathSampler, SamplerConfig};
use lattice_gaps::sequence;

fn pass(criterion: &str) {
    println!("ACCEPTANCE {criterion}: PASS");
}

fn b(n: u64) -> BigCount {
    BigCount::from(n)
}

/// Display rows bottom (j = 1) to top (j = 9); 45 entries total.
const NINE_DIAGONALS: [&[u64]; 9] = [
    &[1, 2, 4, 8, 16, 29, 54, 90, 159],
    &[3, 5, 9, 17, 30, 56, 93, 160],
    &[7, 12, 20, 33, 59, 100, 171],
    &[14, 24, 40, 66, 107, 184],
    &[28, 48, 74, 123, 198],
    &[50, 82, 139, 230],
    &[84, 155, 259],
    &[157, 263],
    &[280],
];

#[test]
fn acceptance_01_sequence_reproduction() {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lattice-gaps"))
        .args(["sequence", "--diagonals", "9", "--format", "grid"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let grid: Vec<Vec<u64>> = text
        .lines()
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(grid.len(), 9);
    // stdout rows run top (j=9) to bottom (j=1)
    for (row_idx, row) in grid.iter().enumerate() {
        let expected = NINE_DIAGONALS[8 - row_idx];
        assert_eq!(row, expected, "row {} from the top", row_idx + 1);
    }
    assert_eq!(grid.iter().map(Vec::len).sum::<usize>(), 45);
    assert!(started.elapsed().as_secs() < 60, "runtime under a minute");
    pass("1 (sequence reproduction)");
}

#[test]
fn acceptance_02_non_uniqueness_of_25() {
    let seq = sequence::build_sequence(9).unwrap();
    let decs = seq.decompositions(25);
    assert_eq!(decs.len(), 2, "exactly two decompositions");
    let mut value_sets: Vec<Vec<u64>> = decs
        .iter()
        .map(|d| {
            let mut v = d.values.clone();
            v.sort_unstable();
            v
        })
        .collect();
    value_sets.sort();
    assert_eq!(value_sets, vec![vec![1, 24], vec![5, 20]]);
    pass("2 (25 decomposes as 20+5 and 24+1 only)");
}

#[test]
fn acceptance_03_counting_closed_forms_vs_oracle() {
    let started = Instant::now();
    for n in 1..=6u64 {
        let start = [(n + 1) as u32, (n + 1) as u32];
        let enumerated = paths::enumerate(&start, DEFAULT_ENUMERATION_GUARD)
            .unwrap()
            .count() as u64;
        assert_eq!(b(enumerated), binomial(2 * n as i64, n as i64), "s2 at n={n}");

        let weighted: BigCount = (1..=n + 1)
            .map(|k| paths::paths_with_length(k, &start).unwrap() * b(k))
            .sum();
        let closed = (b(n + 2) * binomial(2 * n as i64, n as i64)) / 2u32;
        assert_eq!(weighted, closed, "gap total at n={n}");
        assert_eq!(weighted, gaps::total_gap_count(n));
    }
    assert!(started.elapsed().as_secs() < 120);
    pass("3 (path and gap totals match enumeration, n <= 6)");
}

#[test]
fn acceptance_04_gap_formula_vs_oracle() {
    for n in 1..=6u64 {
        let brute =
            brute_force_distribution(n, GapKind::Vector, DEFAULT_ENUMERATION_GUARD).unwrap();
        for v1 in 1..=n + 1 {
            for v2 in 1..=n + 1 {
                let key = GapKey::Vector(GapVector::new(vec![v1 as u32, v2 as u32]).unwrap());
                assert_eq!(
                    gaps::gap_vector_count(n, v1, v2).unwrap(),
                    brute.count(&key),
                    "n={n}, v=({v1},{v2})"
                );
            }
        }
    }
    pass("4 (gap-vector formula matches enumeration incl. boundaries, n <= 6)");
}

#[test]
fn acceptance_05_limit_convergence() {
    let started = Instant::now();
    let one_percent = ExactRatio::new(b(1), b(100)).unwrap();
    for (v1, v2) in [(1u64, 1u64), (1, 2), (2, 2)] {
        let limit = limit_vector_prob(v1, v2).unwrap();
        let mut errors = Vec::new();
        for n in [10u64, 100, 1000] {
            let exact = gap_vector_prob(n, v1, v2).unwrap();
            errors.push(exact.abs_diff(&limit));
        }
        assert!(
            errors[0] > errors[1] && errors[1] > errors[2],
            "strictly decreasing error for ({v1},{v2})"
        );
        let rel = errors[2].div(limit.ratio()).unwrap();
        assert!(rel < one_percent, "relative error at n=1000 for ({v1},{v2})");
    }
    assert!(started.elapsed().as_secs() < 10);
    pass("5 (P_n -> 1/2^(v1+v2), monotone, <1% at n=1000)");
}

#[test]
fn acceptance_06_gap_sum_law() {
    for v in 2..=20u64 {
        let mut marginal = ExactRatio::zero();
        for v1 in 1..v {
            marginal = marginal.add(limit_vector_prob(v1, v - v1).unwrap().ratio());
        }
        let law = limit_sum_prob(v);
        assert_eq!(&marginal, law.ratio(), "v={v}");
        let expected = ExactRatio::new(b(v - 1), b(1) << v).unwrap();
        assert_eq!(marginal, expected, "v={v}");
    }
    assert!(limit_sum_prob(0).is_zero());
    assert!(limit_sum_prob(1).is_zero());
    pass("6 (gap-sum law equals (v-1)/2^v exactly, 2 <= v <= 20)");
}

#[test]
fn acceptance_07_normalization() {
    let tolerance = ExactRatio::new(b(1), BigCount::from(1u32) << 60).unwrap();
    let mut vector_sum = ExactRatio::zero();
    for v1 in 1..=64u64 {
        for v2 in 1..=64u64 {
            vector_sum = vector_sum.add(limit_vector_prob(v1, v2).unwrap().ratio());
        }
    }
    let vector_deficit = ExactRatio::one().abs_diff(&vector_sum);
    assert!(vector_deficit < tolerance, "vector-law deficit {vector_deficit}");

    let mut sum_sum = ExactRatio::zero();
    for v in 2..=128u64 {
        sum_sum = sum_sum.add(limit_sum_prob(v).ratio());
    }
    let sum_deficit = ExactRatio::one().abs_diff(&sum_sum);
    assert!(sum_deficit < tolerance, "sum-law deficit {sum_deficit}");
    pass("7 (both limit laws within 2^-60 of 1 at component cutoff 64)");
}

#[test]
fn acceptance_08_vandermonde_random_triples() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x5eed);
    for trial in 0..200 {
        let a = rng.random_range(0..=60i64);
        let bb = rng.random_range(0..=60i64);
        let g = rng.random_range(0..=60i64);
        let lhs: BigCount = (0..=g).map(|k| binomial(a, g - k) * binomial(bb, k)).sum();
        assert_eq!(lhs, binomial(a + bb, g), "trial {trial}: ({a},{bb},{g})");
    }
    pass("8 (Vandermonde identity on 200 random triples <= 60)");
}

#[test]
fn acceptance_09_sampler_uniformity() {
    let started = Instant::now();

    // chi-square goodness of fit over every enumerated path, n <= 4
    // (70 paths from (5,5) at n = 4)
    for n in 1..=4u64 {
        let all: Vec<_> = paths::enumerate(
            &[(n + 1) as u32, (n + 1) as u32],
            DEFAULT_ENUMERATION_GUARD,
        )
        .unwrap()
        .collect();
        let index: HashMap<_, usize> = all.iter().cloned().zip(0..).collect();
        let sampler = PathSampler::new(n);
        let mut rng = ChaCha12Rng::seed_from_u64(20240 + n);
        let trials = 100_000u64;
        let mut hits = vec![0u64; all.len()];
        for _ in 0..trials {
            hits[index[&sampler.sample_path(&mut rng)]] += 1;
        }
        let expected = trials as f64 / all.len() as f64;
        let x2: f64 = hits
            .iter()
            .map(|&h| {
                let d = h as f64 - expected;
                d * d / expected
            })
            .sum();
        let chi = ChiSquared::new(all.len() as f64 - 1.0).unwrap();
        let p_value = 1.0 - chi.cdf(x2);
        assert!(
            p_value > 1e-3,
            "n={n}: chi-square p-value {p_value} (X2 = {x2}, {} paths)",
            all.len()
        );
        if n == 4 {
            assert_eq!(all.len(), 70);
        }
    }

    // empirical frequencies at n = 1000 vs exact, for every gap vector whose
    // limit probability is at least 1/64 (v1 + v2 <= 6)
    let cfg = SamplerConfig { n: 1000, num_paths: 200_000, seed: 141_421, workers: 4 };
    let emp = sampling::sample_gap_distribution(&cfg, GapKind::Vector).unwrap();
    let total: f64 = emp.total().to_string().parse().unwrap();
    for v1 in 1..=5u64 {
        for v2 in 1..=(6 - v1) {
            let exact = gap_vector_prob(1000, v1, v2).unwrap().to_f64();
            let key = GapKey::Vector(GapVector::new(vec![v1 as u32, v2 as u32]).unwrap());
            let freq: f64 = emp.count(&key).to_string().parse::<f64>().unwrap() / total;
            let sigma = (exact * (1.0 - exact) / total).sqrt();
            assert!(
                (freq - exact).abs() <= 3.0 * sigma,
                "({v1},{v2}) at n=1000: freq {freq}, exact {exact}, sigma {sigma}"
            );
        }
    }

    assert!(started.elapsed().as_secs() < 120);
    pass("9 (uniform sampler: chi-square n<=4 plus 3-sigma checks at n=1000)");
}

#[test]
fn acceptance_10_one_dimensional_case() {
    for n in 1..=30u32 {
        assert_eq!(
            paths::total_paths(&[n]).unwrap(),
            BigCount::from(1u32) << (n - 1),
            "s1({n})"
        );
    }
    let terms = sequence::build_1d(10).unwrap();
    for m in 1..=512u64 {
        let mut subsets = Vec::new();
        for mask in 1u32..(1 << terms.len()) {
            let sum: u64 = terms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .sum();
            if sum == m {
                subsets.push(mask);
            }
        }
        assert_eq!(subsets.len(), 1, "m={m} has a unique decomposition");
        let from_bits: Vec<u32> = sequence::decompose_1d(m).into_iter().collect();
        let from_search: Vec<u32> = (0..terms.len() as u32)
            .filter(|i| subsets[0] >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        assert_eq!(from_bits, from_search, "m={m}");
    }
    pass("10 (d=1: powers of two and unique binary decompositions)");
}

#[test]
fn acceptance_11_longest_gap_band() {
    let num_paths = 100_000u64;
    let seed = 77;
    let at = |n: u64| {
        sampling::longest_gap_stats(
            &SamplerConfig { n, num_paths, seed, workers: 4 },
            LongestGapMetric::MaxComponent,
        )
        .unwrap()
    };
    let small = at(1 << 10);
    let log_n = (1024f64).log2();
    assert!(
        small.sample_mean >= 0.5 * log_n && small.sample_mean <= 2.0 * log_n,
        "mean {} outside [{}, {}]",
        small.sample_mean,
        0.5 * log_n,
        2.0 * log_n
    );
    let large = at(1 << 12);
    assert!(
        large.sample_mean > small.sample_mean,
        "longest gap grows with n: {} vs {}",
        large.sample_mean,
        small.sample_mean
    );
    pass("11 (longest max-component gap sits in the log2 band and grows)");
}
