//! Uniform random sampling of simple jump paths at scales where enumeration
//! is impossible, plus Monte Carlo gap statistics and the coin-run baseline
//! for the longest gap.
//!
//! A path from `(n+1, n+1)` is drawn in two stages: first its length `k`,
//! weighted by the exact count `C(n, k-1)²` of paths with that length (the
//! weight draw uses big-integer cumulative sums, so there is no rounding bias
//! at any `n`); then independent uniform `(k-1)`-subsets of `1..=n` for the
//! intermediate x- and y-coordinates, each sorted descending and paired up.
//!
//! Sampling is chunked: chunk `c` runs its own ChaCha12 generator seeded with
//! `splitmix64(seed + (c+1)·φ64)`. The chunk layout is fixed by `num_paths`
//! alone, so aggregate results are identical for any worker count.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::exactmath::BigCount;
use crate::gaps::{GapDistribution, GapKey, GapKind, GapVector, Source};
use crate::paths::{LatticePoint, SimpleJumpPath};
use crate::{Error, Result};

/// Generator identity recorded in run metadata.
pub const GENERATOR_ID: &str = "chacha12";
/// Chunk-seed derivation recorded in run metadata.
pub const CHUNK_SEED_SCHEME: &str = "splitmix64(seed + (chunk+1)*0x9E3779B97F4A7C15)";
/// Paths per chunk; fixed so results never depend on the worker count.
pub const CHUNK_SIZE: u64 = 4096;

/// Parameters of one sampling run.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    /// Paths start at `(n+1, n+1)`.
    pub n: u64,
    pub num_paths: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        if self.num_paths == 0 {
            return Err(Error::InvalidParameter("num_paths must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be positive".into()));
        }
        Ok(())
    }
}

/// Scalar reduction used when ranking a path's gaps for the longest-gap
/// statistic. The natural choice is open; all three are exposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LongestGapMetric {
    Sum,
    MaxComponent,
    SqDistance,
}

impl LongestGapMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            LongestGapMetric::Sum => "sum",
            LongestGapMetric::MaxComponent => "max_component",
            LongestGapMetric::SqDistance => "sqdistance",
        }
    }

    fn apply(self, dx: u32, dy: u32) -> u64 {
        match self {
            LongestGapMetric::Sum => dx as u64 + dy as u64,
            LongestGapMetric::MaxComponent => dx.max(dy) as u64,
            LongestGapMetric::SqDistance => {
                (dx as u64) * (dx as u64) + (dy as u64) * (dy as u64)
            }
        }
    }
}

/// Histogram of per-path maxima of a gap metric, with summary moments.
#[derive(Debug, Clone, PartialEq)]
pub struct LongestGapStats {
    pub metric: LongestGapMetric,
    pub sample_mean: f64,
    /// Unbiased sample variance (zero for fewer than two paths).
    pub sample_variance: f64,
    pub histogram: BTreeMap<u64, u64>,
    pub num_paths: u64,
}

impl LongestGapStats {
    fn from_histogram(metric: LongestGapMetric, histogram: BTreeMap<u64, u64>) -> Self {
        let num_paths: u64 = histogram.values().sum();
        let sum: u128 = histogram.iter().map(|(&v, &c)| v as u128 * c as u128).sum();
        let sumsq: u128 = histogram
            .iter()
            .map(|(&v, &c)| (v as u128) * (v as u128) * c as u128)
            .sum();
        let n = num_paths as f64;
        let mean = sum as f64 / n;
        let variance = if num_paths > 1 {
            (sumsq as f64 - (sum as f64) * (sum as f64) / n) / (n - 1.0)
        } else {
            0.0
        };
        LongestGapStats {
            metric,
            sample_mean: mean,
            sample_variance: variance,
            histogram,
            num_paths,
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chunk_seed(seed: u64, chunk: u64) -> u64 {
    splitmix64(seed.wrapping_add((chunk + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Uniform big integer in `[0, bound)` by masked rejection sampling.
fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    debug_assert!(!bound.is_zero());
    let bits = bound.bits();
    let nbytes = bits.div_ceil(8) as usize;
    let top_mask = if bits.is_multiple_of(8) { 0xFF } else { (1u8 << (bits % 8)) - 1 };
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let candidate = BigUint::from_bytes_be(&buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Exact-weight sampler for paths from `(n+1, n+1)`. Building one costs
/// `O(n)` big-integer operations; reuse it across draws.
pub struct PathSampler {
    n: u64,
    /// cumulative[k-1] = sum over lengths 1..=k of C(n, k-1)^2
    cumulative: Vec<BigCount>,
}

impl PathSampler {
    pub fn new(n: u64) -> Self {
        let mut cumulative = Vec::with_capacity(n as usize + 1);
        let mut choose = BigCount::from(1u32); // C(n, 0)
        let mut acc = BigCount::zero();
        for j in 0..=n {
            if j > 0 {
                choose *= n - j + 1;
                choose /= j;
            }
            acc += &choose * &choose;
            cumulative.push(acc.clone());
        }
        PathSampler { n, cumulative }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Total path count `C(2n, n)`.
    pub fn total(&self) -> &BigCount {
        self.cumulative.last().expect("nonempty")
    }

    /// Path length `k`, drawn with probability `C(n, k-1)² / C(2n, n)`.
    pub fn draw_length<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        let u = uniform_below(rng, self.total());
        let idx = self.cumulative.partition_point(|c| *c <= u);
        idx as u64 + 1
    }

    /// Descending coordinate sequence for one axis: `n+1`, then a uniform
    /// `(k-1)`-subset of `1..=n`, then `0`.
    fn draw_axis<R: Rng + ?Sized>(&self, rng: &mut R, k: u64) -> Vec<u32> {
        let mut coords = Vec::with_capacity(k as usize + 1);
        coords.push(self.n as u32 + 1);
        let mut picks =
            rand::seq::index::sample(rng, self.n as usize, k as usize - 1).into_vec();
        picks.sort_unstable_by(|a, b| b.cmp(a));
        coords.extend(picks.into_iter().map(|i| i as u32 + 1));
        coords.push(0);
        coords
    }

    /// One uniformly random path, materialized with its points.
    pub fn sample_path<R: Rng + ?Sized>(&self, rng: &mut R) -> SimpleJumpPath {
        let k = self.draw_length(rng);
        let xs = self.draw_axis(rng, k);
        let ys = self.draw_axis(rng, k);
        let points: Vec<LatticePoint> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| LatticePoint::new(vec![x, y]).expect("valid point"))
            .collect();
        SimpleJumpPath::new(points).expect("sampler yields valid paths")
    }

    /// One path, streamed as `(dx, dy)` gap pairs without materializing
    /// points. Consumes the generator exactly like [`Self::sample_path`].
    fn sample_gaps<R: Rng + ?Sized>(&self, rng: &mut R, mut visit: impl FnMut(u32, u32)) {
        let k = self.draw_length(rng);
        let xs = self.draw_axis(rng, k);
        let ys = self.draw_axis(rng, k);
        for i in 0..k as usize {
            visit(xs[i] - xs[i + 1], ys[i] - ys[i + 1]);
        }
    }
}

/// One uniformly random path from `(n+1, n+1)`. Builds a throwaway sampler;
/// use [`PathSampler`] directly for repeated draws.
pub fn sample_path<R: Rng + ?Sized>(n: u64, rng: &mut R) -> SimpleJumpPath {
    PathSampler::new(n).sample_path(rng)
}

/// Fixed chunk layout for `num_paths` samples.
fn chunk_sizes(num_paths: u64) -> Vec<u64> {
    let full = num_paths / CHUNK_SIZE;
    let mut sizes = vec![CHUNK_SIZE; full as usize];
    if !num_paths.is_multiple_of(CHUNK_SIZE) {
        sizes.push(num_paths % CHUNK_SIZE);
    }
    sizes
}

/// Runs `per_chunk` over the fixed chunk layout on up to `cfg.workers`
/// threads and returns the results in chunk order.
fn run_chunks<T, F>(cfg: &SamplerConfig, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha12Rng, u64) -> T + Sync,
{
    let sizes = chunk_sizes(cfg.num_paths);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..sizes.len()).map(|_| None).collect());
    let next = AtomicU64::new(0);
    let workers = cfg.workers.min(sizes.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::Relaxed);
                if c as usize >= sizes.len() {
                    break;
                }
                let mut rng = ChaCha12Rng::seed_from_u64(chunk_seed(cfg.seed, c));
                let out = per_chunk(&mut rng, sizes[c as usize]);
                results.lock().unwrap()[c as usize] = Some(out);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every chunk ran"))
        .collect()
}

// Gap keys are packed into a u64 in the hot tally loop: the high half holds
// v1 for vector tables, zero for scalar tables.
fn pack_vector(dx: u32, dy: u32) -> u64 {
    ((dx as u64) << 32) | dy as u64
}

/// Empirical gap distribution over `cfg.num_paths` sampled paths.
///
/// Same table shape as the exact distributions, but the total counts every
/// sampled gap and the source is flagged [`Source::Empirical`].
pub fn sample_gap_distribution(cfg: &SamplerConfig, kind: GapKind) -> Result<GapDistribution> {
    cfg.validate()?;
    let sampler = PathSampler::new(cfg.n);
    let chunk_maps = run_chunks(cfg, |rng, npaths| {
        let mut tally: HashMap<u64, u64> = HashMap::new();
        for _ in 0..npaths {
            sampler.sample_gaps(rng, |dx, dy| {
                let key = match kind {
                    GapKind::Vector => pack_vector(dx, dy),
                    GapKind::Sum => dx as u64 + dy as u64,
                    GapKind::SqDistance => {
                        (dx as u64) * (dx as u64) + (dy as u64) * (dy as u64)
                    }
                };
                *tally.entry(key).or_insert(0) += 1;
            });
        }
        tally
    });
    let mut counts: BTreeMap<GapKey, BigCount> = BTreeMap::new();
    let mut total = BigCount::zero();
    for map in chunk_maps {
        for (packed, c) in map {
            let key = match kind {
                GapKind::Vector => GapKey::Vector(
                    GapVector::new(vec![(packed >> 32) as u32, packed as u32])
                        .expect("positive components"),
                ),
                _ => GapKey::Scalar(packed),
            };
            *counts.entry(key).or_insert_with(BigCount::zero) += c;
            total += c;
        }
    }
    Ok(GapDistribution::new(cfg.n, kind, counts, total, Source::Empirical))
}

/// Distribution of the per-path maximum of `metric` over sampled paths.
pub fn longest_gap_stats(cfg: &SamplerConfig, metric: LongestGapMetric) -> Result<LongestGapStats> {
    cfg.validate()?;
    let sampler = PathSampler::new(cfg.n);
    let chunk_maps = run_chunks(cfg, |rng, npaths| {
        let mut tally: HashMap<u64, u64> = HashMap::new();
        for _ in 0..npaths {
            let mut best = 0u64;
            sampler.sample_gaps(rng, |dx, dy| {
                best = best.max(metric.apply(dx, dy));
            });
            *tally.entry(best).or_insert(0) += 1;
        }
        tally
    });
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for map in chunk_maps {
        for (v, c) in map {
            *histogram.entry(v).or_insert(0) += c;
        }
    }
    Ok(LongestGapStats::from_histogram(metric, histogram))
}

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Expected longest run of heads in `n` fair coin tosses:
/// `log2(n) + γ/ln 2 - 3/2`, dropping the vanishing error terms (they are
/// bounded by 1.6e-5). Natural log where the classical result writes "log".
/// Meaningful for `n >= 2`.
pub fn coin_run_mean(n: u64) -> f64 {
    (n as f64).log2() + EULER_MASCHERONI / std::f64::consts::LN_2 - 1.5
}

/// Variance of the longest run of heads: `π²/(6 ln² 2) + 1/12`, dropping
/// error terms below 6e-5. Bounded independent of `n`.
pub fn coin_run_variance() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    std::f64::consts::PI.powi(2) / (6.0 * ln2 * ln2) + 1.0 / 12.0
}
