//! Arbitrary-precision counts, exact rationals, and binomial coefficients.
//!
//! Everything downstream counts with [`BigCount`] and expresses probabilities
//! as [`ExactProb`]. Binomials follow the convention `C(n,k) = 0` whenever
//! `k < 0`, `k > n`, or `n < 0`; that convention makes the boundary terms of
//! the gap-count formulas evaluate uniformly without case analysis.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Arbitrary-precision non-negative count.
pub type BigCount = BigUint;

/// `C(n, k)` with the out-of-range convention: 0 when `k < 0`, `k > n`, or `n < 0`.
///
/// Computed by the multiplicative formula with incremental exact division, so
/// intermediates never exceed the result by more than one factor.
pub fn binomial(n: i64, k: i64) -> BigCount {
    if k < 0 || n < 0 || k > n {
        return BigCount::zero();
    }
    let n = n as u64;
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigCount::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Default largest row index kept by [`BinomialCache`].
pub const DEFAULT_CACHE_MAX_N: u64 = 4096;

/// Memoized binomial rows for repeated queries at small-to-moderate `n`.
///
/// Rows are built lazily and only the lower half of each row is stored
/// (symmetry gives the rest). Queries with `n` above the configured cap fall
/// back to direct computation. Internally synchronized, so a shared cache can
/// serve concurrent workers; results are identical to [`binomial`] either way.
pub struct BinomialCache {
    max_n: u64,
    rows: RwLock<HashMap<u64, Vec<BigCount>>>,
}

impl BinomialCache {
    pub fn new(max_n: u64) -> Self {
        BinomialCache { max_n, rows: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, n: i64, k: i64) -> BigCount {
        if k < 0 || n < 0 || k > n {
            return BigCount::zero();
        }
        let (un, uk) = (n as u64, k as u64);
        if un > self.max_n {
            return binomial(n, k);
        }
        let idx = uk.min(un - uk) as usize;
        if let Some(row) = self.rows.read().unwrap().get(&un) {
            return row[idx].clone();
        }
        let row = half_row(un);
        let value = row[idx].clone();
        self.rows.write().unwrap().entry(un).or_insert(row);
        value
    }
}

impl Default for BinomialCache {
    fn default() -> Self {
        BinomialCache::new(DEFAULT_CACHE_MAX_N)
    }
}

/// Entries `C(n, 0..=n/2)` computed by stepping `C(n,k) = C(n,k-1)·(n-k+1)/k`.
fn half_row(n: u64) -> Vec<BigCount> {
    let half = (n / 2) as usize;
    let mut row = Vec::with_capacity(half + 1);
    row.push(BigCount::one());
    for k in 1..=half as u64 {
        let mut next = row.last().unwrap().clone();
        next *= n - k + 1;
        next /= k;
        row.push(next);
    }
    row
}

/// A reduced non-negative rational. The denominator is always positive.
///
/// This is the working type for exact means and errors, which can exceed 1;
/// probabilities get the tighter [`ExactProb`] wrapper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRatio {
    num: BigCount,
    den: BigCount,
}

impl ExactRatio {
    pub fn new(num: BigCount, den: BigCount) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        Ok(ExactRatio { num: num / &g, den: den / g })
    }

    pub fn from_integer(n: u64) -> Self {
        ExactRatio { num: BigCount::from(n), den: BigCount::one() }
    }

    pub fn zero() -> Self {
        ExactRatio { num: BigCount::zero(), den: BigCount::one() }
    }

    pub fn one() -> Self {
        ExactRatio { num: BigCount::one(), den: BigCount::one() }
    }

    pub fn numer(&self) -> &BigCount {
        &self.num
    }

    pub fn denom(&self) -> &BigCount {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &ExactRatio) -> ExactRatio {
        let num = &self.num * &other.den + &other.num * &self.den;
        let den = &self.den * &other.den;
        ExactRatio::new(num, den).expect("nonzero denominators")
    }

    /// |self − other|, exactly.
    pub fn abs_diff(&self, other: &ExactRatio) -> ExactRatio {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let num = if a >= b { a - b } else { b - a };
        ExactRatio::new(num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn mul(&self, other: &ExactRatio) -> ExactRatio {
        ExactRatio::new(&self.num * &other.num, &self.den * &other.den)
            .expect("nonzero denominators")
    }

    /// self / other; errors when `other` is zero.
    pub fn div(&self, other: &ExactRatio) -> Result<ExactRatio> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        ExactRatio::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Nearest `f64`; reporting convenience only.
    pub fn to_f64(&self) -> f64 {
        // 80 significant digits is far beyond f64 precision.
        self.to_decimal(80).parse().unwrap_or(f64::NAN)
    }

    /// Correctly rounded decimal expansion with `digits` significant digits
    /// (round half up). Values whose integer part already has more than
    /// `digits` digits are rendered in full.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.num.is_zero() {
            return format!("0.{}", "0".repeat(digits));
        }
        // Position of the first significant digit: count leading zeros after
        // the decimal point for values < 1.
        let mut leading = 0usize;
        if self.num < self.den {
            let mut scaled = self.num.clone() * 10u32;
            while scaled < self.den {
                leading += 1;
                scaled *= 10u32;
            }
        }
        let ten = BigCount::from(10u32);
        let mut frac_digits = leading + digits;
        loop {
            let scaled = &self.num * ten.pow(frac_digits as u32);
            // round half up
            let rounded = (scaled * 2u32 + &self.den) / (&self.den * 2u32);
            let ndigits = rounded.to_string().len();
            if ndigits > digits && frac_digits > 0 {
                // Rounding carried into a new leading digit; drop one place.
                frac_digits -= 1;
                continue;
            }
            let s = rounded.to_string();
            return if frac_digits == 0 {
                s
            } else if s.len() <= frac_digits {
                format!("0.{}{}", "0".repeat(frac_digits - s.len()), s)
            } else {
                let (int_part, frac_part) = s.split_at(s.len() - frac_digits);
                format!("{int_part}.{frac_part}")
            };
        }
    }
}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// An exact probability: a reduced rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProb(ExactRatio);

impl ExactProb {
    pub fn new(num: BigCount, den: BigCount) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num > den {
            return Err(Error::ProbabilityAboveOne { num, den });
        }
        Ok(ExactProb(ExactRatio::new(num, den)?))
    }

    pub fn zero() -> Self {
        ExactProb(ExactRatio::zero())
    }

    pub fn one() -> Self {
        ExactProb(ExactRatio::one())
    }

    /// `1 / 2^e`.
    pub fn exp2_inv(e: u64) -> Self {
        let den = BigCount::one() << e;
        ExactProb(ExactRatio { num: BigCount::one(), den })
    }

    pub fn ratio(&self) -> &ExactRatio {
        &self.0
    }

    pub fn into_ratio(self) -> ExactRatio {
        self.0
    }

    pub fn numer(&self) -> &BigCount {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigCount {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        self.0.to_decimal(digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn abs_diff(&self, other: &ExactProb) -> ExactRatio {
        self.0.abs_diff(&other.0)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Reduced probability `num/den`; errors on zero denominator or `num > den`.
pub fn prob(num: BigCount, den: BigCount) -> Result<ExactProb> {
    ExactProb::new(num, den)
}

/// Decimal rendering of a probability to `digits` significant digits.
pub fn to_decimal(p: &ExactProb, digits: usize) -> String {
    p.to_decimal(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: u64) -> BigCount {
        BigCount::from(n)
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), b(6));
        assert_eq!(binomial(0, 0), b(1));
        assert_eq!(binomial(3, 5), b(0));
    }

    #[test]
    fn binomial_out_of_range_is_zero() {
        assert_eq!(binomial(-1, 0), b(0));
        assert_eq!(binomial(5, -1), b(0));
        assert_eq!(binomial(-2, -1), b(0));
        assert_eq!(binomial(-3, -5), b(0));
    }

    #[test]
    fn binomial_row_sums_are_powers_of_two() {
        for n in 0..=64u32 {
            let sum: BigCount = (0..=n as i64).map(|k| binomial(n as i64, k)).sum();
            assert_eq!(sum, BigCount::one() << n, "row {n}");
        }
    }

    #[test]
    fn cache_matches_direct() {
        let cache = BinomialCache::new(100);
        for n in 0..=120i64 {
            for k in -1..=n + 1 {
                assert_eq!(cache.get(n, k), binomial(n, k), "C({n},{k})");
            }
        }
    }

    #[test]
    fn prob_examples() {
        let p = prob(b(2), b(4)).unwrap();
        assert_eq!((p.numer(), p.denom()), (&b(1), &b(2)));
        let z = prob(b(0), b(7)).unwrap();
        assert_eq!((z.numer(), z.denom()), (&b(0), &b(1)));
        let q = prob(b(5), b(12)).unwrap();
        assert_eq!((q.numer(), q.denom()), (&b(5), &b(12)));
    }

    #[test]
    fn prob_rejects_bad_inputs() {
        assert_eq!(prob(b(1), b(0)), Err(Error::ZeroDenominator));
        assert!(matches!(
            prob(b(13), b(12)),
            Err(Error::ProbabilityAboveOne { .. })
        ));
    }

    #[test]
    fn decimal_rendering() {
        let quarter = prob(b(1), b(4)).unwrap();
        assert_eq!(to_decimal(&quarter, 3), "0.250");
        let five_twelfths = prob(b(5), b(12)).unwrap();
        assert_eq!(to_decimal(&five_twelfths, 4), "0.4167");
        let third = prob(b(1), b(3)).unwrap();
        assert_eq!(to_decimal(&third, 2), "0.33");
    }

    #[test]
    fn decimal_rendering_edge_cases() {
        // leading zeros after the point do not count as significant
        let p = ExactRatio::new(b(1), b(64)).unwrap();
        assert_eq!(p.to_decimal(3), "0.0156");
        // rounding that carries into a new leading digit
        let q = ExactRatio::new(b(999), b(10000)).unwrap();
        assert_eq!(q.to_decimal(2), "0.10");
        // exactly one
        assert_eq!(ExactRatio::one().to_decimal(3), "1.00");
        // zero
        assert_eq!(ExactRatio::zero().to_decimal(4), "0.0000");
        // value above one keeps `digits` significant digits
        let r = ExactRatio::new(b(5), b(3)).unwrap();
        assert_eq!(r.to_decimal(4), "1.667");
        // integer part wider than `digits` is rendered in full
        let big = ExactRatio::new(b(123456), b(1)).unwrap();
        assert_eq!(big.to_decimal(2), "123456");
    }

    #[test]
    fn ratio_ordering_and_difference() {
        let a = ExactRatio::new(b(2), b(3)).unwrap();
        let c = ExactRatio::new(b(1), b(4)).unwrap();
        assert!(a > c);
        let d = a.abs_diff(&c);
        assert_eq!((d.numer(), d.denom()), (&b(5), &b(12)));
        assert_eq!(c.abs_diff(&a), d);
    }

    #[test]
    fn to_f64_roundtrip() {
        let p = ExactRatio::new(b(1), b(4)).unwrap();
        assert_eq!(p.to_f64(), 0.25);
        let q = ExactRatio::new(b(3), b(2)).unwrap();
        assert_eq!(q.to_f64(), 1.5);
    }

    proptest! {
        // Pascal recurrence on randomized (n, k) pairs.
        #[test]
        fn pascal_recurrence(n in 1i64..=200, k in 0i64..=200) {
            let k = k.min(n);
            prop_assert_eq!(
                binomial(n, k),
                binomial(n - 1, k - 1) + binomial(n - 1, k)
            );
        }

        // Vandermonde: sum_k C(a, g-k) C(b, k) = C(a+b, g).
        #[test]
        fn vandermonde(a in 0i64..=60, bx in 0i64..=60, g in 0i64..=60) {
            let lhs: BigCount = (0..=g).map(|k| binomial(a, g - k) * binomial(bx, k)).sum();
            prop_assert_eq!(lhs, binomial(a + bx, g));
        }

        // Rational addition is exact through reduction.
        #[test]
        fn ratio_addition_exact(a in 0u64..1000, bq in 1u64..1000, c in 0u64..1000, d in 1u64..1000) {
            let x = ExactRatio::new(b(a), b(bq)).unwrap();
            let y = ExactRatio::new(b(c), b(d)).unwrap();
            let sum = x.add(&y);
            // compare against the unreduced cross-multiplied form
            let lhs = sum.numer() * (bq * d);
            let rhs = b(a * d + c * bq) * sum.denom();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cache_agrees_with_direct(n in 0i64..=300, k in 0i64..=300) {
            let cache = BinomialCache::new(128);
            prop_assert_eq!(cache.get(n, k), binomial(n, k));
        }
    }
}
