//! Exact arbitrary-precision arithmetic and the combinatorial number
//! families used throughout the crate: factorials, double and falling
//! factorials, Stirling numbers of the second kind, Bessel numbers,
//! Bessel polynomial values and harmonic numbers.
//!
//! All values are exact. The coefficient field everywhere is [`Rational`],
//! an arbitrary-precision fraction kept in lowest terms with a positive
//! denominator.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number: arbitrary-precision, lowest terms, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Rational from a numerator/denominator pair. Panics on a zero denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// n! as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Double factorial m!! with the conventions (-1)!! = 0!! = 1.
///
/// Rejects m < -1, where the product convention has no consistent value.
pub fn double_factorial(m: i64) -> Result<BigInt> {
    if m < -1 {
        return Err(Error::DoubleFactorialRange(m));
    }
    let mut acc = BigInt::one();
    let mut i = m;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

/// Falling factorial (m)_j = m(m-1)...(m-j+1), with (m)_0 = 1 and 0 past zero.
pub fn falling_factorial(m: usize, j: usize) -> BigInt {
    if j > m {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= m - i;
    }
    acc
}

/// Binomial coefficient C(n, k); 0 when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Stirling number of the second kind S(n, k) via the standard recurrence
/// S(n,k) = k S(n-1,k) + S(n-1,k-1); zero outside 0 <= k <= n.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    // row DP; row[j] = S(i, j)
    let mut row = vec![BigInt::one()];
    for i in 1..=n {
        let mut next = vec![BigInt::zero(); i + 1];
        for j in 1..=i {
            let carry = if j < i { &row[j] * j } else { BigInt::zero() };
            next[j] = carry + &row[j - 1];
        }
        row = next;
    }
    row[k].clone()
}

/// Bessel number a(n, k) = (n+k)! / (2^k k! (n-k)!), the coefficient of x^k
/// in the row-n Bessel polynomial; 0 outside 0 <= k <= n.
pub fn bessel_closed(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let numer = factorial(n + k);
    let denom = (BigInt::one() << k) * factorial(k) * factorial(n - k);
    // always divides exactly
    numer / denom
}

/// Triangle of Bessel numbers a(n, k) for 0 <= k <= n <= n_max, built by the
/// recurrence a(n,k) = a(n-1,k) + (n-k+1) a(n,k-1) with a(0,0) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesselTriangle {
    rows: Vec<Vec<BigInt>>,
}

impl BesselTriangle {
    /// Builds rows 0..=n_max from the recurrence alone.
    pub fn build(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=n_max {
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one()); // a(n,0) = a(n-1,0)
            for k in 1..=n {
                let above = if k < n {
                    rows[n - 1][k].clone()
                } else {
                    BigInt::zero()
                };
                let left: BigInt = &row[k - 1] * (n - k + 1);
                row.push(above + left);
            }
            rows.push(row);
        }
        BesselTriangle { rows }
    }

    /// Wraps preassembled rows; used by the harness to inject corrupted
    /// entries. Row lengths must be triangular.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        assert!(!rows.is_empty());
        for (n, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n + 1, "row {n} must have {} entries", n + 1);
        }
        BesselTriangle { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// a(n, k), or 0 outside the triangle. Panics if n exceeds the built range.
    pub fn entry(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            self.rows[n][k].clone()
        }
    }
}

/// Shared immutable triangle snapshots keyed by n_max. Regenerated rather
/// than grown in place.
pub fn bessel_triangle(n_max: usize) -> Arc<BesselTriangle> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BesselTriangle>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("triangle cache poisoned");
    guard
        .entry(n_max)
        .or_insert_with(|| Arc::new(BesselTriangle::build(n_max)))
        .clone()
}

/// Harmonic numbers H_0..H_m as exact rationals, H_0 = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicCache {
    values: Vec<Rational>,
}

impl HarmonicCache {
    pub fn build(m_max: usize) -> Self {
        let mut values = Vec::with_capacity(m_max + 1);
        values.push(Rational::zero());
        for k in 1..=m_max {
            let next = &values[k - 1] + Rational::new(BigInt::one(), BigInt::from(k));
            values.push(next);
        }
        HarmonicCache { values }
    }

    pub fn get(&self, m: usize) -> &Rational {
        &self.values[m]
    }
}

/// H_m = sum_{k=1}^m 1/k, exactly.
pub fn harmonic(m: usize) -> Rational {
    HarmonicCache::build(m).values[m].clone()
}

/// Evaluates the row-n Bessel polynomial y_n(x) = sum_k a(n,k) x^k exactly.
///
/// The triangle entries already absorb the 2^-k of the classical
/// normalization, so the rows are literal polynomial coefficients.
pub fn bessel_poly_eval(n: usize, x: &Rational) -> Rational {
    let tri = bessel_triangle(n);
    let row = &tri.rows()[n];
    // Horner, highest coefficient first
    let mut acc = Rational::zero();
    for a in row.iter().rev() {
        acc = acc * x + Rational::from_integer(a.clone());
    }
    acc
}

/// y_n(-1): the alternating row sum of the Bessel triangle.
pub fn a000806(n: usize) -> BigInt {
    let v = bessel_poly_eval(n, &rational_int(-1));
    debug_assert!(v.denom().is_one());
    v.to_integer()
}
