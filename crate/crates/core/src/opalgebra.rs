//! Canonical operator words and the two independent routes to the normal
//! form of the n-th power of "multiply by x, then integrate from 0".
//!
//! An [`OperatorSum`] is a finite sum of terms c * x^a I^b acting on the
//! left: the term maps f to c * x^a * I^b f, where I is the antiderivative
//! vanishing at 0. The closed expansion produces the normal form directly
//! from the Bessel triangle; the rewrite engine reaches the same normal
//! form from the recursive definition alone, one integration-by-parts step
//! at a time. Their agreement is checked, not assumed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{bessel_triangle, falling_factorial, stirling2, Rational};

/// Exponent pair of one canonical term x^a I^b.
///
/// Ordered by ascending integration count, then ascending x power, which
/// fixes the canonical iteration and serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub x_pow: usize,
    pub i_pow: usize,
}

impl TermKey {
    pub fn new(x_pow: usize, i_pow: usize) -> Self {
        TermKey { x_pow, i_pow }
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.i_pow, self.x_pow).cmp(&(other.i_pow, other.x_pow))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite sum of canonical terms; no zero coefficients are ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorSum {
    terms: BTreeMap<TermKey, Rational>,
}

impl OperatorSum {
    pub fn zero() -> Self {
        OperatorSum::default()
    }

    /// The identity operator, represented as 1 * x^0 I^0.
    pub fn identity() -> Self {
        let mut s = OperatorSum::zero();
        s.add_term(TermKey::new(0, 0), Rational::one());
        s
    }

    pub fn single(coeff: Rational, x_pow: usize, i_pow: usize) -> Self {
        let mut s = OperatorSum::zero();
        s.add_term(TermKey::new(x_pow, i_pow), coeff);
        s
    }

    /// Adds `coeff * x^a I^b`, combining like terms and dropping zeros.
    pub fn add_term(&mut self, key: TermKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &OperatorSum) {
        for (key, coeff) in &other.terms {
            self.add_term(*key, coeff.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> OperatorSum {
        if c.is_zero() {
            return OperatorSum::zero();
        }
        OperatorSum {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Left-multiplies every term by x^delta.
    pub fn shift_x(&self, delta: usize) -> OperatorSum {
        OperatorSum {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (TermKey::new(k.x_pow + delta, k.i_pow), v.clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x_pow: usize, i_pow: usize) -> Rational {
        self.terms
            .get(&TermKey::new(x_pow, i_pow))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical order (ascending integration count).
    pub fn iter(&self) -> impl Iterator<Item = (TermKey, &Rational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Renders with `I` as the integration symbol: `x^3 I^3 - 3 x^2 I^4`.
    pub fn pretty(&self) -> String {
        pretty_terms(self.iter().map(|(k, c)| (c.clone(), k.x_pow, k.i_pow)), "I")
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    coeff: String,
    x_pow: u64,
    i_pow: u64,
}

impl Serialize for OperatorSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dtos: Vec<TermDto> = self
            .iter()
            .map(|(k, c)| TermDto {
                coeff: c.to_string(),
                x_pow: k.x_pow as u64,
                i_pow: k.i_pow as u64,
            })
            .collect();
        dtos.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dtos = Vec::<TermDto>::deserialize(deserializer)?;
        let mut sum = OperatorSum::zero();
        for dto in dtos {
            let coeff: Rational = dto
                .coeff
                .parse()
                .map_err(|e| D::Error::custom(format!("bad coefficient `{}`: {e}", dto.coeff)))?;
            sum.add_term(TermKey::new(dto.x_pow as usize, dto.i_pow as usize), coeff);
        }
        Ok(sum)
    }
}

/// Shared pretty-printer: leading term unsigned, unit magnitudes elided
/// before operator symbols.
fn pretty_terms<I>(terms: I, int_symbol: &str) -> String
where
    I: Iterator<Item = (Rational, usize, usize)>,
{
    let mut out = String::new();
    let mut first = true;
    for (coeff, x_pow, op_pow) in terms {
        if first {
            if coeff.is_negative() {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if coeff.is_negative() { " - " } else { " + " });
        }
        let mag = coeff.abs();
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || (x_pow == 0 && op_pow == 0) {
            factors.push(mag.to_string());
        }
        if x_pow == 1 {
            factors.push("x".into());
        } else if x_pow > 1 {
            factors.push(format!("x^{x_pow}"));
        }
        if op_pow == 1 {
            factors.push(int_symbol.into());
        } else if op_pow > 1 {
            factors.push(format!("{int_symbol}^{op_pow}"));
        }
        out.push_str(&factors.join(" "));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Closed normal form of the n-th power of x-then-integrate:
/// sum_{k=0}^{n-1} (-1)^k a(n-1,k) x^(n-k) I^(n+k).
///
/// Rejects n = 0; the identity is a separate constant ([`OperatorSum::identity`]).
pub fn expand_xi_closed(n: usize) -> Result<OperatorSum> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    let tri = bessel_triangle(n - 1);
    let mut sum = OperatorSum::zero();
    for k in 0..n {
        let mut coeff = Rational::from_integer(tri.entry(n - 1, k));
        if k % 2 == 1 {
            coeff = -coeff;
        }
        sum.add_term(TermKey::new(n - k, n + k), coeff);
    }
    Ok(sum)
}

/// One integration-by-parts pass: the normal form of I following x^m I^j,
///
/// I(t^m I^j f)(x) = sum_{p=0}^{m} (-1)^p (m)_p x^(m-p) I^(j+p+1) f(x).
pub fn ibp_step(x_pow: usize, i_pow: usize) -> OperatorSum {
    let mut sum = OperatorSum::zero();
    for p in 0..=x_pow {
        let mut coeff = Rational::from_integer(falling_factorial(x_pow, p));
        if p % 2 == 1 {
            coeff = -coeff;
        }
        sum.add_term(TermKey::new(x_pow - p, i_pow + p + 1), coeff);
    }
    sum
}

/// n-th power computed from the recursive definition alone: starting from
/// the first power, each step composes x-then-integrate with every term
/// via [`ibp_step`] and prepends the x factor.
///
/// No Bessel numbers enter this route, so agreement with
/// [`expand_xi_closed`] is a genuine cross-check, not a tautology.
pub fn power_by_rewrite(n: usize) -> Result<OperatorSum> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    let mut acc = OperatorSum::single(Rational::one(), 1, 1);
    for _ in 2..=n {
        let mut next = OperatorSum::zero();
        for (key, coeff) in acc.iter() {
            let stepped = ibp_step(key.x_pow, key.i_pow).shift_x(1);
            next.add_assign(&stepped.scale(coeff));
        }
        acc = next;
    }
    Ok(acc)
}

/// Checks the reindexing identity that makes the closed expansion close
/// under composition: a(n,i) = sum_{k=0}^{min(n-1,i)} (n-k)_(i-k) a(n-1,k),
/// exactly.
pub fn verify_combiden(n: usize, i: usize) -> bool {
    let tri = bessel_triangle(n);
    let bound = (n.saturating_sub(1)).min(i);
    let mut rhs = BigInt::zero();
    for k in 0..=bound {
        rhs += falling_factorial(n - k, i - k) * tri.entry(n - 1, k);
    }
    tri.entry(n, i) == rhs
}

/// Finite sum of differential terms c * x^a D^b, kept separate from
/// integral terms; the two kinds are never mixed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffSum {
    // keyed (d_pow, x_pow) for ascending derivative order
    terms: BTreeMap<(usize, usize), BigInt>,
}

impl DiffSum {
    pub fn coeff(&self, x_pow: usize, d_pow: usize) -> BigInt {
        self.terms
            .get(&(d_pow, x_pow))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.terms.iter().map(|(&(d, x), c)| (x, d, c))
    }

    /// Applies the sum to x^m. Monomials are joint eigenfunctions of every
    /// x^k D^k, so the result is a single monomial: (coefficient, m).
    pub fn apply_to_monomial(&self, m: usize) -> (BigInt, usize) {
        let mut coeff = BigInt::zero();
        for (x_pow, d_pow, c) in self.iter() {
            debug_assert_eq!(x_pow, d_pow);
            coeff += c * falling_factorial(m, d_pow);
        }
        (coeff, m)
    }

    pub fn pretty(&self) -> String {
        pretty_terms(
            self.iter()
                .map(|(x, d, c)| (Rational::from_integer(c.clone()), x, d)),
            "D",
        )
    }
}

impl fmt::Display for DiffSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[derive(Serialize)]
struct DiffTermDto {
    coeff: String,
    x_pow: u64,
    d_pow: u64,
}

impl Serialize for DiffSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dtos: Vec<DiffTermDto> = self
            .iter()
            .map(|(x, d, c)| DiffTermDto {
                coeff: c.to_string(),
                x_pow: x as u64,
                d_pow: d as u64,
            })
            .collect();
        dtos.serialize(serializer)
    }
}

/// Classical differential counterpart, used by the verification suite as a
/// cross-framework reference: (xD)^n = sum_k S(n,k) x^k D^k.
pub fn expand_xd(n: usize) -> DiffSum {
    let mut terms = BTreeMap::new();
    for k in 0..=n {
        let s = stirling2(n, k);
        if !s.is_zero() {
            terms.insert((k, k), s);
        }
    }
    DiffSum { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{bessel_closed, rational_int};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn key(x: usize, i: usize) -> TermKey {
        TermKey::new(x, i)
    }

    #[test]
    fn closed_expansion_small_cases() {
        let e1 = expand_xi_closed(1).unwrap();
        assert_eq!(e1.len(), 1);
        assert_eq!(e1.coeff(1, 1), rational_int(1));

        let e2 = expand_xi_closed(2).unwrap();
        assert_eq!(e2.coeff(2, 2), rational_int(1));
        assert_eq!(e2.coeff(1, 3), rational_int(-1));
        assert_eq!(e2.len(), 2);

        let e3 = expand_xi_closed(3).unwrap();
        assert_eq!(e3.coeff(3, 3), rational_int(1));
        assert_eq!(e3.coeff(2, 4), rational_int(-3));
        assert_eq!(e3.coeff(1, 5), rational_int(3));
        assert_eq!(e3.len(), 3);

        assert!(expand_xi_closed(0).is_err());
    }

    #[test]
    fn closed_expansion_shape_and_signs() {
        for n in 1..=12usize {
            let e = expand_xi_closed(n).unwrap();
            assert_eq!(e.len(), n, "term count at n = {n}");
            let keys: Vec<TermKey> = e.iter().map(|(k, _)| k).collect();
            let want: Vec<TermKey> = (0..n).map(|k| key(n - k, n + k)).collect();
            assert_eq!(keys, want, "key set at n = {n}");
            for k in 0..n {
                let c = e.coeff(n - k, n + k);
                let expected = Rational::from_integer(bessel_closed(n - 1, k));
                let expected = if k % 2 == 1 { -expected } else { expected };
                assert_eq!(c, expected, "coefficient at n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn ibp_step_base_cases() {
        // I of I^j is I^(j+1)
        for j in 0..6 {
            let s = ibp_step(0, j);
            assert_eq!(s.len(), 1);
            assert_eq!(s.coeff(0, j + 1), rational_int(1));
        }
        // frozen from the polynomial-application oracle (see apply tests)
        let s = ibp_step(1, 1);
        assert_eq!(s.coeff(1, 2), rational_int(1));
        assert_eq!(s.coeff(0, 3), rational_int(-1));
        assert_eq!(s.len(), 2);

        let s = ibp_step(2, 0);
        assert_eq!(s.coeff(2, 1), rational_int(1));
        assert_eq!(s.coeff(1, 2), rational_int(-2));
        assert_eq!(s.coeff(0, 3), rational_int(2));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn rewrite_equals_closed_form_up_to_15() {
        for n in 1..=15 {
            assert_eq!(
                power_by_rewrite(n).unwrap(),
                expand_xi_closed(n).unwrap(),
                "n = {n}"
            );
        }
        assert!(power_by_rewrite(0).is_err());
    }

    #[test]
    fn combiden_exhaustive_up_to_25() {
        for n in 1..=25 {
            for i in 0..=n {
                assert!(verify_combiden(n, i), "n = {n}, i = {i}");
            }
        }
        assert!(verify_combiden(1, 0));
        assert!(verify_combiden(3, 2));
        assert!(verify_combiden(5, 5));
    }

    #[test]
    fn xd_expansion_cases() {
        let e0 = expand_xd(0);
        assert_eq!(e0.len(), 1);
        assert_eq!(e0.coeff(0, 0), BigInt::one());

        let e2 = expand_xd(2);
        assert_eq!(e2.coeff(1, 1), BigInt::one());
        assert_eq!(e2.coeff(2, 2), BigInt::one());
        assert_eq!(e2.len(), 2);
    }

    #[test]
    fn xd_eigenvalue_property() {
        for n in 0..=10usize {
            let e = expand_xd(n);
            for m in 0..=10usize {
                let (coeff, pow) = e.apply_to_monomial(m);
                assert_eq!(pow, m);
                assert_eq!(coeff, BigInt::from(m).pow(n as u32), "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn pretty_forms() {
        assert_eq!(expand_xi_closed(1).unwrap().pretty(), "x I");
        assert_eq!(
            expand_xi_closed(3).unwrap().pretty(),
            "x^3 I^3 - 3 x^2 I^4 + 3 x I^5"
        );
        assert_eq!(expand_xd(2).pretty(), "x D + x^2 D^2");
        assert_eq!(expand_xd(0).pretty(), "1");
        assert_eq!(OperatorSum::zero().pretty(), "0");
        assert_eq!(OperatorSum::identity().pretty(), "1");
    }

    #[test]
    fn serialization_shape() {
        let e = expand_xi_closed(2).unwrap();
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(
            json,
            serde_json::json!([
                {"coeff": "1", "x_pow": 2, "i_pow": 2},
                {"coeff": "-1", "x_pow": 1, "i_pow": 3},
            ])
        );
        let back: OperatorSum = serde_json::from_value(json).unwrap();
        assert_eq!(back, e);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(p, q)| crate::exactnum::rational(p, q))
    }

    proptest! {
        /// JSON round trip is lossless for arbitrary small sums.
        #[test]
        fn json_round_trip(entries in proptest::collection::vec(
            (0usize..6, 0usize..9, small_rational()), 0..8)
        ) {
            let mut sum = OperatorSum::zero();
            for (x, i, c) in entries {
                sum.add_term(TermKey::new(x, i), c);
            }
            let text = serde_json::to_string(&sum).unwrap();
            let back: OperatorSum = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, sum);
        }

        /// Rewrite route agrees with the closed form at random n.
        #[test]
        fn rewrite_matches_closed_random(n in 1usize..=12) {
            prop_assert_eq!(power_by_rewrite(n).unwrap(), expand_xi_closed(n).unwrap());
        }

        /// a(n,n) parity: the top coefficient of the expansion has sign (-1)^(n-1).
        #[test]
        fn last_coefficient_sign(n in 1usize..=12) {
            let e = expand_xi_closed(n).unwrap();
            let last = e.coeff(1, 2 * n - 1);
            prop_assert_eq!(last.is_negative(), n % 2 == 0);
            prop_assert!(last.numer().abs().to_u128().is_some());
        }
    }
}
