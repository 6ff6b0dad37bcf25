//! Dense univariate polynomials over exact rationals.
//!
//! Coefficients are stored lowest degree first; trailing zeros are trimmed
//! so equality is structural and the zero polynomial is the empty list.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// c * x^exp.
    pub fn monomial(c: Rational, exp: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); exp + 1];
        coeffs[exp] = c;
        Poly::from_coeffs(coeffs)
    }

    /// Lowest degree first; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of x^j (zero beyond the stored degree).
    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by x^exp.
    pub fn shift_mul(&self, exp: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); exp];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * Rational::from_integer(BigInt::from(j)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rational::from_integer(BigInt::from(j + 1)));
        }
        Poly::from_coeffs(coeffs)
    }

    /// Exact division by x^exp; None when a lower coefficient is nonzero.
    pub fn div_x_pow(&self, exp: usize) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.coeffs.iter().take(exp).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(
            self.coeffs[exp.min(self.coeffs.len())..].to_vec(),
        ))
    }

    /// Exact division by (1 + x); None when (1 + x) does not divide self.
    pub fn div_one_plus_x(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        // synthetic division at root -1
        let mut quotient = vec![Rational::zero(); self.coeffs.len() - 1];
        let mut carry = Rational::zero();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            let q = c - &carry;
            if j == 0 {
                if !q.is_zero() {
                    return None;
                }
            } else {
                carry = q.clone();
                quotient[j - 1] = q;
            }
        }
        Some(Poly::from_coeffs(quotient))
    }

    /// (1 + x)^m with exact binomial coefficients.
    pub fn one_plus_x_pow(m: usize) -> Poly {
        let coeffs = (0..=m)
            .map(|k| Rational::from_integer(crate::exactnum::binomial(m, k)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Truncated exponential series sum_{j=0}^{j_max} x^j / j!.
    pub fn exp_partial_sum(j_max: usize) -> Poly {
        let mut coeffs = Vec::with_capacity(j_max + 1);
        let mut fact = BigInt::one();
        for j in 0..=j_max {
            if j > 0 {
                fact *= j;
            }
            coeffs.push(Rational::new(BigInt::one(), fact.clone()));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Renders one coefficient-times-power factor, magnitude only.
/// `1/3 x^4` prints as `x^4/3`; `5` with power 0 prints as `5`.
fn write_term(out: &mut String, mag: &Rational, var: &str, exp: usize) {
    let numer = mag.numer();
    let denom = mag.denom();
    let unit_numer = numer.abs().is_one();
    if exp == 0 {
        out.push_str(&numer.to_string());
    } else {
        if !unit_numer {
            out.push_str(&numer.to_string());
            out.push(' ');
        }
        out.push_str(var);
        if exp > 1 {
            out.push_str(&format!("^{exp}"));
        }
    }
    if !denom.is_one() {
        out.push_str(&format!("/{denom}"));
    }
}

impl fmt::Display for Poly {
    /// Human-readable form, highest degree first: `x^4/3 - 2 x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            write_term(&mut out, &c.abs(), "x", j);
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rational, rational_int};

    #[test]
    fn trim_and_zero() {
        let p = Poly::from_coeffs(vec![rational_int(0), rational_int(0)]);
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn arithmetic_round_trip() {
        let p = Poly::from_coeffs(vec![rational_int(1), rational(1, 2), rational_int(-3)]);
        let q = Poly::monomial(rational(2, 3), 4);
        assert_eq!(&(&p + &q) - &q, p);
        let d = p.antiderivative().derivative();
        assert_eq!(d, p);
    }

    #[test]
    fn multiplication_matches_eval() {
        let p = Poly::from_coeffs(vec![rational_int(2), rational_int(-1)]);
        let q = Poly::one_plus_x_pow(3);
        let prod = &p * &q;
        let x = rational(3, 7);
        assert_eq!(prod.eval(&x), p.eval(&x) * q.eval(&x));
    }

    #[test]
    fn one_plus_x_division() {
        let p = Poly::one_plus_x_pow(4);
        let q = p.div_one_plus_x().unwrap();
        assert_eq!(q, Poly::one_plus_x_pow(3));
        let odd = Poly::from_coeffs(vec![rational_int(1), rational_int(1), rational_int(1)]);
        assert!(odd.div_one_plus_x().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Poly::monomial(rational(1, 3), 4).to_string(), "x^4/3");
        assert_eq!(
            Poly::from_coeffs(vec![rational_int(0), rational_int(1), rational(-1, 2)]).to_string(),
            "-x^2/2 + x"
        );
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn exp_partial_sum_values() {
        let p = Poly::exp_partial_sum(3);
        assert_eq!(
            p.coeffs(),
            &[
                rational_int(1),
                rational_int(1),
                rational(1, 2),
                rational(1, 6)
            ]
        );
    }
}
