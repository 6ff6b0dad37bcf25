//! Closed-form application of operator sums to the supported function
//! families: monomials (and general powers via the Beta integral),
//! the exponential, and ln(1+t).
//!
//! Everything that can be exact is exact. Exponential results live in the
//! ring Q[x] + Q[x] e^x, so checks that would otherwise need a floating
//! value of e reduce to polynomial identities. The only floating-point
//! paths are the real-exponent Gamma evaluations, which carry an explicit
//! residual.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    bessel_closed, bessel_poly_eval, bessel_triangle, binomial, double_factorial, factorial,
    rational_int, HarmonicCache, Rational,
};
use crate::opalgebra::{expand_xi_closed, OperatorSum};
use crate::poly::Poly;

/// P(x) e^x + Q(x) with exact polynomial parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpForm {
    pub p: Poly,
    pub q: Poly,
}

impl ExpForm {
    pub fn zero() -> Self {
        ExpForm::default()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.p.eval_f64(x) * x.exp() + self.q.eval_f64(x)
    }

    pub fn scale(&self, c: &Rational) -> ExpForm {
        ExpForm {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }

    /// Multiplies both parts by x^exp.
    pub fn shift_mul(&self, exp: usize) -> ExpForm {
        ExpForm {
            p: self.p.shift_mul(exp),
            q: self.q.shift_mul(exp),
        }
    }

    pub fn add_assign(&mut self, other: &ExpForm) {
        self.p = &self.p + &other.p;
        self.q = &self.q + &other.q;
    }

    /// d/dx (P e^x + Q) = (P + P') e^x + Q'.
    pub fn derivative(&self) -> ExpForm {
        ExpForm {
            p: &self.p + &self.p.derivative(),
            q: self.q.derivative(),
        }
    }
}

impl fmt::Display for ExpForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_two_part(f, &self.p, "e^x", &self.q)
    }
}

/// P(x) ln(1+x) + Q(x) with exact polynomial parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogForm {
    pub p: Poly,
    pub q: Poly,
}

impl LogForm {
    pub fn zero() -> Self {
        LogForm::default()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.p.eval_f64(x) * x.ln_1p() + self.q.eval_f64(x)
    }

    pub fn scale(&self, c: &Rational) -> LogForm {
        LogForm {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }

    pub fn shift_mul(&self, exp: usize) -> LogForm {
        LogForm {
            p: self.p.shift_mul(exp),
            q: self.q.shift_mul(exp),
        }
    }

    pub fn add_assign(&mut self, other: &LogForm) {
        self.p = &self.p + &other.p;
        self.q = &self.q + &other.q;
    }

    /// d/dx (P ln(1+x) + Q) = P' ln(1+x) + P/(1+x) + Q'.
    ///
    /// Defined only when (1+x) divides P, which holds for every form
    /// produced by iterated integration of ln(1+t) from 0.
    pub fn derivative(&self) -> Option<LogForm> {
        let s = self.p.div_one_plus_x()?;
        Some(LogForm {
            p: self.p.derivative(),
            q: &s + &self.q.derivative(),
        })
    }
}

impl fmt::Display for LogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_two_part(f, &self.p, "ln(1+x)", &self.q)
    }
}

fn write_two_part(f: &mut fmt::Formatter<'_>, p: &Poly, symbol: &str, q: &Poly) -> fmt::Result {
    if p.is_zero() && q.is_zero() {
        return write!(f, "0");
    }
    let mut out = String::new();
    if !p.is_zero() {
        out.push_str(&format!("({p}) {symbol}"));
    }
    if !q.is_zero() {
        let qs = q.to_string();
        if out.is_empty() {
            out = qs;
        } else if let Some(rest) = qs.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&qs);
        }
    }
    f.write_str(&out)
}

/// Stable JSON shape for exact closed forms: coefficient strings, lowest
/// degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormDto {
    pub kind: String,
    pub p: Vec<String>,
    pub q: Vec<String>,
}

fn coeff_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

impl ClosedFormDto {
    pub fn from_poly(p: &Poly) -> Self {
        ClosedFormDto {
            kind: "poly".into(),
            p: coeff_strings(p),
            q: Vec::new(),
        }
    }

    pub fn from_exp(f: &ExpForm) -> Self {
        ClosedFormDto {
            kind: "exp".into(),
            p: coeff_strings(&f.p),
            q: coeff_strings(&f.q),
        }
    }

    pub fn from_log(f: &LogForm) -> Self {
        ClosedFormDto {
            kind: "log1p".into(),
            p: coeff_strings(&f.p),
            q: coeff_strings(&f.q),
        }
    }
}

/// m-fold iterated integral of t^e from 0: e!/(e+m)! x^(e+m).
pub fn cauchy_iterate_monomial(m_iter: usize, exponent: usize) -> Result<Poly> {
    if m_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    let coeff = Rational::new(factorial(exponent), factorial(exponent + m_iter));
    Ok(Poly::monomial(coeff, exponent + m_iter))
}

/// Applies an operator sum to the monomial t^exponent, exactly.
pub fn apply_to_monomial(ops: &OperatorSum, exponent: usize) -> Poly {
    let mut acc = Poly::zero();
    for (key, coeff) in ops.iter() {
        let term = if key.i_pow == 0 {
            Poly::monomial(coeff.clone(), key.x_pow + exponent)
        } else {
            cauchy_iterate_monomial(key.i_pow, exponent)
                .expect("i_pow >= 1")
                .scale(coeff)
                .shift_mul(key.x_pow)
        };
        acc = &acc + &term;
    }
    acc
}

/// Result of the n-th power applied to t^(alpha-1):
/// coefficient * x^exponent with exponent = alpha + 2n - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerClosedForm {
    pub coefficient: f64,
    pub exponent: f64,
    /// Exact value of the coefficient when alpha is an even positive
    /// integer, where the Gamma ratio reduces to factorials.
    pub exact_coefficient: Option<Rational>,
}

impl PowerClosedForm {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficient * x.powf(self.exponent)
    }
}

/// Closed Gamma/Beta evaluation of the power family:
/// coefficient Gamma(alpha/2) / (2^n Gamma(n + alpha/2)), exponent alpha + 2n - 1.
pub fn power_closed_form(n: usize, alpha: f64) -> Result<PowerClosedForm> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::AlphaNotPositive(alpha));
    }
    let nf = n as f64;
    let coefficient =
        (libm::lgamma(alpha / 2.0) - nf * std::f64::consts::LN_2 - libm::lgamma(nf + alpha / 2.0))
            .exp();
    let exact_coefficient = even_integer(alpha).map(|beta| {
        Rational::new(
            factorial(beta - 1),
            (BigInt::one() << n) * factorial(n + beta - 1),
        )
    });
    Ok(PowerClosedForm {
        coefficient,
        exponent: alpha + 2.0 * nf - 1.0,
        exact_coefficient,
    })
}

/// Some(alpha / 2) when alpha is an even integer >= 2.
fn even_integer(alpha: f64) -> Option<usize> {
    if alpha.fract() == 0.0 && (2.0..=1e9).contains(&alpha) {
        let a = alpha as u64;
        a.is_multiple_of(2).then_some((a / 2) as usize)
    } else {
        None
    }
}

/// Exact check of the Gamma-ratio identity for even integer alpha:
/// Gamma(alpha/2) / (2^n Gamma(alpha) Gamma(n+alpha/2))
///   = sum_{k=0}^{n-1} (-1)^k a(n-1,k) / Gamma(alpha+n+k),
/// with every Gamma reduced to a factorial.
pub fn verify_gamma_identity_even(n: usize, alpha: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    if alpha == 0 || !alpha.is_multiple_of(2) {
        return Err(Error::AlphaNotPositive(alpha as f64));
    }
    let beta = alpha / 2;
    let lhs = Rational::new(
        factorial(beta - 1),
        (BigInt::one() << n) * factorial(alpha - 1) * factorial(n + beta - 1),
    );
    let tri = bessel_triangle(n - 1);
    let mut rhs = Rational::zero();
    for k in 0..n {
        let mut term = Rational::new(tri.entry(n - 1, k), factorial(alpha + n + k - 1));
        if k % 2 == 1 {
            term = -term;
        }
        rhs += term;
    }
    Ok(lhs == rhs)
}

/// Relative residual of the same identity at real alpha > 0, evaluated in
/// floating point through log-Gamma.
pub fn gamma_identity_residual(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::AlphaNotPositive(alpha));
    }
    let nf = n as f64;
    let lhs = (libm::lgamma(alpha / 2.0)
        - nf * std::f64::consts::LN_2
        - libm::lgamma(alpha)
        - libm::lgamma(nf + alpha / 2.0))
    .exp();
    let mut rhs = 0.0;
    for k in 0..n {
        let a = bessel_closed(n - 1, k).to_f64().unwrap_or(f64::NAN);
        let term = a * (-libm::lgamma(alpha + nf + k as f64)).exp();
        rhs += if k % 2 == 1 { -term } else { term };
    }
    let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok((lhs - rhs).abs() / scale)
}

/// m-fold iterated integral of e^t from 0: e^x - sum_{j<m} x^j/j!.
pub fn cauchy_iterate_exp(m_iter: usize) -> Result<ExpForm> {
    if m_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    Ok(ExpForm {
        p: Poly::one(),
        q: -Poly::exp_partial_sum(m_iter - 1),
    })
}

/// Applies the closed n-th power expansion to e^t, termwise and exactly.
pub fn apply_exp(n: usize) -> Result<ExpForm> {
    let ops = expand_xi_closed(n)?;
    let mut acc = ExpForm::zero();
    for (key, coeff) in ops.iter() {
        let term = cauchy_iterate_exp(key.i_pow)?
            .scale(coeff)
            .shift_mul(key.x_pow);
        acc.add_assign(&term);
    }
    Ok(acc)
}

/// Exact polynomial identity behind the exponential application:
/// sum_{k=0}^n (-1)^k a(n,k) x^(n-k) sum_{j<=n+k} x^j/j!
///   = sum_{k=0}^n (-1)^(n-k) (2(n-k)-1)!!/(2k)!! x^(2k).
pub fn verify_exp_sum_identity(n: usize) -> bool {
    let tri = bessel_triangle(n);
    let mut lhs = Poly::zero();
    for k in 0..=n {
        let mut coeff = Rational::from_integer(tri.entry(n, k));
        if k % 2 == 1 {
            coeff = -coeff;
        }
        let term = Poly::exp_partial_sum(n + k).scale(&coeff).shift_mul(n - k);
        lhs = &lhs + &term;
    }
    let mut rhs = Poly::zero();
    for k in 0..=n {
        let odd = double_factorial(2 * (n - k) as i64 - 1).expect("m >= -1");
        let even = (BigInt::one() << k) * factorial(k); // (2k)!!
        let mut coeff = Rational::new(odd, even);
        if (n - k) % 2 == 1 {
            coeff = -coeff;
        }
        rhs = &rhs + &Poly::monomial(coeff, 2 * k);
    }
    lhs == rhs
}

/// Outcome of the Dobinski-style check at one n, kept exact: the value of
/// the (n+1)-st exponential application at x = 1 is split into its e-part
/// and rational part, and each part is compared separately in Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DobinskiReport {
    pub holds: bool,
    /// P(1) of the (n+1)-st application; must equal y_n(-1).
    pub p_at_one: Rational,
    pub expected_p: BigInt,
    /// Q(1); must equal the negated double-factorial sum.
    pub q_at_one: Rational,
    pub expected_q: Rational,
}

/// Checks the Dobinski-type identity for y_n(-1) exactly in Q + Q e.
pub fn verify_dobinski(n: usize) -> Result<DobinskiReport> {
    let form = apply_exp(n + 1)?;
    let one = rational_int(1);
    let p_at_one = form.p.eval(&one);
    let q_at_one = form.q.eval(&one);
    let expected_p = bessel_poly_eval(n, &rational_int(-1));
    debug_assert!(expected_p.denom().is_one());
    let expected_p = expected_p.to_integer();
    let mut sum = Rational::zero();
    for k in 0..=n {
        let odd = double_factorial(2 * (n - k) as i64 - 1)?;
        let even = (BigInt::one() << k) * factorial(k);
        let mut term = Rational::new(odd, even);
        if (n - k) % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    let expected_q = -sum;
    let holds = p_at_one == Rational::from_integer(expected_p.clone()) && q_at_one == expected_q;
    Ok(DobinskiReport {
        holds,
        p_at_one,
        expected_p,
        q_at_one,
        expected_q,
    })
}

/// m-fold iterated integral of ln(1+t) from 0:
/// (1/m!) [ (1+x)^m ln(1+x) - A_m(x) ], with
/// A_m(x) = sum_{k=1}^m C(m,k) (H_m - H_{m-k}) x^k.
pub fn medina_moll_antiderivative(m_iter: usize) -> Result<LogForm> {
    if m_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    let inv_fact = Rational::new(BigInt::one(), factorial(m_iter));
    let harmonic = HarmonicCache::build(m_iter);
    let mut a_coeffs = vec![Rational::zero(); m_iter + 1];
    for (k, slot) in a_coeffs.iter_mut().enumerate().skip(1) {
        let gap = harmonic.get(m_iter) - harmonic.get(m_iter - k);
        *slot = Rational::from_integer(binomial(m_iter, k)) * gap;
    }
    let a_m = Poly::from_coeffs(a_coeffs);
    Ok(LogForm {
        p: Poly::one_plus_x_pow(m_iter).scale(&inv_fact),
        q: (-a_m).scale(&inv_fact),
    })
}

/// The split-form coefficient identity used by the ln(1+t) application:
/// a(n-1,k)/(n+k)! = 1/((n-k-1)! 2^k k! (n+k)), for 0 <= k < n.
pub fn log1p_coefficient_identity(n: usize, k: usize) -> bool {
    if k >= n {
        return false;
    }
    let lhs = Rational::new(bessel_closed(n - 1, k), factorial(n + k));
    let rhs = Rational::new(
        BigInt::one(),
        factorial(n - k - 1) * (BigInt::one() << k) * factorial(k) * (n + k),
    );
    lhs == rhs
}

/// Applies the closed n-th power expansion to ln(1+t), termwise, and
/// cross-checks the combined coefficients against the split form above.
/// A mismatch is reported as an error rather than silently ignored.
pub fn apply_log1p(n: usize) -> Result<LogForm> {
    let ops = expand_xi_closed(n)?;
    let mut acc = LogForm::zero();
    for (key, coeff) in ops.iter() {
        let term = medina_moll_antiderivative(key.i_pow)?
            .scale(coeff)
            .shift_mul(key.x_pow);
        acc.add_assign(&term);
    }
    for k in 0..n {
        if !log1p_coefficient_identity(n, k) {
            return Err(Error::Log1pCoefficientMismatch { n, k });
        }
    }
    Ok(acc)
}
