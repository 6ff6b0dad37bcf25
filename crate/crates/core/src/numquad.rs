//! Independent numerical oracles: literal nested integration, the
//! single-integral repeated-integration form, and the polynomial kernel
//! form, for arbitrary real-valued integrands.
//!
//! These never consult the closed-form application code; agreement between
//! the routes is what the verification suites check.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, double_factorial, Rational};
use crate::opalgebra::expand_xi_closed;
use crate::poly::Poly;

/// Gauss-Legendre rule on (-1, 1): nodes ascending, weights positive,
/// total weight 2, exact for polynomials up to degree 2*order - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

impl QuadratureRule {
    /// Builds the rule by Newton iteration on the Legendre roots, starting
    /// from the Chebyshev estimates; converges to ~1e-15 in a few steps.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidQuadratureOrder);
        }
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for i in 0..order {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            if order == 1 {
                t = 0.0;
            }
            for _ in 0..100 {
                let (p, dp) = legendre_pair(order, t);
                let delta = p / dp;
                t -= delta;
                if delta.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_pair(order, t);
            nodes.push(t);
            weights.push(2.0 / ((1.0 - t * t) * dp * dp));
        }
        nodes.reverse();
        weights.reverse();
        Ok(QuadratureRule {
            order,
            nodes,
            weights,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single application over [a, b]; no finiteness checks.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (u, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * u);
        }
        half * acc
    }

    /// Composite application with finiteness checks and an evaluation count.
    fn integrate_checked<F: Fn(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        f: &F,
    ) -> Result<(f64, u64)> {
        let mut total = 0.0;
        let mut evals = 0u64;
        for j in 0..panels {
            let lo = a + (b - a) * j as f64 / panels as f64;
            let hi = a + (b - a) * (j + 1) as f64 / panels as f64;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (u, w) in self.nodes.iter().zip(&self.weights) {
                let t = mid + half * u;
                let y = f(t);
                evals += 1;
                if !y.is_finite() {
                    return Err(Error::NonFiniteSample { node: t });
                }
                total += half * w * y;
            }
        }
        Ok((total, evals))
    }
}

/// Which route produced a numerical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMethod {
    Nested,
    Cauchy,
    Kernel,
    Symbolic,
}

/// A numerical result together with its accuracy estimate and cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub method: OracleMethod,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
}

fn check_endpoint(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::BadEndpoint(x));
    }
    Ok(())
}

/// Empty-interval convention shared by the oracles: at x = 0 every
/// iterated integral is 0. The integrand is still probed once.
fn zero_report<F: Fn(f64) -> f64>(method: OracleMethod, f: &F) -> Result<OracleReport> {
    let y = f(0.0);
    if !y.is_finite() {
        return Err(Error::NonFiniteSample { node: 0.0 });
    }
    Ok(OracleReport {
        method,
        value: 0.0,
        abs_error_estimate: 0.0,
        evaluations: 1,
    })
}

/// Literal recursion for the n-th power at x: each level is tabulated on a
/// fixed composite grid (panel-scaled rule nodes), represented locally by
/// its Legendre coefficients, and integrated level by level. The input is
/// evaluated only on the level-0 grid.
fn nested_value<F: Fn(f64) -> f64>(
    f: &F,
    n: usize,
    x: f64,
    rule: &QuadratureRule,
    panels: usize,
) -> Result<(f64, u64)> {
    let order = rule.order();
    let bounds: Vec<f64> = (0..=panels).map(|j| x * j as f64 / panels as f64).collect();

    // P_k(u_i) for k = 0..=order and the antiderivative table
    // q_k(u_i) = integral of P_k from -1 to u_i
    let mut pk = vec![vec![0.0; order]; order + 1];
    for (i, &u) in rule.nodes().iter().enumerate() {
        pk[0][i] = 1.0;
        if order >= 1 {
            pk[1][i] = u;
        }
        for k in 2..=order {
            let kf = k as f64;
            pk[k][i] = ((2.0 * kf - 1.0) * u * pk[k - 1][i] - (kf - 1.0) * pk[k - 2][i]) / kf;
        }
    }
    let mut qk = vec![vec![0.0; order]; order];
    for (i, &u) in rule.nodes().iter().enumerate() {
        qk[0][i] = u + 1.0;
        for k in 1..order {
            qk[k][i] = (pk[k + 1][i] - pk[k - 1][i]) / (2.0 * k as f64 + 1.0);
        }
    }

    // level-0 grid values
    let mut evals = 0u64;
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(panels);
    for j in 0..panels {
        let mid = 0.5 * (bounds[j] + bounds[j + 1]);
        let half = 0.5 * (bounds[j + 1] - bounds[j]);
        let mut v = Vec::with_capacity(order);
        for &u in rule.nodes() {
            let t = mid + half * u;
            let y = f(t);
            evals += 1;
            if !y.is_finite() {
                return Err(Error::NonFiniteSample { node: t });
            }
            v.push(y);
        }
        values.push(v);
    }

    for level in 1..=n {
        // local Legendre coefficients and full-panel integrals
        let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(panels);
        let mut integrals: Vec<f64> = Vec::with_capacity(panels);
        for j in 0..panels {
            let half = 0.5 * (bounds[j + 1] - bounds[j]);
            let mut c = vec![0.0; order];
            for (k, ck) in c.iter_mut().enumerate() {
                let mut s = 0.0;
                for i in 0..order {
                    s += rule.weights()[i] * pk[k][i] * values[j][i];
                }
                *ck = (2.0 * k as f64 + 1.0) / 2.0 * s;
            }
            integrals.push(half * 2.0 * c[0]);
            coeffs.push(c);
        }
        if level == n {
            let total: f64 = integrals.iter().sum();
            return Ok((x * total, evals));
        }
        // next level: g(t) = t * antiderivative, tabulated on the same grid
        let mut prefix = 0.0;
        for j in 0..panels {
            let mid = 0.5 * (bounds[j] + bounds[j + 1]);
            let half = 0.5 * (bounds[j + 1] - bounds[j]);
            for i in 0..order {
                let mut partial = 0.0;
                for k in 0..order {
                    partial += coeffs[j][k] * qk[k][i];
                }
                let t = mid + half * rule.nodes()[i];
                values[j][i] = t * (prefix + half * partial);
            }
            prefix += integrals[j];
        }
    }
    unreachable!("n >= 1 checked by callers")
}

/// n-th power of x-then-integrate by literal recursion on a composite grid.
pub fn nested_xi<F: Fn(f64) -> f64>(
    f: F,
    n: usize,
    x: f64,
    rule: &QuadratureRule,
) -> Result<OracleReport> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    check_endpoint(x)?;
    if x == 0.0 {
        return zero_report(OracleMethod::Nested, &f);
    }
    let (coarse, e1) = nested_value(&f, n, x, rule, 4)?;
    let (fine, e2) = nested_value(&f, n, x, rule, 8)?;
    Ok(OracleReport {
        method: OracleMethod::Nested,
        value: fine,
        abs_error_estimate: (fine - coarse).abs(),
        evaluations: e1 + e2,
    })
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// m-fold iterated integral collapsed to one quadrature of
/// (x-t)^(m-1)/(m-1)! f(t) over [0, x].
pub fn cauchy_single<F: Fn(f64) -> f64>(
    f: F,
    m_iter: usize,
    x: f64,
    rule: &QuadratureRule,
) -> Result<OracleReport> {
    if m_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    check_endpoint(x)?;
    if x == 0.0 {
        return zero_report(OracleMethod::Cauchy, &f);
    }
    let inv_fact = 1.0 / factorial_f64(m_iter - 1);
    let integrand = |t: f64| (x - t).powi(m_iter as i32 - 1) * inv_fact * f(t);
    let (coarse, e1) = rule.integrate_checked(0.0, x, 2, &integrand)?;
    let (fine, e2) = rule.integrate_checked(0.0, x, 4, &integrand)?;
    Ok(OracleReport {
        method: OracleMethod::Cauchy,
        value: fine,
        abs_error_estimate: (fine - coarse).abs(),
        evaluations: e1 + e2,
    })
}

/// The closed expansion evaluated termwise through [`cauchy_single`]:
/// sum of coeff * x^a * I^b f with each I^b done by one quadrature.
pub fn cauchy_termwise<F: Fn(f64) -> f64>(
    f: F,
    n: usize,
    x: f64,
    rule: &QuadratureRule,
) -> Result<OracleReport> {
    let ops = expand_xi_closed(n)?;
    check_endpoint(x)?;
    if x == 0.0 {
        return zero_report(OracleMethod::Cauchy, &f);
    }
    let mut value = 0.0;
    let mut est = 0.0;
    let mut evals = 0u64;
    for (key, coeff) in ops.iter() {
        let c = coeff.to_f64().unwrap_or(f64::NAN);
        let scale = c * x.powi(key.x_pow as i32);
        let term = cauchy_single(&f, key.i_pow, x, rule)?;
        value += scale * term.value;
        est += scale.abs() * term.abs_error_estimate;
        evals += term.evaluations;
    }
    Ok(OracleReport {
        method: OracleMethod::Cauchy,
        value,
        abs_error_estimate: est,
        evaluations: evals,
    })
}

/// Single quadrature of the polynomial kernel form:
/// x (x^2 - t^2)^(n-1) / (2(n-1))!! f(t) over [0, x].
pub fn kernel_apply<F: Fn(f64) -> f64>(
    f: F,
    n: usize,
    x: f64,
    rule: &QuadratureRule,
) -> Result<OracleReport> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    check_endpoint(x)?;
    if x == 0.0 {
        return zero_report(OracleMethod::Kernel, &f);
    }
    let df = double_factorial(2 * (n as i64 - 1))?
        .to_f64()
        .unwrap_or(f64::NAN);
    let integrand = |t: f64| x * (x * x - t * t).powi(n as i32 - 1) / df * f(t);
    let (coarse, e1) = rule.integrate_checked(0.0, x, 2, &integrand)?;
    let (fine, e2) = rule.integrate_checked(0.0, x, 4, &integrand)?;
    Ok(OracleReport {
        method: OracleMethod::Kernel,
        value: fine,
        abs_error_estimate: (fine - coarse).abs(),
        evaluations: e1 + e2,
    })
}

/// Kernel quadrature specialized to f(t) = t^(alpha-1). The substitution
/// t = x u^2 moves the endpoint singularity into u^(2 alpha - 1), which is
/// then integrated over panels graded geometrically toward u = 0 so that
/// every panel sees a smooth integrand. Handles all alpha > 0.
pub fn kernel_apply_power(
    n: usize,
    alpha: f64,
    x: f64,
    rule: &QuadratureRule,
) -> Result<OracleReport> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::AlphaNotPositive(alpha));
    }
    check_endpoint(x)?;
    if x == 0.0 {
        return Ok(OracleReport {
            method: OracleMethod::Kernel,
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let df = double_factorial(2 * (n as i64 - 1))?
        .to_f64()
        .unwrap_or(f64::NAN);
    let prefactor = 2.0 * x.powf(2.0 * n as f64 + alpha - 1.0) / df;
    // with t = x u^2 the kernel factor becomes (1 - u^4)^(n-1)
    let g = |u: f64| u.powf(2.0 * alpha - 1.0) * (1.0 - u * u * u * u).powi(n as i32 - 1);

    let mut acc = 0.0;
    let mut evals = 0u64;
    let mut hi = 1.0f64;
    let max_panels = 4000;
    for _ in 0..max_panels {
        let lo = hi * 0.5;
        let (part, e) = rule.integrate_checked(lo, hi, 1, &g)?;
        acc += part;
        evals += e;
        hi = lo;
        if part.abs() <= 1e-16 * acc.abs() {
            break;
        }
    }
    // dropped tail: |kernel| <= 1 below u = hi
    let tail = hi.powf(2.0 * alpha) / (2.0 * alpha);
    Ok(OracleReport {
        method: OracleMethod::Kernel,
        value: prefactor * acc,
        abs_error_estimate: prefactor * (tail + 1e-15 * acc.abs()),
        evaluations: evals,
    })
}

/// Exact symbolic instantiation of the kernel form on polynomials: the
/// kernel is expanded by the binomial theorem and integrated termwise.
/// Shares no code with the closed-form application path.
pub fn kernel_poly_apply(p: &Poly, n: usize) -> Result<Poly> {
    if n == 0 {
        return Err(Error::ZeroOperatorPower);
    }
    let df = Rational::from_integer(double_factorial(2 * (n as i64 - 1))?);
    let mut acc = Poly::zero();
    for (j, cj) in p.coeffs().iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let mut sum = Rational::new(0.into(), 1.into());
        for i in 0..n {
            let mut term = Rational::new(binomial(n - 1, i), (2 * i + j + 1).into());
            if i % 2 == 1 {
                term = -term;
            }
            sum += term;
        }
        acc = &acc + &Poly::monomial(cj * sum / &df, 2 * n + j);
    }
    Ok(acc)
}
