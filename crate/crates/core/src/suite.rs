//! Named verification suites with machine-readable reports.
//!
//! Every suite is a list of independent pure cases; a suite passes iff all
//! of its cases pass. Suites accept an optional fault injection that
//! corrupts a single Bessel-table entry or a single rewrite coefficient,
//! so the harness itself can be smoke-tested for sensitivity.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apply::{
    apply_log1p, apply_to_monomial, gamma_identity_residual, log1p_coefficient_identity,
    verify_dobinski, verify_exp_sum_identity, verify_gamma_identity_even,
};
use crate::error::{Error, Result};
use crate::exactnum::{bessel_closed, double_factorial, BesselTriangle, Rational};
use crate::numquad::{cauchy_termwise, kernel_apply, kernel_poly_apply, nested_xi, QuadratureRule};
use crate::opalgebra::{expand_xd, expand_xi_closed, power_by_rewrite, TermKey};
use crate::poly::Poly;

/// The named suites. `All` runs every individual suite in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    All,
    Bessel,
    Theorem1,
    Combiden,
    Gamma,
    Dobinski,
    ExpSum,
    Kernel,
    Grunert,
    Log1p,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::All => "all",
            SuiteKind::Bessel => "bessel",
            SuiteKind::Theorem1 => "theorem1",
            SuiteKind::Combiden => "combiden",
            SuiteKind::Gamma => "gamma",
            SuiteKind::Dobinski => "dobinski",
            SuiteKind::ExpSum => "expsum",
            SuiteKind::Kernel => "kernel",
            SuiteKind::Grunert => "grunert",
            SuiteKind::Log1p => "log1p",
        }
    }

    /// Every individual suite, in the order `all` runs them.
    pub fn individual() -> [SuiteKind; 9] {
        [
            SuiteKind::Bessel,
            SuiteKind::Theorem1,
            SuiteKind::Combiden,
            SuiteKind::Gamma,
            SuiteKind::Dobinski,
            SuiteKind::ExpSum,
            SuiteKind::Kernel,
            SuiteKind::Grunert,
            SuiteKind::Log1p,
        ]
    }
}

impl FromStr for SuiteKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SuiteKind::All),
            "bessel" => Ok(SuiteKind::Bessel),
            "theorem1" => Ok(SuiteKind::Theorem1),
            "combiden" => Ok(SuiteKind::Combiden),
            "gamma" => Ok(SuiteKind::Gamma),
            "dobinski" => Ok(SuiteKind::Dobinski),
            "expsum" => Ok(SuiteKind::ExpSum),
            "kernel" => Ok(SuiteKind::Kernel),
            "grunert" => Ok(SuiteKind::Grunert),
            "log1p" => Ok(SuiteKind::Log1p),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    }
}

/// Single-entry corruption applied inside a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds 1 to recurrence-table entry a(n, k) before comparisons.
    Bessel { n: usize, k: usize },
    /// Adds 1 to the rewrite coefficient of x^x_pow I^i_pow at power n.
    Rewrite {
        n: usize,
        x_pow: usize,
        i_pow: usize,
    },
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadFaultSpec(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let parts: Vec<usize> = rest
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind, parts.as_slice()) {
            ("bessel", [n, k]) => Ok(Fault::Bessel { n: *n, k: *k }),
            ("rewrite", [n, x_pow, i_pow]) => Ok(Fault::Rewrite {
                n: *n,
                x_pow: *x_pow,
                i_pow: *i_pow,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::Bessel { n, k } => write!(f, "bessel:{n},{k}"),
            Fault::Rewrite { n, x_pow, i_pow } => write!(f, "rewrite:{n},{x_pow},{i_pow}"),
        }
    }
}

/// Bounds and tolerances for a suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Overrides the suite's primary depth bound when set.
    pub n_max: Option<usize>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Cases run on a thread pool of this size when > 1.
    pub jobs: usize,
    pub quad_order: usize,
    /// Seed for the randomized real-exponent Gamma cases.
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: None,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            jobs: 1,
            quad_order: 64,
            seed: 0x0be55e1,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub status: CaseStatus,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite_name: String,
    pub cases: Vec<CaseRecord>,
    pub elapsed_secs: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status == CaseStatus::Pass)
    }

    pub fn failed_count(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| c.status == CaseStatus::Fail)
            .count()
    }
}

struct CaseOutcome {
    pass: bool,
    detail: String,
    residual: Option<f64>,
}

fn ok(detail: impl Into<String>) -> CaseOutcome {
    CaseOutcome {
        pass: true,
        detail: detail.into(),
        residual: None,
    }
}

fn bad(detail: impl Into<String>) -> CaseOutcome {
    CaseOutcome {
        pass: false,
        detail: detail.into(),
        residual: None,
    }
}

type CaseFn = Box<dyn Fn() -> CaseOutcome + Send + Sync>;
type RealFn = fn(f64) -> f64;

struct Case {
    id: String,
    run: CaseFn,
}

fn case(id: impl Into<String>, run: impl Fn() -> CaseOutcome + Send + Sync + 'static) -> Case {
    Case {
        id: id.into(),
        run: Box::new(run),
    }
}

/// Runs one named suite (not `all`).
pub fn run_suite(kind: SuiteKind, cfg: &SuiteConfig) -> SuiteResult {
    let start = Instant::now();
    let cases = build_cases(kind, cfg);
    let records = execute(cases, cfg.jobs);
    SuiteResult {
        suite_name: kind.name().to_string(),
        cases: records,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Runs a suite selection; `all` expands to every individual suite.
pub fn run_suites(kind: SuiteKind, cfg: &SuiteConfig) -> Vec<SuiteResult> {
    match kind {
        SuiteKind::All => SuiteKind::individual()
            .iter()
            .map(|k| run_suite(*k, cfg))
            .collect(),
        single => vec![run_suite(single, cfg)],
    }
}

fn execute(cases: Vec<Case>, jobs: usize) -> Vec<CaseRecord> {
    let to_record = |c: &Case| {
        let outcome = (c.run)();
        CaseRecord {
            case_id: c.id.clone(),
            status: if outcome.pass {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            },
            detail: outcome.detail,
            residual: outcome.residual,
        }
    };
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| cases.par_iter().map(to_record).collect())
    } else {
        cases.iter().map(to_record).collect()
    }
}

fn build_cases(kind: SuiteKind, cfg: &SuiteConfig) -> Vec<Case> {
    match kind {
        SuiteKind::All => SuiteKind::individual()
            .iter()
            .flat_map(|k| build_cases(*k, cfg))
            .collect(),
        SuiteKind::Bessel => bessel_cases(cfg),
        SuiteKind::Theorem1 => theorem1_cases(cfg),
        SuiteKind::Combiden => combiden_cases(cfg),
        SuiteKind::Gamma => gamma_cases(cfg),
        SuiteKind::Dobinski => dobinski_cases(cfg),
        SuiteKind::ExpSum => expsum_cases(cfg),
        SuiteKind::Kernel => kernel_cases(cfg),
        SuiteKind::Grunert => grunert_cases(cfg),
        SuiteKind::Log1p => log1p_cases(cfg),
    }
}

/// Recurrence triangle with the configured fault applied, if any.
fn faulted_triangle(n_max: usize, fault: Option<Fault>) -> Arc<BesselTriangle> {
    let mut tri = BesselTriangle::build(n_max);
    if let Some(Fault::Bessel { n, k }) = fault {
        if n <= n_max && k <= n {
            let mut rows: Vec<Vec<BigInt>> = tri.rows().to_vec();
            rows[n][k] += 1;
            tri = BesselTriangle::from_rows(rows);
        }
    }
    Arc::new(tri)
}

fn bessel_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let n_max = cfg.n_max.unwrap_or(30);
    let tri = faulted_triangle(n_max, cfg.fault);
    let mut cases = Vec::new();

    const TABLE: [&[i64]; 6] = [
        &[1],
        &[1, 1],
        &[1, 3, 3],
        &[1, 6, 15, 15],
        &[1, 10, 45, 105, 105],
        &[1, 15, 105, 420, 945, 945],
    ];
    {
        let tri = tri.clone();
        cases.push(case("table1-rows", move || {
            for (n, row) in TABLE.iter().enumerate().take(tri.n_max() + 1) {
                for (k, &v) in row.iter().enumerate() {
                    if tri.entry(n, k) != BigInt::from(v) {
                        return bad(format!("row {n} entry {k}: {} != {v}", tri.entry(n, k)));
                    }
                }
            }
            ok("rows 0..=5 match the reference table")
        }));
    }
    for n in 0..=n_max {
        let tri = tri.clone();
        cases.push(case(format!("closed-vs-recurrence-n{n}"), move || {
            for k in 0..=n {
                let closed = bessel_closed(n, k);
                let rec = tri.entry(n, k);
                if closed != rec {
                    return bad(format!("a({n},{k}): closed {closed} != recurrence {rec}"));
                }
            }
            ok(format!("{} entries equal", n + 1))
        }));
    }
    {
        let tri = tri.clone();
        cases.push(case("row-end-double-factorial", move || {
            for n in 1..=tri.n_max() {
                let want = double_factorial(2 * n as i64 - 1).expect("m >= -1");
                if tri.entry(n, n) != want {
                    return bad(format!("a({n},{n}) != (2n-1)!!"));
                }
            }
            ok("a(n,n) = (2n-1)!! throughout")
        }));
    }
    cases
}

fn theorem1_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let n_max = cfg.n_max.unwrap_or(15);
    let fault = cfg.fault;
    (1..=n_max)
        .map(|n| {
            case(format!("rewrite-vs-closed-n{n}"), move || {
                let mut rewritten = power_by_rewrite(n).expect("n >= 1");
                if let Some(Fault::Rewrite {
                    n: fn_,
                    x_pow,
                    i_pow,
                }) = fault
                {
                    if fn_ == n {
                        rewritten.add_term(TermKey::new(x_pow, i_pow), Rational::one());
                    }
                }
                let closed = expand_xi_closed(n).expect("n >= 1");
                if rewritten == closed {
                    ok(format!("{n} terms identical"))
                } else {
                    bad("rewrite route differs from closed expansion".to_string())
                }
            })
        })
        .collect()
}

fn combiden_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let n_max = cfg.n_max.unwrap_or(25);
    (1..=n_max)
        .map(|n| {
            case(format!("combiden-n{n}"), move || {
                for i in 0..=n {
                    if !crate::opalgebra::verify_combiden(n, i) {
                        return bad(format!("identity fails at (n, i) = ({n}, {i})"));
                    }
                }
                ok(format!("holds for all i <= {n}"))
            })
        })
        .collect()
}

fn gamma_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let exact_n = cfg.n_max.unwrap_or(10);
    let numeric_n = cfg.n_max.map_or(8, |n| n.min(8));
    let rel_tol = cfg.rel_tol;
    let mut cases = Vec::new();
    for alpha in (2..=20usize).step_by(2) {
        cases.push(case(format!("exact-alpha{alpha}"), move || {
            for n in 1..=exact_n {
                match verify_gamma_identity_even(n, alpha) {
                    Ok(true) => {}
                    Ok(false) => return bad(format!("exact identity fails at n = {n}")),
                    Err(e) => return bad(format!("error: {e}")),
                }
            }
            ok(format!("exact for all n <= {exact_n}"))
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for draw in 0..50 {
        let alpha = 10.0 * (1.0 - rng.random::<f64>()); // in (0, 10]
        cases.push(case(format!("random-alpha-{draw:02}"), move || {
            let mut worst: f64 = 0.0;
            for n in 1..=numeric_n {
                match gamma_identity_residual(n, alpha) {
                    Ok(r) => worst = worst.max(r),
                    Err(e) => return bad(format!("error: {e}")),
                }
            }
            CaseOutcome {
                pass: worst < rel_tol,
                detail: format!("alpha = {alpha:.6}, worst residual {worst:.3e}"),
                residual: Some(worst),
            }
        }));
    }
    cases
}

fn dobinski_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let n_max = cfg.n_max.unwrap_or(12);
    (0..=n_max)
        .map(|n| {
            case(format!("dobinski-n{n}"), move || match verify_dobinski(n) {
                Ok(report) if report.holds => ok(format!("p(1) = {} = y_{n}(-1)", report.p_at_one)),
                Ok(report) => bad(format!(
                    "p(1) = {} vs {}, q(1) = {} vs {}",
                    report.p_at_one, report.expected_p, report.q_at_one, report.expected_q
                )),
                Err(e) => bad(format!("error: {e}")),
            })
        })
        .collect()
}

fn expsum_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let n_max = cfg.n_max.unwrap_or(12);
    (0..=n_max)
        .map(|n| {
            case(format!("expsum-n{n}"), move || {
                if verify_exp_sum_identity(n) {
                    ok("polynomials identical")
                } else {
                    bad("polynomial identity fails")
                }
            })
        })
        .collect()
}

fn kernel_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let exact_n = cfg.n_max.unwrap_or(8);
    let numeric_n = cfg.n_max.map_or(5, |n| n.min(5));
    let abs_tol = cfg.abs_tol;
    let rel_tol = cfg.rel_tol;
    let order = cfg.quad_order;
    let mut cases = Vec::new();
    for n in 1..=exact_n {
        cases.push(case(format!("poly-kernel-n{n}"), move || {
            let ops = expand_xi_closed(n).expect("n >= 1");
            for m in 0..=8usize {
                let mono = Poly::monomial(Rational::one(), m);
                let via_kernel = kernel_poly_apply(&mono, n).expect("n >= 1");
                let via_apply = apply_to_monomial(&ops, m);
                if via_kernel != via_apply {
                    return bad(format!("exact mismatch at monomial degree {m}"));
                }
            }
            ok("exact equality for degrees 0..=8")
        }));
    }
    let fns: [(&str, RealFn); 5] = [
        ("one", |_| 1.0),
        ("t", |t| t),
        ("t2", |t| t * t),
        ("exp", f64::exp),
        ("log1p", f64::ln_1p),
    ];
    for (name, f) in fns {
        for n in 1..=numeric_n {
            cases.push(case(format!("three-way-{name}-n{n}"), move || {
                let rule = match QuadratureRule::gauss_legendre(order) {
                    Ok(r) => r,
                    Err(e) => return bad(format!("rule: {e}")),
                };
                let mut worst: f64 = 0.0;
                for x in [0.5, 1.0, 2.0] {
                    let a = match nested_xi(f, n, x, &rule) {
                        Ok(r) => r.value,
                        Err(e) => return bad(format!("nested: {e}")),
                    };
                    let b = match cauchy_termwise(f, n, x, &rule) {
                        Ok(r) => r.value,
                        Err(e) => return bad(format!("cauchy: {e}")),
                    };
                    let c = match kernel_apply(f, n, x, &rule) {
                        Ok(r) => r.value,
                        Err(e) => return bad(format!("kernel: {e}")),
                    };
                    let scale = a.abs().max(b.abs()).max(c.abs());
                    let tol = (rel_tol * scale).max(abs_tol);
                    let spread = (a - b).abs().max((a - c).abs()).max((b - c).abs());
                    worst = worst.max(spread / tol.max(f64::MIN_POSITIVE) * rel_tol);
                    if spread > tol {
                        return CaseOutcome {
                            pass: false,
                            detail: format!(
                                "x = {x}: spread {spread:.3e} exceeds tolerance {tol:.3e}"
                            ),
                            residual: Some(spread),
                        };
                    }
                }
                CaseOutcome {
                    pass: true,
                    detail: "nested, termwise and kernel agree at x in {1/2, 1, 2}".into(),
                    residual: Some(worst),
                }
            }));
        }
    }
    cases
}

fn grunert_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let n_max = cfg.n_max.unwrap_or(10);
    (0..=n_max)
        .map(|n| {
            case(format!("euler-power-n{n}"), move || {
                let e = expand_xd(n);
                for m in 0..=10usize {
                    let (coeff, pow) = e.apply_to_monomial(m);
                    let want = BigInt::from(m).pow(n as u32);
                    if pow != m || coeff != want {
                        return bad(format!("x^{m}: got {coeff} x^{pow}, want {want} x^{m}"));
                    }
                }
                ok("eigenvalue m^n reproduced for m <= 10")
            })
        })
        .collect()
}

fn log1p_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let numeric_n = cfg.n_max.map_or(6, |n| n.min(6));
    let coeff_n = cfg.n_max.unwrap_or(12);
    let rel_tol = cfg.rel_tol;
    let order = cfg.quad_order;
    let mut cases = Vec::new();
    for n in 1..=numeric_n {
        cases.push(case(format!("closed-vs-nested-n{n}"), move || {
            let form = match apply_log1p(n) {
                Ok(f) => f,
                Err(e) => return bad(format!("apply: {e}")),
            };
            let rule = match QuadratureRule::gauss_legendre(order) {
                Ok(r) => r,
                Err(e) => return bad(format!("rule: {e}")),
            };
            let mut worst: f64 = 0.0;
            for x in [0.5, 1.0, 2.0] {
                let closed = form.eval_f64(x);
                let oracle = match nested_xi(f64::ln_1p, n, x, &rule) {
                    Ok(r) => r.value,
                    Err(e) => return bad(format!("nested: {e}")),
                };
                let rel = (closed - oracle).abs() / closed.abs().max(oracle.abs());
                worst = worst.max(rel);
                if rel > rel_tol {
                    return CaseOutcome {
                        pass: false,
                        detail: format!("x = {x}: closed {closed} vs oracle {oracle}"),
                        residual: Some(rel),
                    };
                }
            }
            CaseOutcome {
                pass: true,
                detail: "closed form matches nested oracle at x in {1/2, 1, 2}".into(),
                residual: Some(worst),
            }
        }));
    }
    for n in 1..=coeff_n {
        cases.push(case(format!("coefficient-identity-n{n}"), move || {
            for k in 0..n {
                if !log1p_coefficient_identity(n, k) {
                    return bad(format!("split-form identity fails at k = {k}"));
                }
            }
            ok(format!("identity exact for k < {n}"))
        }));
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for kind in SuiteKind::individual() {
            assert_eq!(kind.name().parse::<SuiteKind>().unwrap(), kind);
        }
        assert_eq!("all".parse::<SuiteKind>().unwrap(), SuiteKind::All);
        assert!("nope".parse::<SuiteKind>().is_err());
    }

    #[test]
    fn fault_spec_round_trip() {
        let f: Fault = "bessel:7,3".parse().unwrap();
        assert_eq!(f, Fault::Bessel { n: 7, k: 3 });
        assert_eq!(f.to_string(), "bessel:7,3");
        let f: Fault = "rewrite:5,3,7".parse().unwrap();
        assert_eq!(
            f,
            Fault::Rewrite {
                n: 5,
                x_pow: 3,
                i_pow: 7
            }
        );
        assert!("bessel:7".parse::<Fault>().is_err());
        assert!("junk".parse::<Fault>().is_err());
    }

    #[test]
    fn small_suites_pass_clean() {
        let cfg = SuiteConfig {
            n_max: Some(5),
            ..SuiteConfig::default()
        };
        for kind in [
            SuiteKind::Bessel,
            SuiteKind::Theorem1,
            SuiteKind::Combiden,
            SuiteKind::Dobinski,
            SuiteKind::ExpSum,
            SuiteKind::Grunert,
        ] {
            let result = run_suite(kind, &cfg);
            assert!(result.passed(), "{}: {:?}", kind.name(), result);
        }
    }

    #[test]
    fn bessel_fault_is_detected() {
        let cfg = SuiteConfig {
            n_max: Some(10),
            fault: Some(Fault::Bessel { n: 7, k: 3 }),
            ..SuiteConfig::default()
        };
        let result = run_suite(SuiteKind::Bessel, &cfg);
        assert!(!result.passed());
        assert!(result.failed_count() >= 1);
    }

    #[test]
    fn rewrite_fault_is_detected() {
        let cfg = SuiteConfig {
            n_max: Some(8),
            fault: Some(Fault::Rewrite {
                n: 5,
                x_pow: 3,
                i_pow: 7,
            }),
            ..SuiteConfig::default()
        };
        let result = run_suite(SuiteKind::Theorem1, &cfg);
        assert!(!result.passed());
        // only the faulted power fails
        assert_eq!(result.failed_count(), 1);
    }

    #[test]
    fn parallel_execution_matches_serial() {
        let serial = SuiteConfig {
            n_max: Some(6),
            ..SuiteConfig::default()
        };
        let parallel = SuiteConfig {
            jobs: 4,
            ..serial.clone()
        };
        let a = run_suite(SuiteKind::Theorem1, &serial);
        let b = run_suite(SuiteKind::Theorem1, &parallel);
        let ids = |r: &SuiteResult| -> Vec<String> {
            r.cases.iter().map(|c| c.case_id.clone()).collect()
        };
        assert_eq!(ids(&a), ids(&b));
        assert!(b.passed());
    }

    #[test]
    fn suite_result_json_round_trip() {
        let result = run_suite(
            SuiteKind::Dobinski,
            &SuiteConfig {
                n_max: Some(3),
                ..SuiteConfig::default()
            },
        );
        let text = serde_json::to_string(&result).unwrap();
        let back: SuiteResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, result);
    }
}
