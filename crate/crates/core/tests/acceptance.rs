//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance and bound is pinned here; nothing is deferred to
//! configuration.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opvolterra::apply::{
    apply_log1p, apply_to_monomial, gamma_identity_residual, log1p_coefficient_identity,
    verify_dobinski, verify_exp_sum_identity, verify_gamma_identity_even,
};
use opvolterra::exactnum::{
    bessel_closed, bessel_poly_eval, double_factorial, rational_int, BesselTriangle, Rational,
};
use opvolterra::numquad::{
    cauchy_termwise, kernel_apply, kernel_poly_apply, nested_xi, QuadratureRule,
};
use opvolterra::opalgebra::{expand_xd, expand_xi_closed, power_by_rewrite, verify_combiden};
use opvolterra::poly::Poly;

fn criterion(name: &str, bound: Duration, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(()) if elapsed > bound => {
            Err(format!("runtime {elapsed:.2?} exceeds bound {bound:.2?}"))
        }
        other => other,
    };
    match &outcome {
        Ok(()) => println!("ACCEPTANCE {name}: PASS ({elapsed:.2?})"),
        Err(reason) => println!("ACCEPTANCE {name}: FAIL ({reason})"),
    }
    if let Err(reason) = outcome {
        panic!("{name}: {reason}");
    }
}

#[test]
fn c01_bessel_consistency() {
    criterion("1-bessel-consistency", Duration::from_secs(1), || {
        let tri = BesselTriangle::build(30);
        for n in 0..=30 {
            for k in 0..=n {
                if bessel_closed(n, k) != tri.entry(n, k) {
                    return Err(format!("closed form != recurrence at a({n},{k})"));
                }
            }
        }
        let table: [&[i64]; 6] = [
            &[1],
            &[1, 1],
            &[1, 3, 3],
            &[1, 6, 15, 15],
            &[1, 10, 45, 105, 105],
            &[1, 15, 105, 420, 945, 945],
        ];
        for (n, row) in table.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                if tri.entry(n, k) != BigInt::from(v) {
                    return Err(format!("table row {n} entry {k} mismatch"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c02_theorem1_reproduction() {
    criterion("2-theorem1-reproduction", Duration::from_secs(5), || {
        for n in 1..=15 {
            let rewritten = power_by_rewrite(n).map_err(|e| e.to_string())?;
            let closed = expand_xi_closed(n).map_err(|e| e.to_string())?;
            if rewritten != closed {
                return Err(format!("rewrite differs from closed expansion at n = {n}"));
            }
        }
        Ok(())
    });
}

#[test]
fn c03_combinatorial_identity() {
    criterion("3-combinatorial-identity", Duration::from_secs(1), || {
        for n in 1..=25 {
            for i in 0..=n {
                if !verify_combiden(n, i) {
                    return Err(format!("identity fails at (n, i) = ({n}, {i})"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c04_corollary2_kernel() {
    criterion("4-corollary2-kernel", Duration::from_secs(30), || {
        // exact half
        for n in 1..=8usize {
            let ops = expand_xi_closed(n).map_err(|e| e.to_string())?;
            for m in 0..=8usize {
                let mono = Poly::monomial(Rational::from_integer(1.into()), m);
                let via_kernel = kernel_poly_apply(&mono, n).map_err(|e| e.to_string())?;
                if via_kernel != apply_to_monomial(&ops, m) {
                    return Err(format!("exact kernel mismatch at n = {n}, m = {m}"));
                }
            }
        }
        // numeric half: three routes within 1e-9 relative
        let rule = QuadratureRule::gauss_legendre(64).map_err(|e| e.to_string())?;
        type RealFn = fn(f64) -> f64;
        let fns: [(&str, RealFn); 5] = [
            ("1", |_| 1.0),
            ("t", |t| t),
            ("t^2", |t| t * t),
            ("e^t", f64::exp),
            ("ln(1+t)", f64::ln_1p),
        ];
        for (name, f) in fns {
            for n in 1..=5usize {
                for x in [0.5, 1.0, 2.0] {
                    let a = nested_xi(f, n, x, &rule).map_err(|e| e.to_string())?.value;
                    let b = cauchy_termwise(f, n, x, &rule)
                        .map_err(|e| e.to_string())?
                        .value;
                    let c = kernel_apply(f, n, x, &rule)
                        .map_err(|e| e.to_string())?
                        .value;
                    let scale = a.abs().max(b.abs()).max(c.abs());
                    let spread = (a - b).abs().max((a - c).abs()).max((b - c).abs());
                    if spread > 1e-9 * scale {
                        return Err(format!(
                            "three-way spread {spread:.3e} at f = {name}, n = {n}, x = {x}"
                        ));
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c05_gamma_identity() {
    criterion("5-gamma-identity", Duration::from_secs(10), || {
        for alpha in (2..=20usize).step_by(2) {
            for n in 1..=10 {
                if !verify_gamma_identity_even(n, alpha).map_err(|e| e.to_string())? {
                    return Err(format!("exact identity fails at alpha = {alpha}, n = {n}"));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x0be55e1);
        for draw in 0..50 {
            let alpha = 10.0 * (1.0 - rng.random::<f64>());
            for n in 1..=8 {
                let r = gamma_identity_residual(n, alpha).map_err(|e| e.to_string())?;
                if r >= 1e-8 {
                    return Err(format!(
                        "residual {r:.3e} at draw {draw}, alpha = {alpha}, n = {n}"
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c06_exponential_sum_identity() {
    criterion("6-exponential-sum-identity", Duration::from_secs(2), || {
        for n in 0..=12 {
            if !verify_exp_sum_identity(n) {
                return Err(format!("polynomial identity fails at n = {n}"));
            }
        }
        Ok(())
    });
}

#[test]
fn c07_dobinski_identity() {
    criterion("7-dobinski-identity", Duration::from_secs(2), || {
        let expected_prefix = [1i64, 0, 1, -5, 36];
        for n in 0..=12usize {
            let report = verify_dobinski(n).map_err(|e| e.to_string())?;
            if !report.holds {
                return Err(format!("identity fails at n = {n}"));
            }
            // independent oracle: alternating row sums from the recurrence triangle
            let oracle = bessel_poly_eval(n, &rational_int(-1));
            if report.p_at_one != oracle {
                return Err(format!("p(1) differs from y_{n}(-1)"));
            }
            if let Some(&want) = expected_prefix.get(n) {
                if report.p_at_one != rational_int(want) {
                    return Err(format!("p(1) prefix mismatch at n = {n}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c08_log1p_application() {
    criterion("8-log1p-application", Duration::from_secs(10), || {
        let rule = QuadratureRule::gauss_legendre(64).map_err(|e| e.to_string())?;
        for n in 1..=6usize {
            let form = apply_log1p(n).map_err(|e| e.to_string())?;
            for x in [0.5, 1.0, 2.0] {
                let closed = form.eval_f64(x);
                let oracle = nested_xi(f64::ln_1p, n, x, &rule)
                    .map_err(|e| e.to_string())?
                    .value;
                let rel = (closed - oracle).abs() / closed.abs().max(oracle.abs());
                if rel > 1e-9 {
                    return Err(format!("relative gap {rel:.3e} at n = {n}, x = {x}"));
                }
            }
        }
        for n in 1..=12 {
            for k in 0..n {
                if !log1p_coefficient_identity(n, k) {
                    return Err(format!("coefficient identity fails at n = {n}, k = {k}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c09_grunert_cross_check() {
    criterion("9-grunert-cross-check", Duration::from_secs(1), || {
        for n in 0..=10usize {
            let e = expand_xd(n);
            for m in 0..=10usize {
                let (coeff, pow) = e.apply_to_monomial(m);
                if pow != m || coeff != BigInt::from(m).pow(n as u32) {
                    return Err(format!("(xD)^{n} on x^{m} != {m}^{n} x^{m}"));
                }
            }
        }
        Ok(())
    });
}

fn run_cli(args: &[&str]) -> std::process::ExitStatus {
    Command::new(env!("CARGO_BIN_EXE_opvolterra"))
        .args(args)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .expect("spawn opvolterra")
}

#[test]
fn c10_end_to_end() {
    criterion("10-end-to-end", Duration::from_secs(60), || {
        let status = run_cli(&["verify", "--suite", "all"]);
        if !status.success() {
            return Err(format!("clean `verify --suite all` failed: {status}"));
        }

        // mutation smoke test: single-entry corruption must flip the exit code
        let full_run_faults = ["bessel:7,3", "rewrite:5,3,7"];
        for fault in full_run_faults {
            let status = run_cli(&["verify", "--suite", "all", "--inject", fault]);
            if status.success() {
                return Err(format!("fault {fault} not detected by --suite all"));
            }
        }
        let bessel_faults = ["bessel:0,0", "bessel:12,5", "bessel:30,30", "bessel:25,0"];
        for fault in bessel_faults {
            let status = run_cli(&["verify", "--suite", "bessel", "--inject", fault]);
            if status.success() {
                return Err(format!("fault {fault} not detected"));
            }
        }
        let rewrite_faults = [
            "rewrite:1,1,1",
            "rewrite:15,1,29",
            "rewrite:8,8,8",
            "rewrite:10,4,16",
        ];
        for fault in rewrite_faults {
            let status = run_cli(&["verify", "--suite", "theorem1", "--inject", fault]);
            if status.success() {
                return Err(format!("fault {fault} not detected"));
            }
        }
        Ok(())
    });
}

// supporting assertions used by several criteria above

#[test]
fn double_factorial_convention_anchors_kernel() {
    // (-1)!! = 1 makes the first kernel denominator collapse to 1
    assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
    assert_eq!(double_factorial(0).unwrap(), BigInt::from(1));
}
