//! Command-line front end: triangle tables, operator expansions, closed
//! forms with oracle comparison, verification suites and OEIS b-file
//! checks. Exit code is 0 iff every executed check passes.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use opvolterra::apply::{
    apply_exp, apply_log1p, apply_to_monomial, power_closed_form, ClosedFormDto,
};
use opvolterra::bfile::{oeis_check, OeisSequence};
use opvolterra::error::Error;
use opvolterra::exactnum::BesselTriangle;
use opvolterra::numquad::{kernel_apply_power, nested_xi, OracleReport, QuadratureRule};
use opvolterra::opalgebra::{expand_xd, expand_xi_closed};
use opvolterra::suite::{run_suites, Fault, SuiteConfig, SuiteKind, SuiteResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpKind {
    #[value(name = "xI")]
    XI,
    #[value(name = "xD")]
    XD,
}

#[derive(Parser)]
#[command(
    name = "opvolterra",
    version,
    about = "Exact expansion of powers of the x-weighted integration operator, \
             with closed-form applications and verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the triangle of expansion coefficients a(n,k)
    BesselTable {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, env = "OPVOLTERRA_FORMAT", default_value_t = Format::Text)]
        format: Format,
    },
    /// Expand an operator power into canonical terms
    Expand {
        /// Operator: xI (integration) or xD (differentiation)
        #[arg(long)]
        op: OpKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, env = "OPVOLTERRA_FORMAT", default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply the n-th power to a function family
    Apply {
        /// One of: monomial:M, exp, log1p, power:ALPHA
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Also evaluate at this point and compare against the numeric oracle
        #[arg(long)]
        at: Option<f64>,
        #[arg(long, default_value_t = 64)]
        quad_order: usize,
        #[arg(long, value_enum, env = "OPVOLTERRA_FORMAT", default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite
    Verify {
        /// all, bessel, theorem1, combiden, gamma, dobinski, expsum,
        /// kernel, grunert or log1p
        #[arg(long, default_value = "all")]
        suite: String,
        /// Override the suite's primary depth bound
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 1e-10)]
        abs_tol: f64,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
        #[arg(long, default_value_t = 64)]
        quad_order: usize,
        #[arg(long, default_value_t = 0x0be55e1)]
        seed: u64,
        /// Corrupt one table entry (bessel:N,K) or rewrite coefficient
        /// (rewrite:N,XPOW,IPOW) to smoke-test harness sensitivity
        #[arg(long, hide = true)]
        inject: Option<String>,
        #[arg(long, value_enum, env = "OPVOLTERRA_FORMAT", default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare generated values against a local OEIS b-file
    OeisCheck {
        /// A001498 or A000806
        #[arg(long)]
        seq: String,
        #[arg(long)]
        bfile: PathBuf,
        #[arg(long, value_enum, env = "OPVOLTERRA_FORMAT", default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::BesselTable { n_max, format } => {
            print_bessel_table(n_max, format)?;
            Ok(true)
        }
        Command::Expand { op, n, format } => {
            print_expansion(op, n, format)?;
            Ok(true)
        }
        Command::Apply {
            family,
            n,
            at,
            quad_order,
            format,
        } => {
            print_application(&family, n, at, quad_order, format)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            n_max,
            jobs,
            abs_tol,
            rel_tol,
            quad_order,
            seed,
            inject,
            format,
        } => {
            let kind = SuiteKind::from_str(&suite)?;
            let fault = inject.as_deref().map(Fault::from_str).transpose()?;
            let cfg = SuiteConfig {
                n_max,
                abs_tol,
                rel_tol,
                jobs,
                quad_order,
                seed,
                fault,
            };
            let results = run_suites(kind, &cfg);
            print_suite_results(&results, format)?;
            Ok(results.iter().all(SuiteResult::passed))
        }
        Command::OeisCheck { seq, bfile, format } => {
            let seq = OeisSequence::from_str(&seq)?;
            let result = oeis_check(seq, &bfile)?;
            print_suite_results(std::slice::from_ref(&result), format)?;
            Ok(result.passed())
        }
    }
}

/// Big integers rendered as exact JSON numbers.
fn big_number(s: String) -> serde_json::Value {
    serde_json::Value::Number(s.parse().expect("decimal integer"))
}

fn print_bessel_table(n_max: usize, format: Format) -> Result<(), Error> {
    let tri = BesselTriangle::build(n_max);
    match format {
        Format::Text => {
            for row in tri.rows() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                println!("{}", cells.join(" "));
            }
        }
        Format::Csv => {
            for row in tri.rows() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                println!("{}", cells.join(","));
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = tri
                .rows()
                .iter()
                .map(|row| {
                    serde_json::Value::Array(
                        row.iter().map(|v| big_number(v.to_string())).collect(),
                    )
                })
                .collect();
            println!("{}", serde_json::to_string(&rows)?);
        }
    }
    Ok(())
}

fn print_expansion(op: OpKind, n: usize, format: Format) -> Result<(), Error> {
    match op {
        OpKind::XI => {
            let sum = expand_xi_closed(n)?;
            match format {
                Format::Text => println!("{sum}"),
                Format::Csv => {
                    println!("coeff,x_pow,i_pow");
                    for (key, coeff) in sum.iter() {
                        println!("{},{},{}", coeff, key.x_pow, key.i_pow);
                    }
                }
                Format::Json => {
                    let value = json!({"op": "xI", "n": n, "terms": sum});
                    println!("{value}");
                }
            }
        }
        OpKind::XD => {
            let sum = expand_xd(n);
            match format {
                Format::Text => println!("{sum}"),
                Format::Csv => {
                    println!("coeff,x_pow,d_pow");
                    for (x_pow, d_pow, coeff) in sum.iter() {
                        println!("{coeff},{x_pow},{d_pow}");
                    }
                }
                Format::Json => {
                    let value = json!({"op": "xD", "n": n, "terms": sum});
                    println!("{value}");
                }
            }
        }
    }
    Ok(())
}

enum Family {
    Monomial(usize),
    Exp,
    Log1p,
    Power(f64),
}

fn parse_family(s: &str) -> Result<Family, Error> {
    let unknown = || Error::UnknownFamily(s.to_string());
    if s == "exp" {
        return Ok(Family::Exp);
    }
    if s == "log1p" {
        return Ok(Family::Log1p);
    }
    if let Some(m) = s.strip_prefix("monomial:") {
        return m.parse().map(Family::Monomial).map_err(|_| unknown());
    }
    if let Some(a) = s.strip_prefix("power:") {
        let alpha: f64 = a.parse().map_err(|_| unknown())?;
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(Error::AlphaNotPositive(alpha));
        }
        return Ok(Family::Power(alpha));
    }
    Err(unknown())
}

fn print_application(
    family: &str,
    n: usize,
    at: Option<f64>,
    quad_order: usize,
    format: Format,
) -> Result<(), Error> {
    let family_parsed = parse_family(family)?;
    let rule = QuadratureRule::gauss_legendre(quad_order)?;

    // closed form, its pretty text, and the value/oracle pair at `at`
    let (dto, pretty, eval): (ClosedFormDto, String, Option<(f64, OracleReport)>) =
        match family_parsed {
            Family::Monomial(m) => {
                let form = apply_to_monomial(&expand_xi_closed(n)?, m);
                let eval = at
                    .map(|x| -> Result<_, Error> {
                        let oracle = nested_xi(|t| t.powi(m as i32), n, x, &rule)?;
                        Ok((form.eval_f64(x), oracle))
                    })
                    .transpose()?;
                (ClosedFormDto::from_poly(&form), form.to_string(), eval)
            }
            Family::Exp => {
                let form = apply_exp(n)?;
                let eval = at
                    .map(|x| -> Result<_, Error> {
                        let oracle = nested_xi(f64::exp, n, x, &rule)?;
                        Ok((form.eval_f64(x), oracle))
                    })
                    .transpose()?;
                (ClosedFormDto::from_exp(&form), form.to_string(), eval)
            }
            Family::Log1p => {
                let form = apply_log1p(n)?;
                let eval = at
                    .map(|x| -> Result<_, Error> {
                        let oracle = nested_xi(f64::ln_1p, n, x, &rule)?;
                        Ok((form.eval_f64(x), oracle))
                    })
                    .transpose()?;
                (ClosedFormDto::from_log(&form), form.to_string(), eval)
            }
            Family::Power(alpha) => {
                let closed = power_closed_form(n, alpha)?;
                let pretty = match &closed.exact_coefficient {
                    Some(c) => format!("{} x^{}", c, closed.exponent),
                    None => format!("{:.12} x^{}", closed.coefficient, closed.exponent),
                };
                let eval = at
                    .map(|x| -> Result<_, Error> {
                        let oracle = kernel_apply_power(n, alpha, x, &rule)?;
                        Ok((closed.eval(x), oracle))
                    })
                    .transpose()?;
                let dto = ClosedFormDto {
                    kind: format!("power:{alpha}"),
                    p: vec![closed
                        .exact_coefficient
                        .as_ref()
                        .map_or_else(|| closed.coefficient.to_string(), |c| c.to_string())],
                    q: vec![closed.exponent.to_string()],
                };
                (dto, pretty, eval)
            }
        };

    match format {
        Format::Text => {
            println!("{pretty}");
            if let Some((value, oracle)) = &eval {
                println!("value  = {value:.15e}");
                println!(
                    "oracle = {:.15e} ({:?}, est {:.2e}, {} evals)",
                    oracle.value, oracle.method, oracle.abs_error_estimate, oracle.evaluations
                );
                println!("|diff| = {:.2e}", (value - oracle.value).abs());
            }
        }
        Format::Csv => {
            println!("kind,p,q");
            println!("{},{},{}", dto.kind, dto.p.join(" "), dto.q.join(" "));
            if let Some((value, oracle)) = &eval {
                println!("value,oracle,abs_diff");
                println!("{value},{},{}", oracle.value, (value - oracle.value).abs());
            }
        }
        Format::Json => {
            let mut value = json!({"family": family, "n": n, "form": dto, "pretty": pretty});
            if let Some((v, oracle)) = &eval {
                value["eval"] = json!({"at": at, "value": v, "oracle": oracle});
            }
            println!("{value}");
        }
    }
    Ok(())
}

fn print_suite_results(results: &[SuiteResult], format: Format) -> Result<(), Error> {
    match format {
        Format::Text => {
            let mut passed = 0usize;
            let mut failed = 0usize;
            for result in results {
                for case in &result.cases {
                    let tag = match case.status {
                        opvolterra::suite::CaseStatus::Pass => {
                            passed += 1;
                            "PASS"
                        }
                        opvolterra::suite::CaseStatus::Fail => {
                            failed += 1;
                            "FAIL"
                        }
                    };
                    let residual = case
                        .residual
                        .map_or(String::new(), |r| format!(" [residual {r:.3e}]"));
                    println!(
                        "{tag} {}/{}: {}{residual}",
                        result.suite_name, case.case_id, case.detail
                    );
                }
                println!(
                    "suite {}: {}/{} passed in {:.3}s",
                    result.suite_name,
                    result.cases.len() - result.failed_count(),
                    result.cases.len(),
                    result.elapsed_secs
                );
            }
            println!(
                "total: {passed} passed, {failed} failed across {} suite(s)",
                results.len()
            );
        }
        Format::Csv => {
            println!("suite,case,status,residual");
            for result in results {
                for case in &result.cases {
                    let status = match case.status {
                        opvolterra::suite::CaseStatus::Pass => "pass",
                        opvolterra::suite::CaseStatus::Fail => "fail",
                    };
                    let residual = case.residual.map_or(String::new(), |r| r.to_string());
                    println!(
                        "{},{},{},{}",
                        result.suite_name, case.case_id, status, residual
                    );
                }
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string(results)?);
        }
    }
    Ok(())
}
