//! Exact operator calculus for powers of the "multiply by x, then
//! integrate from 0" operator.
//!
//! The crate provides:
//!
//! - exact big-integer/rational arithmetic and the combinatorial triangles
//!   feeding the expansion coefficients ([`exactnum`]);
//! - canonical operator sums, the integration-by-parts rewrite engine and
//!   the closed expansion of the n-th power ([`opalgebra`]);
//! - closed-form application to monomials, general powers, e^t and
//!   ln(1+t) ([`apply`]);
//! - independent numerical oracles: literal nested integration, the
//!   single-integral form and the polynomial kernel form ([`numquad`]);
//! - named verification suites and OEIS b-file cross-checks
//!   ([`suite`], [`bfile`]).
//!
//! The `opvolterra` binary exposes all of it on the command line.

pub mod apply;
pub mod bfile;
pub mod error;
pub mod exactnum;
pub mod numquad;
pub mod opalgebra;
pub mod poly;
pub mod suite;

pub use error::{Error, Result};
