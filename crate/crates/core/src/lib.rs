//! Exact-arithmetic toolkit for integer-partition recurrences.
//!
//! The crate is organised bottom-up:
//!
//! - [`oracle`]: brute-force enumeration of partitions and strict partitions,
//!   the ground truth every other module is checked against.
//! - [`coefficients`]: the Euler coefficients `e`, their prefix sums `f`, the
//!   product coefficients `c`, and the divisor-sum function.
//! - [`engines`]: six independent memoized evaluators of `p(n)`.
//! - [`rewrite`]: recurrence systems as rewrite rules with domain conditions,
//!   unitarity and orthogonality checks, ground-term evaluation.
//! - [`dag`]: the parallel reduction DAG of a rewrite system, signed-path
//!   coefficient extraction and DOT export.
//! - [`codes`]: binary path codes for the max-part system, their
//!   valuation/polarity, decoding, and the sign-reversing involution.
//! - [`verify`]: invariant suites shared by the CLI and the test harness.

pub mod codes;
pub mod coefficients;
pub mod dag;
pub mod engines;
pub mod error;
pub mod oracle;
pub mod rewrite;
pub mod verify;

pub use codes::PathCode;
pub use coefficients::{CoeffKind, CoeffSeq};
pub use dag::{ExtractedRecurrence, ReductionDag};
pub use engines::{BigCount, EngineKind};
pub use error::{Error, Result};
pub use oracle::{Partition, StrictPartition};
pub use rewrite::{Atom, Builtin, RewriteSystem};

/// Environment variable that overrides recursion and path budgets.
pub const BUDGET_ENV: &str = "PLAB_BUDGET";

/// Reads [`BUDGET_ENV`], ignoring values that do not parse as a positive integer.
pub fn budget_override() -> Option<usize> {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&b| b > 0)
}
