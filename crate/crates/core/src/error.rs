use thiserror::Error;

use crate::rewrite::Atom;

/// Errors raised across the crate.
///
/// Violations found by the unitarity/orthogonality checkers are reported as
/// data, never through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("oracle enumeration refused for n = {n}: cap is {cap}")]
    OracleCap { n: u64, cap: u64 },

    #[error("non-integral division in {context}: {numerator} is not divisible by {denominator}")]
    NonIntegralDivision {
        context: &'static str,
        numerator: String,
        denominator: u64,
    },

    #[error("budget of {budget} exceeded while {what}")]
    BudgetExceeded { what: String, budget: usize },

    #[error("no rule of system `{system}` applies to {atom}")]
    NoRuleApplies { system: String, atom: Atom },

    #[error("rules `{first}` and `{second}` both apply to {atom}")]
    AmbiguousRule {
        atom: Atom,
        first: String,
        second: String,
    },

    #[error("rule `{rule}` produced a right-hand side of the wrong shape at {atom}: {detail}")]
    MalformedRule {
        rule: String,
        atom: Atom,
        detail: String,
    },

    #[error("cycle through {atom} in system `{system}`")]
    Cyclic { system: String, atom: Atom },

    #[error("invalid path code: {0}")]
    InvalidCode(String),

    #[error("invalid strict partition: {0}")]
    InvalidPartition(String),

    #[error("code {code} is not in B_{j} or B_{prev}", prev = .j.saturating_sub(1))]
    NotInDomain { j: u64, code: String },

    #[error("code {code} matches more than one involution rule: {matches}")]
    AmbiguousMatch { code: String, matches: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
