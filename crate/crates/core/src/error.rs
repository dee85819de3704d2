use alloc::string::String;

use crate::invariants::Route;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree {d} exceeds series truncation {truncation}")]
    DegreeOutOfRange { d: u32, truncation: u32 },

    #[error("series is not a unit: need constant term 1 and every other term of positive degree")]
    NotAUnit,

    #[error("invariant table covers degrees 1..={available}, but degree {required} is needed")]
    TableTooShort { required: u32, available: u32 },

    #[error("{kind} table violates its invariant at degree {d}: {reason}")]
    InvariantViolation {
        kind: crate::invariants::InvariantKind,
        d: u32,
        reason: &'static str,
    },

    #[error("d_max must be at least 1")]
    EmptyRange,

    #[error("linear equation for degree {d} is inconsistent (zero slope, nonzero residual)")]
    Inconsistent { d: u32 },

    #[error("linear equation for degree {d} is underdetermined (zero slope, zero residual)")]
    Underdetermined { d: u32 },

    #[error("{context}: unexpected term at (d={d}, k={k}), expected k={expected_k}")]
    ShapeViolation {
        context: &'static str,
        d: u32,
        k: u32,
        expected_k: i64,
    },

    #[error("residual of {context} is nonzero at (d={d}, k={k})")]
    NonzeroResidual { context: &'static str, d: u32, k: u32 },

    #[error("routes {left} and {right} disagree first at degree {d}: {left_value} vs {right_value}")]
    RouteDisagreement {
        d: u32,
        left: Route,
        right: Route,
        left_value: String,
        right_value: String,
    },

    #[error("identity check is degenerate: {0} polynomial is zero")]
    Degenerate(&'static str),

    #[error("at least one trial is required")]
    NoTrials,

    #[error("strata data, line {line}: {message}")]
    DataEntry { line: usize, message: String },
}
