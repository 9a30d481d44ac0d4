//! Error type shared by the whole engine.

use thiserror::Error;

/// Anything that can go wrong while parsing, differentiating, evaluating or
/// checking a structure.  Checker *verdicts* are not errors: a failed axiom
/// produces a failing [`crate::report::CheckReport`], not an `Err`.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at column {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),

    #[error("division by zero at {point:?}")]
    DivisionByZero { point: Vec<f64> },

    #[error("non-finite value at {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("exterior derivative of a top-degree form")]
    TopDegree,

    #[error("interior product needs a form of degree >= 1")]
    ZeroDegree,

    #[error("wedge degree overflow: {0} + {1} > {2}")]
    DegreeOverflow(usize, usize, usize),

    #[error("matrix singular within tolerance at sample point {point:?}")]
    SingularMatrix { point: Vec<f64> },

    #[error("{what} is not closed: d has residual {residual:.3e}")]
    NotClosed { what: String, residual: f64 },

    #[error("classical precondition `{what}` fails: residual {residual:.3e} at {point:?}")]
    ClassicalPrecondition {
        what: String,
        residual: f64,
        point: Vec<f64>,
    },

    #[error("frame rank {found} != expected {expected} at sample point {point:?}")]
    RankDeficient {
        expected: usize,
        found: usize,
        point: Vec<f64>,
    },

    #[error("coordinate `{0}` appears in both factors")]
    NameCollision(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("catalog entry `{name}` failed its own validation: {detail}")]
    EntryValidation { name: String, detail: String },

    #[error("could not draw sample points: exclusions reject the whole domain")]
    SamplingStalled,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Shorthand for miscellaneous structural errors.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
