use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested coefficient or degree lies beyond the available truncation.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// An exact division left a nonzero remainder.
    #[error("divisibility violation: {0}")]
    Divisibility(String),
    /// A rational specialization makes a denominator vanish.
    #[error("specialization error: {0}")]
    Specialization(String),
    /// Faber-Zagier validity conditions fail.
    #[error("not a relation: {0}")]
    NotARelation(String),
    /// Pixton input outside the admissible range.
    #[error("not in P: {0}")]
    NotInP(String),
    /// Non-semisimple point of a Frobenius manifold.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// Unstable (g, n).
    #[error("unstable (g, n) = ({g}, {n}): 2g - 2 + n must be positive")]
    Unstable { g: u32, n: u32 },
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
