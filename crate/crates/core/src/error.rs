use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// Argument outside the domain of a partial operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-supplied lower bound `2^w ≤ |x|` was contradicted by an
    /// approximation of `x`.
    #[error("witness 2^{witness} <= |x| contradicted by approximation {approx}")]
    WitnessViolated { witness: i64, approx: String },

    #[error("cannot parse dyadic {0:?}: expected `mant*2^expo`")]
    ParseDyadic(String),

    #[error("unknown digit asset {0:?}")]
    UnknownAsset(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
