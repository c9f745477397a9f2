use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// A field that must be (or stay) mean-zero has drifted. This almost
    /// always indicates a mass-conservation bug upstream, not roundoff.
    #[error("field mean {mean:.3e} exceeds mean-zero tolerance {tol:.3e}")]
    NonZeroMean { mean: f64, tol: f64 },

    /// Energy bound handed to the convergence-constant report is not usable.
    #[error("energy bound E0 = {e0:.3e} must be positive for nonzero data")]
    InvalidE0 { e0: f64 },

    /// The line search was called with a direction along which the energy
    /// does not initially decrease.
    #[error("line search: q(0) = {q0:.3e} >= 0, not a descent direction")]
    NotDescent { q0: f64 },

    /// Bracket doubling in the line search ran away; the iterate almost
    /// certainly contains NaN or infinite entries.
    #[error("line search: no sign change found while doubling the bracket up to 2^60")]
    NoBracket,

    /// Construction-time parameter validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Field snapshot file could not be parsed.
    #[error("malformed field file: {0}")]
    MalformedField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
