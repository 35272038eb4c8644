//! Error type shared by every solver stage.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the expansion pipeline and the shooting oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (e.g. q <= 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// Model parameters violate their constraints.
    #[error("validation error: {0}")]
    Validation(String),

    /// A requested order exceeds a configured cap.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// V'(q0) vanished where a derivative ratio was required.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// The harmonic frequency radicand 3 + q0 V''/V' is not positive.
    #[error("no harmonic minimum: {0}")]
    NoHarmonicMinimum(String),

    /// No root of the expansion-point equation in the admissible domain.
    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// Operation requires a nodeless state (n_r = 0).
    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    /// Pade table construction hit a singular or ill-conditioned system.
    #[error(
        "degenerate Pade table: {reason} (condition {condition:.3e}, residual {residual:.3e})"
    )]
    DegenerateTable {
        reason: String,
        condition: f64,
        residual: f64,
    },

    /// Shooting bracket exhausted without isolating the requested level.
    #[error("no eigenvalue in bracket: {0}")]
    NoEigenvalueInBracket(String),

    /// An internal consistency check failed; indicates a solver bug, not bad input.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}
