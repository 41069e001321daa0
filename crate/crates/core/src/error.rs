use thiserror::Error;

/// Errors raised by the model evaluators, the scaling engine and the oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The input sits on a point where the requested quantity diverges or is
    /// undefined (gap closing, h = 1 in the LMG model, degenerate ground state).
    #[error("singular input: {0}")]
    Singular(String),

    /// A mode with vanishing excitation energy makes a derivative undefined.
    #[error("gapless mode k = {k} (exact level crossing)")]
    GaplessMode { k: usize },

    #[error("quadrature did not converge: estimated error {error:.3e} after {intervals} intervals")]
    QuadratureNonConvergent { error: f64, intervals: usize },

    #[error("grid too small: boundary amplitude {amplitude:.3e} exceeds 1e-8")]
    GridTooSmall { amplitude: f64 },

    #[error("bracket [{lo}, {hi}] does not enclose an interior maximum; widen and retry")]
    NotUnimodal { lo: f64, hi: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("rank-deficient fit input: {0}")]
    RankDeficient(String),

    #[error("finite-difference step too large: {0}")]
    StepTooLarge(String),

    #[error("system too large for dense diagonalization: N = {n} (max 11)")]
    TooLarge { n: usize },

    #[error("t = tanh^2 x reached 1; Bogoliubov sums overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
