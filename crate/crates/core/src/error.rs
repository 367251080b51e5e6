use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("singular time t = {t}: characteristic function is {mu:e}")]
    SingularTime { t: f64, mu: f64 },

    #[error("coefficient pole near t = {t}: |tau| = {tau:e} exceeds {bound:e}")]
    PoleCrossing { t: f64, tau: f64, bound: f64 },

    #[error("divergent phase integral: {0}")]
    DivergentPhase(String),

    #[error("invalid initial span: {0}")]
    InvalidSpan(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("wavefunction does not decay at the grid edge: |psi| = {value:e} (threshold {threshold:e})")]
    TailLeak { value: f64, threshold: f64 },

    #[error("singular contour: z*zeta is real")]
    SingularContour,

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
