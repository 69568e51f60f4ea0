use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("frequency ratio must be positive and finite, got {0}")]
    NonPositiveFrequency(f64),
    #[error("resonant drive (omega/omega0 = 1): the quasienergy spectrum is continuous")]
    Resonant,
    #[error("driving amplitude must be non-negative and finite, got {0}")]
    NegativeAmplitude(f64),
    #[error("invalid numerics setting {field} = {value}")]
    Numerics { field: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("window half-width must be at least 1, got {0}")]
    InvalidWindow(usize),
    #[error("index (n = {n}, m = {m}) lies outside the window")]
    OutOfWindow { n: i64, m: i64 },
    #[error("vector window does not match the expected window")]
    WindowMismatch,
    #[error("target window does not contain the source window")]
    NotContained,
    #[error("zero vector has no Rayleigh quotient")]
    ZeroVector,
    #[error("imaginary-time step annihilated the state (dtau = {0})")]
    StepAnnihilated(f64),
    #[error("trace start state n = {0} lies outside the window")]
    StartOutsideWindow(usize),
    #[error("lambda_max must be positive, got {0}")]
    InvalidLambdaMax(f64),
    #[error("oscillator truncation {size} too small: tail weight {tail:e}")]
    TruncationTooSmall { size: usize, tail: f64 },
    #[error("propagation leaked norm {loss:e} out of the truncated basis")]
    Leakage { loss: f64 },
    #[error("expected a state of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("at least 100 steps per period are required, got {0}")]
    TooFewSteps(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
