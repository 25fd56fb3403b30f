use thiserror::Error;

/// Errors raised by the dephasing engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid noise parameters: {0}")]
    InvalidParams(String),

    #[error("invalid time argument {0}: times must be finite and non-negative")]
    InvalidTime(f64),

    #[error("times must be given in non-increasing order")]
    UnorderedTimes,

    #[error("cumulant order {0} is outside the supported range 1..=4")]
    UnsupportedOrder(usize),

    #[error("operation requires {0}")]
    Contract(&'static str),

    #[error("coherence vanishes at t = {t} (|D| = {magnitude:e}); rates are singular there")]
    CoherenceZero { t: f64, magnitude: f64 },

    #[error("horizon {horizon} is too short: tail bound {bound:e} exceeds tolerance {tol:e}")]
    HorizonInsufficient { horizon: f64, bound: f64, tol: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid state-family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("non-Markovianity must be non-negative, got {0}")]
    NegativeMeasure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
