use thiserror::Error;

/// Errors raised by the analytic, oracle, simulation and fitting layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight vector is empty")]
    EmptyWeights,

    #[error("weight {index} is {value}, weights must be strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1 within 1e-9")]
    BadSum { sum: f64 },

    #[error("antenna profile is empty")]
    EmptyProfile,

    #[error("channel {index} has zero antennas")]
    ZeroAntennas { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{users} users cannot be served by {antennas} transmit antennas")]
    TooManyUsers { users: usize, antennas: u32 },

    #[error("multiplexing gain {r} outside [0, {max}]")]
    OutOfRange { r: f64, max: f64 },

    #[error("problem size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },

    #[error("invalid linear program: {0}")]
    InvalidInstance(String),

    #[error("interfering channels of user {user} are numerically rank deficient")]
    RankDeficient { user: usize },

    #[error("invalid simulation parameter: {0}")]
    InvalidParameter(String),

    #[error("only {usable} usable points in the fitting window, need at least 2")]
    InsufficientData { usable: usize },

    #[error("too few outage events: points at {dropped_db:?} dB have fewer than {min_events} outages")]
    InsufficientEvents { dropped_db: Vec<f64>, min_events: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
