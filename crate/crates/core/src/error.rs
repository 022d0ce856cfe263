use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A link is shorter than the collision threshold, so its bearing is undefined.
    #[error("zero-length link (norm {norm:e} below collision threshold {threshold:e})")]
    ZeroLink { norm: f64, threshold: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("negative discriminant {0:e}: the cubic has a single real root")]
    NegativeDiscriminant(f64),

    #[error("formation is not isosceles (d12* = {d12}, d13* = {d13})")]
    NotIsosceles { d12: f64, d13: f64 },

    #[error("point violates the feasibility constraints: {0}")]
    NotFeasible(String),

    #[error("outcome is {found}, expected a moving configuration")]
    WrongKind { found: String },

    #[error("invalid formation spec: {0}")]
    InvalidSpec(String),

    #[error("invalid gains: {0}")]
    InvalidGains(String),

    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),

    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
