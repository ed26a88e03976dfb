use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("connectivity unreachable: no connected deployment after {attempts} attempts (radius {radius} is likely below the connectivity threshold)")]
    ConnectivityUnreachable { attempts: usize, radius: f64 },

    #[error(
        "insufficient energy: robot {robot} has {available} J but the move costs {required} J"
    )]
    InsufficientEnergy {
        robot: usize,
        available: f64,
        required: f64,
    },

    #[error("non-terminating simulation: round cap of {cap} reached")]
    NonTerminating { cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv output failed: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
