use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sampled objective is not concave/increasing as required.
    #[error("concavity precondition violated: {0}")]
    NotConcave(String),

    /// The ratio is monotone over the searched bracket; no interior optimum.
    #[error("no interior optimum within the search bracket")]
    NoOptimum,

    /// A transmission mode cannot be served by the available antennas/users.
    #[error("infeasible mode: {0}")]
    InfeasibleMode(String),

    /// A numerical routine failed to converge or produced a singular system.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed configuration input.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
