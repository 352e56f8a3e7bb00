use thiserror::Error;

/// Errors produced by the model, the spectral solvers and the sweep drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration of {states} configurations exceeds the cap of {cap}")]
    TooManyStates { states: u128, cap: u128 },

    #[error(
        "eigensolver did not converge after {iterations} iterations (last residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("at beta = {beta}: {source}")]
    AtBeta {
        beta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("seed {seed}: {source}")]
    AtSeed {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// The innermost error, with any `AtBeta` / `AtSeed` context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtBeta { source, .. } | Error::AtSeed { source, .. } => source.root(),
            other => other,
        }
    }

    /// True when the failure is numerical (solver) rather than a bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self.root(), Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
