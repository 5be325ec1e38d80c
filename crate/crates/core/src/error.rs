use std::path::PathBuf;

use crate::signal::Scheme;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a discrete constellation")]
    NotDiscrete(Scheme),

    #[error("{0} is not a supported victim scheme")]
    UnsupportedVictim(Scheme),

    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("average jammer power must be positive to normalize the cost, got {0}")]
    NonPositiveJnr(f64),

    #[error("phase quadrature did not converge: {nodes} nodes gave {coarse:e}, {fine_nodes} gave {fine:e}")]
    QuadratureNonConvergence {
        nodes: usize,
        fine_nodes: usize,
        coarse: f64,
        fine: f64,
    },

    #[error("posterior covariance is not positive definite")]
    NotPositiveDefinite,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }
}
