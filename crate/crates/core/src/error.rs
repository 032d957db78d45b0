use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("photon-number truncation {needed} exceeds the hard cap {cap}")]
    NmaxCap { needed: usize, cap: usize },

    #[error("precision loss: {0}")]
    Precision(String),

    #[error("non-finite intermediate in {0}")]
    NonFinite(&'static str),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("truncated Fock space too small: {0}")]
    Truncation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures caused by the numerics rather than the inputs.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::InvalidParameter(_))
    }
}
