use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument left the numeric regime the crate validates.
    #[error("domain error: {what} = {value} outside {allowed}")]
    Domain {
        what: &'static str,
        value: f64,
        allowed: &'static str,
    },

    /// A configuration or input violated a precondition.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("search did not converge: {0}")]
    NonConvergence(String),

    #[error("state not normalized: |alpha|^2 + |beta|^2 = {0}")]
    Normalization(f64),

    #[error("integration failed at t = {t}: memory variable became non-finite")]
    Integration { t: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by a value leaving a numeric domain
    /// (as opposed to malformed configuration).
    pub fn is_numeric_domain(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Integration { .. })
    }
}
