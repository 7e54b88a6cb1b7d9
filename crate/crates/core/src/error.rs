use thiserror::Error;

/// Errors produced by the numerical routines and model evaluators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget. The achieved
    /// estimate and its error bound are carried along for diagnostics.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    Quadrature { estimate: f64, error_bound: f64 },

    /// A root-finding bracket did not contain a sign change.
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An iterative search (root finding, break-even) failed to converge.
    #[error("search failed: {0}")]
    Search(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
