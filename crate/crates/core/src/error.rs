use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Grids that should agree do not, or a grid is too small for a stencil.
    #[error("shape error: {0}")]
    Shape(String),
    /// An operation's documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An iterative method did not reach its tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// A retarded time falls outside the recorded source history.
    #[error("history coverage: {0}")]
    Coverage(String),
    /// A sampled value was NaN or infinite.
    #[error("non-finite sample at {0}")]
    NonFinite(String),
    /// Invalid configuration (quadrature orders, tolerances, constants).
    #[error("configuration error: {0}")]
    Config(String),
}
