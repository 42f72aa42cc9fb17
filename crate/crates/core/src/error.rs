use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameter validation; one entry per violated invariant.
    #[error("invalid parameters: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("quadrature did not converge (error estimate {estimate:.3e}, tolerance {tol:.3e})")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("series did not converge after {terms} terms (last term {last:.3e})")]
    Series { terms: usize, last: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("length {0} is not a power of two")]
    Shape(usize),

    #[error("singular matrix (pivot {pivot:.3e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("nu = {nu} does not give a qutrit ({n_bound} bound states)")]
    NotAQutrit { nu: f64, n_bound: u32 },

    #[error("grid spacing {spacing:.3e} does not resolve linewidth; use dk <= {suggested_dk:.3e}")]
    Resolution { spacing: f64, suggested_dk: f64 },

    #[error("spectrum has no transparency dip")]
    NoTransparency,

    #[error("state {state} not converged (residual {residual:.3e})")]
    NotConverged { state: usize, residual: f64 },

    #[error("unstable evolution: norm drift {drift:.3e}")]
    Unstable { drift: f64 },
}
