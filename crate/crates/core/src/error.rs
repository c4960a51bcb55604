use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The plate cutoff is not below the Bethe cutoff (eta* <= 1).
    #[error("weak-coupling condition violated: eta* = {eta_star} must exceed 1")]
    WeakCoupling { eta_star: f64 },

    /// The quantum-dot system lies outside the regime where the leading-order shift holds.
    #[error("out of regime: R^2/(R* d) = {ratio} must stay below {bound}")]
    OutOfRegime { ratio: f64, bound: f64 },

    /// The dot radius is smaller than the fluctuation-confinement radius R*.
    #[error("confinement bound violated: R = {radius} nm is below R* = {r_star} nm")]
    ConfinementBound { radius: f64, r_star: f64 },

    /// A quadrature or series did not reach its stopping criterion.
    #[error("numerical non-convergence: {reason} (partial value {partial}, error estimate {error_estimate})")]
    NonConvergence {
        reason: String,
        partial: f64,
        error_estimate: f64,
    },

    /// A derivative evaluator could not produce the requested order.
    #[error("derivative evaluation failed: {0}")]
    Derivative(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
