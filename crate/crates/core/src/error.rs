use core::fmt;

use crate::quadrature::QuadratureResult;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    Domain(&'static str),
    /// Adaptive quadrature ran out of evaluations (or could not subdivide
    /// further) before meeting the requested tolerance.
    Convergence { best: QuadratureResult },
    /// The integrand returned NaN or an infinity.
    NonFinite { at: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence { best } => write!(
                f,
                "quadrature did not converge after {} evaluations (best estimate {:e} ± {:e})",
                best.evaluations, best.value, best.abs_error_estimate
            ),
            Error::NonFinite { at } => write!(f, "integrand is not finite at x = {at:e}"),
        }
    }
}

impl core::error::Error for Error {}
