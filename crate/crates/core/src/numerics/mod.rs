//! Numerical kernels shared by the rest of the crate: bracketed root
//! finding, adaptive Gauss–Kronrod quadrature, quartic least squares and
//! central differences.

mod diff;
mod polyfit;
mod quadrature;
mod roots;

pub use diff::central_diff;
pub use polyfit::{fit_quartic, PolyFit};
pub use quadrature::{
    integrate, integrate_line, LineIntegral, Quadrature, QuadratureResult, VecQuadratureResult,
    DEFAULT_TAIL_THRESHOLD,
};
pub use roots::{find_root, Bracket, MAX_ROOT_ITERATIONS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("bracket [{lo}, {hi}] does not enclose a sign change (f_lo = {f_lo}, f_hi = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root finder did not reach tolerance after {0} iterations")]
    MaxIterations(usize),
    #[error("quadrature tolerance not met: estimate {} with error {}", .0.value, .0.est_error)]
    ToleranceNotMet(QuadratureResult),
    #[error("integrand is not negligible at the truncation point {cut} (|f| = {magnitude})")]
    TailNotNegligible { cut: f64, magnitude: f64 },
    #[error("least-squares system is rank deficient: {distinct} distinct abscissae, need 5")]
    RankDeficient { distinct: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, NumericsError>;
