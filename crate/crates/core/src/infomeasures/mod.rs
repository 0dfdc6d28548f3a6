//! Information measures of one-dimensional densities and discrete
//! distributions: Shannon, Fisher, disequilibrium, LMC complexity and
//! Rényi, plus the time series over a tunneling period.

mod continuous;
mod density;
mod discrete;
mod extrema;
mod series;

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::quantum_state::StateError;

pub use continuous::{
    debruijn_check, debruijn_gaussian, disequilibrium_continuous, fisher_continuous, lmc_exp, renyi_continuous,
    shannon_continuous, uncertainty_product, MomentSet,
};
pub use density::{
    profile, AmplitudeDensity, Density, FnDensity, Gaussian, Profile, ProfileOptions, Rescaled, Uniform,
};
pub use discrete::{
    disequilibrium_discrete, fisher_discrete, lmc_discrete, lmc_near_equilibrium, renyi_discrete, shannon_discrete,
    Base, DiscreteDist,
};
pub use extrema::{find_extrema, Extremum, ExtremumKind};
pub use series::{
    check_bounds, fit_measures, measure_at, measure_series, momentum_measure_cut, BoundViolation, FitReport, MeasureRecord,
    RenyiValue, SeriesOptions, MEASURE_TAIL_MASS, REFERENCE_I_T_COEFFICIENTS, REFERENCE_S_T_COEFFICIENTS,
};

/// Densities below this value contribute nothing to `ln f` or `1/f` terms.
pub const RHO_FLOOR: f64 = 1e-30;
/// `1 + ln π`, the one-dimensional entropic uncertainty bound.
pub const EUR_BOUND: f64 = 2.144_729_885_849_400_2;
/// Allowed deviation of `∫ f` from one.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("density is not normalized: integral = {0}")]
    NotNormalized(f64),
    #[error("negative variance {0}")]
    NegativeVariance(f64),
    #[error("p[{index}] = 0 under a nonzero difference term")]
    ZeroProbabilityTerm { index: usize },
    #[error("Renyi order must be positive, finite and != 1, got {0}")]
    InvalidOrder(f64),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("smoothed density under-resolved: {0}")]
    ConvolutionUnderresolved(String),
    #[error("quadrature did not converge (worst relative error {worst_relative_error:.2e} after {evaluations} evaluations)")]
    QuadratureFailed { worst_relative_error: f64, evaluations: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type Result<T> = std::result::Result<T, MeasureError>;
