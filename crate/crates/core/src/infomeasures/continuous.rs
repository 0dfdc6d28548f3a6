use std::f64::consts::{E, PI};

use serde::Serialize;

use super::density::{profile, Density, Profile, ProfileOptions, Rescaled};
use super::{MeasureError, Result, NORM_TOLERANCE, RHO_FLOOR};
use crate::numerics::{central_diff, NumericsError, Quadrature};

/// First and second moments in both spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_k: f64,
    pub mean_k2: f64,
    pub dx: f64,
    pub dk: f64,
}

impl MomentSet {
    /// Variances within roundoff of zero are clamped; clearly negative ones
    /// are a numerical failure.
    pub fn new(mean_x: f64, mean_x2: f64, mean_k: f64, mean_k2: f64) -> Result<Self> {
        let spread = |m: f64, m2: f64| -> Result<f64> {
            let var = m2 - m * m;
            if var < -1e-12 * m2.abs() || !var.is_finite() {
                return Err(MeasureError::NegativeVariance(var));
            }
            Ok(var.max(0.0).sqrt())
        };
        Ok(MomentSet { mean_x, mean_x2, mean_k, mean_k2, dx: spread(mean_x, mean_x2)?, dk: spread(mean_k, mean_k2)? })
    }

    pub fn product(&self) -> f64 {
        self.dx * self.dk
    }

    pub fn var_x(&self) -> f64 {
        self.dx * self.dx
    }

    pub fn var_k(&self) -> f64 {
        self.dk * self.dk
    }
}

fn normalized_profile<D: Density + ?Sized>(f: &D, orders: &[f64]) -> Result<Profile> {
    let p = profile(f, orders, &ProfileOptions::default())?;
    if (p.norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(MeasureError::NotNormalized(p.norm));
    }
    Ok(p)
}

/// Moments of a position density `rho` and a momentum density `n`.
pub fn uncertainty_product<R: Density + ?Sized, N: Density + ?Sized>(rho: &R, n: &N) -> Result<MomentSet> {
    let px = normalized_profile(rho, &[])?;
    let pk = normalized_profile(n, &[])?;
    MomentSet::new(px.mean, px.second_moment, pk.mean, pk.second_moment)
}

/// `-∫ f ln f` in nats.
pub fn shannon_continuous<D: Density + ?Sized>(f: &D) -> Result<f64> {
    Ok(normalized_profile(f, &[])?.shannon)
}

/// `∫ f'²/f`.
pub fn fisher_continuous<D: Density + ?Sized>(f: &D) -> Result<f64> {
    Ok(normalized_profile(f, &[])?.fisher)
}

/// `∫ f²`.
pub fn disequilibrium_continuous<D: Density + ?Sized>(f: &D) -> Result<f64> {
    Ok(normalized_profile(f, &[])?.disequilibrium)
}

/// `ln(∫ f^a) / (1 - a)`.
pub fn renyi_continuous<D: Density + ?Sized>(f: &D, a: f64) -> Result<f64> {
    let p = normalized_profile(f, &[a])?;
    p.renyi(a).ok_or(MeasureError::InvalidOrder(a))
}

/// LMC complexity in its exponential form, `e^S · D`.
pub fn lmc_exp(s: f64, d: f64) -> f64 {
    s.exp() * d
}

/// Relative error of the one-sided de Bruijn estimate
/// `[S(f * N(0,t)) - S(f)] / t` against `I/2`.
///
/// Everything runs in units of the standard deviation of `f`, so `t_step`
/// is effectively `t_step / Var f`.
pub fn debruijn_check<D: Density + ?Sized>(f: &D, i_f: f64, t_step: f64) -> Result<f64> {
    if !(t_step > 0.0) || !t_step.is_finite() {
        return Err(MeasureError::ConvolutionUnderresolved(format!("t_step must be positive, got {t_step}")));
    }
    if !(i_f > 0.0) || !i_f.is_finite() {
        return Err(MeasureError::InvalidDensity(format!("Fisher information must be positive and finite, got {i_f}")));
    }
    let base = normalized_profile(f, &[])?;
    let ell = base.variance().sqrt();
    let g = Rescaled::new(f, ell)?;
    let tau = t_step / (ell * ell);
    let s = tau.sqrt();
    if s < 1e-6 {
        return Err(MeasureError::ConvolutionUnderresolved(format!("smoothing width {s:e} sd is below resolution")));
    }
    let s0 = profile(&g, &[], &ProfileOptions { abs_tol: 1e-13, rel_tol: 1e-13, ..Default::default() })?.shannon;

    let gb = g.breaks();
    let (lo, hi) = (gb[0] - 12.0 * s, gb[gb.len() - 1] + 12.0 * s);
    let mut outer = vec![lo];
    outer.extend(gb.iter().copied());
    outer.push(hi);
    outer.dedup();

    let inner = Quadrature::new().abs_tol(1e-14).rel_tol(1e-13);
    let mut failure: Option<NumericsError> = None;
    let smoothed = |y: f64| -> std::result::Result<f64, NumericsError> {
        // f_t(y) = ∫ g(y - s z) φ(z) dz over |z| < 12
        let mut zb = vec![-12.0];
        let mut interior: Vec<f64> = gb.iter().map(|b| (y - b) / s).filter(|z| z.abs() < 12.0).collect();
        interior.sort_by(f64::total_cmp);
        zb.extend(interior);
        zb.push(12.0);
        zb.dedup();
        let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
        inner.integrate_breaks(|z| g.eval(y - s * z).0 * phi(z), &zb).map(|r| r.value)
    };
    let r = Quadrature::new().abs_tol(1e-12).rel_tol(1e-12).initial_panels(64).integrate_vec(
        |y, out: &mut [f64]| match smoothed(y) {
            Ok(v) => {
                out[0] = v;
                out[1] = if v < RHO_FLOOR { 0.0 } else { -v * v.ln() };
            }
            Err(e) => {
                failure.get_or_insert(e);
                out[0] = 0.0;
                out[1] = 0.0;
            }
        },
        2,
        &outer,
    )?;
    if let Some(e) = failure {
        return Err(MeasureError::ConvolutionUnderresolved(e.to_string()));
    }
    let worst = r.est_errors.iter().fold(0.0f64, |m, e| m.max(*e));
    if !r.converged && worst > 1e-9 {
        return Err(MeasureError::ConvolutionUnderresolved(format!("outer error estimate {worst:e}")));
    }
    if (r.values[0] - 1.0).abs() > NORM_TOLERANCE {
        return Err(MeasureError::ConvolutionUnderresolved(format!("smoothed mass {}", r.values[0])));
    }
    let estimate = (r.values[1] - s0) / tau;
    let target = 0.5 * i_f * ell * ell;
    Ok((estimate - target).abs() / target)
}

/// de Bruijn check for a Gaussian from its closed-form smoothed entropy
/// `½ ln(2πe(σ² + t))`, differentiated numerically at `t = 0`.
pub fn debruijn_gaussian(sigma: f64) -> f64 {
    let var = sigma * sigma;
    let entropy = |t: f64| 0.5 * (2.0 * PI * E * (var + t)).ln();
    let slope = central_diff(entropy, 0.0, 1e-5 * var);
    let target = 0.5 / var;
    (slope - target).abs() / target
}
