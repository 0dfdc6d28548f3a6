use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::continuous::{lmc_exp, MomentSet};
use super::density::{profile, AmplitudeDensity, ProfileOptions};
use super::{MeasureError, Result, EUR_BOUND, NORM_TOLERANCE};
use crate::numerics::{fit_quartic, PolyFit, Quadrature};
use crate::quantum_state::SuperpositionState;

/// Momentum tail mass left outside the measure integrals.
pub const MEASURE_TAIL_MASS: f64 = 1e-11;

/// Quartic in `ωt` fitted to `exp(S_T)` for the DSWP ground pair,
/// `0 ≤ ωt ≤ π/2`, as reported in the literature.
pub const REFERENCE_S_T_COEFFICIENTS: [f64; 5] = [8.81379, 0.66905, 8.47152, -7.26716, 1.70397];
/// Quartic in `ωt` fitted to `ln(I_T)`, same setting.
pub const REFERENCE_I_T_COEFFICIENTS: [f64; 5] = [1.40713, 1.35802, 1.99491, -1.90413, 0.48349];

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOptions {
    pub n_times: usize,
    pub n_grid: usize,
    pub renyi_orders: Vec<f64>,
    pub tail_mass: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { n_times: 65, n_grid: 4001, renyi_orders: vec![0.5, 2.0, 3.0], tail_mass: MEASURE_TAIL_MASS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenyiValue {
    pub order: f64,
    pub position: f64,
    pub momentum: f64,
}

/// All measures at one instant, SI units (x in m, k in m⁻¹, entropies in
/// nats).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureRecord {
    pub t_over_t: f64,
    pub time: f64,
    pub norm_x: f64,
    pub norm_k: f64,
    pub moments: MomentSet,
    pub dx_dk: f64,
    pub s_x: f64,
    pub s_k: f64,
    pub s_t: f64,
    pub i_x: f64,
    pub i_k: f64,
    pub i_t: f64,
    pub d_x: f64,
    pub d_k: f64,
    pub d_t: f64,
    pub c_t: f64,
    pub renyi: Vec<RenyiValue>,
}

/// Half-width of the momentum integration domain for `s`.
pub fn momentum_measure_cut(s: &SuperpositionState, tail_mass: f64) -> Result<f64> {
    Ok(s.momentum_cut(tail_mass)?)
}

/// Measures at `t = j T / (n_times - 1)`, `j = 0..n_times`. Samples are
/// independent and computed in parallel; the output is in time order.
pub fn measure_series(s: &SuperpositionState, opts: &SeriesOptions) -> Result<Vec<MeasureRecord>> {
    if opts.n_times < 8 {
        return Err(MeasureError::TooFewSamples { needed: 8, got: opts.n_times });
    }
    let k_cut = momentum_measure_cut(s, opts.tail_mass)?;
    let period = s.period();
    (0..opts.n_times)
        .into_par_iter()
        .map(|j| {
            let frac = j as f64 / (opts.n_times - 1) as f64;
            measure_record(s, frac, frac * period, k_cut, opts)
        })
        .collect()
}

/// Measures at the single instant `t = t_over_t · T`.
pub fn measure_at(s: &SuperpositionState, t_over_t: f64, opts: &SeriesOptions) -> Result<MeasureRecord> {
    let k_cut = momentum_measure_cut(s, opts.tail_mass)?;
    measure_record(s, t_over_t, t_over_t * s.period(), k_cut, opts)
}

fn measure_record(s: &SuperpositionState, frac: f64, t: f64, k_cut: f64, opts: &SeriesOptions) -> Result<MeasureRecord> {
    let width = s.support.1 - s.support.0;
    let base = ProfileOptions::for_grid(opts.n_grid);

    let pos = AmplitudeDensity::new(|x| (s.psi(x, t), s.dpsi(x, t)), s.position_breaks())?;
    let px = profile(&pos, &opts.renyi_orders, &ProfileOptions { length_scale: Some(0.5 * width), ..base })?;

    let mom = AmplitudeDensity::new(|k| s.phi_with_derivative(k, t), vec![-k_cut, 0.0, k_cut])?;
    let pk = profile(&mom, &opts.renyi_orders, &ProfileOptions { length_scale: Some(2.0 / width), ..base })?;

    for norm in [px.norm, pk.norm] {
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(MeasureError::NotNormalized(norm));
        }
    }
    let (mean_k, mean_k2) = momentum_moments(s, t, base.initial_panels)?;
    let moments = MomentSet::new(px.mean, px.second_moment, mean_k, mean_k2)?;

    let s_t = px.shannon + pk.shannon;
    let d_t = px.disequilibrium * pk.disequilibrium;
    let renyi = opts
        .renyi_orders
        .iter()
        .map(|&a| RenyiValue {
            order: a,
            position: px.renyi(a).unwrap_or(f64::NAN),
            momentum: pk.renyi(a).unwrap_or(f64::NAN),
        })
        .collect();
    Ok(MeasureRecord {
        t_over_t: frac,
        time: t,
        norm_x: px.norm,
        norm_k: pk.norm,
        dx_dk: moments.product(),
        moments,
        s_x: px.shannon,
        s_k: pk.shannon,
        s_t,
        i_x: px.fisher,
        i_k: pk.fisher,
        i_t: px.fisher * pk.fisher,
        d_x: px.disequilibrium,
        d_k: pk.disequilibrium,
        d_t,
        c_t: lmc_exp(s_t, d_t),
        renyi,
    })
}

/// `⟨k⟩ = ∫ Im(ψ̄ψ') dx` and `⟨k²⟩ = ∫ |ψ'|² dx`, free of momentum-tail
/// truncation.
fn momentum_moments(s: &SuperpositionState, t: f64, panels: usize) -> Result<(f64, f64)> {
    let breaks = s.position_breaks();
    let (x0, w) = (breaks[0], breaks[breaks.len() - 1] - breaks[0]);
    let ys: Vec<f64> = breaks.iter().map(|b| (b - x0) / w).collect();
    // χ(y) = √w ψ(x0 + w y) has unit norm on [0, 1]
    let r = Quadrature::new().abs_tol(1e-13).rel_tol(1e-12).initial_panels(panels).integrate_vec(
        |y, out: &mut [f64]| {
            let x = x0 + w * y;
            let chi = s.psi(x, t) * w.sqrt();
            let dchi: Complex64 = s.dpsi(x, t) * w.powf(1.5);
            out[0] = (chi.conj() * dchi).im;
            out[1] = dchi.norm_sqr();
        },
        2,
        &ys,
    )?;
    if !r.converged && r.est_errors[1] > 1e-9 * r.values[1] {
        return Err(MeasureError::QuadratureFailed { worst_relative_error: r.est_errors[1] / r.values[1], evaluations: r.evaluations });
    }
    Ok((r.values[0] / w, r.values[1] / (w * w)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub t_over_t: f64,
    pub bound: &'static str,
    pub value: f64,
    pub limit: f64,
}

/// Lower bounds every record must satisfy. A relative slack of 1e-9 absorbs
/// quadrature error for states that sit exactly on a bound.
pub fn check_bounds(r: &MeasureRecord) -> Vec<BoundViolation> {
    let checks = [
        ("S_T >= 1 + ln(pi)", r.s_t, EUR_BOUND),
        ("I_T >= 4", r.i_t, 4.0),
        ("dx*dk >= 1/2", r.dx_dk, 0.5),
        ("I_x*Var_x >= 1", r.i_x * r.moments.var_x(), 1.0),
        ("I_k*Var_k >= 1", r.i_k * r.moments.var_k(), 1.0),
    ];
    checks
        .into_iter()
        .filter(|(_, value, limit)| !(*value >= limit * (1.0 - 1e-9)))
        .map(|(bound, value, limit)| BoundViolation { t_over_t: r.t_over_t, bound, value, limit })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Quartic in `ωt` for `exp(S_T)`.
    pub s_t: PolyFit,
    /// Quartic in `ωt` for `ln(I_T)`.
    pub i_t: PolyFit,
    /// Residuals mapped back to `S_T` and `I_T` themselves.
    pub s_t_rmse: f64,
    pub i_t_rmse: f64,
    pub s_t_range: f64,
    pub i_t_range: f64,
    pub samples: usize,
}

/// Fits `S_T = ln(quartic(ωt))` and `I_T = exp(quartic(ωt))` over the
/// samples with `0 ≤ ωt ≤ π/2`.
pub fn fit_measures(series: &[MeasureRecord]) -> Result<FitReport> {
    let window: Vec<&MeasureRecord> = series.iter().filter(|r| r.t_over_t <= 0.25 * (1.0 + 1e-9)).collect();
    if window.len() < 6 {
        return Err(MeasureError::TooFewSamples { needed: 6, got: window.len() });
    }
    let wt: Vec<f64> = window.iter().map(|r| 2.0 * PI * r.t_over_t).collect();
    let st: Vec<f64> = window.iter().map(|r| r.s_t).collect();
    let it: Vec<f64> = window.iter().map(|r| r.i_t).collect();
    let s_fit = fit_quartic(&wt, &st.iter().map(|v| v.exp()).collect::<Vec<_>>())?;
    let i_fit = fit_quartic(&wt, &it.iter().map(|v| v.ln()).collect::<Vec<_>>())?;

    let rmse = |pred: &dyn Fn(f64) -> f64, ys: &[f64]| {
        (wt.iter().zip(ys).map(|(x, y)| (pred(*x) - y).powi(2)).sum::<f64>() / ys.len() as f64).sqrt()
    };
    let range = |ys: &[f64]| {
        let (lo, hi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(*y), b.max(*y)));
        hi - lo
    };
    Ok(FitReport {
        s_t_rmse: rmse(&|x| s_fit.eval(x).ln(), &st),
        i_t_rmse: rmse(&|x| i_fit.eval(x).exp(), &it),
        s_t_range: range(&st),
        i_t_range: range(&it),
        s_t: s_fit,
        i_t: i_fit,
        samples: window.len(),
    })
}
