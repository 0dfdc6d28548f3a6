use std::f64::consts::PI;

use num_complex::Complex64;

use super::{MeasureError, Result, RHO_FLOOR};
use crate::numerics::Quadrature;

/// A one-dimensional probability density with its derivative.
pub trait Density: Sync {
    /// `(f(x), f'(x))`.
    fn eval(&self, x: f64) -> (f64, f64);

    /// Integration domain: first and last entries are the ends, the rest
    /// are points where `f` or a derivative may jump.
    fn breaks(&self) -> Vec<f64>;

    /// `f'²/f`, zero below [`RHO_FLOOR`].
    fn fisher_term(&self, x: f64) -> f64 {
        let (f, d) = self.eval(x);
        if f < RHO_FLOOR {
            0.0
        } else {
            d * d / f
        }
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn eval(&self, x: f64) -> (f64, f64) {
        (**self).eval(x)
    }
    fn breaks(&self) -> Vec<f64> {
        (**self).breaks()
    }
    fn fisher_term(&self, x: f64) -> f64 {
        (**self).fisher_term(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub mean: f64,
    pub sigma: f64,
}

impl Gaussian {
    pub fn new(mean: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !mean.is_finite() {
            return Err(MeasureError::InvalidDensity(format!("gaussian needs finite mean and sigma > 0, got {mean}, {sigma}")));
        }
        Ok(Gaussian { mean, sigma })
    }
}

impl Density for Gaussian {
    fn eval(&self, x: f64) -> (f64, f64) {
        let z = (x - self.mean) / self.sigma;
        let f = (-0.5 * z * z).exp() / (self.sigma * (2.0 * PI).sqrt());
        (f, -z / self.sigma * f)
    }

    fn breaks(&self) -> Vec<f64> {
        // e^{-z²/2} underflows the density floor well before |z| = 40
        vec![self.mean - 40.0 * self.sigma, self.mean, self.mean + 40.0 * self.sigma]
    }

    fn fisher_term(&self, x: f64) -> f64 {
        // z² f / σ², finite everywhere
        let (f, _) = self.eval(x);
        let z = (x - self.mean) / self.sigma;
        z * z * f / (self.sigma * self.sigma)
    }
}

/// Uniform density on `[lo, hi]`. Its Fisher integrand is zero inside;
/// the edge delta functions are not represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    pub lo: f64,
    pub hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(MeasureError::InvalidDensity(format!("uniform needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Uniform { lo, hi })
    }
}

impl Density for Uniform {
    fn eval(&self, x: f64) -> (f64, f64) {
        if x < self.lo || x > self.hi {
            (0.0, 0.0)
        } else {
            (1.0 / (self.hi - self.lo), 0.0)
        }
    }

    fn breaks(&self) -> Vec<f64> {
        vec![self.lo, self.hi]
    }
}

/// A density given by closures for `f` and `f'`, zero outside its breaks.
pub struct FnDensity<F, G> {
    f: F,
    df: G,
    breaks: Vec<f64>,
}

impl<F, G> FnDensity<F, G>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    pub fn new(f: F, df: G, breaks: Vec<f64>) -> Result<Self> {
        check_breaks(&breaks)?;
        Ok(FnDensity { f, df, breaks })
    }
}

impl<F, G> Density for FnDensity<F, G>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    fn eval(&self, x: f64) -> (f64, f64) {
        if outside(&self.breaks, x) {
            return (0.0, 0.0);
        }
        ((self.f)(x), (self.df)(x))
    }

    fn breaks(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

/// `|ψ|²` from an amplitude closure returning `(ψ, ψ')`.
///
/// The Fisher integrand is evaluated as `4 (Re ψ̄ψ')² / |ψ|²`, which stays
/// bounded by `4|ψ'|²` at the zeros of `ψ`.
pub struct AmplitudeDensity<A> {
    amplitude: A,
    breaks: Vec<f64>,
}

impl<A> AmplitudeDensity<A>
where
    A: Fn(f64) -> (Complex64, Complex64) + Sync,
{
    pub fn new(amplitude: A, breaks: Vec<f64>) -> Result<Self> {
        check_breaks(&breaks)?;
        Ok(AmplitudeDensity { amplitude, breaks })
    }
}

impl<A> Density for AmplitudeDensity<A>
where
    A: Fn(f64) -> (Complex64, Complex64) + Sync,
{
    fn eval(&self, x: f64) -> (f64, f64) {
        if outside(&self.breaks, x) {
            return (0.0, 0.0);
        }
        let (psi, dpsi) = (self.amplitude)(x);
        (psi.norm_sqr(), 2.0 * (psi.conj() * dpsi).re)
    }

    fn breaks(&self) -> Vec<f64> {
        self.breaks.clone()
    }

    fn fisher_term(&self, x: f64) -> f64 {
        if outside(&self.breaks, x) {
            return 0.0;
        }
        let (psi, dpsi) = (self.amplitude)(x);
        let rho = psi.norm_sqr();
        if rho < RHO_FLOOR {
            return 0.0;
        }
        let re = (psi.conj() * dpsi).re;
        4.0 * re * re / rho
    }
}

/// The density of `x / c` when `x` has density `inner`: `g(y) = c f(c y)`.
/// With `c = 1e-10` a density over metres becomes one over Å.
pub struct Rescaled<D> {
    pub inner: D,
    pub c: f64,
}

impl<D: Density> Rescaled<D> {
    pub fn new(inner: D, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(MeasureError::InvalidDensity(format!("scale must be positive, got {c}")));
        }
        Ok(Rescaled { inner, c })
    }
}

impl<D: Density> Density for Rescaled<D> {
    fn eval(&self, y: f64) -> (f64, f64) {
        let (f, d) = self.inner.eval(self.c * y);
        (self.c * f, self.c * self.c * d)
    }

    fn breaks(&self) -> Vec<f64> {
        self.inner.breaks().into_iter().map(|b| b / self.c).collect()
    }

    fn fisher_term(&self, y: f64) -> f64 {
        self.c.powi(3) * self.inner.fisher_term(self.c * y)
    }
}

fn outside(breaks: &[f64], x: f64) -> bool {
    x < breaks[0] || x > breaks[breaks.len() - 1]
}

fn check_breaks(breaks: &[f64]) -> Result<()> {
    if breaks.len() < 2 || breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(MeasureError::InvalidDensity(format!("breaks must be finite and strictly increasing, got {breaks:?}")));
    }
    Ok(())
}

/// Accuracy and cost controls for [`profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_evals: usize,
    /// Length used to make the integrands O(1); half the domain if `None`.
    pub length_scale: Option<f64>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { abs_tol: 1e-12, rel_tol: 1e-11, initial_panels: 16, max_evals: 20_000_000, length_scale: None }
    }
}

impl ProfileOptions {
    /// Options for an `n`-point sampling resolution: `n / 8` starting panels.
    pub fn for_grid(n_grid: usize) -> Self {
        ProfileOptions { initial_panels: (n_grid / 8).max(16), ..Default::default() }
    }
}

/// Every integral the measures need, from one adaptive pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub norm: f64,
    pub mean: f64,
    pub second_moment: f64,
    /// `-∫ f ln f`.
    pub shannon: f64,
    /// `∫ f'²/f`.
    pub fisher: f64,
    /// `∫ f²`.
    pub disequilibrium: f64,
    /// `(a, ∫ f^a)`.
    pub power_integrals: Vec<(f64, f64)>,
    pub evaluations: usize,
}

impl Profile {
    pub fn variance(&self) -> f64 {
        self.second_moment - self.mean * self.mean
    }

    /// `ln(∫ f^a) / (1 - a)` for one of the orders the profile was built with.
    pub fn renyi(&self, a: f64) -> Option<f64> {
        self.power_integrals.iter().find(|(b, _)| *b == a).map(|(_, v)| v.ln() / (1.0 - a))
    }
}

/// Integrates all measure integrands of `d` together. Integration runs in
/// `y = (x - m)/ℓ` with `m` the domain midpoint; results are mapped back.
pub fn profile<D: Density + ?Sized>(d: &D, orders: &[f64], opts: &ProfileOptions) -> Result<Profile> {
    for &a in orders {
        if !(a > 0.0) || a == 1.0 || !a.is_finite() {
            return Err(MeasureError::InvalidOrder(a));
        }
    }
    let breaks = d.breaks();
    check_breaks(&breaks)?;
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    let m = 0.5 * (lo + hi);
    let ell = opts.length_scale.unwrap_or(0.5 * (hi - lo));
    if !(ell > 0.0) {
        return Err(MeasureError::InvalidDensity(format!("length scale must be positive, got {ell}")));
    }
    let ybreaks: Vec<f64> = breaks.iter().map(|b| (b - m) / ell).collect();

    const FIXED: usize = 6;
    let dim = FIXED + orders.len();
    let q = Quadrature::new()
        .abs_tol(opts.abs_tol)
        .rel_tol(opts.rel_tol)
        .initial_panels(opts.initial_panels)
        .max_evals(opts.max_evals);
    let r = q.integrate_vec(
        |y, out: &mut [f64]| {
            let x = m + ell * y;
            let g = ell * d.eval(x).0;
            out[0] = g;
            out[1] = y * g;
            out[2] = y * y * g;
            out[3] = if g < RHO_FLOOR { 0.0 } else { -g * g.ln() };
            out[4] = ell.powi(3) * d.fisher_term(x);
            out[5] = g * g;
            for (slot, a) in out[FIXED..].iter_mut().zip(orders) {
                *slot = if g > 0.0 { g.powf(*a) } else { 0.0 };
            }
        },
        dim,
        &ybreaks,
    )?;
    if !r.converged {
        // accept a roundoff-limited result when every component is still tight
        let worst = r
            .values
            .iter()
            .zip(&r.est_errors)
            .map(|(v, e)| e / v.abs().max(1.0))
            .fold(0.0, f64::max);
        if !(worst < 1e-9) {
            return Err(MeasureError::QuadratureFailed { worst_relative_error: worst, evaluations: r.evaluations });
        }
    }
    let v = &r.values;
    Ok(Profile {
        norm: v[0],
        mean: m * v[0] + ell * v[1],
        second_moment: m * m * v[0] + 2.0 * m * ell * v[1] + ell * ell * v[2],
        shannon: v[3] + v[0] * ell.ln(),
        fisher: v[4] / (ell * ell),
        disequilibrium: v[5] / ell,
        power_integrals: orders.iter().zip(&v[FIXED..]).map(|(a, p)| (*a, p * ell.powf(1.0 - a))).collect(),
        evaluations: r.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_profile() {
        let g = Gaussian::new(0.3, 0.7).unwrap();
        let p = profile(&g, &[0.5, 2.0], &ProfileOptions::default()).unwrap();
        assert!((p.norm - 1.0).abs() < 1e-12);
        assert!((p.mean - 0.3).abs() < 1e-12);
        assert!((p.variance() - 0.49).abs() < 1e-12);
        let s = 0.5 * (2.0 * PI * std::f64::consts::E * 0.49).ln();
        assert!((p.shannon - s).abs() < 1e-11);
        assert!((p.fisher - 1.0 / 0.49).abs() < 1e-11);
        assert!((p.disequilibrium - 1.0 / (2.0 * 0.7 * PI.sqrt())).abs() < 1e-12);
        assert!((p.renyi(2.0).unwrap() - (-p.disequilibrium.ln())).abs() < 1e-12);
        assert!(p.renyi(3.0).is_none());
    }

    #[test]
    fn rescaling_shifts_entropy_by_log_scale() {
        let g = Gaussian::new(2e-10, 3e-11).unwrap();
        let metres = profile(&g, &[], &ProfileOptions::default()).unwrap();
        let angstrom = profile(&Rescaled::new(&g, 1e-10).unwrap(), &[], &ProfileOptions::default()).unwrap();
        assert!((metres.shannon - angstrom.shannon - 1e-10f64.ln()).abs() < 1e-10);
        assert!((metres.fisher * 1e-20 - angstrom.fisher).abs() < 1e-10 * angstrom.fisher);
        assert!((metres.mean * 1e10 - angstrom.mean).abs() < 1e-12);
    }

    #[test]
    fn amplitude_density_fisher_at_a_node() {
        // ψ = sqrt(2) sin(πx) on [0,1]: |ψ'|² stays finite where ψ = 0
        let amp = AmplitudeDensity::new(
            |x: f64| {
                let s = 2f64.sqrt();
                (Complex64::new(s * (PI * x).sin(), 0.0), Complex64::new(s * PI * (PI * x).cos(), 0.0))
            },
            vec![0.0, 0.5, 1.0],
        )
        .unwrap();
        assert_eq!(amp.fisher_term(0.0), 0.0);
        assert!((amp.fisher_term(1e-9) - 8.0 * PI * PI).abs() < 1e-6);
        let p = profile(&amp, &[], &ProfileOptions::default()).unwrap();
        assert!((p.fisher - 4.0 * PI * PI).abs() < 1e-9 * 4.0 * PI * PI);
    }

    #[test]
    fn invalid_inputs() {
        assert!(Gaussian::new(0.0, -1.0).is_err());
        assert!(Uniform::new(1.0, 1.0).is_err());
        assert!(FnDensity::new(|_| 1.0, |_| 0.0, vec![1.0, 0.0]).is_err());
        let u = Uniform::new(0.0, 1.0).unwrap();
        assert!(matches!(profile(&u, &[1.0], &ProfileOptions::default()), Err(MeasureError::InvalidOrder(_))));
        assert!(matches!(profile(&u, &[-0.5], &ProfileOptions::default()), Err(MeasureError::InvalidOrder(_))));
    }
}
