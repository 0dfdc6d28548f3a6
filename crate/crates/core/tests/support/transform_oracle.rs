//! Momentum amplitude by direct quadrature of `(2π)^{-1/2} ∫ ψ(x,t) e^{-ikx} dx`.

use dwell_core::numerics::Quadrature;
use dwell_core::quantum_state::SuperpositionState;
use num_complex::Complex64;

/// Integrates in Å with the amplitude scaled by √Å so the integrand is
/// O(1); the result is converted back to SI (m^{1/2}). The domain extends a
/// full support width past each end so that exponential tails are included.
pub fn phi_by_quadrature(s: &SuperpositionState, k: f64, t: f64) -> Complex64 {
    const A: f64 = 1e-10;
    let mut breaks: Vec<f64> = s.position_breaks().iter().map(|b| b / A).collect();
    let span = breaks[breaks.len() - 1] - breaks[0];
    breaks.insert(0, breaks[0] - span);
    breaks.push(breaks[breaks.len() - 1] + span);
    let quad = Quadrature::new().abs_tol(1e-15).rel_tol(1e-14).initial_panels(64);
    let part = |re: bool| {
        quad.integrate_breaks(
            |y| {
                let v = s.psi(y * A, t) * A.sqrt() * Complex64::from_polar(1.0, -k * y * A);
                if re { v.re } else { v.im }
            },
            &breaks,
        )
        .map(|r| r.value)
        .unwrap_or_else(|e| match e {
            dwell_core::numerics::NumericsError::ToleranceNotMet(r) => r.value,
            other => panic!("{other}"),
        })
    };
    Complex64::new(part(true), part(false)) * A.sqrt() / (2.0 * std::f64::consts::PI).sqrt()
}
