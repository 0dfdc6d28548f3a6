//! Two-level superpositions, their time evolution and the position and
//! momentum densities.
//!
//! `ψ(x,t) = [u_a(x) + s·u_b(x) e^{-iωt}] / √2` with `ω = ΔE/ħ`; the global
//! phase `e^{-iE_a t/ħ}` is dropped since only densities are consumed. The
//! momentum amplitude is the same combination of the per-state transforms,
//! which are exact (see [`crate::wavefunction`]).

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigensolver::{self, build_wavefunction, support_cut, EigenError, EigenState, IswpState, Parity};
use crate::numerics::{NumericsError, Quadrature};
use crate::potentials::{DswpParams, IswpParams, PhysicalConstants, JOULE_PER_EV};
use crate::wavefunction::PiecewiseExp;

/// Tail mass left outside the default momentum display grid.
pub const DISPLAY_TAIL_MASS: f64 = 1e-7;
/// Grid-end density, relative to the peak, above which a grid is rejected.
pub const EDGE_THRESHOLD: f64 = 1e-6;
/// Display factors for plotting: `ρ·1e-10` and `n·1e11`.
pub const POSITION_DISPLAY_SCALE: f64 = 1e-10;
pub const MOMENTUM_DISPLAY_SCALE: f64 = 1e11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("pair {pair} is not available for {system}: {reason}")]
    UnknownPair { system: System, pair: Pair, reason: String },
    #[error("{space} grid too narrow: edge density {edge:.3e} exceeds {threshold:.1e} of the peak")]
    GridTooNarrow { space: Space, edge: f64, threshold: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unknown {kind} '{value}'")]
    Parse { kind: &'static str, value: String },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, StateError>;

macro_rules! named_enum {
    ($name:ident, $kind:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = StateError;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(StateError::Parse { kind: $kind, value: s.to_string() }),
                }
            }
        }
    };
}

named_enum!(System, "system", { Dswp => "dswp", Iswp => "iswp" });
named_enum!(Pair, "pair", { Ground => "ground", Excited => "excited" });
named_enum!(Side, "side", { Left => "left", Right => "right" });
named_enum!(Space, "space", { Position => "position", Momentum => "momentum" });

/// One member of the superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub label: String,
    /// Energy in eV.
    pub energy: f64,
    pub parity: Parity,
    pub wave: PiecewiseExp,
}

impl Component {
    fn from_dswp(state: &EigenState, p: &DswpParams) -> Self {
        Component {
            label: state.label(),
            energy: state.energy,
            parity: state.parity,
            wave: build_wavefunction(state, p),
        }
    }

    fn from_iswp(state: &IswpState) -> Self {
        Component { label: state.label(), energy: state.energy, parity: state.parity(), wave: state.wavefunction() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    pub system: System,
    pub pair: Pair,
    pub side: Side,
    pub state_a: Component,
    pub state_b: Component,
    /// `E_b - E_a` in eV.
    pub delta_e: f64,
    /// +1 or -1, the relative sign of `u_b` at `t = 0`.
    pub sign: f64,
    /// Interval in metres outside which `ρ` is negligible (or exactly zero).
    pub support: (f64, f64),
    /// Mirror point of the potential, in metres.
    pub centre: f64,
    pub constants: PhysicalConstants,
    /// Potential in eV at `x` in metres; used only for energy checks.
    potential: PotentialShape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PotentialShape {
    Dswp(DswpParams),
    Iswp(IswpParams),
}

/// Builds the superposition of the requested level pair whose probability
/// mass sits on `side` at `t = 0`.
pub fn make_superposition(
    system: System,
    pair: Pair,
    side: Side,
    dswp: &DswpParams,
    iswp: &IswpParams,
    constants: &PhysicalConstants,
) -> Result<SuperpositionState> {
    let (state_a, state_b, support, centre, potential) = match system {
        System::Dswp => {
            let spectrum = eigensolver::solve_spectrum(dswp, constants)?;
            let first = match pair {
                Pair::Ground => 0,
                Pair::Excited => 2,
            };
            let (a, b) = match (spectrum.get(first), spectrum.get(first + 1)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(StateError::UnknownPair {
                        system,
                        pair,
                        reason: format!("only {} sub-barrier states", spectrum.len()),
                    })
                }
            };
            if a.parity != Parity::Even || b.parity != Parity::Odd {
                return Err(StateError::UnknownPair {
                    system,
                    pair,
                    reason: format!("states {} and {} do not form an even/odd doublet", a.label(), b.label()),
                });
            }
            let cut = support_cut(a, dswp).max(support_cut(b, dswp));
            (Component::from_dswp(a, dswp), Component::from_dswp(b, dswp), (-cut, cut), 0.0, PotentialShape::Dswp(*dswp))
        }
        System::Iswp => {
            if pair != Pair::Ground {
                return Err(StateError::UnknownPair { system, pair, reason: "only (psi1, psi2) is defined".into() });
            }
            let a = eigensolver::iswp_state(iswp, constants, 1)?;
            let b = eigensolver::iswp_state(iswp, constants, 2)?;
            let width = iswp.width_si();
            (Component::from_iswp(&a), Component::from_iswp(&b), (0.0, width), width / 2.0, PotentialShape::Iswp(*iswp))
        }
    };

    // ∫_{x<centre} u_a u_b decides which sign puts the mass on the left
    let overlap = {
        let mut breaks = vec![support.0];
        breaks.extend(state_a.wave.breakpoints().into_iter().filter(|b| *b > support.0 && *b < centre));
        breaks.push(centre);
        let scale = centre - support.0;
        let y: Vec<f64> = breaks.iter().map(|b| (b - support.0) / scale).collect();
        Quadrature::new()
            .abs_tol(1e-12)
            .integrate_breaks(
                |t| {
                    let x = support.0 + t * scale;
                    state_a.wave.value(x).re * state_b.wave.value(x).re * scale
                },
                &y,
            )?
            .value
    };
    let left_sign = if overlap >= 0.0 { 1.0 } else { -1.0 };
    let sign = match side {
        Side::Left => left_sign,
        Side::Right => -left_sign,
    };
    Ok(SuperpositionState {
        system,
        pair,
        side,
        delta_e: state_b.energy - state_a.energy,
        state_a,
        state_b,
        sign,
        support,
        centre,
        constants: *constants,
        potential,
    })
}

impl SuperpositionState {
    /// `ω = ΔE/ħ` in rad/s.
    pub fn omega(&self) -> f64 {
        self.delta_e * JOULE_PER_EV / self.constants.hbar
    }

    /// `T = 2πħ/ΔE` in seconds.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }

    fn relative_phase(&self, t: f64) -> Complex64 {
        // reduce ωt before exponentiating; t may span many periods
        let wt = (self.omega() * t).rem_euclid(2.0 * PI);
        self.sign * Complex64::from_polar(1.0, -wt)
    }

    /// `ψ(x,t)` with `x` in metres and `t` in seconds.
    pub fn psi(&self, x: f64, t: f64) -> Complex64 {
        (self.state_a.wave.value(x) + self.relative_phase(t) * self.state_b.wave.value(x)) / SQRT_2
    }

    /// `∂ψ/∂x`.
    pub fn dpsi(&self, x: f64, t: f64) -> Complex64 {
        (self.state_a.wave.derivative(x) + self.relative_phase(t) * self.state_b.wave.derivative(x)) / SQRT_2
    }

    /// `φ(k,t)` with `k` in m⁻¹.
    pub fn phi(&self, k: f64, t: f64) -> Complex64 {
        (self.state_a.wave.fourier(k) + self.relative_phase(t) * self.state_b.wave.fourier(k)) / SQRT_2
    }

    /// `(φ, ∂φ/∂k)`.
    pub fn phi_with_derivative(&self, k: f64, t: f64) -> (Complex64, Complex64) {
        let (fa, da) = self.state_a.wave.fourier_with_derivative(k);
        let (fb, db) = self.state_b.wave.fourier_with_derivative(k);
        let r = self.relative_phase(t);
        ((fa + r * fb) / SQRT_2, (da + r * db) / SQRT_2)
    }

    /// Region boundaries of both components inside the support.
    pub fn position_breaks(&self) -> Vec<f64> {
        let mut breaks = vec![self.support.0];
        let mut interior: Vec<f64> = self
            .state_a
            .wave
            .breakpoints()
            .into_iter()
            .chain(self.state_b.wave.breakpoints())
            .filter(|b| *b > self.support.0 && *b < self.support.1)
            .collect();
        interior.sort_by(f64::total_cmp);
        interior.dedup();
        breaks.extend(interior);
        breaks.push(self.support.1);
        breaks
    }

    /// `|ũ_a(k)|² + |ũ_b(k)|²`, an upper bound on `n(k,t)` for every `t`.
    pub fn momentum_envelope(&self, k: f64) -> f64 {
        self.state_a.wave.fourier(k).norm_sqr() + self.state_b.wave.fourier(k).norm_sqr()
    }

    /// Smallest `K` (to a factor of 2^{1/4}) with `∫_{|k|>K} n(k,t) dk < tail_mass` for all `t`.
    pub fn momentum_cut(&self, tail_mass: f64) -> Result<f64> {
        // integrate in κ = k·w so the integrand is O(1); the envelope is even
        // and integrates to 2 over the whole line
        let w = self.support.1 - self.support.0;
        let q = Quadrature::new().abs_tol(tail_mass * 1e-3).max_evals(20_000_000);
        let step = 2f64.powf(0.25);
        let (mut lo, mut hi) = (0.0, 2.0 * PI);
        let mut inside = 0.0;
        for _ in 0..200 {
            // panels no wider than a quarter of the fastest oscillation
            let panels = ((hi - lo) / (PI / 2.0)).ceil() as usize;
            let part = match q.initial_panels(panels.clamp(1, 1_000_000)).integrate(|c| self.momentum_envelope(c / w) / w, lo, hi) {
                Ok(r) => r.value,
                Err(NumericsError::ToleranceNotMet(r)) => r.value,
                Err(e) => return Err(e.into()),
            };
            inside += 2.0 * part;
            if 2.0 - inside < 2.0 * tail_mass {
                return Ok(hi / w);
            }
            lo = hi;
            hi *= step;
        }
        Err(StateError::InvalidGrid(format!("momentum tail mass did not fall below {tail_mass:e}")))
    }

    /// Default display grid in metres: `[-(L0 + 10/γ), L0 + 10/γ]` or `[0, L]`.
    pub fn default_position_grid(&self, n: usize) -> Result<Vec<f64>> {
        let (lo, hi) = match self.potential {
            PotentialShape::Dswp(p) => {
                let gamma = |e: f64| (-2.0 * self.constants.particle_mass * e * JOULE_PER_EV).sqrt() / self.constants.hbar;
                let g = gamma(self.state_a.energy).min(gamma(self.state_b.energy));
                let cut = p.l0_si() + 10.0 / g;
                (-cut, cut)
            }
            PotentialShape::Iswp(p) => (0.0, p.width_si()),
        };
        uniform_grid(lo, hi, n)
    }

    /// Default momentum grid in m⁻¹, symmetric, leaving at most
    /// [`DISPLAY_TAIL_MASS`] outside.
    pub fn default_momentum_grid(&self, n: usize) -> Result<Vec<f64>> {
        let k = self.momentum_cut(DISPLAY_TAIL_MASS)?;
        uniform_grid(-k, k, n)
    }

    /// Potential energy in eV at `x` in metres.
    pub fn potential_ev(&self, x: f64) -> f64 {
        match self.potential {
            PotentialShape::Dswp(p) => crate::potentials::dswp_value(&p, x * 1e10),
            PotentialShape::Iswp(_) => 0.0,
        }
    }

    /// `ħ²/2m ⟨k²⟩ + ⟨V⟩` in eV, from position-space quadrature.
    pub fn energy_expectation(&self, t: f64) -> Result<f64> {
        let breaks = self.position_breaks();
        let scale = breaks[breaks.len() - 1] - breaks[0];
        let y: Vec<f64> = breaks.iter().map(|b| (b - breaks[0]) / scale).collect();
        let to_x = |u: f64| breaks[0] + u * scale;
        let kinetic = Quadrature::new()
            .abs_tol(0.0)
            .rel_tol(1e-10)
            .integrate_breaks(|u| self.dpsi(to_x(u), t).norm_sqr() * scale, &y)?
            .value;
        let potential = Quadrature::new()
            .abs_tol(1e-12)
            .integrate_breaks(|u| self.psi(to_x(u), t).norm_sqr() * self.potential_ev(to_x(u)) * scale, &y)?
            .value;
        let hbar = self.constants.hbar;
        Ok(hbar * hbar / (2.0 * self.constants.particle_mass) * kinetic / JOULE_PER_EV + potential)
    }
}

/// Bohr frequency `ΔE/(2πħ)` in GHz.
pub fn bohr_frequency(s: &SuperpositionState) -> f64 {
    bohr_frequency_from_splitting(s.delta_e, &s.constants)
}

/// `ΔE/(2πħ)` in GHz for a splitting in eV.
pub fn bohr_frequency_from_splitting(delta_e_ev: f64, c: &PhysicalConstants) -> f64 {
    delta_e_ev * JOULE_PER_EV / (2.0 * PI * c.hbar) / 1e9
}

/// Tabulated density with its grid. Position samples are in m⁻¹ over a
/// grid in metres; momentum samples are in metres over a grid in m⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensitySample {
    pub space: Space,
    /// Seconds.
    pub time: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub display_scale: f64,
}

impl DensitySample {
    /// Trapezoid rule over the grid.
    pub fn trapezoid(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum()
    }

    pub fn scaled(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(move |v| v * self.display_scale)
    }
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(lo < hi) {
        return Err(StateError::InvalidGrid(format!("need n >= 2 and lo < hi, got n = {n}, [{lo}, {hi}]")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect())
}

fn check_edges(space: Space, values: &[f64]) -> Result<()> {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(*v));
    let edge = values[0].max(values[values.len() - 1]);
    if !(peak > 0.0) || edge > EDGE_THRESHOLD * peak {
        return Err(StateError::GridTooNarrow { space, edge: edge / peak, threshold: EDGE_THRESHOLD });
    }
    Ok(())
}

/// `ρ(x,t) = |ψ(x,t)|²` on `grid` (metres).
pub fn density_position(s: &SuperpositionState, t: f64, grid: &[f64]) -> Result<DensitySample> {
    if grid.len() < 2 {
        return Err(StateError::InvalidGrid("position grid needs at least two points".into()));
    }
    let values: Vec<f64> = grid.iter().map(|&x| s.psi(x, t).norm_sqr()).collect();
    check_edges(Space::Position, &values)?;
    Ok(DensitySample { space: Space::Position, time: t, grid: grid.to_vec(), values, display_scale: POSITION_DISPLAY_SCALE })
}

/// `n(k,t) = |φ(k,t)|²` on `grid` (m⁻¹).
pub fn density_momentum(s: &SuperpositionState, t: f64, grid: &[f64]) -> Result<DensitySample> {
    if grid.len() < 2 {
        return Err(StateError::InvalidGrid("momentum grid needs at least two points".into()));
    }
    let values: Vec<f64> = grid.iter().map(|&k| s.phi(k, t).norm_sqr()).collect();
    check_edges(Space::Momentum, &values)?;
    Ok(DensitySample { space: Space::Momentum, time: t, grid: grid.to_vec(), values, display_scale: MOMENTUM_DISPLAY_SCALE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dswp(pair: Pair, side: Side) -> SuperpositionState {
        make_superposition(System::Dswp, pair, side, &DswpParams::default(), &IswpParams::default(), &PhysicalConstants::default())
            .unwrap()
    }

    fn iswp(side: Side) -> SuperpositionState {
        make_superposition(System::Iswp, Pair::Ground, side, &DswpParams::default(), &IswpParams::default(), &PhysicalConstants::default())
            .unwrap()
    }

    fn left_mass(d: &DensitySample, centre: f64) -> f64 {
        let left = DensitySample {
            values: d.grid.iter().zip(&d.values).map(|(x, v)| if *x < centre { *v } else { 0.0 }).collect(),
            ..d.clone()
        };
        left.trapezoid()
    }

    #[test]
    fn splittings_and_frequency() {
        let g = dswp(Pair::Ground, Side::Left);
        assert!((g.delta_e - 9.82e-5).abs() < 0.01 * 9.82e-5);
        assert!((g.period() - 2.0 * PI * g.constants.hbar / (g.delta_e * JOULE_PER_EV)).abs() < 1e-24);
        assert!((bohr_frequency(&g) - 23.76).abs() < 0.005 * 23.76, "{}", bohr_frequency(&g));
        let e = dswp(Pair::Excited, Side::Left);
        assert!((e.delta_e - 58.23e-5).abs() < 0.02 * 58.23e-5);
        let c = PhysicalConstants::default();
        assert!((bohr_frequency_from_splitting(2.0 * PI * c.hbar * 1e9 / JOULE_PER_EV, &c) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn left_state_starts_left_and_tunnels() {
        for s in [dswp(Pair::Ground, Side::Left), dswp(Pair::Excited, Side::Left), iswp(Side::Left)] {
            let grid = s.default_position_grid(4001).unwrap();
            let start = density_position(&s, 0.0, &grid).unwrap();
            let half = density_position(&s, s.period() / 2.0, &grid).unwrap();
            assert!(left_mass(&start, s.centre) > 0.9, "{:?}", s.system);
            assert!(left_mass(&half, s.centre) < 0.1);
            assert!((start.trapezoid() - 1.0).abs() < 1e-6);
        }
        let r = dswp(Pair::Ground, Side::Right);
        let grid = r.default_position_grid(2001).unwrap();
        assert!(left_mass(&density_position(&r, 0.0, &grid).unwrap(), 0.0) < 0.1);
    }

    #[test]
    fn unknown_pairs() {
        let err = make_superposition(
            System::Iswp,
            Pair::Excited,
            Side::Left,
            &DswpParams::default(),
            &IswpParams::default(),
            &PhysicalConstants::default(),
        );
        assert!(matches!(err, Err(StateError::UnknownPair { .. })));
        assert!("bogus".parse::<System>().is_err());
        assert_eq!("ISWP".parse::<System>().unwrap(), System::Iswp);
    }

    #[test]
    fn psi_phase_algebra() {
        let s = dswp(Pair::Ground, Side::Left);
        let x = -0.4e-10;
        let (ua, ub) = (s.state_a.wave.value(x).re, s.state_b.wave.value(x).re);
        let p0 = s.psi(x, 0.0);
        assert_eq!(p0.im, 0.0);
        assert!((p0.re - (ua + s.sign * ub) / SQRT_2).abs() < 1e-12 * p0.re.abs());
        let quarter = s.psi(x, s.period() / 4.0).norm_sqr();
        assert!((quarter - (ua * ua + ub * ub) / 2.0).abs() < 1e-10 * quarter);
        let half = s.psi(x, s.period() / 2.0);
        assert!((half.re - (ua - s.sign * ub) / SQRT_2).abs() < 1e-8 * half.norm());
    }

    #[test]
    fn mirror_and_periodicity() {
        let s = dswp(Pair::Ground, Side::Left);
        let t = 0.17 * s.period();
        for x in [-0.9e-10, -0.3e-10, 0.05e-10, 0.5e-10] {
            let a = s.psi(x, 0.0).norm_sqr();
            let b = s.psi(-x, s.period() / 2.0).norm_sqr();
            assert!((a - b).abs() < 1e-10 * a.max(1.0));
            let p = s.psi(x, t).norm_sqr();
            let q = s.psi(x, t + s.period()).norm_sqr();
            assert!((p - q).abs() < 1e-10 * p);
            let (ua, ub) = (s.state_a.wave.value(x).re, s.state_b.wave.value(x).re);
            let expand = 0.5 * (ua * ua + ub * ub + 2.0 * s.sign * ua * ub * (s.omega() * t).cos());
            assert!((p - expand).abs() < 1e-10 * p);
        }
    }

    #[test]
    fn momentum_symmetries() {
        let s = dswp(Pair::Ground, Side::Left);
        let period = s.period();
        for k in [1e9, 4.3e10, 1.7e11] {
            let even = s.state_a.wave.fourier(k);
            let odd = s.state_b.wave.fourier(k);
            assert!(even.im.abs() < 1e-12 * even.norm());
            assert!(odd.re.abs() < 1e-12 * odd.norm());
            assert!((s.state_a.wave.fourier(-k) - even).norm() < 1e-12 * even.norm());
            let t = 0.3 * period;
            let (a, b) = (s.phi(k, period - t).norm_sqr(), s.phi(-k, t).norm_sqr());
            assert!((a - b).abs() < 1e-8 * a);
            for tt in [0.0, period / 2.0] {
                let (p, m) = (s.phi(k, tt).norm_sqr(), s.phi(-k, tt).norm_sqr());
                assert!((p - m).abs() < 1e-10 * p);
            }
        }
    }

    #[test]
    fn densities_normalize() {
        for s in [dswp(Pair::Ground, Side::Left), iswp(Side::Left)] {
            let xg = s.default_position_grid(4001).unwrap();
            let kg = s.default_momentum_grid(4001).unwrap();
            for f in [0.0, 0.25, 0.6] {
                let t = f * s.period();
                let rho = density_position(&s, t, &xg).unwrap();
                let n = density_momentum(&s, t, &kg).unwrap();
                assert!((rho.trapezoid() - 1.0).abs() < 1e-6, "{}", rho.trapezoid());
                assert!((n.trapezoid() - 1.0).abs() < 1e-6, "{:?} {}", s.system, n.trapezoid());
                assert!(n.values.iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn narrow_grid_rejected() {
        let s = dswp(Pair::Ground, Side::Left);
        let grid = uniform_grid(-0.3e-10, 0.3e-10, 101).unwrap();
        assert!(matches!(density_position(&s, 0.0, &grid), Err(StateError::GridTooNarrow { .. })));
        assert!(uniform_grid(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn iswp_transform_matches_quadrature() {
        let s = iswp(Side::Left);
        let l = s.support.1;
        let q = Quadrature::new().abs_tol(1e-14);
        for (k, t) in [(0.0, 0.0), (3.1e10, 0.2), (-7.7e10, 0.55), (2.2e11, 0.9)] {
            let t = t * s.period();
            let kernel = |y: f64| s.psi(y * l, t) * Complex64::new(0.0, -k * y * l).exp() * l;
            let re = q.integrate(|y| kernel(y).re, 0.0, 1.0).unwrap().value;
            let im = q.integrate(|y| kernel(y).im, 0.0, 1.0).unwrap().value;
            let oracle = Complex64::new(re, im) / (2.0 * PI).sqrt();
            let closed = s.phi(k, t);
            assert!((closed - oracle).norm() < 1e-8 * closed.norm(), "k = {k}");
        }
    }

    #[test]
    fn energy_is_the_pair_mean() {
        for s in [dswp(Pair::Ground, Side::Left), iswp(Side::Left)] {
            let mean = 0.5 * (s.state_a.energy + s.state_b.energy);
            for f in [0.0, 0.3] {
                let e = s.energy_expectation(f * s.period()).unwrap();
                assert!((e - mean).abs() < 1e-4 * mean.abs(), "{e} vs {mean}");
            }
        }
    }
}
