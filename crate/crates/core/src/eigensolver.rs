//! Sub-barrier bound states of the double square well, and the analytic
//! spectrum of the infinite square well.
//!
//! Within `(-V0, -V1)` an eigenfunction is `e^{γx}` outside the well,
//! `cos(φ ± k0 x)` in the two wells and `cosh`/`sinh(|k1| x)` under the
//! barrier. Smoothness at `x = L0` fixes the phase,
//! `k0 tan(φ + k0 L0) = γ`, which leaves one scalar condition at `x = L1`:
//!
//! ```text
//! -k0 tan(φ + k0 L1) = |k1| tanh(|k1| L1)   (even)
//! -k0 tan(φ + k0 L1) = |k1| coth(|k1| L1)   (odd)
//! ```
//!
//! Writing it as `k0 sin θ + T cos θ = 0` with `θ = φ + k0 L1` and dividing by
//! `sqrt(k0² + T²)` gives `sin(θ + atan2(T, k0))`, a bounded, pole-free
//! function of energy whose zeros are exactly the eigenvalues.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{find_root, Bracket, NumericsError, Quadrature};
use crate::potentials::{DswpParams, IswpParams, PhysicalConstants, PotentialError, JOULE_PER_EV};
use crate::wavefunction::{ExpTerm, PiecewiseExp, Segment};

/// Panels used to scan the energy window for sign changes.
pub const SCAN_PANELS: usize = 2000;
/// Absolute energy tolerance (eV) of the refined roots.
pub const ROOT_TOL_EV: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("energy {energy} eV lies outside the sub-barrier window ({lo}, {hi})")]
    OutOfWindow { energy: f64, lo: f64, hi: f64 },
    #[error("no bound states below the barrier")]
    NoStatesFound,
    #[error("invalid quantum number {0}; must be >= 1")]
    InvalidIndex(usize),
    #[error("wavefunction is not normalizable: {0}")]
    NotNormalizable(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

pub type Result<T> = std::result::Result<T, EigenError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn letter(self) -> char {
        match self {
            Parity::Even => 'S',
            Parity::Odd => 'A',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Wavenumbers (m⁻¹ / m⁻²) at one energy. `k1_sq_signed` is `2m(E+V1)/ħ²`,
/// negative under the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Wavenumbers {
    pub gamma: f64,
    pub k0: f64,
    pub k1_sq_signed: f64,
}

impl Wavenumbers {
    pub fn new(p: &DswpParams, c: &PhysicalConstants, energy_ev: f64) -> Result<Self> {
        let (lo, hi) = (-p.v0, -p.v1);
        if !(energy_ev > lo && energy_ev < hi) {
            return Err(EigenError::OutOfWindow { energy: energy_ev, lo, hi });
        }
        let s = c.two_m_over_hbar_sq() * JOULE_PER_EV;
        Ok(Wavenumbers {
            gamma: (-s * energy_ev).sqrt(),
            k0: (s * (energy_ev + p.v0)).sqrt(),
            k1_sq_signed: s * (energy_ev + p.v1),
        })
    }

    /// `|k1|`, the decay constant under the barrier.
    pub fn kappa(&self) -> f64 {
        (-self.k1_sq_signed).max(0.0).sqrt()
    }
}

/// Logarithmic derivative of the barrier solution at `x = L1`.
fn barrier_log_derivative(kappa: f64, l1: f64, parity: Parity) -> f64 {
    let z = kappa * l1;
    match parity {
        Parity::Even => kappa * z.tanh(),
        // κ coth(κ L1) → 1/L1 as κ → 0
        Parity::Odd if z < 1e-8 => 1.0 / l1,
        Parity::Odd => kappa / z.tanh(),
    }
}

/// Phase from the outer boundary condition, before reduction to `[0, π)`.
fn raw_phase(w: &Wavenumbers, l0: f64) -> f64 {
    (w.gamma / w.k0).atan() - w.k0 * l0
}

/// Zero exactly at the eigenenergies of the given parity; bounded in `[-1, 1]`.
pub fn matching_function(p: &DswpParams, c: &PhysicalConstants, parity: Parity, energy_ev: f64) -> Result<f64> {
    let w = Wavenumbers::new(p, c, energy_ev)?;
    let theta = raw_phase(&w, p.l0_si()) + w.k0 * p.l1_si();
    let t = barrier_log_derivative(w.kappa(), p.l1_si(), parity);
    Ok((theta + t.atan2(w.k0)).sin())
}

/// Continuity mismatch at the two region boundaries (relative).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchResidual {
    pub at_l1: f64,
    pub at_l0: f64,
}

impl MatchResidual {
    pub fn max(&self) -> f64 {
        self.at_l1.max(self.at_l0)
    }
}

/// One bound state of the double well. Coefficients are those of the
/// unnormalized solution with `a1 = 1`; `norm` is the factor that makes
/// `∫ u² dx = 1` (x in metres).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenState {
    pub energy: f64,
    pub parity: Parity,
    pub phase: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3_or_b3: f64,
    pub norm: f64,
    pub node_count: usize,
    pub wavenumbers: Wavenumbers,
    pub residual: MatchResidual,
}

impl EigenState {
    /// Short label, e.g. `0S` or `3A`.
    pub fn label(&self) -> String {
        format!("{}{}", self.node_count, self.parity.letter())
    }

    fn from_energy(p: &DswpParams, c: &PhysicalConstants, parity: Parity, energy_ev: f64) -> Result<Self> {
        let w = Wavenumbers::new(p, c, energy_ev)?;
        let (l0, l1) = (p.l0_si(), p.l1_si());
        let phase = raw_phase(&w, l0).rem_euclid(PI);
        let kappa = w.kappa();
        let a2 = (-w.gamma * l0).exp() / (phase + w.k0 * l0).cos();
        let edge = a2 * (phase + w.k0 * l1).cos();
        let a3_or_b3 = match parity {
            Parity::Even => edge / (kappa * l1).cosh(),
            Parity::Odd => -edge / (kappa * l1).sinh(),
        };
        let zeros_per_well = {
            let count = |x: f64| ((phase + w.k0 * x - PI / 2.0) / PI).floor();
            (count(l0) - count(l1)).max(0.0) as usize
        };
        let node_count = 2 * zeros_per_well + usize::from(parity == Parity::Odd);

        let mut state = EigenState {
            energy: energy_ev,
            parity,
            phase,
            a1: 1.0,
            a2,
            a3_or_b3,
            norm: 1.0,
            node_count,
            wavenumbers: w,
            residual: MatchResidual { at_l1: 0.0, at_l0: 0.0 },
        };
        let raw = build_wavefunction(&state, p);
        let cut = support_cut(&state, p);
        state.norm = normalization_factor(|x| raw.value(x).re, cut, &raw.breakpoints())?;
        state.residual = match_residual(&build_wavefunction(&state, p), p, w.k0);
        Ok(state)
    }
}

/// Half-width beyond which `u²` has decayed by 1e-17 relative to `u²(L0)`.
pub fn support_cut(state: &EigenState, p: &DswpParams) -> f64 {
    p.l0_si() + 17.0 * 10f64.ln() / (2.0 * state.wavenumbers.gamma)
}

fn match_residual(u: &PiecewiseExp, p: &DswpParams, k0: f64) -> MatchResidual {
    // segments: 0 left tail, 1 left well, 2 barrier, 3 right well, 4 right tail
    let at = |left: usize, right: usize, x: f64| {
        let (ul, dl) = u.one_sided(left, x);
        let (ur, dr) = u.one_sided(right, x);
        let scale = ul.norm().max(ur.norm());
        let value = (ul - ur).norm() / scale;
        let slope = (dl - dr).norm() / dl.norm().max(dr.norm()).max(k0 * scale);
        value.max(slope)
    };
    let (l0, l1) = (p.l0_si(), p.l1_si());
    MatchResidual {
        at_l1: at(1, 2, -l1).max(at(2, 3, l1)),
        at_l0: at(0, 1, -l0).max(at(3, 4, l0)),
    }
}

/// The state's wavefunction over five regions, x in metres, scaled by `norm`.
pub fn build_wavefunction(state: &EigenState, p: &DswpParams) -> PiecewiseExp {
    let (l0, l1) = (p.l0_si(), p.l1_si());
    let w = &state.wavenumbers;
    let kappa = w.kappa();
    let n = state.norm;
    let re = |v: f64| Complex64::new(v, 0.0);
    let i_k0 = Complex64::new(0.0, w.k0);
    let e_phi = Complex64::from_polar(1.0, state.phase);
    let sign = match state.parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let half_a2 = 0.5 * n * state.a2;
    let half_a3 = 0.5 * n * state.a3_or_b3;
    let barrier = match state.parity {
        Parity::Even => vec![ExpTerm::new(re(half_a3), re(kappa)), ExpTerm::new(re(half_a3), re(-kappa))],
        Parity::Odd => vec![ExpTerm::new(re(half_a3), re(kappa)), ExpTerm::new(re(-half_a3), re(-kappa))],
    };
    PiecewiseExp::new(vec![
        Segment { lo: f64::NEG_INFINITY, hi: -l0, terms: vec![ExpTerm::new(re(n * state.a1), re(w.gamma))] },
        // A2 cos(φ - k0 x)
        Segment {
            lo: -l0,
            hi: -l1,
            terms: vec![ExpTerm::new(half_a2 * e_phi, -i_k0), ExpTerm::new(half_a2 * e_phi.conj(), i_k0)],
        },
        Segment { lo: -l1, hi: l1, terms: barrier },
        // ±A2 cos(φ + k0 x)
        Segment {
            lo: l1,
            hi: l0,
            terms: vec![
                ExpTerm::new(sign * half_a2 * e_phi, i_k0),
                ExpTerm::new(sign * half_a2 * e_phi.conj(), -i_k0),
            ],
        },
        Segment { lo: l0, hi: f64::INFINITY, terms: vec![ExpTerm::new(re(sign * n * state.a1), re(-w.gamma))] },
    ])
}

/// Factor `c` with `∫ (c u)² dx = 1` over `[-support_cut, support_cut]`.
pub fn normalization_factor<F: Fn(f64) -> f64>(u: F, support_cut: f64, interior_breaks: &[f64]) -> Result<f64> {
    if !(support_cut > 0.0) {
        return Err(EigenError::NotNormalizable(format!("support cut must be positive, got {support_cut}")));
    }
    let mut breaks = vec![-support_cut];
    breaks.extend(interior_breaks.iter().copied().filter(|b| b.abs() < support_cut));
    breaks.push(support_cut);
    breaks.dedup();
    let r = Quadrature::new()
        .abs_tol(0.0)
        .rel_tol(1e-14)
        .integrate_breaks(|x| u(x).powi(2), &breaks);
    let mass = match r {
        Ok(r) => r.value,
        // roundoff-limited at 1e-14 is still far inside the 1e-10 contract
        Err(NumericsError::ToleranceNotMet(r)) if r.est_error < 1e-12 * r.value.abs() => r.value,
        Err(e) => return Err(e.into()),
    };
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(EigenError::NotNormalizable(format!("∫u² = {mass}")));
    }
    Ok(1.0 / mass.sqrt())
}

/// Rescales `u` to unit norm on `[-support_cut, support_cut]`.
pub fn normalize(u: &PiecewiseExp, support_cut: f64) -> Result<PiecewiseExp> {
    let factor = normalization_factor(|x| u.value(x).re, support_cut, &u.breakpoints())?;
    Ok(u.scaled(factor))
}

/// All sub-barrier bound states, sorted by energy.
pub fn solve_spectrum(p: &DswpParams, c: &PhysicalConstants) -> Result<Vec<EigenState>> {
    p.validate()?;
    let (lo, hi) = (-p.v0, -p.v1);
    let width = (hi - lo) / SCAN_PANELS as f64;
    // open window: nudge the end nodes inside
    let nodes: Vec<f64> = (0..=SCAN_PANELS)
        .map(|j| match j {
            0 => lo + 1e-9 * width,
            j if j == SCAN_PANELS => hi - 1e-9 * width,
            j => lo + width * j as f64,
        })
        .collect();

    let mut states = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let f = |e: f64| matching_function(p, c, parity, e).unwrap_or(f64::NAN);
        let values: Vec<f64> = nodes.iter().map(|&e| f(e)).collect();
        for j in 0..SCAN_PANELS {
            let (fa, fb) = (values[j], values[j + 1]);
            if fa == 0.0 || fa * fb < 0.0 {
                let bracket = Bracket { lo: nodes[j], hi: nodes[j + 1], f_lo: fa, f_hi: fb };
                let energy = find_root(f, bracket, ROOT_TOL_EV)?;
                states.push(EigenState::from_energy(p, c, parity, energy)?);
            }
        }
    }
    if states.is_empty() {
        return Err(EigenError::NoStatesFound);
    }
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(states)
}

/// Analytic eigenstate of the infinite well, `sqrt(2/L) sin(nπx/L)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IswpState {
    pub n: usize,
    /// Energy in eV.
    pub energy: f64,
    /// Well width in metres.
    pub width: f64,
}

impl IswpState {
    pub fn label(&self) -> String {
        format!("psi{}", self.n)
    }

    /// Parity about the well centre.
    pub fn parity(&self) -> Parity {
        if self.n % 2 == 1 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn wavefunction(&self) -> PiecewiseExp {
        let q = self.n as f64 * PI / self.width;
        let amp = (2.0 / self.width).sqrt();
        // sin(qx) = (e^{iqx} - e^{-iqx}) / 2i
        let c = Complex64::new(0.0, -0.5 * amp);
        PiecewiseExp::new(vec![Segment {
            lo: 0.0,
            hi: self.width,
            terms: vec![ExpTerm::new(c, Complex64::new(0.0, q)), ExpTerm::new(-c, Complex64::new(0.0, -q))],
        }])
    }
}

/// `ħ²π²n² / (2 m L²)` in joules for a width in metres.
pub fn iswp_energy_si(width: f64, n: usize, c: &PhysicalConstants) -> f64 {
    let n = n as f64;
    c.hbar * c.hbar * PI * PI * n * n / (2.0 * c.particle_mass * width * width)
}

pub fn iswp_state(p: &IswpParams, c: &PhysicalConstants, n: usize) -> Result<IswpState> {
    if n < 1 {
        return Err(EigenError::InvalidIndex(n));
    }
    let width = p.width_si();
    Ok(IswpState { n, energy: iswp_energy_si(width, n, c) / JOULE_PER_EV, width })
}
