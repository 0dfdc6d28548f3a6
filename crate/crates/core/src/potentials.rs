//! Model potentials and the unit conventions used throughout the crate.
//!
//! User-facing parameters are given in eV and Å; everything downstream of
//! this module works in SI units.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Joules per electron-volt (exact, SI 2019).
pub const JOULE_PER_EV: f64 = 1.602_176_634e-19;
/// Metres per ångström.
pub const METRE_PER_ANGSTROM: f64 = 1e-10;
/// Reduced Planck constant in J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Mass of the hydrogen atom in kg, from the standard atomic weight 1.00794 u.
pub const HYDROGEN_MASS: f64 = 1.673_723_6e-27;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("invalid potential parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    ElectronVolt,
    Angstrom,
    Gigahertz,
    SiBase,
}

impl Unit {
    pub fn si_factor(self) -> f64 {
        match self {
            Unit::ElectronVolt => JOULE_PER_EV,
            Unit::Angstrom => METRE_PER_ANGSTROM,
            Unit::Gigahertz => 1e9,
            Unit::SiBase => 1.0,
        }
    }
}

impl FromStr for Unit {
    type Err = PotentialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "eV" | "ev" => Ok(Unit::ElectronVolt),
            "Å" | "A" | "angstrom" | "Angstrom" => Ok(Unit::Angstrom),
            "GHz" | "ghz" => Ok(Unit::Gigahertz),
            "SI" | "si" | "" => Ok(Unit::SiBase),
            other => Err(PotentialError::UnknownUnit(other.to_string())),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::ElectronVolt => "eV",
            Unit::Angstrom => "Å",
            Unit::Gigahertz => "GHz",
            Unit::SiBase => "SI",
        })
    }
}

/// A value tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }

    /// Parses strings such as `"0.5 eV"` or `"0.672 Å"`.
    pub fn parse(s: &str) -> Result<Self, PotentialError> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_whitespace()).unwrap_or(s.len());
        let (num, unit) = s.split_at(split);
        let value = num
            .parse::<f64>()
            .map_err(|_| PotentialError::InvalidParams(format!("cannot parse number in `{s}`")))?;
        Ok(Quantity { value, unit: unit.parse()? })
    }
}

pub fn to_si(q: Quantity) -> f64 {
    q.value * q.unit.si_factor()
}

pub fn from_si(value: f64, unit: Unit) -> f64 {
    value / unit.si_factor()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub m_h: f64,
    pub particle_mass: f64,
}

impl PhysicalConstants {
    /// Constants for a particle of `multiple` hydrogen masses.
    pub fn with_mass_multiple(multiple: f64) -> Result<Self, PotentialError> {
        if !(multiple > 0.0) || !multiple.is_finite() {
            return Err(PotentialError::InvalidParams(format!("mass multiple must be positive, got {multiple}")));
        }
        Ok(PhysicalConstants { hbar: HBAR, m_h: HYDROGEN_MASS, particle_mass: multiple * HYDROGEN_MASS })
    }

    /// `2m/ħ²` in J⁻¹ m⁻².
    pub fn two_m_over_hbar_sq(&self) -> f64 {
        2.0 * self.particle_mass / (self.hbar * self.hbar)
    }
}

impl Default for PhysicalConstants {
    /// The hydrogen plane of NH₃: three hydrogen masses.
    fn default() -> Self {
        PhysicalConstants { hbar: HBAR, m_h: HYDROGEN_MASS, particle_mass: 3.0 * HYDROGEN_MASS }
    }
}

/// Double square well: depth `v0` on `l1 < |x| < l0`, barrier top `v1` on
/// `|x| < l1`. Energies in eV, lengths in Å.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DswpParams {
    pub v0: f64,
    pub v1: f64,
    pub l0: f64,
    pub l1: f64,
}

impl Default for DswpParams {
    /// Ammonia inversion model.
    fn default() -> Self {
        DswpParams { v0: 0.5, v1: 0.25, l0: 0.672, l1: 0.128 }
    }
}

impl DswpParams {
    pub fn new(v0: f64, v1: f64, l0: f64, l1: f64) -> Result<Self, PotentialError> {
        let p = DswpParams { v0, v1, l0, l1 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        if !(self.v0 > self.v1 && self.v1 > 0.0) {
            return Err(PotentialError::InvalidParams(format!(
                "need v0 > v1 > 0, got v0 = {}, v1 = {}",
                self.v0, self.v1
            )));
        }
        if !(self.l0 > self.l1 && self.l1 > 0.0) {
            return Err(PotentialError::InvalidParams(format!(
                "need l0 > l1 > 0, got l0 = {}, l1 = {}",
                self.l0, self.l1
            )));
        }
        Ok(())
    }

    pub fn v0_si(&self) -> f64 {
        self.v0 * JOULE_PER_EV
    }
    pub fn v1_si(&self) -> f64 {
        self.v1 * JOULE_PER_EV
    }
    pub fn l0_si(&self) -> f64 {
        self.l0 * METRE_PER_ANGSTROM
    }
    pub fn l1_si(&self) -> f64 {
        self.l1 * METRE_PER_ANGSTROM
    }
}

/// Infinite square well on `(0, width)`, width in Å.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IswpParams {
    pub width: f64,
}

impl IswpParams {
    pub fn new(width: f64) -> Result<Self, PotentialError> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(PotentialError::InvalidParams(format!("well width must be positive, got {width}")));
        }
        Ok(IswpParams { width })
    }

    /// Same overall width as the double well, `2 l0`.
    pub fn matching(dswp: &DswpParams) -> Self {
        IswpParams { width: 2.0 * dswp.l0 }
    }

    pub fn width_si(&self) -> f64 {
        self.width * METRE_PER_ANGSTROM
    }
}

impl Default for IswpParams {
    fn default() -> Self {
        Self::matching(&DswpParams::default())
    }
}

/// `-C sech²(x/2ρ) + D sech⁴(x/2ρ)`; energies in eV, `rho_scale` in Å.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManningParams {
    pub c_depth: f64,
    pub d_height: f64,
    pub rho_scale: f64,
}

impl ManningParams {
    pub fn new(c_depth: f64, d_height: f64, rho_scale: f64) -> Result<Self, PotentialError> {
        if !(c_depth > 0.0 && d_height > 0.0 && rho_scale > 0.0) {
            return Err(PotentialError::InvalidParams("Manning parameters must be positive".into()));
        }
        Ok(ManningParams { c_depth, d_height, rho_scale })
    }
}

/// Tagged description of one of the supported potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialSpec {
    Dswp(DswpParams),
    Iswp(IswpParams),
    Manning(ManningParams),
}

impl PotentialSpec {
    /// Potential in eV at `x` in Å; `f64::INFINITY` outside an infinite well.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Dswp(p) => dswp_value(p, x),
            PotentialSpec::Iswp(p) => iswp_value(p, x),
            PotentialSpec::Manning(p) => manning_value(p, x),
        }
    }
}

/// Boundary points belong to the inner region: `|x| = l1` gives `-v1` and
/// `|x| = l0` gives `-v0`.
pub fn dswp_value(p: &DswpParams, x: f64) -> f64 {
    let ax = x.abs();
    if ax <= p.l1 {
        -p.v1
    } else if ax <= p.l0 {
        -p.v0
    } else {
        0.0
    }
}

pub fn iswp_value(p: &IswpParams, x: f64) -> f64 {
    if x > 0.0 && x < p.width {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn manning_value(p: &ManningParams, x: f64) -> f64 {
    let s = 1.0 / (x / (2.0 * p.rho_scale)).cosh();
    let s2 = s * s;
    -p.c_depth * s2 + p.d_height * s2 * s2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dswp_regions() {
        let p = DswpParams::default();
        assert_eq!(dswp_value(&p, 0.0), -0.25);
        assert_eq!(dswp_value(&p, 0.4), -0.5);
        assert_eq!(dswp_value(&p, 1.0), 0.0);
        assert_eq!(dswp_value(&p, 0.128), -0.25);
        assert_eq!(dswp_value(&p, -0.672), -0.5);
    }

    #[test]
    fn iswp_boundaries_are_excluded() {
        let p = IswpParams::new(2.0).unwrap();
        assert_eq!(iswp_value(&p, 1.0), 0.0);
        assert!(iswp_value(&p, -0.1).is_infinite());
        assert!(iswp_value(&p, 2.0).is_infinite());
        assert!(iswp_value(&p, 0.0).is_infinite());
    }

    #[test]
    fn manning_values() {
        let p = ManningParams::new(2.0, 1.0, 0.3).unwrap();
        assert!((manning_value(&p, 0.0) - (1.0 - 2.0)).abs() < 1e-15);
        assert!(manning_value(&p, 40.0).abs() < (-40.0f64 / 0.3).exp() * 10.0);
        let x = 2.0 * 0.3 * 2f64.sqrt().acosh();
        assert!((manning_value(&p, x) + 0.75).abs() < 1e-14);
    }

    #[test]
    fn unit_conversions() {
        assert!((to_si(Quantity::new(0.5, Unit::ElectronVolt)) - 8.01088317e-20).abs() < 1e-28);
        assert!((to_si(Quantity::new(0.672, Unit::Angstrom)) - 6.72e-11).abs() < 1e-25);
        assert_eq!(to_si(Quantity::new(1.0, Unit::Gigahertz)), 1e9);
        assert_eq!(Quantity::parse("0.5 eV").unwrap(), Quantity::new(0.5, Unit::ElectronVolt));
        assert!(matches!(Quantity::parse("3 furlong"), Err(PotentialError::UnknownUnit(u)) if u == "furlong"));
    }

    #[test]
    fn parameter_validation() {
        assert!(DswpParams::new(0.5, 0.6, 0.672, 0.128).is_err());
        assert!(DswpParams::new(0.5, 0.25, 0.1, 0.128).is_err());
        assert!(IswpParams::new(0.0).is_err());
        assert!(PhysicalConstants::with_mass_multiple(-1.0).is_err());
        let c = PhysicalConstants::default();
        assert_eq!(c.particle_mass / c.m_h, 3.0);
        assert!((IswpParams::default().width - 1.344).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn potentials_are_even(x in -5.0f64..5.0) {
            let d = DswpParams::default();
            prop_assert_eq!(dswp_value(&d, x), dswp_value(&d, -x));
            let m = ManningParams::new(1.3, 0.4, 0.2).unwrap();
            prop_assert_eq!(manning_value(&m, x), manning_value(&m, -x));
        }

        #[test]
        fn si_round_trip(v in -1e3f64..1e3, which in 0usize..4) {
            let unit = [Unit::ElectronVolt, Unit::Angstrom, Unit::Gigahertz, Unit::SiBase][which];
            let back = from_si(to_si(Quantity::new(v, unit)), unit);
            prop_assert!((back - v).abs() <= 2.0 * f64::EPSILON * v.abs());
        }
    }
}
