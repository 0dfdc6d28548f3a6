//! Run configuration: a flat TOML file whose keys carry their units.
//!
//! ```toml
//! system = "dswp"            # dswp | iswp
//! pair = "ground"            # ground | excited
//! initial_side = "left"      # left | right
//! v0_eV = 0.5
//! v1_eV = 0.25
//! l0_angstrom = 0.672
//! l1_angstrom = 0.128
//! iswp_width_angstrom = 1.344   # defaults to 2 * l0_angstrom
//! mass_multiple_of_mh = 3.0
//! n_times = 65
//! n_grid = 4001
//! output_dir = "out"
//! display_scaled = false
//! renyi_orders = [0.5, 2.0, 3.0]
//! ```
//!
//! Every key is optional; an empty file gives the ammonia double well.

use std::fs;
use std::path::{Path, PathBuf};

use dwell_core::potentials::{DswpParams, IswpParams, PhysicalConstants};
use dwell_core::quantum_state::{Pair, Side, System};
use serde::Serialize;
use thiserror::Error;
use toml::{Table, Value};

pub const MIN_TIMES: usize = 8;
pub const MIN_GRID: usize = 256;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid `{key}`: {constraint}")]
    Validation { key: String, constraint: String },
}

fn invalid(key: &str, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Validation { key: key.to_string(), constraint: constraint.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub system: System,
    pub pair: Pair,
    pub initial_side: Side,
    #[serde(rename = "v0_eV")]
    pub v0_ev: f64,
    #[serde(rename = "v1_eV")]
    pub v1_ev: f64,
    pub l0_angstrom: f64,
    pub l1_angstrom: f64,
    pub iswp_width_angstrom: f64,
    pub mass_multiple_of_mh: f64,
    pub n_times: usize,
    pub n_grid: usize,
    pub output_dir: PathBuf,
    pub display_scaled: bool,
    pub renyi_orders: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = DswpParams::default();
        RunConfig {
            system: System::Dswp,
            pair: Pair::Ground,
            initial_side: Side::Left,
            v0_ev: d.v0,
            v1_ev: d.v1,
            l0_angstrom: d.l0,
            l1_angstrom: d.l1,
            iswp_width_angstrom: IswpParams::matching(&d).width,
            mass_multiple_of_mh: 3.0,
            n_times: 65,
            n_grid: 4001,
            output_dir: PathBuf::from("out"),
            display_scaled: false,
            renyi_orders: vec![0.5, 2.0, 3.0],
        }
    }
}

const KEYS: [&str; 14] = [
    "system",
    "pair",
    "initial_side",
    "v0_eV",
    "v1_eV",
    "l0_angstrom",
    "l1_angstrom",
    "iswp_width_angstrom",
    "mass_multiple_of_mh",
    "n_times",
    "n_grid",
    "output_dir",
    "display_scaled",
    "renyi_orders",
];

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ConfigError::Parse { line, column, message: e.message().to_string() }
    })?;
    if let Some(key) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(invalid(key, "unknown key"));
    }

    let mut cfg = RunConfig::default();
    if let Some(v) = table.get("system") {
        cfg.system = parse_enum("system", v)?;
    }
    if let Some(v) = table.get("pair") {
        cfg.pair = parse_enum("pair", v)?;
    }
    if let Some(v) = table.get("initial_side") {
        cfg.initial_side = parse_enum("initial_side", v)?;
    }
    let width_given = table.contains_key("iswp_width_angstrom");
    for (key, slot) in [
        ("v0_eV", &mut cfg.v0_ev),
        ("v1_eV", &mut cfg.v1_ev),
        ("l0_angstrom", &mut cfg.l0_angstrom),
        ("l1_angstrom", &mut cfg.l1_angstrom),
        ("iswp_width_angstrom", &mut cfg.iswp_width_angstrom),
        ("mass_multiple_of_mh", &mut cfg.mass_multiple_of_mh),
    ] {
        if let Some(v) = table.get(key) {
            *slot = number(key, v)?;
        }
    }
    if !width_given {
        cfg.iswp_width_angstrom = 2.0 * cfg.l0_angstrom;
    }
    for (key, slot) in [("n_times", &mut cfg.n_times), ("n_grid", &mut cfg.n_grid)] {
        if let Some(v) = table.get(key) {
            let n = v.as_integer().ok_or_else(|| invalid(key, "must be an integer"))?;
            *slot = usize::try_from(n).map_err(|_| invalid(key, "must be non-negative"))?;
        }
    }
    if let Some(v) = table.get("output_dir") {
        cfg.output_dir = PathBuf::from(v.as_str().ok_or_else(|| invalid("output_dir", "must be a string"))?);
    }
    if let Some(v) = table.get("display_scaled") {
        cfg.display_scaled = v.as_bool().ok_or_else(|| invalid("display_scaled", "must be true or false"))?;
    }
    if let Some(v) = table.get("renyi_orders") {
        let items = v.as_array().ok_or_else(|| invalid("renyi_orders", "must be an array of numbers"))?;
        cfg.renyi_orders = items.iter().map(|x| number("renyi_orders", x)).collect::<Result<_, _>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn number(key: &str, v: &Value) -> Result<f64, ConfigError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(invalid(key, "must be a number")),
    }
}

fn parse_enum<T: std::str::FromStr>(key: &str, v: &Value) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    let s = v.as_str().ok_or_else(|| invalid(key, "must be a string"))?;
    s.parse().map_err(|e: T::Err| invalid(key, e.to_string()))
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |key: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("must be positive and finite, got {x}")))
            }
        };
        positive("v0_eV", self.v0_ev)?;
        positive("v1_eV", self.v1_ev)?;
        positive("l0_angstrom", self.l0_angstrom)?;
        positive("l1_angstrom", self.l1_angstrom)?;
        positive("iswp_width_angstrom", self.iswp_width_angstrom)?;
        positive("mass_multiple_of_mh", self.mass_multiple_of_mh)?;
        if self.v1_ev >= self.v0_ev {
            return Err(invalid("v1_eV", format!("v0_eV > v1_eV required, got v0_eV = {}, v1_eV = {}", self.v0_ev, self.v1_ev)));
        }
        if self.l1_angstrom >= self.l0_angstrom {
            return Err(invalid(
                "l1_angstrom",
                format!("l0_angstrom > l1_angstrom required, got {} and {}", self.l0_angstrom, self.l1_angstrom),
            ));
        }
        if self.n_times < MIN_TIMES {
            return Err(invalid("n_times", format!("must be at least {MIN_TIMES}, got {}", self.n_times)));
        }
        if self.n_grid < MIN_GRID {
            return Err(invalid("n_grid", format!("must be at least {MIN_GRID}, got {}", self.n_grid)));
        }
        if let Some(a) = self.renyi_orders.iter().find(|a| !(**a > 0.0 && a.is_finite() && **a != 1.0)) {
            return Err(invalid("renyi_orders", format!("orders must be positive, finite and != 1, got {a}")));
        }
        if self.system == System::Iswp && self.pair == Pair::Excited {
            return Err(invalid("pair", "the infinite well only defines the ground pair"));
        }
        Ok(())
    }

    pub fn dswp(&self) -> DswpParams {
        DswpParams { v0: self.v0_ev, v1: self.v1_ev, l0: self.l0_angstrom, l1: self.l1_angstrom }
    }

    pub fn iswp(&self) -> IswpParams {
        IswpParams { width: self.iswp_width_angstrom }
    }

    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants::with_mass_multiple(self.mass_multiple_of_mh).expect("validated mass multiple")
    }

    /// Creates the output directory and checks that it accepts files.
    pub fn prepare_output(&self) -> Result<(), ConfigError> {
        let fail = |e: std::io::Error| invalid("output_dir", format!("{} is not writable: {e}", self.output_dir.display()));
        fs::create_dir_all(&self.output_dir).map_err(fail)?;
        let probe = self.output_dir.join(".write-check");
        fs::write(&probe, b"").map_err(fail)?;
        fs::remove_file(&probe).map_err(fail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.dswp(), DswpParams::default());
        assert!((cfg.iswp_width_angstrom - 1.344).abs() < 1e-15);
    }

    #[test]
    fn overrides_and_integer_numbers() {
        let cfg = parse_config("system = \"iswp\"\nv0_eV = 1\nl0_angstrom = 0.7\nn_times = 9\nrenyi_orders = [2]\n").unwrap();
        assert_eq!(cfg.system, System::Iswp);
        assert_eq!(cfg.v0_ev, 1.0);
        assert_eq!(cfg.n_times, 9);
        assert_eq!(cfg.renyi_orders, vec![2.0]);
        assert!((cfg.iswp_width_angstrom - 1.4).abs() < 1e-15);
    }

    #[test]
    fn validation_names_the_key() {
        let key_of = |text: &str| match parse_config(text) {
            Err(ConfigError::Validation { key, .. }) => key,
            other => panic!("expected a validation error, got {other:?}"),
        };
        assert_eq!(key_of("v1_eV = 0.6\nv0_eV = 0.5"), "v1_eV");
        assert_eq!(key_of("n_times = 4"), "n_times");
        assert_eq!(key_of("n_grid = 100"), "n_grid");
        assert_eq!(key_of("pair = \"middle\""), "pair");
        assert_eq!(key_of("renyi_orders = [1.0]"), "renyi_orders");
        assert_eq!(key_of("v0 = 0.5"), "v0");
        assert_eq!(key_of("n_times = \"many\""), "n_times");
    }

    #[test]
    fn parse_error_has_position() {
        match parse_config("n_times = 65\nn_grid = = 3\n") {
            Err(ConfigError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 1);
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unwritable_output_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, b"x").unwrap();
        let cfg = RunConfig { output_dir: file.join("sub"), ..RunConfig::default() };
        assert!(matches!(cfg.prepare_output(), Err(ConfigError::Validation { key, .. }) if key == "output_dir"));
    }
}
