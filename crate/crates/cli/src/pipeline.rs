//! Scenario orchestration: eigenstates, density snapshots, measure series,
//! fits, and the manifest that ties the emitted files together.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use dwell_core::eigensolver::{self, iswp_state, solve_spectrum};
use dwell_core::infomeasures::{
    check_bounds, fit_measures, measure_series, BoundViolation, FitReport, MeasureRecord, SeriesOptions,
    MEASURE_TAIL_MASS, REFERENCE_I_T_COEFFICIENTS, REFERENCE_S_T_COEFFICIENTS,
};
use dwell_core::quantum_state::{density_momentum, density_position, make_superposition, SuperpositionState, System};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};

/// Snapshot times (fractions of T) for the position-density series.
pub const POSITION_TIMES: [f64; 9] = [0.0, 1.0 / 6.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75, 5.0 / 6.0, 1.0];
/// Snapshot times for the momentum-density series.
pub const MOMENTUM_TIMES: [f64; 9] = [0.0, 1.0 / 9.0, 0.25, 7.0 / 18.0, 0.5, 11.0 / 18.0, 0.75, 8.0 / 9.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Eigen,
    Superposition,
    Densities,
    Measures,
    Fit,
    Compare,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Eigen => "eigen",
            Stage::Superposition => "superposition",
            Stage::Densities => "densities",
            Stage::Measures => "measures",
            Stage::Fit => "fit",
            Stage::Compare => "compare",
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{stage} stage failed: {message}")]
    Numerical { stage: Stage, message: String },
    #[error("{} bound violation(s), first at t/T = {:.6}: {} = {} (limit {})",
        .violations.len(), .violations[0].t_over_t, .violations[0].bound, .violations[0].value, .violations[0].limit)]
    BoundViolation { violations: Vec<BoundViolation> },
    #[error("incompatible sampling: {a} vs {b} time samples")]
    IncompatibleSampling { a: usize, b: usize },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::IncompatibleSampling { .. } => 2,
            CliError::Numerical { .. } => 3,
            CliError::BoundViolation { .. } => 4,
        }
    }
}

fn numerical<E: fmt::Display>(stage: Stage) -> impl Fn(E) -> CliError {
    move |e| CliError::Numerical { stage, message: e.to_string() }
}

/// Fixed-width scientific notation, 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV file assembled in memory; written once so its checksum is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: &'static str,
    pub body: String,
}

impl Artifact {
    pub fn new(name: &'static str, header: &[&str]) -> Self {
        Artifact { name, body: header.join(",") + "\n" }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let line: Vec<String> = cells.into_iter().collect();
        self.body.push_str(&line.join(","));
        self.body.push('\n');
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRow {
    pub index: usize,
    pub parity: &'static str,
    pub energy_ev: f64,
    pub phase_rad: f64,
    pub a2: f64,
    pub a3_or_b3: f64,
    pub node_count: usize,
    pub match_residual: f64,
}

/// Bound states of the configured potential. Infinite-well states
/// `sin(nπx/L)` are written as `cos(nπx/L - π/2)`, so their phase is `-π/2`,
/// the single amplitude is 1 and there is no barrier coefficient.
pub fn eigen_rows(cfg: &RunConfig) -> Result<Vec<EigenRow>, CliError> {
    let c = cfg.constants();
    match cfg.system {
        System::Dswp => {
            let states = solve_spectrum(&cfg.dswp(), &c).map_err(numerical(Stage::Eigen))?;
            Ok(states
                .iter()
                .enumerate()
                .map(|(index, s)| EigenRow {
                    index,
                    parity: s.parity.name(),
                    energy_ev: s.energy,
                    phase_rad: s.phase,
                    a2: s.a2,
                    a3_or_b3: s.a3_or_b3,
                    node_count: s.node_count,
                    match_residual: s.residual.max(),
                })
                .collect())
        }
        System::Iswp => (1..=4)
            .map(|n| {
                let s = iswp_state(&cfg.iswp(), &c, n).map_err(numerical(Stage::Eigen))?;
                Ok(EigenRow {
                    index: n - 1,
                    parity: s.parity().name(),
                    energy_ev: s.energy,
                    phase_rad: -PI / 2.0,
                    a2: 1.0,
                    a3_or_b3: 0.0,
                    node_count: n - 1,
                    match_residual: 0.0,
                })
            })
            .collect(),
    }
}

pub fn eigen_csv(rows: &[EigenRow]) -> Artifact {
    let mut a = Artifact::new(
        "eigen.csv",
        &["index", "parity", "energy_eV", "phase_rad", "a2", "a3_or_b3", "node_count", "match_residual"],
    );
    for r in rows {
        a.row([
            r.index.to_string(),
            r.parity.to_string(),
            num(r.energy_ev),
            num(r.phase_rad),
            num(r.a2),
            num(r.a3_or_b3),
            r.node_count.to_string(),
            num(r.match_residual),
        ]);
    }
    a
}

pub fn superposition(cfg: &RunConfig) -> Result<SuperpositionState, CliError> {
    make_superposition(cfg.system, cfg.pair, cfg.initial_side, &cfg.dswp(), &cfg.iswp(), &cfg.constants())
        .map_err(numerical(Stage::Superposition))
}

/// Position and momentum density snapshots on the default display grids,
/// `n_grid` points each.
pub fn density_csvs(cfg: &RunConfig, s: &SuperpositionState) -> Result<[Artifact; 2], CliError> {
    let err = numerical(Stage::Densities);
    let period = s.period();
    let mut header_x = vec!["t_over_T", "x_m", "rho_per_m"];
    let mut header_k = vec!["t_over_T", "k_per_m", "n_m"];
    if cfg.display_scaled {
        header_x.push("rho_times_1e-10");
        header_k.push("n_times_1e11");
    }
    let mut pos = Artifact::new("densities_position.csv", &header_x);
    let mut mom = Artifact::new("densities_momentum.csv", &header_k);

    let grid_x = s.default_position_grid(cfg.n_grid).map_err(&err)?;
    for frac in POSITION_TIMES {
        let d = density_position(s, frac * period, &grid_x).map_err(&err)?;
        push_density(&mut pos, frac, &d.grid, &d.values, cfg.display_scaled.then_some(d.display_scale));
    }
    let grid_k = s.default_momentum_grid(cfg.n_grid).map_err(&err)?;
    for frac in MOMENTUM_TIMES {
        let d = density_momentum(s, frac * period, &grid_k).map_err(&err)?;
        push_density(&mut mom, frac, &d.grid, &d.values, cfg.display_scaled.then_some(d.display_scale));
    }
    Ok([pos, mom])
}

fn push_density(a: &mut Artifact, frac: f64, grid: &[f64], values: &[f64], scale: Option<f64>) {
    for (x, v) in grid.iter().zip(values) {
        let mut cells = vec![num(frac), num(*x), num(*v)];
        if let Some(f) = scale {
            cells.push(num(v * f));
        }
        a.row(cells);
    }
}

pub fn series_options(cfg: &RunConfig) -> SeriesOptions {
    SeriesOptions {
        n_times: cfg.n_times,
        n_grid: cfg.n_grid,
        renyi_orders: cfg.renyi_orders.clone(),
        tail_mass: MEASURE_TAIL_MASS,
    }
}

pub fn measures(cfg: &RunConfig, s: &SuperpositionState) -> Result<Vec<MeasureRecord>, CliError> {
    measure_series(s, &series_options(cfg)).map_err(numerical(Stage::Measures))
}

/// One row per time sample. Position quantities are in metres, momentum
/// quantities in inverse metres, entropies in nats.
pub fn measures_csv(series: &[MeasureRecord], orders: &[f64]) -> Artifact {
    let mut header: Vec<String> = [
        "t_over_T", "time_s", "norm_x", "norm_k", "mean_x_m", "dx_m", "mean_k_per_m", "dk_per_m", "dx_dk",
        "S_x_nats", "S_k_nats", "S_T_nats", "I_x_per_m2", "I_k_m2", "I_T", "D_x_per_m", "D_k_m", "D_T", "C_T",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for a in orders {
        header.push(format!("R{a}_x_nats"));
        header.push(format!("R{a}_k_nats"));
    }
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Artifact::new("measures.csv", &refs);
    for r in series {
        let m = &r.moments;
        let mut cells: Vec<String> = [
            r.t_over_t, r.time, r.norm_x, r.norm_k, m.mean_x, m.dx, m.mean_k, m.dk, r.dx_dk, r.s_x, r.s_k, r.s_t, r.i_x,
            r.i_k, r.i_t, r.d_x, r.d_k, r.d_t, r.c_t,
        ]
        .iter()
        .map(|v| num(*v))
        .collect();
        for rv in &r.renyi {
            cells.push(num(rv.position));
            cells.push(num(rv.momentum));
        }
        out.row(cells);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub name: &'static str,
    pub alpha: [f64; 5],
    /// RMS residual of `S_T` or `I_T` itself over the fit window.
    pub rmse: f64,
    pub series_range: f64,
}

/// Fitted quartics and the reference coefficients, each scored against the
/// computed series over `0 ≤ ωt ≤ π/2`.
pub fn fit_rows(series: &[MeasureRecord]) -> Result<(FitReport, Vec<FitRow>), CliError> {
    let report = fit_measures(series).map_err(numerical(Stage::Fit))?;
    let window: Vec<&MeasureRecord> = series.iter().filter(|r| r.t_over_t <= 0.25 * (1.0 + 1e-9)).collect();
    let score = |alpha: &[f64; 5], value: fn(&MeasureRecord) -> f64, map: fn(f64) -> f64| {
        let sq: f64 = window
            .iter()
            .map(|r| {
                let wt = 2.0 * PI * r.t_over_t;
                let p = alpha.iter().rev().fold(0.0, |acc, c| acc * wt + c);
                (map(p) - value(r)).powi(2)
            })
            .sum();
        (sq / window.len() as f64).sqrt()
    };
    let rows = vec![
        FitRow {
            name: "exp_S_T",
            alpha: report.s_t.coefficients,
            rmse: report.s_t_rmse,
            series_range: report.s_t_range,
        },
        FitRow {
            name: "exp_S_T_reference",
            alpha: REFERENCE_S_T_COEFFICIENTS,
            rmse: score(&REFERENCE_S_T_COEFFICIENTS, |r| r.s_t, f64::ln),
            series_range: report.s_t_range,
        },
        FitRow {
            name: "ln_I_T",
            alpha: report.i_t.coefficients,
            rmse: report.i_t_rmse,
            series_range: report.i_t_range,
        },
        FitRow {
            name: "ln_I_T_reference",
            alpha: REFERENCE_I_T_COEFFICIENTS,
            rmse: score(&REFERENCE_I_T_COEFFICIENTS, |r| r.i_t, f64::exp),
            series_range: report.i_t_range,
        },
    ];
    Ok((report, rows))
}

/// Coefficients multiply powers of `ωt` in radians.
pub fn fit_csv(rows: &[FitRow]) -> Artifact {
    let mut a =
        Artifact::new("fit.csv", &["name", "alpha0", "alpha1", "alpha2", "alpha3", "alpha4", "rmse", "series_range"]);
    for r in rows {
        let mut cells = vec![r.name.to_string()];
        cells.extend(r.alpha.iter().map(|v| num(*v)));
        cells.push(num(r.rmse));
        cells.push(num(r.series_range));
        a.row(cells);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ToleranceReport {
    pub max_match_residual: Option<f64>,
    pub max_norm_error_x: Option<f64>,
    pub max_norm_error_k: Option<f64>,
    pub momentum_tail_mass: f64,
    pub bound_violations: Vec<BoundViolation>,
    pub s_t_fit_rmse_over_range: Option<f64>,
    pub i_t_fit_rmse_over_range: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub files: Vec<FileDigest>,
    pub started_unix_s: u64,
    pub wall_clock_s: f64,
    pub tolerances: ToleranceReport,
}

/// Which artifacts a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub eigen: bool,
    pub densities: bool,
    pub measures: bool,
    pub fit: bool,
}

impl Outputs {
    pub const ALL: Outputs = Outputs { eigen: true, densities: true, measures: true, fit: true };
}

/// Everything a run computed, before it is written.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub artifacts: Vec<Artifact>,
    pub series: Option<Vec<MeasureRecord>>,
    pub tolerances: ToleranceReport,
}

pub fn compute(cfg: &RunConfig, outputs: Outputs) -> Result<RunResult, CliError> {
    cfg.validate()?;
    let mut artifacts = Vec::new();
    let mut tol = ToleranceReport { momentum_tail_mass: MEASURE_TAIL_MASS, ..Default::default() };
    if outputs.eigen {
        let rows = eigen_rows(cfg)?;
        tol.max_match_residual = rows.iter().map(|r| r.match_residual).reduce(f64::max);
        artifacts.push(eigen_csv(&rows));
    }
    let mut series = None;
    if outputs.densities || outputs.measures || outputs.fit {
        let s = superposition(cfg)?;
        if outputs.densities {
            artifacts.extend(density_csvs(cfg, &s)?);
        }
        if outputs.measures || outputs.fit {
            let recs = measures(cfg, &s)?;
            tol.max_norm_error_x = recs.iter().map(|r| (r.norm_x - 1.0).abs()).reduce(f64::max);
            tol.max_norm_error_k = recs.iter().map(|r| (r.norm_k - 1.0).abs()).reduce(f64::max);
            tol.bound_violations = recs.iter().flat_map(check_bounds).collect();
            if outputs.measures {
                artifacts.push(measures_csv(&recs, &cfg.renyi_orders));
            }
            if outputs.fit {
                let (report, rows) = fit_rows(&recs)?;
                tol.s_t_fit_rmse_over_range = Some(report.s_t_rmse / report.s_t_range);
                tol.i_t_fit_rmse_over_range = Some(report.i_t_rmse / report.i_t_range);
                artifacts.push(fit_csv(&rows));
            }
            series = Some(recs);
        }
    }
    Ok(RunResult { artifacts, series, tolerances: tol })
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileDigest, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|source| CliError::Io { path, source })?;
    Ok(FileDigest { name: name.to_string(), sha256: hex::encode(Sha256::digest(bytes)), bytes: bytes.len() })
}

/// Computes the selected outputs, writes them and `manifest.json` into
/// `cfg.output_dir`. Files are written even when a bound is violated; the
/// violation is then returned as the error.
pub fn run_outputs(cfg: &RunConfig, outputs: Outputs) -> Result<RunManifest, CliError> {
    let clock = Clock::start();
    cfg.validate()?;
    cfg.prepare_output()?;
    let result = compute(cfg, outputs)?;
    let manifest = write_run(cfg, &result.artifacts, result.tolerances, clock)?;
    if !manifest.tolerances.bound_violations.is_empty() {
        return Err(CliError::BoundViolation { violations: manifest.tolerances.bound_violations.clone() });
    }
    Ok(manifest)
}

/// Wall-clock start of a run, recorded in the manifest only.
#[derive(Debug, Clone, Copy)]
pub struct Clock {
    instant: Instant,
    unix_s: u64,
}

impl Clock {
    pub fn start() -> Self {
        let unix_s = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Clock { instant: Instant::now(), unix_s }
    }
}

/// Writes the artifacts in order, then `manifest.json` with their digests.
pub fn write_run(
    cfg: &RunConfig,
    artifacts: &[Artifact],
    tolerances: ToleranceReport,
    clock: Clock,
) -> Result<RunManifest, CliError> {
    let files = artifacts
        .iter()
        .map(|a| write_file(&cfg.output_dir, a.name, a.body.as_bytes()))
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        files,
        started_unix_s: clock.unix_s,
        wall_clock_s: clock.instant.elapsed().as_secs_f64(),
        tolerances,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&cfg.output_dir, "manifest.json", json.as_bytes())?;
    Ok(manifest)
}

pub fn run_scenario(cfg: &RunConfig) -> Result<RunManifest, CliError> {
    run_outputs(cfg, Outputs::ALL)
}

/// Ground-state doublet splitting of the double well, for quick reports.
pub fn ground_splitting_ev(cfg: &RunConfig) -> Result<f64, CliError> {
    let states = eigensolver::solve_spectrum(&cfg.dswp(), &cfg.constants()).map_err(numerical(Stage::Eigen))?;
    match states.as_slice() {
        [a, b, ..] => Ok(b.energy - a.energy),
        _ => Err(CliError::Numerical { stage: Stage::Eigen, message: "fewer than two bound states".into() }),
    }
}
