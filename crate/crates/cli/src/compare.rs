//! Qualitative comparison of two runs by the extrema of `S_T` and `I_T`.
//!
//! A run shows the tunneling signature when, over the first half period,
//! `S_T` has a single interior extremum, a maximum near `T/4`, and `I_T` a
//! single interior extremum near `T/4` as well. Anything else (typically
//! `S_T` dipping to a local minimum at `T/4` between two maxima) is the
//! fluctuation pattern of a well without a barrier.

use std::fmt;

use dwell_core::infomeasures::{find_extrema, Extremum, ExtremumKind, MeasureRecord};
use serde::Serialize;

use crate::config::RunConfig;
use crate::pipeline::{measures, num, superposition, write_run, Artifact, CliError, Clock, RunManifest, ToleranceReport};

/// Distance from `T/4`, in units of `T`, still counted as "at `T/4`".
pub const QUARTER_TOLERANCE: f64 = 1.0 / 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    TunnelingSignature,
    Fluctuation,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::TunnelingSignature => "tunneling signature present",
            Pattern::Fluctuation => "fluctuation pattern",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub pattern: Pattern,
    /// Extrema over the whole period, end points included.
    pub s_t: Vec<Extremum>,
    pub i_t: Vec<Extremum>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub a: RunSummary,
    pub b: RunSummary,
    pub verdict: String,
}

pub fn summarize(label: &str, series: &[MeasureRecord]) -> RunSummary {
    let ts: Vec<f64> = series.iter().map(|r| r.t_over_t).collect();
    let st: Vec<f64> = series.iter().map(|r| r.s_t).collect();
    let it: Vec<f64> = series.iter().map(|r| r.i_t).collect();
    let s_t = find_extrema(&ts, &st);
    let i_t = find_extrema(&ts, &it);

    let first_half = |ex: &[Extremum]| -> Vec<Extremum> {
        ex.iter().filter(|e| !e.boundary && e.t > 0.0 && e.t < 0.5 - 1e-12).copied().collect()
    };
    let near_quarter = |e: &Extremum| (e.t - 0.25).abs() <= QUARTER_TOLERANCE;
    let (hs, hi) = (first_half(&s_t), first_half(&i_t));
    let signature = matches!(hs.as_slice(), [e] if e.kind == ExtremumKind::Max && near_quarter(e))
        && matches!(hi.as_slice(), [e] if near_quarter(e));
    RunSummary {
        label: label.to_string(),
        pattern: if signature { Pattern::TunnelingSignature } else { Pattern::Fluctuation },
        s_t,
        i_t,
    }
}

pub fn compare_series(
    label_a: &str,
    a: &[MeasureRecord],
    label_b: &str,
    b: &[MeasureRecord],
) -> Result<Comparison, CliError> {
    let same_grid = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.t_over_t == y.t_over_t);
    if !same_grid {
        return Err(CliError::IncompatibleSampling { a: a.len(), b: b.len() });
    }
    let (sa, sb) = (summarize(label_a, a), summarize(label_b, b));
    let verdict = if sa.pattern == sb.pattern {
        format!("no discriminating difference: both show {}", sa.pattern)
    } else {
        format!("systems differ: {} shows {}, {} shows {}", sa.label, sa.pattern, sb.label, sb.pattern)
    };
    Ok(Comparison { a: sa, b: sb, verdict })
}

/// Runs both configurations and compares them.
pub fn compare_systems(cfg_a: &RunConfig, cfg_b: &RunConfig) -> Result<Comparison, CliError> {
    if cfg_a.n_times != cfg_b.n_times {
        return Err(CliError::IncompatibleSampling { a: cfg_a.n_times, b: cfg_b.n_times });
    }
    let label = |c: &RunConfig| format!("{}-{}", c.system, c.pair);
    let (la, mut lb) = (label(cfg_a), label(cfg_b));
    if la == lb {
        lb.push_str("-b");
    }
    let series_a = measures(cfg_a, &superposition(cfg_a)?)?;
    let series_b = measures(cfg_b, &superposition(cfg_b)?)?;
    compare_series(&la, &series_a, &lb, &series_b)
}

pub fn comparison_csv(c: &Comparison) -> Artifact {
    let mut out = Artifact::new(
        "comparison.csv",
        &["run", "pattern", "measure", "kind", "t_over_T", "value", "boundary"],
    );
    for run in [&c.a, &c.b] {
        let pattern = serde_json::to_value(run.pattern).expect("pattern serializes");
        for (measure, ex) in [("S_T_nats", &run.s_t), ("I_T", &run.i_t)] {
            for e in ex {
                out.row([
                    run.label.clone(),
                    pattern.as_str().unwrap_or_default().to_string(),
                    measure.to_string(),
                    match e.kind {
                        ExtremumKind::Min => "min".to_string(),
                        ExtremumKind::Max => "max".to_string(),
                    },
                    num(e.t),
                    num(e.value),
                    e.boundary.to_string(),
                ]);
            }
        }
    }
    out
}

/// Compares the two runs and writes `comparison.csv` plus a manifest into
/// the first configuration's output directory.
pub fn run_compare(cfg_a: &RunConfig, cfg_b: &RunConfig) -> Result<(Comparison, RunManifest), CliError> {
    let clock = Clock::start();
    cfg_a.validate()?;
    cfg_b.validate()?;
    cfg_a.prepare_output()?;
    let c = compare_systems(cfg_a, cfg_b)?;
    let manifest = write_run(cfg_a, &[comparison_csv(&c)], ToleranceReport::default(), clock)?;
    Ok((c, manifest))
}
