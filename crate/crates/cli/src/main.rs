use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dwell_cli::config::{load_config, RunConfig};
use dwell_cli::pipeline::{run_outputs, CliError, Outputs};
use dwell_cli::{run_compare, ConfigError};
use dwell_core::quantum_state::{Pair, System};

/// Tunneling dynamics and information measures for square-well potentials.
///
/// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 bound violation.
#[derive(Debug, Parser)]
#[command(name = "dwell", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Overrides {
    /// TOML run configuration; omitted keys take their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    system: Option<System>,
    #[arg(long, global = true)]
    pair: Option<Pair>,
    /// Number of time samples over one period
    #[arg(long, global = true)]
    times: Option<usize>,
    /// Grid points per density snapshot; also sets the initial quadrature panels
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add the ρ·1e-10 and n·1e11 display columns
    #[arg(long, global = true)]
    scaled: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound states of the potential (eigen.csv)
    Eigen,
    /// Density snapshots in both spaces
    Evolve,
    /// Information measures over one period (measures.csv)
    Measures,
    /// Quartic fits of S_T and I_T (fit.csv)
    Fit,
    /// Compare extremum patterns of two runs (comparison.csv)
    Compare {
        /// Second configuration; defaults to the first with the other system
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Every output of a scenario
    Run,
}

impl Overrides {
    fn apply(&self, mut cfg: RunConfig, with_system: bool) -> Result<RunConfig, ConfigError> {
        if with_system {
            if let Some(s) = self.system {
                cfg.system = s;
            }
            if let Some(p) = self.pair {
                cfg.pair = p;
            }
        }
        if let Some(n) = self.times {
            cfg.n_times = n;
        }
        if let Some(n) = self.grid {
            cfg.n_grid = n;
        }
        if let Some(dir) = &self.out {
            cfg.output_dir = dir.clone();
        }
        cfg.display_scaled |= self.scaled;
        cfg.validate()?;
        Ok(cfg)
    }

    fn load(&self) -> Result<RunConfig, ConfigError> {
        let base = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        self.apply(base, true)
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.overrides.load()?;
    let only = |eigen, densities, measures, fit| Outputs { eigen, densities, measures, fit };
    let outputs = match &cli.command {
        Command::Eigen => only(true, false, false, false),
        Command::Evolve => only(false, true, false, false),
        Command::Measures => only(false, false, true, false),
        Command::Fit => only(false, false, false, true),
        Command::Run => Outputs::ALL,
        Command::Compare { against } => {
            let other = match against {
                Some(path) => cli.overrides.apply(load_config(path)?, false)?,
                None => {
                    let system = match cfg.system {
                        System::Dswp => System::Iswp,
                        System::Iswp => System::Dswp,
                    };
                    RunConfig { system, pair: Pair::Ground, ..cfg.clone() }
                }
            };
            let (c, _) = run_compare(&cfg, &other)?;
            for s in [&c.a, &c.b] {
                println!("{}: {}", s.label, s.pattern);
            }
            println!("{}", c.verdict);
            return Ok(());
        }
    };
    let manifest = run_outputs(&cfg, outputs)?;
    for f in &manifest.files {
        println!("{}  {}", f.sha256, cfg.output_dir.join(&f.name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
