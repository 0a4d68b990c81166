use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tracedist_core::harness::{
    combinatorics_table, emit_combinatorics_csv, emit_csv, emit_gnuplot, run,
    write_combinatorics_csv, write_csv, ExperimentConfig, ExperimentKind, FGrid, PredictModel,
};
use tracedist_core::Error;

/// Subsystem trace distances of random and chaotic eigenstates.
#[derive(Parser, Debug)]
#[command(name = "tracedist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON experiment config; flags given here override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a gnuplot data file.
    #[arg(long, global = true)]
    gnuplot: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Record per-row wall time.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form averages.
    Predict {
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Qubit counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        /// Total charges from N/2, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Monte Carlo over random state pairs.
    Sample {
        #[arg(long, value_enum)]
        ensemble: Option<EnsembleArg>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        /// State pairs per grid point.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        /// Keep the raw Gaussian norm of each sampled state.
        #[arg(long)]
        unnormalized: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Band-centre eigenstates of the SYK model (even-parity sector).
    Syk {
        #[arg(long, value_delimiter = ',')]
        n_majorana: Vec<u32>,
        #[arg(long)]
        realizations: Option<usize>,
        /// Eigenstates per realization.
        #[arg(long)]
        states: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Band-centre eigenstates of the periodic Ising chain in one momentum sector.
    Ising {
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        states: Option<usize>,
        /// Energy window per site, `lo,hi`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<[f64; 2]>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Narayana, even-element Narayana and Catalan numbers.
    CombinatoricsTable {
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Evenly spaced grid with this many steps in f.
    #[arg(long, conflicts_with = "f")]
    f_grid: Option<u32>,
    /// Explicit traced fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    f: Vec<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Page,
    Q0,
    Qgen,
    Closed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnsembleArg {
    Page,
    Charge,
}

fn parse_window(s: &str) -> Result<[f64; 2], String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([lo, hi])
}

fn kind_of(command: &Command) -> ExperimentKind {
    match command {
        Command::Predict { .. } => ExperimentKind::Predict,
        Command::Sample {
            ensemble: Some(EnsembleArg::Charge),
            ..
        } => ExperimentKind::SampleCharge,
        Command::Sample { .. } => ExperimentKind::SamplePage,
        Command::Syk { .. } => ExperimentKind::Syk,
        Command::Ising { .. } => ExperimentKind::Ising,
        Command::CombinatoricsTable { .. } => ExperimentKind::CombinatoricsTable,
    }
}

fn apply_grid(config: &mut ExperimentConfig, grid: &GridArgs) {
    if let Some(steps) = grid.f_grid {
        config.f_grid = FGrid::Steps { steps };
    } else if !grid.f.is_empty() {
        config.f_grid = FGrid::Points(grid.f.clone());
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut config = match &cli.common.config {
        Some(path) => {
            let c = ExperimentConfig::from_path(path)?;
            let wanted = kind_of(&cli.command);
            let compatible = c.kind == wanted
                || matches!(
                    (&cli.command, c.kind),
                    (Command::Sample { ensemble: None, .. }, ExperimentKind::SampleCharge)
                );
            if !compatible {
                return Err(Error::Config {
                    field: "kind".into(),
                    message: format!("config is `{}` but the subcommand runs `{}`", c.kind.name(), wanted.name()),
                });
            }
            c
        }
        None => ExperimentConfig::new(kind_of(&cli.command)),
    };
    let common = &cli.common;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(w) = common.workers {
        config.workers = w;
    }
    if common.timing {
        config.timing = true;
    }
    if common.out.is_some() {
        config.output = common.out.clone();
    }
    if common.gnuplot.is_some() {
        config.gnuplot = common.gnuplot.clone();
    }
    match &cli.command {
        Command::Predict { model, n, q, gamma, grid } => {
            if let Some(m) = model {
                config.model = match m {
                    ModelArg::Page => PredictModel::Page,
                    ModelArg::Q0 => PredictModel::Q0,
                    ModelArg::Qgen => PredictModel::Qgen,
                    ModelArg::Closed => PredictModel::Closed,
                };
            }
            override_vec(&mut config.sizes, n);
            override_vec(&mut config.charges, q);
            if let Some(g) = gamma {
                config.gamma = *g;
            }
            apply_grid(&mut config, grid);
        }
        Command::Sample { n, samples, q, unnormalized, grid, .. } => {
            override_vec(&mut config.sizes, n);
            override_vec(&mut config.charges, q);
            if samples.is_some() {
                config.samples = *samples;
            }
            if *unnormalized {
                config.normalize = false;
            }
            apply_grid(&mut config, grid);
        }
        Command::Syk { n_majorana, realizations, states, grid } => {
            override_vec(&mut config.sizes, n_majorana);
            if realizations.is_some() {
                config.samples = *realizations;
            }
            if let Some(s) = states {
                config.states = *s;
            }
            apply_grid(&mut config, grid);
        }
        Command::Ising { n, k, states, window, grid } => {
            override_vec(&mut config.sizes, n);
            if let Some(k) = k {
                config.k = *k;
            }
            if let Some(s) = states {
                config.states = *s;
            }
            if window.is_some() {
                config.window = *window;
            }
            apply_grid(&mut config, grid);
        }
        Command::CombinatoricsTable { n_max } => {
            if let Some(m) = n_max {
                config.n_max = *m;
            }
        }
    }
    config.validate()?;
    Ok(config)
}

fn override_vec<T: Clone>(target: &mut Vec<T>, value: &[T]) {
    if !value.is_empty() {
        *target = value.to_vec();
    }
}

fn execute(config: &ExperimentConfig) -> Result<(), Error> {
    if config.kind == ExperimentKind::CombinatoricsTable {
        let rows = combinatorics_table(config.n_max)?;
        return match &config.output {
            Some(path) => emit_combinatorics_csv(&rows, path),
            None => write_combinatorics_csv(&rows, io::stdout().lock()),
        };
    }
    let rows = run(config)?;
    match &config.output {
        Some(path) => emit_csv(&rows, path)?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if let Some(path) = &config.gnuplot {
        emit_gnuplot(&rows, path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|c| execute(&c));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(io::stderr(), "tracedist: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
