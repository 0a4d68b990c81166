//! Reproducible experiments: JSON configuration, deterministic parallel
//! execution, and CSV output.

mod config;
mod output;
mod run;

pub use config::{
    default_syk_realizations, ExperimentConfig, ExperimentKind, FGrid, GridName, PredictModel,
    DEFAULT_SEED, MAX_TABLE_N,
};
pub use output::{
    combinatorics_table, emit_combinatorics_csv, emit_csv, emit_gnuplot, format_float, read_csv,
    write_combinatorics_csv, write_csv, CombinatoricsRow, CSV_HEADER,
};
pub use run::{ising_states, run, ResultRow, DEFAULT_PAIRS};
