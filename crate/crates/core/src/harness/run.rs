use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{default_syk_realizations, ExperimentConfig, ExperimentKind, PredictModel};
use crate::error::{Error, Result};
use crate::models::{
    band_center_eigenstates, build_ising_hamiltonian, build_syk_even_sector, momentum_sector,
    pair_trace_distances, IsingSpec, Selection, SykSpec,
};
use crate::predictions::{
    charge_general_trace_distance, charge_half_partition_closed, charge_q0_trace_distance,
    discrimination_probability, page_trace_distance, Bipartition, ChargeModel,
};
use crate::quantum::{trace_distance_sample, ChargeAssignment, Ensemble, PureState, RngStream, Stats};

/// State pairs per grid point when `samples` is unset.
pub const DEFAULT_PAIRS: usize = 500;

/// One grid point of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    /// Qubits in the partitioned system.
    pub n: u32,
    pub n_b: u32,
    pub f: f64,
    /// Total charge measured from `N/2`, for charge experiments.
    pub q: Option<f64>,
    /// Distances averaged (0 for closed forms).
    pub samples: usize,
    pub mean_d1: f64,
    pub stderr: f64,
    pub stddev: f64,
    /// Structureless random-state prediction.
    pub analytic_page: Option<f64>,
    /// Charge-eigenstate prediction at the row's charge (`Q = 0` when unset).
    pub analytic_q0: Option<f64>,
    /// `(1 + mean_d1) / 2`.
    pub p_discrimination: Option<f64>,
    /// Seconds; only recorded when timing is requested.
    pub wall_time: Option<f64>,
}

impl ResultRow {
    fn new(
        config: &ExperimentConfig,
        experiment: String,
        part: Bipartition,
        q: Option<f64>,
        mean: f64,
        stats: Option<Stats>,
    ) -> Self {
        let charge = ChargeModel {
            gamma: config.gamma,
            q_total: q.unwrap_or(0.0),
        };
        Self {
            experiment,
            n: part.n_total(),
            n_b: part.n_b(),
            f: part.f(),
            q,
            samples: stats.map_or(0, |s| s.count),
            mean_d1: mean,
            stderr: stats.map_or(0.0, |s| s.stderr),
            stddev: stats.map_or(0.0, |s| s.std_dev),
            analytic_page: Some(page_trace_distance(part)),
            analytic_q0: charge_prediction(part, charge),
            p_discrimination: discrimination_probability(mean).ok(),
            wall_time: None,
        }
    }
}

/// Charge-eigenstate prediction: the `Q = 0` closed form at `Q = 0`, the
/// lattice sum otherwise; `None` where undefined (`N_B ∈ {0, N}`).
fn charge_prediction(part: Bipartition, cm: ChargeModel) -> Option<f64> {
    if part.is_degenerate() {
        return None;
    }
    if cm.q_total == 0.0 {
        charge_q0_trace_distance(part).ok()
    } else {
        charge_general_trace_distance(part, cm).ok()
    }
}

fn timed<T>(timing: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<f64>)> {
    let start = Instant::now();
    let value = f()?;
    Ok((value, timing.then(|| start.elapsed().as_secs_f64())))
}

/// Runs a distance experiment on a pool of `config.workers` threads. Rows
/// are sorted by `(N, Q, N_B)`; output is identical for any worker count.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    if config.kind == ExperimentKind::CombinatoricsTable {
        return Err(Error::config("kind", "combinatorics-table produces a table, not result rows"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    let mut rows = pool.install(|| match config.kind {
        ExperimentKind::Predict => run_predict(config),
        ExperimentKind::SamplePage | ExperimentKind::SampleCharge => run_sample(config),
        ExperimentKind::Syk => run_syk(config),
        ExperimentKind::Ising => run_ising(config),
        ExperimentKind::CombinatoricsTable => unreachable!(),
    })?;
    rows.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.q.unwrap_or(f64::NEG_INFINITY).total_cmp(&b.q.unwrap_or(f64::NEG_INFINITY)))
            .then(a.n_b.cmp(&b.n_b))
    });
    Ok(rows)
}

fn run_predict(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let charges = if config.charges.is_empty() {
        vec![0.0]
    } else {
        config.charges.clone()
    };
    for &n in &config.sizes {
        if config.model == PredictModel::Closed {
            let part = Bipartition::new(n, n / 2)?;
            let ctrl = config.series_control()?;
            for &q in &charges {
                let cm = ChargeModel::new(config.gamma, q)?;
                let (v, t) = timed(config.timing, || charge_half_partition_closed(n, cm, ctrl))?;
                let mut row = ResultRow::new(config, "predict-closed".into(), part, Some(q), v, None);
                row.wall_time = t;
                rows.push(row);
            }
            continue;
        }
        for n_b in config.n_b_grid(n)? {
            let part = Bipartition::new(n, n_b)?;
            match config.model {
                PredictModel::Page => {
                    let (v, t) = timed(config.timing, || Ok(page_trace_distance(part)))?;
                    let mut row = ResultRow::new(config, "predict-page".into(), part, None, v, None);
                    row.wall_time = t;
                    rows.push(row);
                }
                PredictModel::Q0 => {
                    let (v, t) = timed(config.timing, || charge_q0_trace_distance(part))?;
                    let mut row = ResultRow::new(config, "predict-q0".into(), part, Some(0.0), v, None);
                    row.wall_time = t;
                    rows.push(row);
                }
                PredictModel::Qgen => {
                    for &q in &charges {
                        let cm = ChargeModel::new(config.gamma, q)?;
                        let (v, t) = timed(config.timing, || charge_general_trace_distance(part, cm))?;
                        let mut row = ResultRow::new(config, "predict-qgen".into(), part, Some(q), v, None);
                        row.wall_time = t;
                        rows.push(row);
                    }
                }
                PredictModel::Closed => unreachable!(),
            }
        }
    }
    Ok(rows)
}

fn run_sample(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let pairs = config.samples.unwrap_or(DEFAULT_PAIRS);
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let base = RngStream::new(config.seed, n as u64);
        let assignment = ChargeAssignment::hamming(n);
        // (ensemble, reported Q, stream)
        let ensembles: Vec<(Ensemble, Option<f64>, u64)> = match config.kind {
            ExperimentKind::SamplePage => vec![(Ensemble::Page, None, 0)],
            _ => {
                let charges = if config.charges.is_empty() {
                    vec![assignment.peak_charge() as f64 - n as f64 / 2.0]
                } else {
                    config.charges.clone()
                };
                charges
                    .into_iter()
                    .map(|q| {
                        let weight = (q + n as f64 / 2.0).round() as i64;
                        let ensemble = Ensemble::Charge {
                            assignment: assignment.clone(),
                            q_total: weight,
                        };
                        (ensemble, Some(q), weight as u64)
                    })
                    .collect()
            }
        };
        for n_b in config.n_b_grid(n)? {
            let part = Bipartition::new(n, n_b)?;
            for (ensemble, q, sub) in &ensembles {
                let stream = base.child(n_b as u64).child(*sub);
                let (stats, t) = timed(config.timing, || {
                    trace_distance_sample(ensemble, part, pairs, config.normalize, stream)
                })?;
                let mut row = ResultRow::new(config, config.kind.name().into(), part, *q, stats.mean, Some(stats));
                row.wall_time = t;
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Pools per-`N_B` pair distances from several independent eigenstate sets.
fn pooled_rows(
    config: &ExperimentConfig,
    experiment: &str,
    n: u32,
    grid: &[u32],
    per_set: Vec<Vec<Vec<f64>>>,
    wall_time: Option<f64>,
) -> Result<Vec<ResultRow>> {
    grid.iter()
        .enumerate()
        .map(|(g, &n_b)| {
            let values: Vec<f64> = per_set.iter().flat_map(|set| set[g].iter().copied()).collect();
            let stats = Stats::from_samples(&values)?;
            let part = Bipartition::new(n, n_b)?;
            let mut row = ResultRow::new(config, experiment.into(), part, None, stats.mean, Some(stats));
            row.wall_time = wall_time;
            Ok(row)
        })
        .collect()
}

fn distances_on_grid(states: &[PureState], grid: &[u32]) -> Result<Vec<Vec<f64>>> {
    grid.iter().map(|&n_b| pair_trace_distances(states, n_b)).collect()
}

fn run_syk(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &nm in &config.sizes {
        let n = config.qubits(nm);
        let grid = config.n_b_grid(nm)?;
        let realizations = config.samples.unwrap_or_else(|| default_syk_realizations(nm));
        let base = RngStream::new(config.seed, nm as u64);
        let (per_set, t) = timed(config.timing, || {
            (0..realizations as u64)
                .into_par_iter()
                .map(|r| {
                    let spec = SykSpec::new(nm, base.child(r))?;
                    let h = build_syk_even_sector(&spec)?;
                    let states = band_center_eigenstates(&h, Selection::BandCenter { count: config.states })?
                        .into_iter()
                        .map(|p| PureState::new(n, p.vector.iter().copied().collect()))
                        .collect::<Result<Vec<_>>>()?;
                    distances_on_grid(&states, &grid)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        rows.extend(pooled_rows(config, &format!("syk-{nm}"), n, &grid, per_set, t)?);
    }
    Ok(rows)
}

/// Lifted eigenstates of one Ising momentum sector chosen per `config`.
pub fn ising_states(config: &ExperimentConfig, n: u32) -> Result<Vec<PureState>> {
    let h = build_ising_hamiltonian(&IsingSpec::new(n))?;
    let sector = momentum_sector(n, config.k)?;
    let block = sector.project(&h)?;
    let selection = match config.window {
        Some([lo, hi]) => Selection::Window {
            lo: lo * n as f64,
            hi: hi * n as f64,
            count: config.states,
        },
        None => Selection::BandCenter { count: config.states },
    };
    band_center_eigenstates(&block, selection)?
        .into_iter()
        .map(|p| {
            let c: Vec<Complex64> = p.vector.iter().copied().collect();
            sector.lift(&c)
        })
        .collect()
}

fn run_ising(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let grid = config.n_b_grid(n)?;
        let (per_set, t) = timed(config.timing, || {
            let states = ising_states(config, n)?;
            if states.len() < 2 {
                return Err(Error::Degenerate(format!(
                    "only {} eigenstate selected; pair distances need 2",
                    states.len()
                )));
            }
            distances_on_grid(&states, &grid)
        })?;
        rows.extend(pooled_rows(config, &format!("ising-k{}", config.k), n, &grid, vec![per_set], t)?);
    }
    Ok(rows)
}
