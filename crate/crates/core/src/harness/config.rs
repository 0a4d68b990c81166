use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{MAX_MAJORANA, MAX_SPINS};
use crate::predictions::MAX_QUBITS;
use crate::quantum::MAX_SAMPLED_QUBITS;
use crate::special::SeriesControl;

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Largest `n` for the combinatorics table.
pub const MAX_TABLE_N: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Predict,
    SamplePage,
    SampleCharge,
    Syk,
    Ising,
    CombinatoricsTable,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Predict => "predict",
            ExperimentKind::SamplePage => "sample-page",
            ExperimentKind::SampleCharge => "sample-charge",
            ExperimentKind::Syk => "syk",
            ExperimentKind::Ising => "ising",
            ExperimentKind::CombinatoricsTable => "combinatorics-table",
        }
    }
}

/// Closed form evaluated by `predict`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictModel {
    /// Structureless random states.
    #[default]
    Page,
    /// Charge eigenstates at `Q = 0`.
    Q0,
    /// Charge eigenstates at general `Q` (lattice sum).
    Qgen,
    /// Half partition at `Q != 0`, closed erfc form.
    Closed,
}

/// Traced-qubit grid. In JSON: `"all"`, a list of `f` values, or `{"steps": m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FGrid {
    Named(GridName),
    Points(Vec<f64>),
    Steps { steps: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridName {
    /// Every `N_B` the experiment supports.
    All,
}

impl Default for FGrid {
    fn default() -> Self {
        FGrid::Named(GridName::All)
    }
}

/// One experiment. Unset fields take per-kind defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Qubit counts (`predict`, `sample-*`), Majorana counts (`syk`) or spin
    /// counts (`ising`). Unused by `combinatorics-table`.
    #[serde(default)]
    pub sizes: Vec<u32>,
    #[serde(default)]
    pub f_grid: FGrid,
    /// State pairs per grid point (`sample-*`) or disorder realizations (`syk`).
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub model: PredictModel,
    /// Total charges, measured from the centre `N/2` of the Hamming weight.
    #[serde(default)]
    pub charges: Vec<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Normalize sampled states before taking distances.
    #[serde(default = "default_true")]
    pub normalize: bool,
    /// Eigenstates per realization (`syk`) or per sector (`ising`).
    #[serde(default = "default_states")]
    pub states: usize,
    /// Momentum sector (`ising`).
    #[serde(default)]
    pub k: u32,
    /// Energy window per site (`ising`); band-centre selection when absent.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    /// Largest `n` in the combinatorics table.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Optional whitespace-separated data file for gnuplot.
    #[serde(default)]
    pub gnuplot: Option<PathBuf>,
    /// Record per-row wall time (makes output run-dependent).
    #[serde(default)]
    pub timing: bool,
    #[serde(default = "default_rel_tol")]
    pub series_rel_tol: f64,
    #[serde(default = "default_max_terms")]
    pub series_max_terms: usize,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_workers() -> usize {
    1
}
fn default_gamma() -> f64 {
    0.5
}
fn default_true() -> bool {
    true
}
fn default_states() -> usize {
    7
}
fn default_n_max() -> usize {
    10
}
fn default_rel_tol() -> f64 {
    SeriesControl::default().rel_tol
}
fn default_max_terms() -> usize {
    SeriesControl::default().max_terms
}

/// Realizations per Majorana count when `samples` is unset.
pub fn default_syk_realizations(n_majorana: u32) -> usize {
    if n_majorana <= 18 {
        50
    } else {
        10
    }
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            sizes: Vec::new(),
            f_grid: FGrid::default(),
            samples: None,
            seed: DEFAULT_SEED,
            workers: 1,
            model: PredictModel::default(),
            charges: Vec::new(),
            gamma: default_gamma(),
            normalize: true,
            states: default_states(),
            k: 0,
            window: None,
            n_max: default_n_max(),
            output: None,
            gnuplot: None,
            timing: false,
            series_rel_tol: default_rel_tol(),
            series_max_terms: default_max_terms(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn series_control(&self) -> Result<SeriesControl> {
        SeriesControl::new(self.series_rel_tol, self.series_max_terms)
            .map_err(|e| Error::config("series_rel_tol", e.to_string()))
    }

    /// Qubit count of the partitioned system for size entry `size`.
    pub fn qubits(&self, size: u32) -> u32 {
        match self.kind {
            ExperimentKind::Syk => size / 2 - 1,
            _ => size,
        }
    }

    /// Traced-qubit counts `N_B` for size entry `size`, increasing.
    pub fn n_b_grid(&self, size: u32) -> Result<Vec<u32>> {
        let n = self.qubits(size);
        let (lo, hi) = self.default_range(n);
        let grid: Vec<u32> = match &self.f_grid {
            FGrid::Named(GridName::All) => (lo..=hi).collect(),
            FGrid::Steps { steps } => {
                let mut v: Vec<u32> = (0..=*steps)
                    .map(|i| ((i as f64) * n as f64 / *steps as f64).round() as u32)
                    .filter(|&nb| nb >= lo && nb <= hi)
                    .collect();
                v.dedup();
                v
            }
            FGrid::Points(points) => {
                let mut v = Vec::with_capacity(points.len());
                for &f in points {
                    let nb = (f * n as f64).round();
                    if !(0.0..=1.0).contains(&f) || (f * n as f64 - nb).abs() > 1e-9 {
                        return Err(Error::config(
                            "f_grid",
                            format!("{f} is not a multiple of 1/{n} in [0, 1]"),
                        ));
                    }
                    let nb = nb as u32;
                    if nb < lo || nb > hi {
                        return Err(Error::config(
                            "f_grid",
                            format!("f = {f} (N_B = {nb}) is outside {lo}..={hi} for this experiment at N = {n}"),
                        ));
                    }
                    v.push(nb);
                }
                v.sort_unstable();
                v.dedup();
                v
            }
        };
        if grid.is_empty() {
            return Err(Error::config("f_grid", format!("no grid points for N = {n}")));
        }
        Ok(grid)
    }

    fn default_range(&self, n: u32) -> (u32, u32) {
        match (self.kind, self.model) {
            (ExperimentKind::Predict, PredictModel::Page) => (0, n),
            (ExperimentKind::SamplePage, _) => (0, n),
            _ => (1, n.saturating_sub(1)),
        }
    }

    /// Checks every field; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        if self.workers == 0 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if self.kind == CombinatoricsTable {
            if self.n_max == 0 || self.n_max > MAX_TABLE_N {
                return Err(Error::config("n_max", format!("must be in 1..={MAX_TABLE_N}")));
            }
            return Ok(());
        }
        if self.sizes.is_empty() {
            return Err(Error::config("sizes", "at least one system size is required"));
        }
        for &s in &self.sizes {
            let (lo, hi, what) = match self.kind {
                Predict => (2, MAX_QUBITS, "qubit count"),
                SamplePage | SampleCharge => (2, MAX_SAMPLED_QUBITS, "qubit count"),
                Syk => (6, MAX_MAJORANA, "Majorana count"),
                Ising => (2, MAX_SPINS, "spin count"),
                CombinatoricsTable => unreachable!(),
            };
            if s < lo || s > hi {
                return Err(Error::config("sizes", format!("{what} {s} outside {lo}..={hi}")));
            }
            if self.kind == Syk && s % 2 != 0 {
                return Err(Error::config("sizes", format!("Majorana count {s} must be even")));
            }
        }
        if let FGrid::Points(p) = &self.f_grid {
            if p.is_empty() {
                return Err(Error::config("f_grid", "empty grid"));
            }
        }
        if let FGrid::Steps { steps: 0 } = self.f_grid {
            return Err(Error::config("f_grid", "steps must be positive"));
        }
        for &s in &self.sizes {
            self.n_b_grid(s)?;
        }
        if let Some(m) = self.samples {
            let min = if self.kind == Syk { 1 } else { 2 };
            if m < min {
                return Err(Error::config("samples", format!("must be at least {min}")));
            }
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::config("gamma", "must be positive"));
        }
        if self.charges.iter().any(|q| !q.is_finite()) {
            return Err(Error::config("charges", "must be finite"));
        }
        self.series_control()?;
        match self.kind {
            Predict if self.model == PredictModel::Closed => {
                if self.charges.is_empty() || self.charges.contains(&0.0) {
                    return Err(Error::config("charges", "closed form needs nonzero charges"));
                }
                if let Some(&s) = self.sizes.iter().find(|&&s| s % 2 != 0) {
                    return Err(Error::config("sizes", format!("closed form needs even N, got {s}")));
                }
            }
            SampleCharge => {
                for &n in &self.sizes {
                    for &q in &self.charges {
                        let w = q + n as f64 / 2.0;
                        if w != w.round() || w < 0.0 || w > n as f64 {
                            return Err(Error::config(
                                "charges",
                                format!("Q = {q} is not a Hamming-weight sector at N = {n}"),
                            ));
                        }
                    }
                }
            }
            Syk | Ising
                if self.states < 2 => {
                    return Err(Error::config("states", "need at least 2 eigenstates"));
                }
            _ => {}
        }
        if self.kind == Ising {
            if let Some(&n) = self.sizes.iter().find(|&&n| self.k >= n) {
                return Err(Error::config("k", format!("momentum {} must be below N = {n}", self.k)));
            }
            if let Some([lo, hi]) = self.window {
                if !(lo < hi) {
                    return Err(Error::config("window", format!("empty interval [{lo}, {hi}]")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(e: Error) -> String {
        match e {
            Error::Config { field, .. } => field,
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn defaults_from_minimal_json() {
        let c = ExperimentConfig::from_json(r#"{"kind": "sample-page", "sizes": [10]}"#).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.f_grid, FGrid::Named(GridName::All));
        assert!(c.normalize);
        assert_eq!(c.n_b_grid(10).unwrap(), (0..=10).collect::<Vec<_>>());
    }

    #[test]
    fn grid_forms() {
        let c = ExperimentConfig::from_json(r#"{"kind": "predict", "model": "q0", "sizes": [10], "f_grid": {"steps": 5}}"#).unwrap();
        assert_eq!(c.n_b_grid(10).unwrap(), vec![2, 4, 6, 8]);
        let c = ExperimentConfig::from_json(r#"{"kind": "sample-page", "sizes": [10], "f_grid": [0.5, 0.1]}"#).unwrap();
        assert_eq!(c.n_b_grid(10).unwrap(), vec![1, 5]);
        let c = ExperimentConfig::from_json(r#"{"kind": "syk", "sizes": [14]}"#).unwrap();
        assert_eq!(c.n_b_grid(14).unwrap(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn validation_names_fields() {
        let bad = |json: &str| field(ExperimentConfig::from_json(json).unwrap_err());
        assert_eq!(bad(r#"{"kind": "predict", "sizes": [10], "f_grid": []}"#), "f_grid");
        assert_eq!(bad(r#"{"kind": "predict", "sizes": [10], "f_grid": [0.15]}"#), "f_grid");
        assert_eq!(bad(r#"{"kind": "predict", "sizes": []}"#), "sizes");
        assert_eq!(bad(r#"{"kind": "syk", "sizes": [15]}"#), "sizes");
        assert_eq!(bad(r#"{"kind": "sample-page", "sizes": [8], "samples": 1}"#), "samples");
        assert_eq!(bad(r#"{"kind": "sample-page", "sizes": [8], "workers": 0}"#), "workers");
        assert_eq!(bad(r#"{"kind": "sample-charge", "sizes": [8], "charges": [0.5]}"#), "charges");
        assert_eq!(bad(r#"{"kind": "ising", "sizes": [8], "k": 8}"#), "k");
        assert_eq!(bad(r#"{"kind": "ising", "sizes": [8], "window": [0.0, -0.8]}"#), "window");
        assert_eq!(bad(r#"{"kind": "predict", "model": "closed", "sizes": [20]}"#), "charges");
        assert_eq!(bad(r#"{"kind": "combinatorics-table", "n_max": 0}"#), "n_max");
    }

    #[test]
    fn json_errors_carry_position() {
        let e = ExperimentConfig::from_json("{\n  \"kind\": \"predict\",\n  \"sizez\": [1]\n}").unwrap_err();
        assert!(e.is_validation());
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn json_round_trip() {
        let mut c = ExperimentConfig::new(ExperimentKind::Ising);
        c.sizes = vec![8];
        c.window = Some([-0.8, 0.0]);
        assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
