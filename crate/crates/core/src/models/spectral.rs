use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::predictions::Bipartition;
use crate::quantum::{difference_spectrum, PureState, Stats};

/// Maximum-likelihood Gaussian `(mean, width)`: sample mean and the
/// `1/n` standard deviation.
pub fn gaussian_dos_fit(eigenvalues: &[f64]) -> Result<(f64, f64)> {
    let n = eigenvalues.len();
    if n < 10 {
        return Err(Error::domain(format!("density-of-states fit needs at least 10 eigenvalues, got {n}")));
    }
    let mean = eigenvalues.iter().sum::<f64>() / n as f64;
    let width = (eigenvalues.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    if !(width > 1e-12 * mean.abs().max(1.0)) {
        return Err(Error::Degenerate("eigenvalues have no spread".into()));
    }
    Ok((mean, width))
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: DVector<Complex64>,
}

/// Which eigenstates of a block to keep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selection {
    /// The `count` eigenstates nearest the fitted density-of-states peak.
    BandCenter { count: usize },
    /// Eigenstates with energies in `[lo, hi]`, nearest the fitted peak first.
    Window { lo: f64, hi: f64, count: usize },
}

/// Eigenpairs of a Hermitian block chosen by `selection`, ordered by
/// distance from the fitted density-of-states peak (ties by energy).
pub fn band_center_eigenstates(h: &DMatrix<Complex64>, selection: Selection) -> Result<Vec<Eigenpair>> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("{}x{} block", h.nrows(), h.ncols())));
    }
    let eig = SymmetricEigen::new(h.clone());
    let energies: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let (peak, _) = gaussian_dos_fit(&energies)?;
    let (lo, hi, count) = match selection {
        Selection::BandCenter { count } => (f64::NEG_INFINITY, f64::INFINITY, count),
        Selection::Window { lo, hi, count } => (lo, hi, count),
    };
    if count == 0 {
        return Err(Error::domain("eigenstate count must be positive"));
    }
    let mut idx: Vec<usize> = (0..energies.len())
        .filter(|&i| energies[i] >= lo && energies[i] <= hi)
        .collect();
    if idx.is_empty() {
        return Err(Error::EmptyWindow { lo, hi });
    }
    idx.sort_by(|&a, &b| {
        (energies[a] - peak)
            .abs()
            .total_cmp(&(energies[b] - peak).abs())
            .then(energies[a].total_cmp(&energies[b]))
    });
    Ok(idx
        .into_iter()
        .take(count)
        .map(|i| Eigenpair {
            energy: energies[i],
            vector: eig.eigenvectors.column(i).into_owned(),
        })
        .collect())
}

/// Pair-averaged trace distance at one bipartition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDistanceRow {
    pub n_b: u32,
    pub f: f64,
    /// Mean, sample standard deviation and standard error over pairs.
    pub stats: Stats,
}

/// Trace distances of all unordered pairs, per traced-qubit count.
pub fn pair_trace_distances(states: &[PureState], n_b: u32) -> Result<Vec<f64>> {
    if states.len() < 2 {
        return Err(Error::domain(format!("need at least 2 states, got {}", states.len())));
    }
    let n = states[0].n_qubits();
    if states.iter().any(|s| s.n_qubits() != n) {
        return Err(Error::Dimension("states differ in qubit count".into()));
    }
    let part = Bipartition::new(n, n_b)?;
    let normalized = states
        .iter()
        .map(|s| s.clone().normalized())
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..normalized.len() {
        for j in i + 1..normalized.len() {
            let d = if part.n_a() == 0 {
                0.0
            } else {
                0.5 * difference_spectrum(&normalized[i], &normalized[j], part.n_a())?
                    .iter()
                    .map(|l| l.abs())
                    .sum::<f64>()
            };
            out.push(d);
        }
    }
    Ok(out)
}

/// Mean trace distance over all unordered pairs of `states` for each `N_B`.
pub fn eigenstate_pair_distances(states: &[PureState], n_b_grid: &[u32]) -> Result<Vec<PairDistanceRow>> {
    n_b_grid
        .iter()
        .map(|&n_b| {
            let values = pair_trace_distances(states, n_b)?;
            let f = n_b as f64 / states[0].n_qubits() as f64;
            let stats = if values.len() == 1 {
                Stats {
                    mean: values[0],
                    std_dev: 0.0,
                    stderr: 0.0,
                    count: 1,
                }
            } else {
                Stats::from_samples(&values)?
            };
            Ok(PairDistanceRow { n_b, f, stats })
        })
        .collect()
}
