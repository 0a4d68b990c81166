use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::density::{difference_spectrum, schatten_from_spectrum};
use super::rng::RngStream;
use super::state::{sample_page_state, ChargeAssignment, PureState, MAX_SAMPLED_QUBITS};
use crate::error::{Error, Result};
use crate::predictions::Bipartition;

/// Sample mean with spread. `std_dev` is the sample standard deviation
/// (`n - 1` denominator), `stderr = std_dev / √n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std_dev: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Stats {
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::domain(format!("need at least 2 samples, got {n}")));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let std_dev = var.sqrt();
        Ok(Self {
            mean,
            std_dev,
            stderr: std_dev / (n as f64).sqrt(),
            count: n,
        })
    }
}

/// The random-state ensemble pairs are drawn from.
#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    /// I.i.d. complex Gaussian amplitudes of variance `1/D`.
    Page,
    /// Gaussian amplitudes of variance `1/F(Q)` on one charge sector.
    Charge {
        assignment: ChargeAssignment,
        q_total: i64,
    },
}

enum Prepared {
    Page,
    Charge { sector: Vec<usize> },
}

impl Prepared {
    fn new(ensemble: &Ensemble, n_qubits: u32) -> Result<Self> {
        if n_qubits > MAX_SAMPLED_QUBITS {
            return Err(Error::Size {
                what: "n_qubits",
                value: n_qubits as usize,
                limit: MAX_SAMPLED_QUBITS as usize,
            });
        }
        match ensemble {
            Ensemble::Page => Ok(Prepared::Page),
            Ensemble::Charge {
                assignment,
                q_total,
            } => {
                if assignment.n_qubits() != n_qubits {
                    return Err(Error::Dimension(format!(
                        "charge assignment covers {} qubits, partition has {n_qubits}",
                        assignment.n_qubits()
                    )));
                }
                let sector = assignment.sector(*q_total);
                if sector.is_empty() {
                    return Err(Error::EmptySector { q: *q_total });
                }
                Ok(Prepared::Charge { sector })
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, n_qubits: u32, rng: &mut R) -> Result<PureState> {
        match self {
            Prepared::Page => sample_page_state(n_qubits, rng),
            Prepared::Charge { sector } => {
                let scale = (0.5 / sector.len() as f64).sqrt();
                let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
                for &s in sector {
                    let re: f64 = rng.sample(rand_distr::StandardNormal);
                    let im: f64 = rng.sample(rand_distr::StandardNormal);
                    amps[s] = Complex64::new(re * scale, im * scale);
                }
                PureState::new(n_qubits, amps)
            }
        }
    }
}

/// Spectrum of `ρ_A - σ_A` for one pair drawn from `stream`.
fn pair_spectrum(
    prepared: &Prepared,
    part: Bipartition,
    normalize: bool,
    stream: RngStream,
) -> Result<Vec<f64>> {
    let n = part.n_total();
    let mut rng = stream.rng();
    let mut psi = prepared.sample(n, &mut rng)?;
    let mut phi = prepared.sample(n, &mut rng)?;
    if normalize {
        psi = psi.normalized()?;
        phi = phi.normalized()?;
    }
    if part.n_a() == 0 {
        return Ok(vec![psi.norm_sqr() - phi.norm_sqr()]);
    }
    difference_spectrum(&psi, &phi, part.n_a())
}

/// Evaluates `f` on the spectra of `pairs` independent pairs. Pair `i` draws
/// from `stream.child(i)`, so the result does not depend on the thread count.
fn sample_pairs<F>(
    ensemble: &Ensemble,
    part: Bipartition,
    pairs: usize,
    normalize: bool,
    stream: RngStream,
    f: F,
) -> Result<Stats>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if pairs < 2 {
        return Err(Error::domain(format!("need at least 2 samples, got {pairs}")));
    }
    let prepared = Prepared::new(ensemble, part.n_total())?;
    let values = (0..pairs as u64)
        .into_par_iter()
        .map(|i| pair_spectrum(&prepared, part, normalize, stream.child(i)).map(|ev| f(&ev)))
        .collect::<Result<Vec<f64>>>()?;
    Stats::from_samples(&values)
}

/// Monte Carlo `⟨tr (ρ_A - σ_A)^n⟩` over pairs of unnormalized Page states,
/// the ensemble the combinatorial moments are computed in.
pub fn moment_estimator(n: u32, part: Bipartition, samples: usize, stream: RngStream) -> Result<Stats> {
    if n == 0 {
        return Err(Error::domain("moment order must be at least 1"));
    }
    let p = n as i32;
    sample_pairs(&Ensemble::Page, part, samples, false, stream, |ev| {
        ev.iter().map(|l| l.powi(p)).sum()
    })
}

/// Monte Carlo `⟨D_n⟩` (Schatten order `n`; `n = 1` is the trace distance).
/// With `normalize`, each sampled state is rescaled to unit norm first.
pub fn schatten_distance_sample(
    ensemble: &Ensemble,
    part: Bipartition,
    n: u32,
    pairs: usize,
    normalize: bool,
    stream: RngStream,
) -> Result<Stats> {
    if n == 0 {
        return Err(Error::domain("Schatten order must be at least 1"));
    }
    sample_pairs(ensemble, part, pairs, normalize, stream, |ev| {
        schatten_from_spectrum(ev, n)
    })
}

/// Monte Carlo `⟨D_1⟩` over `pairs` state pairs.
pub fn trace_distance_sample(
    ensemble: &Ensemble,
    part: Bipartition,
    pairs: usize,
    normalize: bool,
    stream: RngStream,
) -> Result<Stats> {
    schatten_distance_sample(ensemble, part, 1, pairs, normalize, stream)
}
