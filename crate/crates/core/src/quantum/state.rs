use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Default upper bound on the qubit count of sampled states.
pub const MAX_SAMPLED_QUBITS: u32 = 24;

/// Amplitudes over the `2^N` computational basis states. Qubit 0 is the
/// most significant bit of the basis index, so a leading block of qubits is
/// the row index of the amplitude vector reshaped as a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    n_qubits: u32,
}

impl PureState {
    pub fn new(n_qubits: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_qubits >= usize::BITS || amplitudes.len() != 1usize << n_qubits {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain("state amplitudes must be finite"));
        }
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Dimension(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(n_qubits, amps)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescaled to unit norm.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::Degenerate("cannot normalize the zero vector".into()));
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

fn check_size(n_qubits: u32) -> Result<()> {
    if n_qubits > MAX_SAMPLED_QUBITS {
        return Err(Error::Size {
            what: "n_qubits",
            value: n_qubits as usize,
            limit: MAX_SAMPLED_QUBITS as usize,
        });
    }
    Ok(())
}

/// I.i.d. complex Gaussian amplitudes of variance `1/D` (real and imaginary
/// parts each `1/2D`). Normalized only on average.
pub fn sample_page_state<R: Rng + ?Sized>(n_qubits: u32, rng: &mut R) -> Result<PureState> {
    check_size(n_qubits)?;
    let dim = 1usize << n_qubits;
    let variance = 1.0 / dim as f64;
    let amps = (0..dim).map(|_| complex_gaussian(rng, variance)).collect();
    PureState::new(n_qubits, amps)
}

/// Per-qubit charges of a subsystem-additive scalar charge
/// `Q(s) = Σ_i q_i s_i`, where `s_i ∈ {0, 1}` is qubit `i`'s bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeAssignment {
    charges: Vec<i64>,
}

impl ChargeAssignment {
    pub fn new(charges: Vec<i64>) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::domain("charge assignment needs at least one qubit"));
        }
        Ok(Self { charges })
    }

    /// `q_i = 1` on every qubit: the charge is the Hamming weight.
    pub fn hamming(n_qubits: u32) -> Self {
        Self {
            charges: vec![1; n_qubits as usize],
        }
    }

    pub fn n_qubits(&self) -> u32 {
        self.charges.len() as u32
    }

    pub fn charges(&self) -> &[i64] {
        &self.charges
    }

    /// Charge of basis state `index` restricted to `count` qubits starting at `first`.
    pub fn partial_charge(&self, index: usize, first: usize, count: usize) -> i64 {
        let n = self.charges.len();
        (first..first + count)
            .filter(|&i| (index >> (n - 1 - i)) & 1 == 1)
            .map(|i| self.charges[i])
            .sum()
    }

    pub fn basis_charge(&self, index: usize) -> i64 {
        self.partial_charge(index, 0, self.charges.len())
    }

    /// Basis states of total charge `q`, in increasing index order.
    pub fn sector(&self, q: i64) -> Vec<usize> {
        (0..1usize << self.charges.len())
            .filter(|&s| self.basis_charge(s) == q)
            .collect()
    }

    /// `F(Q)`, counted exactly.
    pub fn sector_dim(&self, q: i64) -> usize {
        self.sector(q).len()
    }

    /// The charge value with the most basis states (lowest such value on ties).
    pub fn peak_charge(&self) -> i64 {
        let n = self.charges.len();
        let mut counts = std::collections::BTreeMap::new();
        for s in 0..1usize << n {
            *counts.entry(self.basis_charge(s)).or_insert(0usize) += 1;
        }
        let max = counts.values().copied().max().unwrap_or(0);
        counts
            .into_iter()
            .find(|&(_, c)| c == max)
            .map(|(q, _)| q)
            .unwrap_or(0)
    }
}

/// Complex Gaussian amplitudes of variance `1/F(Q)` on the basis states of
/// total charge `q_total`, exactly zero elsewhere.
pub fn sample_charge_eigenstate<R: Rng + ?Sized>(
    assignment: &ChargeAssignment,
    q_total: i64,
    rng: &mut R,
) -> Result<PureState> {
    let n = assignment.n_qubits();
    check_size(n)?;
    let sector = assignment.sector(q_total);
    if sector.is_empty() {
        return Err(Error::EmptySector { q: q_total });
    }
    let variance = 1.0 / sector.len() as f64;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n];
    for s in sector {
        amps[s] = complex_gaussian(rng, variance);
    }
    PureState::new(n, amps)
}
