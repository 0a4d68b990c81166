use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::PureState;

pub const MAX_SPINS: u32 = 14;

/// Periodic chain `H = Σ_i (g X_i + h Z_i + J Z_i Z_{i+1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingSpec {
    pub n_spins: u32,
    pub g: f64,
    pub h: f64,
    pub j: f64,
}

impl IsingSpec {
    pub const DEFAULT_G: f64 = 0.9045;
    pub const DEFAULT_H: f64 = 0.8090;
    pub const DEFAULT_J: f64 = 1.0;

    pub fn new(n_spins: u32) -> Self {
        Self {
            n_spins,
            g: Self::DEFAULT_G,
            h: Self::DEFAULT_H,
            j: Self::DEFAULT_J,
        }
    }
}

fn check_spins(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("chain needs at least one spin"));
    }
    if n > MAX_SPINS {
        return Err(Error::Size {
            what: "n_spins",
            value: n as usize,
            limit: MAX_SPINS as usize,
        });
    }
    Ok(())
}

/// Real sparse Hamiltonian: diagonal plus single-spin-flip terms of
/// amplitude `g`. Site 0 is the most significant bit; `Z = +1` on bit 0.
#[derive(Clone, Debug)]
pub struct IsingHamiltonian {
    n_spins: u32,
    g: f64,
    diagonal: Vec<f64>,
}

/// Sparse `H` for `spec`.
pub fn build_ising_hamiltonian(spec: &IsingSpec) -> Result<IsingHamiltonian> {
    let n = spec.n_spins;
    check_spins(n)?;
    let dim = 1usize << n;
    let z = |s: usize, i: u32| if (s >> (n - 1 - i)) & 1 == 0 { 1.0 } else { -1.0 };
    let diagonal = (0..dim)
        .map(|s| {
            (0..n)
                .map(|i| spec.h * z(s, i) + spec.j * z(s, i) * z(s, (i + 1) % n))
                .sum()
        })
        .collect();
    Ok(IsingHamiltonian {
        n_spins: n,
        g: spec.g,
        diagonal,
    })
}

impl IsingHamiltonian {
    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Nonzero entries `(row, value)` of column `s`.
    pub fn column(&self, s: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let flips = (0..self.n_spins)
            .filter(move |_| self.g != 0.0)
            .map(move |i| (s ^ (1usize << i), self.g));
        std::iter::once((s, self.diagonal[s])).chain(flips)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!("{} vs {}", v.len(), self.dim())));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (s, &a) in v.iter().enumerate() {
            for (t, h) in self.column(s) {
                out[t] += a * h;
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for s in 0..d {
            for (t, h) in self.column(s) {
                m[(t, s)] += h;
            }
        }
        m
    }
}

/// One-site translation on basis indices: site `i` moves to site `i + 1`.
pub fn translate(state: usize, n_spins: u32) -> usize {
    (state >> 1) | ((state & 1) << (n_spins - 1))
}

/// Translation applied to a state vector.
pub fn translate_vector(v: &[Complex64], n_spins: u32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (s, &a) in v.iter().enumerate() {
        out[translate(s, n_spins)] = a;
    }
    out
}

/// Translation eigenbasis with `T |r, k⟩ = e^{2πik/N} |r, k⟩`, where
/// `|r, k⟩ = p^{-1/2} Σ_{j<p} e^{-2πikj/N} T^j |r⟩` over orbit representatives
/// `r` of period `p` compatible with `k`.
#[derive(Clone, Debug)]
pub struct MomentumSector {
    n_spins: u32,
    k: u32,
    reps: Vec<usize>,
    periods: Vec<u32>,
    /// For each basis state: (position of its representative in `reps`, shift `j`
    /// with `state = T^j rep`), or `None` outside the sector.
    lookup: Vec<Option<(usize, u32)>>,
}

/// All momentum sectors `k = 0..N`.
pub fn momentum_sectors(n_spins: u32) -> Result<Vec<MomentumSector>> {
    check_spins(n_spins)?;
    let dim = 1usize << n_spins;
    // representative = smallest index in the orbit
    let mut orbits: Vec<(usize, u32)> = Vec::new();
    let mut orbit_of: Vec<(usize, u32)> = vec![(usize::MAX, 0); dim];
    for s in 0..dim {
        if orbit_of[s].0 != usize::MAX {
            continue;
        }
        let mut t = s;
        let mut p = 0;
        loop {
            orbit_of[t] = (orbits.len(), p);
            p += 1;
            t = translate(t, n_spins);
            if t == s {
                break;
            }
        }
        orbits.push((s, p));
    }
    Ok((0..n_spins)
        .map(|k| {
            let mut reps = Vec::new();
            let mut periods = Vec::new();
            let mut position = vec![None; orbits.len()];
            for (o, &(r, p)) in orbits.iter().enumerate() {
                if (k * p) % n_spins == 0 {
                    position[o] = Some(reps.len());
                    reps.push(r);
                    periods.push(p);
                }
            }
            let lookup = orbit_of
                .iter()
                .map(|&(o, j)| position[o].map(|a| (a, j)))
                .collect();
            MomentumSector {
                n_spins,
                k,
                reps,
                periods,
                lookup,
            }
        })
        .collect())
}

/// The single momentum sector `k`.
pub fn momentum_sector(n_spins: u32, k: u32) -> Result<MomentumSector> {
    if k >= n_spins.max(1) {
        return Err(Error::domain(format!("momentum index {k} must be below N = {n_spins}")));
    }
    Ok(momentum_sectors(n_spins)?.swap_remove(k as usize))
}

impl MomentumSector {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    fn phase(&self, j: u32) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * PI * (self.k as f64) * (j as f64) / self.n_spins as f64)
    }

    /// Full-space amplitudes of basis vector `a`, as `(state, amplitude)`.
    fn basis_vector(&self, a: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let p = self.periods[a];
        let norm = 1.0 / (p as f64).sqrt();
        (0..p).scan(self.reps[a], move |t, j| {
            let out = (*t, self.phase(j) * norm);
            *t = translate(*t, self.n_spins);
            Some(out)
        })
    }

    /// Dense `2^N × dim` matrix whose columns are the sector basis.
    pub fn basis_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(1usize << self.n_spins, self.dim());
        for a in 0..self.dim() {
            for (s, v) in self.basis_vector(a) {
                m[(s, a)] = v;
            }
        }
        m
    }

    /// `⟨a|H|b⟩` over the sector basis.
    pub fn project(&self, h: &IsingHamiltonian) -> Result<DMatrix<Complex64>> {
        if h.n_spins() != self.n_spins {
            return Err(Error::Dimension(format!(
                "{}-spin Hamiltonian on a {}-spin sector",
                h.n_spins(),
                self.n_spins
            )));
        }
        let d = self.dim();
        let mut block = DMatrix::<Complex64>::zeros(d, d);
        for b in 0..d {
            for (s, amp) in self.basis_vector(b) {
                for (t, hv) in h.column(s) {
                    // outside the sector the overlap vanishes by symmetry
                    if let Some((a, j)) = self.lookup[t] {
                        let pa = self.periods[a] as f64;
                        block[(a, b)] += self.phase(j).conj() / pa.sqrt() * hv * amp;
                    }
                }
            }
        }
        let n = block.nrows();
        for i in 0..n {
            block[(i, i)].im = 0.0;
            for j in i + 1..n {
                let v = (block[(i, j)] + block[(j, i)].conj()) * 0.5;
                block[(i, j)] = v;
                block[(j, i)] = v.conj();
            }
        }
        Ok(block)
    }

    /// Full-space state `Σ_a c_a |a⟩`.
    pub fn lift(&self, coefficients: &[Complex64]) -> Result<PureState> {
        if coefficients.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a sector of dimension {}",
                coefficients.len(),
                self.dim()
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << self.n_spins];
        for (a, &c) in coefficients.iter().enumerate() {
            for (s, v) in self.basis_vector(a) {
                amps[s] += c * v;
            }
        }
        PureState::new(self.n_spins, amps)
    }
}
