use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quantum::RngStream;

/// Largest Majorana count for the even-parity builder (dimension 2^13).
pub const MAX_MAJORANA: u32 = 28;
/// Largest Majorana count for the full-space builder (dimension 2^12).
pub const MAX_MAJORANA_FULL: u32 = 24;

const PARITY_TOL: f64 = 1e-10;

/// One disorder realization of the SYK model
/// `H = Σ_{i<j<k<l} J_ijkl χ_i χ_j χ_k χ_l` with `⟨J_ijkl²⟩ = 6J²/N³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SykSpec {
    pub n_majorana: u32,
    pub coupling_scale: f64,
    pub realization: RngStream,
}

impl SykSpec {
    /// `J = 2/√N_M`.
    pub fn new(n_majorana: u32, realization: RngStream) -> Result<Self> {
        if n_majorana < 4 || !n_majorana.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "Majorana count must be even and at least 4, got {n_majorana}"
            )));
        }
        Ok(Self {
            n_majorana,
            coupling_scale: 2.0 / (n_majorana as f64).sqrt(),
            realization,
        })
    }

    /// Fermion modes `N_M / 2`.
    pub fn n_modes(&self) -> u32 {
        self.n_majorana / 2
    }

    pub fn coupling_variance(&self) -> f64 {
        6.0 * self.coupling_scale.powi(2) / (self.n_majorana as f64).powi(3)
    }

    /// `(i, j, k, l, J_ijkl)` for `i < j < k < l`, in lexicographic order.
    pub fn couplings(&self) -> Vec<(u32, u32, u32, u32, f64)> {
        let n = self.n_majorana;
        let sd = self.coupling_variance().sqrt();
        let mut rng = self.realization.rng();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let z: f64 = rng.sample(StandardNormal);
                        out.push((i, j, k, l, sd * z));
                    }
                }
            }
        }
        out
    }
}

/// `c · X^x Z^z` on `modes` qubits, mode 0 the most significant bit.
#[derive(Clone, Copy, Debug)]
struct Pauli {
    coeff: Complex64,
    x: usize,
    z: usize,
}

impl Pauli {
    fn mul(self, o: Pauli) -> Pauli {
        let sign = if (self.z & o.x).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        Pauli {
            coeff: self.coeff * o.coeff * sign,
            x: self.x ^ o.x,
            z: self.z ^ o.z,
        }
    }

    /// `(target, amplitude)` with `P|s⟩ = amplitude |target⟩`.
    fn apply(&self, s: usize) -> (usize, Complex64) {
        let sign = if (self.z & s).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        (s ^ self.x, self.coeff * sign)
    }
}

/// Jordan–Wigner Majorana: `χ_{2j} = Z_0⋯Z_{j-1} X_j`, `χ_{2j+1} = Z_0⋯Z_{j-1} Y_j`.
fn majorana_pauli(modes: u32, index: u32) -> Pauli {
    let j = index / 2;
    let bit = 1usize << (modes - 1 - j);
    let string: usize = (0..j).map(|m| 1usize << (modes - 1 - m)).sum();
    if index.is_multiple_of(2) {
        Pauli {
            coeff: Complex64::new(1.0, 0.0),
            x: bit,
            z: string,
        }
    } else {
        // Y = i X Z
        Pauli {
            coeff: Complex64::new(0.0, 1.0),
            x: bit,
            z: string | bit,
        }
    }
}

fn check_majorana(n_majorana: u32, limit: u32) -> Result<()> {
    if n_majorana < 2 || !n_majorana.is_multiple_of(2) {
        return Err(Error::domain(format!("Majorana count must be even, got {n_majorana}")));
    }
    if n_majorana > limit {
        return Err(Error::Size {
            what: "n_majorana",
            value: n_majorana as usize,
            limit: limit as usize,
        });
    }
    Ok(())
}

/// Dense matrix of Majorana `χ_index` on `2^{N_M/2}` states.
pub fn majorana_operator(n_majorana: u32, index: u32) -> Result<DMatrix<Complex64>> {
    check_majorana(n_majorana, MAX_MAJORANA_FULL)?;
    if index >= n_majorana {
        return Err(Error::domain(format!("Majorana index {index} >= {n_majorana}")));
    }
    let modes = n_majorana / 2;
    let dim = 1usize << modes;
    let p = majorana_pauli(modes, index);
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let (t, a) = p.apply(s);
        m[(t, s)] += a;
    }
    Ok(m)
}

/// Fermion parity `Π_j Z_j`: `+1` on basis states of even occupation.
pub fn parity_of(state: usize) -> i32 {
    if state.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn term_paulis(spec: &SykSpec) -> Vec<Pauli> {
    let modes = spec.n_modes();
    spec.couplings()
        .into_iter()
        .map(|(i, j, k, l, c)| {
            let p = majorana_pauli(modes, i)
                .mul(majorana_pauli(modes, j))
                .mul(majorana_pauli(modes, k))
                .mul(majorana_pauli(modes, l));
            Pauli {
                coeff: p.coeff * c,
                ..p
            }
        })
        .collect()
}

fn hermitize(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in i + 1..n {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
}

/// The full `2^{N_M/2}`-dimensional Hamiltonian.
pub fn build_syk_hamiltonian(spec: &SykSpec) -> Result<DMatrix<Complex64>> {
    check_majorana(spec.n_majorana, MAX_MAJORANA_FULL)?;
    let dim = 1usize << spec.n_modes();
    let mut h = DMatrix::zeros(dim, dim);
    for p in term_paulis(spec) {
        for s in 0..dim {
            let (t, a) = p.apply(s);
            h[(t, s)] += a;
        }
    }
    hermitize(&mut h);
    Ok(h)
}

/// Index of full basis state `s` (even occupation) inside the even sector:
/// the last mode is fixed by parity, so the sector is labelled by the
/// occupations of the first `N_M/2 - 1` modes.
pub fn even_sector_index(s: usize) -> usize {
    s >> 1
}

/// Full basis state for even-sector index `r`.
pub fn even_sector_state(r: usize) -> usize {
    (r << 1) | (r.count_ones() as usize & 1)
}

/// The Hamiltonian restricted to the even-parity sector, built directly.
/// Its basis index is the occupation pattern of the first `N_M/2 - 1` modes.
pub fn build_syk_even_sector(spec: &SykSpec) -> Result<DMatrix<Complex64>> {
    check_majorana(spec.n_majorana, MAX_MAJORANA)?;
    let dim = 1usize << (spec.n_modes() - 1);
    let mut h = DMatrix::zeros(dim, dim);
    for p in term_paulis(spec) {
        for r in 0..dim {
            let (t, a) = p.apply(even_sector_state(r));
            h[(even_sector_index(t), r)] += a;
        }
    }
    hermitize(&mut h);
    Ok(h)
}

/// Restriction of a full-space operator to the even-parity sector, ordered
/// as in [`build_syk_even_sector`]. Fails if `h` mixes parities.
pub fn even_parity_sector(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let dim = h.nrows();
    if !h.is_square() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Dimension(format!("{}x{} is not a qubit operator", h.nrows(), h.ncols())));
    }
    let mut violation = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            if parity_of(a) != parity_of(b) {
                violation = violation.max(2.0 * h[(a, b)].norm());
            }
        }
    }
    if violation > PARITY_TOL {
        return Err(Error::ParityViolation(violation));
    }
    let sub = dim / 2;
    Ok(DMatrix::from_fn(sub, sub, |i, j| {
        h[(even_sector_state(i), even_sector_state(j))]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Stats;
    use nalgebra::SymmetricEigen;

    fn spec(n: u32, seed: u64) -> SykSpec {
        SykSpec::new(n, RngStream::new(seed, 0)).unwrap()
    }

    #[test]
    fn clifford_algebra() {
        let n = 8;
        let chi: Vec<_> = (0..n).map(|i| majorana_operator(n, i).unwrap()).collect();
        let id = DMatrix::<Complex64>::identity(16, 16);
        for i in 0..n as usize {
            for j in 0..n as usize {
                let ac = &chi[i] * &chi[j] + &chi[j] * &chi[i];
                let expected = if i == j { &id * Complex64::new(2.0, 0.0) } else { id.clone() * Complex64::new(0.0, 0.0) };
                assert!((ac - expected).camax() < 1e-12, "({i}, {j})");
            }
        }
    }

    #[test]
    fn hermitian_and_parity_preserving() {
        let h = build_syk_hamiltonian(&spec(10, 1)).unwrap();
        assert!((&h - h.adjoint()).camax() < 1e-12);
        let p = DMatrix::<Complex64>::from_fn(32, 32, |i, j| {
            if i == j {
                Complex64::new(parity_of(i) as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!((&h * &p - &p * &h).camax() < 1e-12);
    }

    #[test]
    fn variance_sum_rule() {
        let n = 10;
        let dim = 32.0;
        let values: Vec<f64> = (0..200)
            .map(|r| {
                let h = build_syk_hamiltonian(&spec(n, 100 + r)).unwrap();
                h.iter().map(|z| z.norm_sqr()).sum::<f64>() / dim
            })
            .collect();
        let st = Stats::from_samples(&values).unwrap();
        let s = spec(n, 0);
        let expected = 210.0 * s.coupling_variance();
        assert!((st.mean - expected).abs() < 3.0 * st.stderr, "{st:?} vs {expected}");
        // exact per realization: tr H²/dim = Σ J²
        let h = build_syk_hamiltonian(&s).unwrap();
        let sum_j2: f64 = s.couplings().iter().map(|c| c.4 * c.4).sum();
        assert!((h.iter().map(|z| z.norm_sqr()).sum::<f64>() / dim - sum_j2).abs() < 1e-12);
    }

    #[test]
    fn even_sector_dimensions() {
        assert_eq!(build_syk_even_sector(&spec(14, 2)).unwrap().nrows(), 64);
        assert_eq!(build_syk_even_sector(&spec(18, 2)).unwrap().nrows(), 256);
        assert!(matches!(
            SykSpec::new(30, RngStream::new(0, 0)).map(|s| build_syk_even_sector(&s)),
            Ok(Err(Error::Size { .. }))
        ));
    }

    #[test]
    fn sector_states_have_even_parity() {
        for r in 0..64 {
            let s = even_sector_state(r);
            assert_eq!(parity_of(s), 1);
            assert_eq!(even_sector_index(s), r);
        }
    }

    #[test]
    fn sector_matches_full_restriction_and_spectrum() {
        let s = spec(10, 3);
        let full = build_syk_hamiltonian(&s).unwrap();
        let direct = build_syk_even_sector(&s).unwrap();
        let restricted = even_parity_sector(&full).unwrap();
        assert!((&direct - &restricted).camax() < 1e-14);

        let mut full_ev: Vec<f64> = SymmetricEigen::new(full).eigenvalues.iter().copied().collect();
        let sector_ev: Vec<f64> = SymmetricEigen::new(direct).eigenvalues.iter().copied().collect();
        full_ev.sort_by(f64::total_cmp);
        for e in sector_ev {
            let i = full_ev
                .iter()
                .position(|f| (f - e).abs() < 1e-10)
                .unwrap_or_else(|| panic!("{e} missing from full spectrum"));
            full_ev.remove(i);
        }
    }

    #[test]
    fn parity_violation_detected() {
        let mut m = majorana_operator(6, 0).unwrap();
        assert!(matches!(even_parity_sector(&m), Err(Error::ParityViolation(_))));
        m.fill(Complex64::new(0.0, 0.0));
        assert!(even_parity_sector(&m).is_ok());
    }

    #[test]
    fn couplings_reproducible() {
        assert_eq!(spec(14, 9).couplings(), spec(14, 9).couplings());
        assert_ne!(spec(14, 9).couplings(), spec(14, 10).couplings());
        assert_eq!(spec(14, 9).couplings().len(), 1001);
    }
}
