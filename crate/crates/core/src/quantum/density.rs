use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::state::PureState;
use crate::error::{Error, Result};

/// Tolerance for the Hermiticity check, relative to the largest entry.
const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian operator on subsystem A. Reduced states of unnormalized
/// states have trace `|ψ|²`; use [`DensityOperator::normalized`] for unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "density operator must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let n = matrix.nrows();
        for i in 0..n {
            for j in i..n {
                let diff = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if !diff.is_finite() || diff > HERMITIAN_TOL * scale {
                    return Err(Error::domain(format!(
                        "matrix is not Hermitian at ({i}, {j}): deviation {diff:e}"
                    )));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// Projector onto a normalized copy of `state`.
    pub fn pure(state: &PureState) -> Result<Self> {
        let s = state.clone().normalized()?;
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        Ok(Self {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let t = self.trace();
        if !(t > 0.0) {
            return Err(Error::Degenerate(format!("cannot normalize operator of trace {t}")));
        }
        self.matrix /= Complex64::new(t, 0.0);
        Ok(self)
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted(SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect())
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn check_cut(state: &PureState, n_a: u32) -> Result<(usize, usize)> {
    let n = state.n_qubits();
    if n_a == 0 || n_a > n {
        return Err(Error::Dimension(format!("kept qubits n_a = {n_a} must be in 1..={n}")));
    }
    Ok((1usize << n_a, 1usize << (n - n_a)))
}

/// The `D_A × D_B` amplitude matrix `ψ_{ab}`; A is the leading `n_a` qubits.
fn amplitude_matrix(state: &PureState, n_a: u32) -> Result<DMatrix<Complex64>> {
    let (da, db) = check_cut(state, n_a)?;
    Ok(DMatrix::from_row_slice(da, db, state.amplitudes()))
}

/// `ρ_A = Σ_b ψ_{ab} ψ̄_{a'b}`, keeping the leading `n_a` qubits. Not
/// normalized: `tr ρ_A = |ψ|²`.
pub fn reduced_density_matrix(state: &PureState, n_a: u32) -> Result<DensityOperator> {
    let m = amplitude_matrix(state, n_a)?;
    let mut rho = &m * m.adjoint();
    // Exact Hermiticity; the product is Hermitian only up to rounding.
    let n = rho.nrows();
    for i in 0..n {
        rho[(i, i)].im = 0.0;
        for j in i + 1..n {
            let v = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
            rho[(i, j)] = v;
            rho[(j, i)] = v.conj();
        }
    }
    Ok(DensityOperator { matrix: rho })
}

/// Eigenvalues of `ρ - σ`, increasing.
pub fn difference_eigenvalues(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Vec<f64>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let diff = &rho.matrix - &sigma.matrix;
    Ok(sorted(SymmetricEigen::new(diff).eigenvalues.iter().copied().collect()))
}

/// `(1/2) Σ |λ_i|` over the eigenvalues of `ρ - σ`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(0.5 * difference_eigenvalues(rho, sigma)?.iter().map(|l| l.abs()).sum::<f64>())
}

/// `2^{-1/n} (Σ |λ_i|^n)^{1/n}` over the eigenvalues of `ρ - σ`.
pub fn schatten_distance(rho: &DensityOperator, sigma: &DensityOperator, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("Schatten order must be at least 1"));
    }
    let ev = difference_eigenvalues(rho, sigma)?;
    Ok(schatten_from_spectrum(&ev, n))
}

pub fn schatten_from_spectrum(eigenvalues: &[f64], n: u32) -> f64 {
    if n == 1 {
        return 0.5 * eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    }
    let p = n as f64;
    let norm = eigenvalues.iter().map(|l| l.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    2f64.powf(-1.0 / p) * norm
}

/// Non-trivial eigenvalues of `ρ_A - σ_A` for the reduced states of `psi`
/// and `phi` (as given, without normalization).
///
/// When `2 D_B < D_A` the difference has rank at most `2 D_B`: with
/// `W = [Ψ | Φ] = QR`, `ρ_A - σ_A = Q R J R† Q†` where `J = diag(1, -1)`, so
/// only the small `2 D_B × 2 D_B` matrix `R J R†` is diagonalized.
pub fn difference_spectrum(psi: &PureState, phi: &PureState, n_a: u32) -> Result<Vec<f64>> {
    if psi.n_qubits() != phi.n_qubits() {
        return Err(Error::Dimension(format!(
            "{} vs {} qubits",
            psi.n_qubits(),
            phi.n_qubits()
        )));
    }
    let (da, db) = check_cut(psi, n_a)?;
    if 2 * db >= da {
        return difference_eigenvalues(
            &reduced_density_matrix(psi, n_a)?,
            &reduced_density_matrix(phi, n_a)?,
        );
    }
    let a = amplitude_matrix(psi, n_a)?;
    let b = amplitude_matrix(phi, n_a)?;
    let mut w = DMatrix::<Complex64>::zeros(da, 2 * db);
    w.columns_mut(0, db).copy_from(&a);
    w.columns_mut(db, db).copy_from(&b);
    let r = w.qr().r();
    let mut rj = r.clone();
    rj.columns_mut(db, db).neg_mut();
    let mut small = &rj * r.adjoint();
    let n = small.nrows();
    for i in 0..n {
        small[(i, i)].im = 0.0;
        for j in i + 1..n {
            let v = (small[(i, j)] + small[(j, i)].conj()) * 0.5;
            small[(i, j)] = v;
            small[(j, i)] = v.conj();
        }
    }
    Ok(sorted(SymmetricEigen::new(small).eigenvalues.iter().copied().collect()))
}
