//! Closed-form averages of subsystem distances between two random pure states,
//! for the structureless Gaussian ensemble and for eigenstates of a conserved
//! subsystem-additive charge.

use std::f64::consts::{LN_2, PI};

use crate::combinatorics::{even_narayana, narayana, to_f64};
use crate::error::{Error, Result};
use crate::special::{cal_f, cal_g, erfc, exp_times_erfc, half_series_coefficient, SeriesControl};

/// Largest qubit count whose Hilbert-space dimension is representable as `f64`.
pub const MAX_QUBITS: u32 = 1000;

/// `N` qubits split into a kept subsystem A (`N_A = N - N_B` qubits) and a
/// traced subsystem B (`N_B` qubits).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n_total: u32,
    n_b: u32,
}

impl Bipartition {
    pub fn new(n_total: u32, n_b: u32) -> Result<Self> {
        if n_total == 0 || n_total > MAX_QUBITS {
            return Err(Error::domain(format!(
                "qubit count must be in 1..={MAX_QUBITS}, got {n_total}"
            )));
        }
        if n_b > n_total {
            return Err(Error::domain(format!(
                "traced qubits N_B = {n_b} exceed N = {n_total}"
            )));
        }
        Ok(Self { n_total, n_b })
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }

    pub fn n_b(&self) -> u32 {
        self.n_b
    }

    pub fn n_a(&self) -> u32 {
        self.n_total - self.n_b
    }

    pub fn dim_a(&self) -> f64 {
        2f64.powi(self.n_a() as i32)
    }

    pub fn dim_b(&self) -> f64 {
        2f64.powi(self.n_b as i32)
    }

    pub fn dim(&self) -> f64 {
        2f64.powi(self.n_total as i32)
    }

    /// Traced fraction `f = N_B / N`.
    pub fn f(&self) -> f64 {
        self.n_b as f64 / self.n_total as f64
    }

    /// `x = D_A / (2 D_B)`.
    pub fn x(&self) -> f64 {
        2f64.powi(self.n_a() as i32 - self.n_b as i32 - 1)
    }

    pub fn is_degenerate(&self) -> bool {
        self.n_b == 0 || self.n_b == self.n_total
    }
}

/// Gaussian charge model: spectral width `gamma` per √qubit and the total
/// charge `q_total`, measured from the peak of the spectral density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargeModel {
    pub gamma: f64,
    pub q_total: f64,
}

impl ChargeModel {
    pub fn new(gamma: f64, q_total: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!("gamma must be positive, got {gamma}")));
        }
        if !q_total.is_finite() {
            return Err(Error::domain("total charge must be finite"));
        }
        Ok(Self { gamma, q_total })
    }

    /// Hamming-weight charge (`q_i ∈ {0, 1}`): binomial sector sizes have
    /// width `√N / 2`, so `γ = 1/2`.
    pub fn hamming(q_total: f64) -> Self {
        Self {
            gamma: 0.5,
            q_total,
        }
    }

    /// `C = γ² ln 2`, the charge offset at which a half-partition block
    /// crosses `x = 1`.
    pub fn crossover_constant(&self) -> f64 {
        self.gamma * self.gamma * LN_2
    }
}

/// Unit-normalized Gaussian spectral density `Ω(Q, N_S)`.
pub fn spectral_density(q: f64, n_qubits: u32, gamma: f64) -> f64 {
    let var = gamma * gamma * n_qubits as f64;
    (-q * q / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// `ln F_S(Q) = ln(D_S Ω(Q, N_S))`.
fn ln_sector_size(q: f64, n_qubits: u32, gamma: f64) -> f64 {
    let var = gamma * gamma * n_qubits as f64;
    n_qubits as f64 * LN_2 - q * q / (2.0 * var) - 0.5 * (2.0 * PI * var).ln()
}

/// Average trace distance of one block with `x = D_A / (2 D_B)`.
fn page_profile(x: f64) -> f64 {
    let value = if x >= 1.0 {
        1.0 - 1.0 / (4.0 * x)
    } else {
        let profile = cal_f(x, SeriesControl::default()).expect("2F1 converges on [0, 1]");
        8.0 * x.sqrt() / (3.0 * PI) * profile
    };
    value.clamp(0.0, 1.0)
}

/// Average trace distance between the reduced states of two random pure
/// states: `1 - 1/(4x)` for `x >= 1`, `(8√x / 3π) 2F1(1/2, -1/2; 5/2; x)`
/// otherwise. Accurate up to `O(1/D)`; at `N_B = N` it reports the
/// `O(1/√D)` value of the unnormalized ensemble rather than zero.
pub fn page_trace_distance(part: Bipartition) -> f64 {
    page_profile(part.x())
}

/// `⟨tr ρ_A^n⟩` from the non-crossing (Narayana) terms:
/// `D^{-n} Σ_k N(n, k) D_A^{n-k+1} D_B^k`.
pub fn page_moment_trace_rho_n(n: u32, part: Bipartition) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("moment order must be at least 1"));
    }
    let (na, nb) = (part.n_a() as i32, part.n_b() as i32);
    let n_i = n as i32;
    (1..=n as usize)
        .map(|k| {
            let k_i = k as i32;
            // D_A^{n-k+1} D_B^k / D^n = 2^{(1-k) N_A + (k-n) N_B}
            narayana(n as usize, k).map(|c| to_f64(&c) * 2f64.powi((1 - k_i) * na + (k_i - n_i) * nb))
        })
        .sum()
}

/// `⟨tr (ρ_A - σ_A)^n⟩` for even `n` from the even-element Narayana terms:
/// `D^{-n} Σ_k 2^k N_e(n, k) D_A^{n-k+1} D_B^k`. Odd moments vanish and are
/// rejected.
pub fn schatten_n_page_average(n: u32, part: Bipartition) -> Result<f64> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "difference moments are defined here for even n >= 2 (odd ones vanish), got {n}"
        )));
    }
    let (na, nb) = (part.n_a() as i32, part.n_b() as i32);
    let n_i = n as i32;
    (1..=(n / 2) as usize)
        .map(|k| {
            let k_i = k as i32;
            even_narayana(n as usize, k)
                .map(|c| to_f64(&c) * 2f64.powi(k_i + (1 - k_i) * na + (k_i - n_i) * nb))
        })
        .sum()
}

/// `⟨D_n^n⟩` with `D_n = 2^{-1/n} ||ρ_A - σ_A||_n`, i.e. half the raw moment.
pub fn schatten_distance_power_average(n: u32, part: Bipartition) -> Result<f64> {
    Ok(schatten_n_page_average(n, part)? / 2.0)
}

/// Charge-refined profile at `Q = 0` for real `(x, f)`: `1 - 1/(4x√(2f))` for
/// `x >= 1`, otherwise `(8√x_f / 3π) G(x_f, f)` with `x_f = x √(f/(1-f))`.
///
/// Fails with a domain error where the `G` series has non-positive radicands
/// (`f < 1/2` on the lower branch) or `x_f > 1`.
pub fn charge_q0_profile(x: f64, f: f64) -> Result<f64> {
    if !(x > 0.0) || !(f > 0.0 && f < 1.0) {
        return Err(Error::domain(format!("charge profile needs x > 0 and 0 < f < 1, got x = {x}, f = {f}")));
    }
    if x >= 1.0 {
        return Ok(1.0 - 1.0 / (4.0 * x * (2.0 * f).sqrt()));
    }
    let xf = x * (f / (1.0 - f)).sqrt();
    let g = cal_g(xf, f, SeriesControl::default())?;
    Ok(8.0 * xf.sqrt() / (3.0 * PI) * g)
}

/// Average trace distance between two random eigenstates of the
/// maximal-weight charge sector (`Q = 0`).
///
/// Degenerate partitions are rejected. Where the `G` series is undefined
/// (lower branch with `f < 1/2`, unreachable for integer qubit counts) the
/// lattice sum of [`charge_general_trace_distance`] with the Hamming model is
/// used instead.
pub fn charge_q0_trace_distance(part: Bipartition) -> Result<f64> {
    if part.n_total() < 2 || part.is_degenerate() {
        return Err(Error::domain(format!(
            "charge formula needs 1 <= N_B <= N - 1, got N = {}, N_B = {}",
            part.n_total(),
            part.n_b()
        )));
    }
    match charge_q0_profile(part.x(), part.f()) {
        Ok(v) => Ok(v.clamp(0.0, 1.0)),
        Err(Error::Domain(_)) => charge_general_trace_distance(part, ChargeModel::hamming(0.0)),
        Err(e) => Err(e),
    }
}

/// Truncation of the charge lattice sums, in standard deviations of the
/// total-charge Gaussian.
const LATTICE_SIGMAS: f64 = 8.0;

/// Average trace distance for eigenstates of total charge `Q` with Gaussian
/// sector sizes `F_S(Q_S) = D_S Ω(Q_S, N_S)`.
///
/// The reduced state is block diagonal in the subsystem charge `Q_A`; each
/// block is a structureless random-state problem with dimensions
/// `F_A(Q_A) × F_B(Q - Q_A)` and weight `F_A F_B`. `Q_A` runs over the unit
/// lattice `j - N_A/2` (the centred Hamming-weight lattice) within
/// `±8γ√N + 1` of the peak, and the weights are normalized by their lattice sum.
pub fn charge_general_trace_distance(part: Bipartition, cm: ChargeModel) -> Result<f64> {
    if part.is_degenerate() {
        return Err(Error::domain(format!(
            "charge formula needs 1 <= N_B <= N - 1, got N = {}, N_B = {}",
            part.n_total(),
            part.n_b()
        )));
    }
    let (na, nb) = (part.n_a(), part.n_b());
    let q = cm.q_total;
    let peak = q * na as f64 / part.n_total() as f64;
    let half_width = LATTICE_SIGMAS * cm.gamma * (part.n_total() as f64).sqrt() + 1.0;
    let offset = na as f64 / 2.0;
    let j_lo = (peak - half_width + offset).floor() as i64;
    let j_hi = (peak + half_width + offset).ceil() as i64;

    let blocks: Vec<(f64, f64)> = (j_lo..=j_hi)
        .map(|j| {
            let qa = j as f64 - offset;
            let ln_fa = ln_sector_size(qa, na, cm.gamma);
            let ln_fb = ln_sector_size(q - qa, nb, cm.gamma);
            (ln_fa + ln_fb, ln_fa - ln_fb - LN_2)
        })
        .collect();
    let ln_max = blocks
        .iter()
        .map(|&(lw, _)| lw)
        .fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for &(ln_w, ln_x) in &blocks {
        let w = (ln_w - ln_max).exp();
        num += w * page_profile(ln_x.exp());
        den += w;
    }
    Ok((num / den).clamp(0.0, 1.0))
}

/// Closed form of the half-partition average at total charge `Q != 0`
/// (continuum version of [`charge_general_trace_distance`]):
///
/// `½ erfc(√(N/2γ²) C/Q) - ¼ e^{Q²/2γ²N} erfc((NC + Q²)/(Q√(2γ²N)))
///  + Σ_k C(1/2,k) C(1,k+3/2) [e^{(k+½)Q²/2γ²N}/2]^{k+½} erfc(((1+2k)Q² - 2NC)/(2Q√(2γ²N)))`
///
/// with `C = γ² ln 2`. Symmetric in `Q`.
pub fn charge_half_partition_closed(n_total: u32, cm: ChargeModel, ctrl: SeriesControl) -> Result<f64> {
    if n_total == 0 || !n_total.is_multiple_of(2) {
        return Err(Error::domain(format!("half partition needs even N, got {n_total}")));
    }
    if cm.q_total == 0.0 {
        return Err(Error::domain(
            "closed half-partition form is singular at Q = 0; use charge_q0_trace_distance",
        ));
    }
    let n = n_total as f64;
    let q = cm.q_total.abs();
    let g2 = cm.gamma * cm.gamma;
    let c = cm.crossover_constant();
    let s = (2.0 * g2 * n).sqrt();
    let q2 = q * q;
    let scale = q2 / (2.0 * g2 * n);

    let mut total = 0.5 * erfc((n / (2.0 * g2)).sqrt() * c / q)
        - 0.25 * exp_times_erfc(scale, (n * c + q2) / (q * s));
    let mut last = f64::NAN;
    for k in 0..ctrl.max_terms {
        let h = k as f64 + 0.5;
        // [e^{h Q²/2γ²N} / 2]^h = exp(h² scale - h ln 2)
        let term = half_series_coefficient(k as u32)
            * exp_times_erfc(h * h * scale - h * LN_2, ((1.0 + 2.0 * k as f64) * q2 - 2.0 * n * c) / (2.0 * q * s));
        total += term;
        last = term;
        if k > 0 && (term == 0.0 || term.abs() < ctrl.rel_tol * total.abs()) {
            return Ok(total);
        }
    }
    Err(Error::NonConvergence {
        max_terms: ctrl.max_terms,
        last_term: last,
        partial_sum: total,
    })
}

/// Optimal single-shot success probability `(1 + D_1) / 2` for telling two
/// equiprobable states apart.
pub fn discrimination_probability(d1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d1) {
        return Err(Error::domain(format!("trace distance must lie in [0, 1], got {d1}")));
    }
    Ok(0.5 * (1.0 + d1))
}
