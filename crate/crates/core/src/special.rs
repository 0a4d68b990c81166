//! Real special functions behind the closed-form predictions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Truncation control for the hypergeometric-type series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`. Poles give `(+inf, 1.0)`.
pub fn ln_gamma_sign(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1.0);
    }
    if x < 0.5 {
        // reflection: Γ(x) Γ(1 - x) = π / sin(πx)
        let s = (PI * x).sin();
        let (lg, sg) = ln_gamma_sign(1.0 - x);
        return ((PI / s.abs()).ln() - lg, sg * s.signum());
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln(),
        1.0,
    )
}

pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_sign(x).0
}

pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    let (lg, sg) = ln_gamma_sign(x);
    sg * lg.exp()
}

/// `a (a-1) ... (a-k+1) / k!` for real `a`.
pub fn generalized_binomial(a: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (a - i as f64) / (i + 1) as f64;
    }
    acc
}

/// `C(a, b) = Γ(a+1) / (Γ(b+1) Γ(a-b+1))` for real arguments, e.g. the
/// half-integer lower index in `C(1, k + 3/2)`. A pole in the denominator
/// yields zero.
pub fn binomial_real(a: f64, b: f64) -> f64 {
    if is_nonpositive_integer(b + 1.0) || is_nonpositive_integer(a - b + 1.0) {
        return 0.0;
    }
    if is_nonpositive_integer(a + 1.0) {
        return f64::NAN;
    }
    let (la, sa) = ln_gamma_sign(a + 1.0);
    let (lb, sb) = ln_gamma_sign(b + 1.0);
    let (lc, sc) = ln_gamma_sign(a - b + 1.0);
    sa * sb * sc * (la - lb - lc).exp()
}

/// Gauss hypergeometric series `2F1(a, b; c; x)` on `|x| <= 1`.
///
/// Summation stops once a term drops below `rel_tol` times the partial sum,
/// or immediately when the series terminates.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64, ctrl: SeriesControl) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("2F1 undefined for c = {c}")));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("2F1 series needs |x| <= 1, got {x}")));
    }
    if x.abs() == 1.0 && !(c - a - b > 0.0) && !is_nonpositive_integer(a) && !is_nonpositive_integer(b) {
        return Err(Error::domain(format!(
            "2F1 series diverges at |x| = 1 with c - a - b = {}",
            c - a - b
        )));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..ctrl.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() < ctrl.rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        max_terms: ctrl.max_terms,
        last_term: term,
        partial_sum: sum,
    })
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
/// Below this argument erfc comes from the positive-term erf series,
/// above it from the continued fraction.
const ERFC_SWITCH: f64 = 2.0;

/// erf(x) for moderate |x| from `erf x = (2/√π) e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!`,
/// whose terms are all positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// Scaled complement `e^{x²} erfc(x)` for `x >= ERFC_SWITCH` via the Laplace
/// continued fraction `1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`, evaluated
/// with the modified Lentz method.
fn erfcx_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for m in 1..5000 {
        let a = m as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * std::f64::consts::PI.sqrt())
}

/// Complementary error function `(2/√π) ∫_x^∞ e^{-t²} dt`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < ERFC_SWITCH {
        1.0 - erf_series(x)
    } else if x > 27.3 {
        0.0
    } else {
        (-x * x).exp() * erfcx_continued_fraction(x)
    }
}

/// Scaled complementary error function `e^{x²} erfc(x)`, finite for large x.
pub fn erfcx(x: f64) -> f64 {
    if x < ERFC_SWITCH {
        (x * x).exp() * erfc(x)
    } else {
        erfcx_continued_fraction(x)
    }
}

/// `e^{a} erfc(u)` without intermediate overflow.
pub fn exp_times_erfc(a: f64, u: f64) -> f64 {
    if u > 0.0 {
        (a - u * u).exp() * erfcx(u)
    } else {
        a.exp() * erfc(u)
    }
}

/// `2F1(1/2, -1/2; 5/2; x)`, the profile function of the random-state
/// trace distance below the transition.
pub fn cal_f(x: f64, ctrl: SeriesControl) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("cal_f needs 0 <= x <= 1, got {x}")));
    }
    hyp2f1(0.5, -0.5, 2.5, x, ctrl)
}

/// `C(1/2, k) C(1, k + 3/2)`, the coefficient shared by the charge series and
/// the half-partition closed form.
pub fn half_series_coefficient(k: u32) -> f64 {
    generalized_binomial(0.5, k) * binomial_real(1.0, k as f64 + 1.5)
}

/// The charge-refined profile `(3π/4) Σ_k c_k x^k C(1/2, k) C(1, k + 3/2)`,
/// `c_k = ((1 + 2k) f + 1/2 - k)^{-1/2}`.
///
/// Every radicand is at least one for `f >= 1/2`; a non-positive radicand is
/// reported as a domain error.
pub fn cal_g(x: f64, f: f64, ctrl: SeriesControl) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("cal_g needs 0 <= x <= 1, got {x}")));
    }
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::domain(format!("cal_g needs 0 <= f <= 1, got {f}")));
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut last = f64::NAN;
    for k in 0..ctrl.max_terms {
        let kf = k as f64;
        let radicand = (1.0 + 2.0 * kf) * f + 0.5 - kf;
        if radicand <= 0.0 {
            return Err(Error::domain(format!(
                "cal_g radicand {radicand} <= 0 at k = {k} (f = {f})"
            )));
        }
        let term = power * half_series_coefficient(k as u32) / radicand.sqrt();
        sum += term;
        last = term;
        if term == 0.0 || (k > 0 && term.abs() < ctrl.rel_tol * sum.abs()) {
            return Ok(0.75 * PI * sum);
        }
        power *= x;
    }
    Err(Error::NonConvergence {
        max_terms: ctrl.max_terms,
        last_term: last,
        partial_sum: 0.75 * PI * sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Composite Simpson quadrature of `(2/√π) e^{-t²}` on `[x, x + 12]`.
    fn erfc_quadrature(x: f64) -> f64 {
        let (a, b) = (x, x + 12.0);
        let n = 200_000;
        let h = (b - a) / n as f64;
        let g = |t: f64| (-t * t).exp();
        let mut s = g(a) + g(b);
        for i in 1..n {
            let t = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 * g(t) } else { 2.0 * g(t) };
        }
        FRAC_2_SQRT_PI * s * h / 3.0
    }

    #[test]
    fn gamma_known_values() {
        assert!(close(gamma(0.5), PI.sqrt(), 1e-14));
        assert!(close(gamma(5.0), 24.0, 1e-12));
        assert!(close(gamma(-0.5), -2.0 * PI.sqrt(), 1e-13));
        assert!(close(ln_gamma(100.0), 359.134_205_369_575_4, 1e-9));
        assert!(gamma(-2.0).is_nan());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(generalized_binomial(0.5, 0), 1.0);
        assert!(close(generalized_binomial(0.5, 2), -0.125, 1e-16));
        assert!(close(generalized_binomial(7.0, 3), 35.0, 1e-12));
        assert!(close(binomial_real(7.0, 3.0), 35.0, 1e-10));
        assert_eq!(generalized_binomial(3.0, 5), 0.0);
        assert_eq!(binomial_real(3.0, 5.0), 0.0);
    }

    #[test]
    fn half_integer_binomial_closed_form() {
        // Γ(1/2 - k) Γ(1/2 + k) = (-1)^k π gives C(1, k + 3/2) = (-1)^k / (π (k + 1/2)(k + 3/2)).
        for k in 0..40u32 {
            let kf = k as f64;
            let exact = if k % 2 == 0 { 1.0 } else { -1.0 } / (PI * (kf + 0.5) * (kf + 1.5));
            let got = binomial_real(1.0, kf + 1.5);
            assert!(close(got, exact, 1e-13 * exact.abs()), "k = {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn hyp2f1_examples() {
        let ctrl = SeriesControl::default();
        assert_eq!(hyp2f1(0.5, -0.5, 2.5, 0.0, ctrl).unwrap(), 1.0);
        let gauss = 9.0 * PI / 32.0;
        assert!(close(hyp2f1(0.5, -0.5, 2.5, 1.0, ctrl).unwrap(), gauss, 1e-9));
        for &x in &[0.0, 0.3, 0.77, 1.0] {
            let v = hyp2f1(0.5, -1.0, 2.0, x, ctrl).unwrap();
            assert!(close(v, 1.0 - x / 4.0, 1e-14));
        }
        assert!(hyp2f1(1.0, 1.0, 0.0, 0.5, ctrl).is_err());
        assert!(hyp2f1(1.0, 1.0, 1.5, 1.0, ctrl).is_err());
        let tight = SeriesControl::new(1e-12, 5).unwrap();
        assert!(matches!(
            hyp2f1(0.5, -0.5, 2.5, 1.0, tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn hyp2f1_gauss_summation_other_parameters() {
        // Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))
        let (a, b, c) = (0.3, -0.7, 3.1);
        let exact = gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
        let got = hyp2f1(a, b, c, 1.0, SeriesControl::default()).unwrap();
        assert!(close(got, exact, 1e-9), "{got} vs {exact}");
    }

    #[test]
    fn terminating_series_match_polynomials() {
        let ctrl = SeriesControl::default();
        // 2F1(-3, b; c; x) = 1 - 3bx/c + 3b(b+1)x²/(c(c+1)) - b(b+1)(b+2)x³/(c(c+1)(c+2))
        let (b, c) = (0.75, 1.25);
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            let poly = 1.0 - 3.0 * b * x / c + 3.0 * b * (b + 1.0) * x * x / (c * (c + 1.0))
                - b * (b + 1.0) * (b + 2.0) * x.powi(3) / (c * (c + 1.0) * (c + 2.0));
            assert!(close(hyp2f1(-3.0, b, c, x, ctrl).unwrap(), poly, 1e-14));
        }
    }

    #[test]
    fn erfc_examples() {
        assert_eq!(erfc(0.0), 1.0);
        assert!(close(erfc(1.0), 0.157_299_207_050_285_13, 1e-15));
        assert!(erfc(40.0) == 0.0);
        assert!(close(erfc(-40.0), 2.0, 0.0));
        assert!(close(erfc(1.0), erfc_quadrature(1.0), 1e-13));
    }

    #[test]
    fn erfc_against_quadrature_grid() {
        let mut x = -6.0;
        while x <= 6.0 {
            let q = if x >= 0.0 {
                erfc_quadrature(x)
            } else {
                2.0 - erfc_quadrature(-x)
            };
            assert!(close(erfc(x), q, 1e-12), "x = {x}: {} vs {q}", erfc(x));
            x += 0.125;
        }
    }

    #[test]
    fn erfc_reference_values() {
        // high-precision reference values
        let table = [
            (0.5, 0.479_500_122_186_953_5),
            (1.999, 0.004_698_443_348_629_487),
            (2.0, 0.004_677_734_981_047_266),
            (3.0, 2.209_049_699_858_544e-5),
            (5.0, 1.537_459_794_428_034_8e-12),
            (10.0, 2.088_487_583_762_545e-45),
        ];
        for (x, v) in table {
            let got = erfc(x);
            assert!(close(got, v, 1e-15f64.max(2e-13 * v)), "x = {x}: {got} vs {v}");
        }
    }

    #[test]
    fn erfcx_large_argument() {
        // e^{x²} erfc(x) ~ 1/(x√π) (1 - 1/(2x²) + 3/(4x⁴))
        let x: f64 = 1e3;
        let asym = 1.0 / (x * PI.sqrt()) * (1.0 - 0.5 / (x * x) + 0.75 / x.powi(4));
        assert!(close(erfcx(x), asym, 1e-15));
        assert!(close(exp_times_erfc(1e4, 200.0), (1e4 - 4e4f64).exp() * erfcx(200.0), 0.0));
    }

    #[test]
    fn cal_f_examples() {
        let ctrl = SeriesControl::default();
        assert_eq!(cal_f(0.0, ctrl).unwrap(), 1.0);
        assert!(close(cal_f(1.0, ctrl).unwrap(), 9.0 * PI / 32.0, 1e-9));
        let half = 8.0 * 0.5f64.sqrt() / (3.0 * PI) * cal_f(0.5, ctrl).unwrap();
        assert!(close(half, (4.0 + PI) / (4.0 * PI), 1e-12));
        assert!(cal_f(1.5, ctrl).is_err());
    }

    #[test]
    fn cal_f_decreasing() {
        let ctrl = SeriesControl::default();
        let vals: Vec<f64> = (0..=50).map(|i| cal_f(i as f64 / 50.0, ctrl).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn cal_g_examples() {
        let ctrl = SeriesControl::default();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let g = cal_g(x, 0.5, ctrl).unwrap();
            let f = cal_f(x, ctrl).unwrap();
            assert!(close(g, f, 1e-12), "x = {x}: {g} vs {f}");
        }
        for &f in &[0.5, 0.7, 0.9, 1.0] {
            let k0 = 0.75 * PI * binomial_real(1.0, 1.5) / (f + 0.5f64).sqrt();
            assert!(close(cal_g(0.0, f, ctrl).unwrap(), k0, 1e-15));
        }
        assert!(cal_g(1.0, 1.0, ctrl).unwrap().is_finite());
        // radicand f + 1/2 - k(1 - 2f) turns negative for f < 1/2
        assert!(matches!(cal_g(0.9, 0.3, ctrl), Err(Error::Domain(_))));
    }
}
