//! Closed-form large-N predictions for inverse entries and orthogonal polynomial
//! coefficients, the single-zero baselines they are built on, and the two-zero
//! rotation that reduces arbitrary zero pairs to the conjugate case.

use crate::coefficients::{beta_raw_series, gamma_fn};
use crate::error::{Error, Result};
use crate::quad::adaptive;
use crate::symbol::{
    abs_power_coeffs, point_data, symbol_fourier, two_arc_fourier, wrap_angle, FourierMethod, GegenbauerSymbol,
    RationalRegularPart,
};
use crate::toeplitz::{dense_inverse, gs_entry, PredictorPolynomial, ToeplitzSystem, DENSE_CAP};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub k: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub phi_alpha: f64,
    pub phi0: f64,
    pub phi0_prime: f64,
    /// Exponent of the remainder o(k^{β−1}).
    pub beta: f64,
}

pub fn constants(sym: &GegenbauerSymbol) -> AsymptoticConstants {
    let a = sym.alpha;
    let t = sym.theta0;
    let pd = point_data(sym);
    let c0 = sym.chi0();
    let one = C64::new(1.0, 0.0);
    let phi_alpha = ((c0 * c0 - one) / (c0.conj() * c0.conj() - one)).powf(a).arg();
    AsymptoticConstants {
        k: 2f64.powf(1.0 - a) * t.sin().powf(-a) / pd.c1_at_chi0.sqrt(),
        omega: wrap_angle(a * t + pd.phi0 - PI * a / 2.0),
        omega_prime: wrap_angle(phi_alpha + pd.phi0_prime),
        phi_alpha,
        phi0: pd.phi0,
        phi0_prime: pd.phi0_prime,
        beta: if a < 0.0 { a - 0.5 } else { a },
    }
}

/// conj(β₀) = 1/c₁,₁(0): first-column entries are conj(β₀) times the Taylor coefficients of 1/g,
/// while the closed forms describe 1/g itself.
pub fn column_scale(sym: &GegenbauerSymbol) -> f64 {
    1.0 / sym.outer.at_zero()
}

fn check_window(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange(k, n));
    }
    Ok(())
}

/// K cos(kθ₀ + ω) k^{α−1}/Γ(α), the large-k form of the coefficients of 1/g.
pub fn beta_asymptotic(sym: &GegenbauerSymbol, k: usize) -> f64 {
    let c = constants(sym);
    let kf = k as f64;
    c.k / gamma_fn(sym.alpha) * (kf * sym.theta0 + c.omega).cos() * kf.powf(sym.alpha - 1.0)
}

/// Prediction of (T_N⁻¹)_{k+1,1}.
pub fn predict_first_column(sym: &GegenbauerSymbol, k: usize, n: usize) -> Result<f64> {
    check_window(k, n)?;
    let x = k as f64 / n as f64;
    Ok(column_scale(sym) * beta_asymptotic(sym, k) * (1.0 - x).powf(sym.alpha))
}

/// First column of T_N(|χ−1|^{2α})⁻¹.
pub fn single_zero_system(alpha: f64, n: usize) -> ToeplitzSystem {
    ToeplitzSystem::from_coeffs(abs_power_coeffs(alpha, n).into_iter().map(|v| C64::new(v, 0.0)).collect())
}

pub fn single_zero_column(alpha: f64, n: usize) -> Result<Vec<f64>> {
    Ok(single_zero_system(alpha, n).first_column_inverse()?.into_iter().map(|v| v.re).collect())
}

/// Single-zero factor a prediction is built on: solved exactly or taken from its own closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnBaseline {
    Exact(Vec<f64>),
    Formula,
}

impl ColumnBaseline {
    pub fn exact(alpha: f64, n: usize) -> Result<Self> {
        Ok(ColumnBaseline::Exact(single_zero_column(alpha, n)?))
    }
}

pub fn single_zero_column_formula(alpha: f64, k: usize, n: usize) -> f64 {
    let nf = n as f64;
    let x = k as f64 / nf;
    nf.powf(alpha - 1.0) / gamma_fn(alpha) * x.powf(alpha - 1.0) * (1.0 - x).powf(alpha)
}

pub fn predict_first_column_via_baseline(
    sym: &GegenbauerSymbol,
    k: usize,
    n: usize,
    baseline: &ColumnBaseline,
) -> Result<f64> {
    check_window(k, n)?;
    let c = constants(sym);
    let base = match baseline {
        ColumnBaseline::Formula => single_zero_column_formula(sym.alpha, k, n),
        ColumnBaseline::Exact(col) => {
            if col.len() != n + 1 {
                return Err(Error::Domain("baseline column has the wrong order".into()));
            }
            col[k]
        }
    };
    Ok(column_scale(sym) * c.k * (k as f64 * sym.theta0 + c.omega).cos() * base)
}

/// Limit of (T_N⁻¹)_{1,1}, dividing the first column in the monic orthogonal polynomial.
pub fn gegenbauer_normalization(sym: &GegenbauerSymbol) -> f64 {
    column_scale(sym).powi(2)
}

/// Coefficient j of the degree-N orthogonal polynomial (leading coefficient 1), from the
/// first-column prediction at k = N − j.
pub fn predict_gegenbauer_coeff(sym: &GegenbauerSymbol, j: usize, n: usize) -> Result<f64> {
    check_window(j, n)?;
    Ok(predict_first_column(sym, n - j, n)? / gegenbauer_normalization(sym))
}

/// Small-k limit of (T_N⁻¹)_{k+1,1}: conj(β₀)·(Taylor coefficient k of 1/g).
pub fn predict_small_k(sym: &GegenbauerSymbol, k: usize) -> C64 {
    let raw = beta_raw_series(sym, k);
    raw[k] * raw[0].conj()
}

/// K cos(kθ₀ + ω) √(1/k − 1/N) at α = 1/2, evaluated as printed.
pub fn predict_half(sym: &GegenbauerSymbol, k: usize, n: usize) -> Result<f64> {
    if sym.alpha != 0.5 {
        return Err(Error::Domain("half-order prediction needs alpha = 1/2".into()));
    }
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange(k, n));
    }
    let c = constants(sym);
    let v = (1.0 / k as f64 - 1.0 / n as f64).max(0.0).sqrt();
    Ok(column_scale(sym) * c.k * (k as f64 * sym.theta0 + c.omega).cos() * v)
}

pub const KERNEL_DIAGONAL_GAP: f64 = 1e-6;
pub const KERNEL_REL_TOL: f64 = 1e-8;

fn kernel_args(alpha: f64, x: f64, y: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::Domain(format!("kernel needs 0 < alpha <= 1/2, got {alpha}")));
    }
    if !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!("kernel arguments ({x}, {y}) outside (0,1)")));
    }
    if (x - y).abs() < KERNEL_DIAGONAL_GAP {
        return Err(Error::DiagonalSingularity);
    }
    Ok(())
}

/// Integrand in s after t = max(x,y) + s^{1/α}, which absorbs (t − max)^{α−1}.
pub fn kernel_integrand(alpha: f64, x: f64, y: f64) -> (impl Fn(f64) -> f64, f64) {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    let end = (1.0 - hi).powf(alpha);
    let f = move |s: f64| {
        let t = hi + s.powf(1.0 / alpha);
        (t - lo).powf(alpha - 1.0) * t.powf(-2.0 * alpha) / alpha
    };
    (f, end)
}

fn kernel_prefactor(alpha: f64, x: f64, y: f64) -> f64 {
    (x * y).powf(alpha) / gamma_fn(alpha).powi(2)
}

/// G_α(x, y) = x^α y^α/Γ²(α) ∫_{max(x,y)}^1 (t−x)^{α−1}(t−y)^{α−1} t^{−2α} dt.
pub fn kernel_g(alpha: f64, x: f64, y: f64) -> Result<f64> {
    kernel_args(alpha, x, y)?;
    let (f, end) = kernel_integrand(alpha, x, y);
    Ok(kernel_prefactor(alpha, x, y) * adaptive(&f, 0.0, end, KERNEL_REL_TOL)?)
}

/// Midpoint rule with `panels` panels on the substituted integrand.
pub fn kernel_g_midpoint(alpha: f64, x: f64, y: f64, panels: usize) -> Result<f64> {
    kernel_args(alpha, x, y)?;
    let (f, end) = kernel_integrand(alpha, x, y);
    let h = end / panels as f64;
    let sum: f64 = crate::par::map_range(panels.div_ceil(1 << 16), |c| {
        let lo = c << 16;
        let hi = ((c + 1) << 16).min(panels);
        (lo..hi).map(|i| f((i as f64 + 0.5) * h)).sum::<f64>()
    })
    .into_iter()
    .sum();
    Ok(kernel_prefactor(alpha, x, y) * sum * h)
}

/// How many times 1/Γ²(α) enters the single-zero baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaCount {
    Once,
    Twice,
}

pub fn baseline_toepmoinsdeux(alpha: f64, x: f64, y: f64, n: usize) -> Result<f64> {
    baseline_toepmoinsdeux_with(alpha, x, y, n, GammaCount::Once)
}

pub fn baseline_toepmoinsdeux_with(alpha: f64, x: f64, y: f64, n: usize, count: GammaCount) -> Result<f64> {
    if alpha >= 0.5 {
        return Err(Error::Domain("single-zero baseline needs alpha < 1/2".into()));
    }
    let g = kernel_g(alpha, x, y)?;
    let extra = match count {
        GammaCount::Once => 1.0,
        GammaCount::Twice => 1.0 / gamma_fn(alpha).powi(2),
    };
    Ok((n as f64).powf(2.0 * alpha - 1.0) * g * extra)
}

/// Constant in front of cos(θ₀(k−l)) for inverse entries off the first column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryConvention {
    /// |K|².
    AsPrinted,
    /// |K|²/2, the average of cos(kθ₀+ω)cos(lθ₀+ω) over the fast phase.
    CosineAveraged,
}

impl EntryConvention {
    fn factor(self) -> f64 {
        match self {
            EntryConvention::AsPrinted => 1.0,
            EntryConvention::CosineAveraged => 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntryBaseline {
    /// Exact single-zero system through its predictor polynomial.
    Exact(PredictorPolynomial),
    Kernel,
}

impl EntryBaseline {
    pub fn exact(alpha: f64, n: usize) -> Result<Self> {
        let col = single_zero_system(alpha, n).first_column_inverse()?;
        Ok(EntryBaseline::Exact(PredictorPolynomial::from_first_column(&col)))
    }
}

/// Prediction of (T_N⁻¹)_{k+1,l+1}, k ≠ l.
pub fn predict_inverse_entry(
    sym: &GegenbauerSymbol,
    k: usize,
    l: usize,
    n: usize,
    baseline: &EntryBaseline,
    convention: EntryConvention,
) -> Result<f64> {
    if !(sym.alpha > 0.0 && sym.alpha <= 0.5) {
        return Err(Error::Domain("entry prediction needs 0 < alpha <= 1/2".into()));
    }
    if k == l {
        return Err(Error::DiagonalSingularity);
    }
    check_window(k, n)?;
    check_window(l, n)?;
    let c = constants(sym);
    let base = match baseline {
        EntryBaseline::Exact(pred) => {
            if pred.degree() != n {
                return Err(Error::Domain("baseline predictor has the wrong order".into()));
            }
            gs_entry(pred, k, l)?.re
        }
        EntryBaseline::Kernel => {
            let nf = n as f64;
            nf.powf(2.0 * sym.alpha - 1.0) * kernel_g(sym.alpha, k as f64 / nf, l as f64 / nf)?
        }
    };
    let osc = (sym.theta0 * (k as f64 - l as f64)).cos();
    Ok(convention.factor() * c.k * c.k * osc * base)
}

/// Weight |χ−χ₁|^{2α}|χ−χ₂|^{2α}·c(θ − (θ₁+θ₂)/2), the even regular part c carried along
/// with the zero pair.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiSymbol {
    pub alpha: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub regular: RationalRegularPart,
}

impl JacobiSymbol {
    pub fn new(alpha: f64, theta1: f64, theta2: f64, regular: RationalRegularPart) -> Result<Self> {
        if theta1 == theta2 {
            return Err(Error::DegenerateZeros);
        }
        let half = (theta1 - theta2).abs() / 2.0;
        if !(half > 0.0 && half < PI) {
            return Err(Error::Domain(format!("zero separation {half} out of range")));
        }
        let js = JacobiSymbol { alpha, theta1, theta2, regular };
        js.centered()?;
        Ok(js)
    }

    pub fn half_gap(&self) -> f64 {
        (self.theta1 - self.theta2).abs() / 2.0
    }

    pub fn midpoint(&self) -> f64 {
        (self.theta1 + self.theta2) / 2.0
    }

    /// The rotated weight with zeros at e^{±i(θ₁−θ₂)/2}.
    pub fn centered(&self) -> Result<GegenbauerSymbol> {
        GegenbauerSymbol::new(self.alpha, self.half_gap(), self.regular.clone())
    }

    /// ĥ(0..=N) by quadrature directly on the unrotated weight.
    pub fn direct_system(&self, n: usize) -> Result<ToeplitzSystem> {
        let (a, b) = if self.theta1 < self.theta2 { (self.theta1, self.theta2) } else { (self.theta2, self.theta1) };
        let two_alpha = 2.0 * self.alpha;
        let mid = self.midpoint();
        let reg = &self.regular;
        let w = move |theta: f64, da: f64, db: f64| {
            (2.0 * (0.5 * da).sin()).powf(two_alpha) * (2.0 * (0.5 * db).sin()).powf(two_alpha) * reg.eval(theta - mid)
        };
        Ok(ToeplitzSystem::from_coeffs(two_arc_fourier(a, b, &w, n, 1e-13)?))
    }

    /// ĥ(s) = ĥ_centered(s)·e^{−isφ}, φ the midpoint angle.
    pub fn rotated_system(&self, n: usize) -> Result<ToeplitzSystem> {
        let t = symbol_fourier(&self.centered()?, n, FourierMethod::Analytic)?;
        let mid = self.midpoint();
        Ok(ToeplitzSystem::from_coeffs(
            t.coeffs.iter().enumerate().map(|(s, c)| c * C64::from_polar(1.0, -(s as f64) * mid)).collect(),
        ))
    }
}

#[derive(Debug, Clone)]
pub struct JacobiCheck {
    pub direct: DMatrix<C64>,
    pub conjugated: DMatrix<C64>,
    pub max_diff: f64,
}

/// Exact inverse for the zero pair against D T_c⁻¹ D⁻¹, D = diag(e^{ijφ}), T_c the centered system.
pub fn jacobi_conjugation(js: &JacobiSymbol, n: usize) -> Result<JacobiCheck> {
    let centered = dense_inverse(&crate::toeplitz::build_system(&js.centered()?, n)?, DENSE_CAP)?;
    let direct = dense_inverse(&js.direct_system(n)?, DENSE_CAP)?;
    let mid = js.midpoint();
    let conjugated = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        centered[(i, j)] * C64::from_polar(1.0, (i as f64 - j as f64) * mid)
    });
    let max_diff = (&direct - &conjugated).iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(JacobiCheck { direct, conjugated, max_diff })
}

/// Coefficient j of the monic orthogonal polynomial for the zero pair:
/// conj((χ₁χ₂)^{1/2})^{N−j} times the centered prediction.
pub fn predict_jacobi_coeff(js: &JacobiSymbol, j: usize, n: usize) -> Result<C64> {
    let base = predict_gegenbauer_coeff(&js.centered()?, j, n)?;
    Ok(C64::from_polar(base, -((n - j) as f64) * js.midpoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::beta_tilde;
    use crate::envelope::fit_fn;
    use crate::toeplitz::{build_system, orthogonal};

    fn five_four() -> RationalRegularPart {
        RationalRegularPart::new(&[2.0, 1.0], &[1.0]).unwrap()
    }

    #[test]
    fn constants_examples() {
        for a in [0.25, -0.25, 0.4] {
            let c = constants(&GegenbauerSymbol::plain(a, PI / 2.0).unwrap());
            assert!((c.k - 2f64.powf(1.0 - a)).abs() < 1e-14);
            assert!(c.omega.abs() < 1e-14);
            assert_eq!(c.phi0, 0.0);
        }
        let c = constants(&GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap());
        let k = 2f64.powf(0.75) * (3f64.sqrt() / 2.0).powf(-0.25);
        assert!((c.k - k).abs() < 1e-14);
        assert!((c.omega - (0.25 * PI / 3.0 - PI / 8.0)).abs() < 1e-14);
        assert_eq!(c.beta, 0.25);
        let d = constants(&GegenbauerSymbol::new(0.25, PI / 3.0, five_four()).unwrap());
        assert!((d.k - k / 7f64.sqrt()).abs() < 1e-13);
        assert_eq!(constants(&GegenbauerSymbol::plain(-0.25, 1.0).unwrap()).beta, -0.75);
    }

    #[test]
    fn beta_envelope_matches_constants() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        let b = beta_raw_series(&sym, 4200);
        let c = constants(&sym);
        let k0 = 4000usize;
        let env = fit_fn(k0, sym.theta0, 0, 4200, &|k| b[k].re * (k as f64).powf(0.75));
        let want = c.k / gamma_fn(0.25);
        assert!((env.amplitude / want - 1.0).abs() < 0.01, "{} {want}", env.amplitude);
        assert!((wrap_angle(env.phase - c.omega)).abs() < 0.02);
    }

    #[test]
    fn first_column_closed_form() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        for k in [100usize, 777, 1500] {
            let a = predict_first_column(&sym, k, 2048).unwrap();
            let b = predict_first_column_via_baseline(&sym, k, 2048, &ColumnBaseline::Formula).unwrap();
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
        }
        // N^{α−1} scaling at fixed x
        let s = GegenbauerSymbol::plain(0.25, PI / 2.0).unwrap();
        let r = predict_first_column(&s, 8, 16).unwrap() / predict_first_column(&s, 16, 32).unwrap();
        let c = constants(&s);
        let ph = (8.0 * PI / 2.0 + c.omega).cos() / (16.0 * PI / 2.0 + c.omega).cos();
        assert!((r / ph - 2f64.powf(0.75)).abs() < 1e-12);
        assert!(predict_first_column(&sym, 0, 10).is_err());
    }

    #[test]
    fn exact_baseline_beats_formula() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        let n = 2048;
        let exact = build_system(&sym, n).unwrap().first_column_inverse().unwrap();
        let base = ColumnBaseline::exact(0.25, n).unwrap();
        let k0 = 1024;
        let env_true = fit_fn(k0, sym.theta0, 1, n, &|k| exact[k].re);
        let e_exact = fit_fn(k0, sym.theta0, 1, n, &|k| predict_first_column_via_baseline(&sym, k, n, &base).unwrap());
        let e_form = fit_fn(k0, sym.theta0, 1, n, &|k| predict_first_column(&sym, k, n).unwrap());
        let r1 = (env_true.amplitude / e_exact.amplitude - 1.0).abs();
        let r2 = (env_true.amplitude / e_form.amplitude - 1.0).abs();
        assert!(r1 < 0.1 && r1 < r2, "{r1} {r2}");
    }

    #[test]
    fn gegenbauer_from_first_column() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        let n = 2048;
        let poly = orthogonal(&build_system(&sym, n).unwrap()).unwrap();
        let j0 = 1024;
        let exact = fit_fn(j0, sym.theta0, 1, n, &|j| poly.coeffs[j].re);
        let pred = fit_fn(j0, sym.theta0, 1, n, &|j| predict_gegenbauer_coeff(&sym, j, n).unwrap());
        assert!((exact.amplitude / pred.amplitude - 1.0).abs() < 0.1);
        let a = predict_gegenbauer_coeff(&sym, 300, n).unwrap();
        let b = predict_first_column(&sym, n - 300, n).unwrap();
        assert!((a.abs() - b.abs() / gegenbauer_normalization(&sym)).abs() < 1e-15);
    }

    #[test]
    fn small_k_limits() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        assert!((predict_small_k(&sym, 0) - 1.0).norm() < 1e-15);
        let b1 = predict_small_k(&sym, 1);
        assert!((b1.re - 2.0 * beta_tilde(0.25, 1) * (PI / 3.0).cos()).abs() < 1e-14);
        let col = build_system(&sym, 2048).unwrap().first_column_inverse().unwrap();
        assert!((col[1] - b1).norm() < 5e-3);
    }

    #[test]
    fn half_order_edges() {
        let sym = GegenbauerSymbol::plain(0.5, PI / 2.0).unwrap();
        assert_eq!(predict_half(&sym, 64, 64).unwrap(), 0.0);
        let c = constants(&sym);
        let k = 7usize;
        let lim = c.k * (k as f64 * PI / 2.0 + c.omega).cos() / (k as f64).sqrt();
        assert!((predict_half(&sym, k, 1 << 40).unwrap() - lim).abs() < 1e-6);
        assert!(predict_half(&GegenbauerSymbol::plain(0.25, 1.0).unwrap(), 3, 10).is_err());
    }

    #[test]
    fn kernel_properties() {
        let a = kernel_g(0.25, 0.25, 0.5).unwrap();
        let b = kernel_g(0.25, 0.5, 0.25).unwrap();
        assert!((a - b).abs() < 1e-10 * a.abs());
        let brute = kernel_g_midpoint(0.25, 0.25, 0.5, 10_000_000).unwrap();
        assert!((a - brute).abs() < 1e-6, "{a} {brute}");
        assert!(kernel_g(0.25, 0.3, 1.0 - 1e-9).unwrap().abs() < 1e-2);
        assert!(matches!(kernel_g(0.25, 0.3, 0.3), Err(Error::DiagonalSingularity)));
        assert!(matches!(kernel_g(0.25, 0.3, 1.2), Err(Error::Domain(_))));
        let r = baseline_toepmoinsdeux(0.25, 0.25, 0.5, 2048).unwrap() / baseline_toepmoinsdeux(0.25, 0.25, 0.5, 1024).unwrap();
        assert!((r - 2f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn kernel_baseline_matches_single_zero_entries() {
        let n = 2048;
        let base = EntryBaseline::exact(0.25, n).unwrap();
        let EntryBaseline::Exact(pred) = &base else { unreachable!() };
        let exact = gs_entry(pred, 512, 1024).unwrap().re;
        let k = baseline_toepmoinsdeux(0.25, 0.25, 0.5, n).unwrap();
        assert!((exact / k - 1.0).abs() < 0.15, "{exact} {k}");
        let twice = baseline_toepmoinsdeux_with(0.25, 0.25, 0.5, n, GammaCount::Twice).unwrap();
        assert!((exact / twice - 1.0).abs() > 0.15);
    }

    #[test]
    fn inverse_entry_cosine_node() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 2.0).unwrap();
        let v = predict_inverse_entry(&sym, 10, 11, 64, &EntryBaseline::Kernel, EntryConvention::AsPrinted).unwrap();
        assert!(v.abs() < 1e-15);
        assert!(matches!(
            predict_inverse_entry(&sym, 10, 10, 64, &EntryBaseline::Kernel, EntryConvention::AsPrinted),
            Err(Error::DiagonalSingularity)
        ));
    }

    #[test]
    fn jacobi_reduces_to_centered() {
        let js = JacobiSymbol::new(0.25, PI / 3.0, -PI / 3.0, RationalRegularPart::one()).unwrap();
        let chk = jacobi_conjugation(&js, 16).unwrap();
        assert!(chk.max_diff < 1e-10);
        assert!(matches!(JacobiSymbol::new(0.25, 1.0, 1.0, RationalRegularPart::one()), Err(Error::DegenerateZeros)));
    }

    #[test]
    fn jacobi_conjugation_general_pair() {
        let js = JacobiSymbol::new(0.25, PI / 2.0, PI / 6.0, RationalRegularPart::one()).unwrap();
        let chk = jacobi_conjugation(&js, 64).unwrap();
        assert!(chk.max_diff < 1e-8, "{}", chk.max_diff);
        let g = predict_gegenbauer_coeff(&js.centered().unwrap(), 20, 64).unwrap();
        assert!((predict_jacobi_coeff(&js, 20, 64).unwrap().norm() - g.abs()).abs() < 1e-15);
        // modulation of the exact coefficients
        let rot = orthogonal(&js.rotated_system(64).unwrap()).unwrap();
        let cen = orthogonal(&build_system(&js.centered().unwrap(), 64).unwrap()).unwrap();
        for j in [5usize, 20, 40] {
            let want = cen.coeffs[j] * C64::from_polar(1.0, -((64 - j) as f64) * js.midpoint());
            assert!((rot.coeffs[j] - want).norm() < 1e-10);
        }
    }
}
