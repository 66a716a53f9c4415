//! Finite sections T_N(h), (T_N)_{i,j} = ĥ(j − i): Levinson recursion, predictor and
//! orthogonal polynomials, Gohberg–Semencul reconstruction and a dense oracle.

use crate::error::{Error, Result};
use crate::symbol::{symbol_fourier, FourierMethod, GegenbauerSymbol};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

pub const REFLECTION_GUARD: f64 = 1.0 - 1e-12;
pub const DENSE_CAP: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSystem {
    /// ĥ(0..=N).
    coeffs: Vec<C64>,
}

impl ToeplitzSystem {
    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty());
        ToeplitzSystem { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// ĥ(s) for |s| ≤ N.
    pub fn fourier(&self, s: i64) -> C64 {
        if s >= 0 {
            self.coeffs[s as usize]
        } else {
            self.coeffs[(-s) as usize].conj()
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.fourier(j as i64 - i as i64)
    }

    pub fn dense(&self) -> DMatrix<C64> {
        let n = self.order() + 1;
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// Column x with T_N x = e₁ by the Hermitian Levinson–Durbin recursion.
    pub fn first_column_inverse(&self) -> Result<Vec<C64>> {
        let n = self.order();
        let c = &self.coeffs;
        let mut e = c[0].re;
        if !(e > 0.0) {
            return Err(Error::NotPositiveDefinite { order: 0, modulus: f64::NAN });
        }
        let mut a = vec![C64::new(1.0, 0.0)];
        for m in 0..n {
            let delta: C64 = (0..=m).map(|j| c[m + 1 - j].conj() * a[j]).sum();
            let kappa = delta / e;
            if !(kappa.norm() < REFLECTION_GUARD) {
                return Err(Error::NotPositiveDefinite { order: m + 1, modulus: kappa.norm() });
            }
            let mut next = a.clone();
            next.push(C64::new(0.0, 0.0));
            for j in 1..=m + 1 {
                next[j] -= kappa * a[m + 1 - j].conj();
            }
            a = next;
            e *= 1.0 - kappa.norm_sqr();
        }
        Ok(a.into_iter().map(|v| v / e).collect())
    }
}

pub fn build_system(sym: &GegenbauerSymbol, n: usize) -> Result<ToeplitzSystem> {
    let t = symbol_fourier(sym, n, FourierMethod::Analytic)?;
    Ok(ToeplitzSystem::from_coeffs(t.coeffs))
}

/// As `build_system`, additionally requiring the quadrature coefficients to agree to 1e-8.
pub fn build_system_verified(sym: &GegenbauerSymbol, n: usize) -> Result<ToeplitzSystem> {
    let a = symbol_fourier(sym, n, FourierMethod::Analytic)?;
    let q = symbol_fourier(sym, n, FourierMethod::Quadrature)?;
    let d = a.max_diff(&q);
    if d > 1e-8 {
        return Err(Error::NoConvergence(format!("Fourier methods disagree by {d:e}")));
    }
    Ok(ToeplitzSystem::from_coeffs(a.coeffs))
}

/// P_N = Φ*_N·√((T_N⁻¹)_{1,1}); coefficients are the first column divided by its root.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorPolynomial {
    pub coeffs: Vec<C64>,
    pub inv_11: f64,
}

/// Monic Φ_N, Φ*_N(z) = z^N conj(Φ_N(1/z̄)).
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalPolynomial {
    pub coeffs: Vec<C64>,
}

impl PredictorPolynomial {
    pub fn from_first_column(col: &[C64]) -> Self {
        let inv_11 = col[0].re;
        let r = inv_11.sqrt();
        PredictorPolynomial { coeffs: col.iter().map(|v| v / r).collect(), inv_11 }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Φ_N with coefficient j equal to conj(δ_{N−j}) / δ₀.
    pub fn orthogonal(&self) -> OrthogonalPolynomial {
        let n = self.degree();
        let d0 = self.coeffs[0].re;
        OrthogonalPolynomial { coeffs: (0..=n).map(|j| self.coeffs[n - j].conj() / d0).collect() }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Number of zeros inside the unit disk, by the argument principle on a fine grid.
    pub fn zeros_in_disk(&self) -> i64 {
        let m = (64 * (self.degree() + 1)).next_power_of_two();
        let vals = circle_values(&self.coeffs, m);
        let mut turn = 0.0;
        for i in 0..m {
            turn += (vals[(i + 1) % m] / vals[i]).arg();
        }
        (turn / (2.0 * std::f64::consts::PI)).round() as i64
    }
}

impl OrthogonalPolynomial {
    /// Conjugate reversal giving Φ*_N.
    pub fn reversed(&self) -> Vec<C64> {
        self.coeffs.iter().rev().map(|c| c.conj()).collect()
    }
}

pub fn predictor(sys: &ToeplitzSystem) -> Result<PredictorPolynomial> {
    Ok(PredictorPolynomial::from_first_column(&sys.first_column_inverse()?))
}

pub fn orthogonal(sys: &ToeplitzSystem) -> Result<OrthogonalPolynomial> {
    Ok(predictor(sys)?.orthogonal())
}

/// Values of Σ c_k z^k at the m-th roots of unity e^{2πij/m}.
fn circle_values(coeffs: &[C64], m: usize) -> Vec<C64> {
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for (k, c) in coeffs.iter().enumerate() {
        buf[k % m] += c;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    buf
}

/// Fourier coefficients of 1/|P_N|² for |s| ≤ N against ĥ(s); returns the largest deviation.
pub fn verify_polpred(pred: &PredictorPolynomial, sys: &ToeplitzSystem) -> Result<f64> {
    let n = pred.degree().min(sys.order());
    let mut m = (8 * (pred.degree() + 1)).next_power_of_two();
    let mut prev: Option<Vec<C64>> = None;
    loop {
        let vals = circle_values(&pred.coeffs, m);
        let mut buf: Vec<C64> = vals.iter().map(|v| C64::new(1.0 / v.norm_sqr(), 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let coef: Vec<C64> = buf[..=n].iter().map(|c| c / m as f64).collect();
        if let Some(p) = &prev {
            let change = p.iter().zip(&coef).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if change < 1e-14 {
                let err = (0..=n)
                    .map(|s| (coef[s] - sys.fourier(s as i64)).norm())
                    .fold(0.0, f64::max);
                return Ok(err);
            }
        }
        if m >= 1 << 24 {
            return Err(Error::NoConvergence("polynomial quadrature grid".into()));
        }
        prev = Some(coef);
        m *= 2;
    }
}

/// Inverse entry (k, l), 0-based, from the predictor coefficients δ:
/// Σ_{u≤k} δ_{k−u} conj(δ_{l−u}) − Σ_{u≤k} conj(δ_{N+1−k+u}) δ_{N+1−l+u}, with δ_{N+1} = 0.
pub fn gs_entry(pred: &PredictorPolynomial, k: usize, l: usize) -> Result<C64> {
    let n = pred.degree();
    if k > n || l > n {
        return Err(Error::IndexOutOfRange(k, l));
    }
    if k > l {
        return Ok(gs_entry(pred, l, k)?.conj());
    }
    let d = &pred.coeffs;
    let tail = |m: usize| if m == n + 1 { C64::new(0.0, 0.0) } else { d[m] };
    let mut acc = C64::new(0.0, 0.0);
    for u in 0..=k {
        acc += d[k - u] * d[l - u].conj();
        acc -= tail(n + 1 - k + u).conj() * tail(n + 1 - l + u);
    }
    Ok(acc)
}

fn lu_solve_refined(m: &DMatrix<C64>, rhs: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let lu = m.clone().lu();
    let mut x = lu.solve(rhs).ok_or(Error::SingularMatrix)?;
    let r = rhs - m * &x;
    x += lu.solve(&r).ok_or(Error::SingularMatrix)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix);
    }
    Ok(x)
}

pub fn dense_inverse(sys: &ToeplitzSystem, cap: usize) -> Result<DMatrix<C64>> {
    let n = sys.order() + 1;
    if sys.order() > cap {
        return Err(Error::Domain(format!("order {} above dense cap {cap}", sys.order())));
    }
    lu_solve_refined(&sys.dense(), &DMatrix::identity(n, n))
}

pub fn dense_inverse_entry(sys: &ToeplitzSystem, k: usize, l: usize) -> Result<C64> {
    let n = sys.order();
    if k > n || l > n {
        return Err(Error::IndexOutOfRange(k, l));
    }
    if n > DENSE_CAP {
        return Err(Error::Domain(format!("order {n} above dense cap {DENSE_CAP}")));
    }
    let mut e = DVector::zeros(n + 1);
    e[l] = C64::new(1.0, 0.0);
    let x = lu_solve_refined(&sys.dense(), &DMatrix::from_column_slice(n + 1, 1, e.as_slice()))?;
    Ok(x[(k, 0)])
}

/// Frobenius norm of T_N(f_{1/2}) − T_N(f_α) divided by (1/2 − α)N.
pub fn perturbation_gap(sym_half: &GegenbauerSymbol, alpha: f64, n: usize) -> Result<f64> {
    if sym_half.alpha != 0.5 {
        return Err(Error::Domain("reference symbol must have alpha = 1/2".into()));
    }
    if alpha == 0.5 {
        return Ok(0.0);
    }
    let other = sym_half.with_alpha(alpha)?;
    let a = symbol_fourier(sym_half, n, FourierMethod::Analytic)?;
    let b = symbol_fourier(&other, n, FourierMethod::Analytic)?;
    let mut sq = (n + 1) as f64 * (a.coeffs[0] - b.coeffs[0]).norm_sqr();
    for s in 1..=n {
        sq += 2.0 * (n + 1 - s) as f64 * (a.coeffs[s] - b.coeffs[s]).norm_sqr();
    }
    Ok(sq.sqrt() / ((0.5 - alpha) * n as f64))
}
