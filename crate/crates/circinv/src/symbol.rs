//! The singular weight family 2^{2α}|cos θ − cos θ₀|^{2α}·c₁(θ), its outer
//! factorization and its Fourier coefficients.

use crate::error::{Error, Result};
use crate::par;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Roots closer than this to the unit circle are rejected.
pub const CIRCLE_GAP: f64 = 1e-8;
const POSITIVITY_GRID: usize = 4096;

pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

pub fn eval_poly(coeffs: &[f64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_cpoly(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of a real polynomial given in ascending order, leading coefficient nonzero.
pub fn poly_roots(coeffs: &[f64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    let eig = comp.complex_eigenvalues();
    let deriv: Vec<f64> = (1..=n).map(|k| k as f64 * coeffs[k]).collect();
    eig.iter()
        .map(|&r0| {
            let mut r = r0;
            for _ in 0..4 {
                let d = eval_poly(&deriv, r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = eval_poly(coeffs, r) / d;
                if !step.is_finite() {
                    break;
                }
                r -= step;
            }
            r
        })
        .collect()
}

fn trim(coeffs: &[f64], what: &str) -> Result<Vec<f64>> {
    if coeffs.is_empty() {
        return Err(Error::Domain(format!("{what} has no coefficients")));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain(format!("{what} has non-finite coefficients")));
    }
    if *coeffs.last().unwrap() == 0.0 {
        return Err(Error::Domain(format!("{what} has a zero leading coefficient")));
    }
    Ok(coeffs.to_vec())
}

/// c₁(θ) = |P(e^{iθ}) / Q(e^{iθ})|² with real polynomials in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalRegularPart {
    numerator: Vec<f64>,
    denominator: Vec<f64>,
}

impl RationalRegularPart {
    pub fn new(numerator: &[f64], denominator: &[f64]) -> Result<Self> {
        let numerator = trim(numerator, "numerator")?;
        let denominator = trim(denominator, "denominator")?;
        for r in poly_roots(&numerator)
            .into_iter()
            .chain(poly_roots(&denominator))
        {
            if (r.norm() - 1.0).abs() <= CIRCLE_GAP {
                return Err(Error::RootOnCircle(r.norm()));
            }
        }
        let reg = RationalRegularPart { numerator, denominator };
        for i in 0..POSITIVITY_GRID {
            let v = reg.eval(2.0 * PI * i as f64 / POSITIVITY_GRID as f64);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NotPositive);
            }
        }
        Ok(reg)
    }

    pub fn one() -> Self {
        RationalRegularPart { numerator: vec![1.0], denominator: vec![1.0] }
    }

    pub fn numerator(&self) -> &[f64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[f64] {
        &self.denominator
    }

    pub fn is_constant(&self) -> bool {
        self.numerator.len() == 1 && self.denominator.len() == 1
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let z = C64::from_polar(1.0, theta);
        (eval_poly(&self.numerator, z) / eval_poly(&self.denominator, z)).norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootRecord {
    pub root: C64,
    pub in_numerator: bool,
    pub reflected: bool,
}

/// Outer factor c_{1,1} = P_out / Q_out, zero-free and analytic in the closed disk.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterFactor {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    /// Taylor coefficients of c_{1,1} at 0.
    pub coeffs: Vec<C64>,
    pub roots: Vec<RootRecord>,
}

impl OuterFactor {
    pub fn eval(&self, z: C64) -> C64 {
        eval_poly(&self.numerator, z) / eval_poly(&self.denominator, z)
    }

    pub fn at_zero(&self) -> f64 {
        self.numerator[0] / self.denominator[0]
    }

    /// Taylor coefficients of 1/c_{1,1}.
    pub fn inverse_coeffs(&self, len: usize) -> Vec<f64> {
        series_divide(&self.denominator, &self.numerator, len)
    }

    /// Largest modulus among points where 1/c_{1,1}(1/z) has a pole inside the disk.
    pub fn max_inner_pole(&self) -> f64 {
        self.roots
            .iter()
            .filter(|r| r.in_numerator)
            .map(|r| {
                let outer = if r.reflected { 1.0 / r.root.conj() } else { r.root };
                1.0 / outer.norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Taylor coefficients of num/den up to `len` terms.
pub fn series_divide(num: &[f64], den: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for k in 0..len {
        let mut acc = if k < num.len() { num[k] } else { 0.0 };
        for j in 1..den.len().min(k + 1) {
            acc -= den[j] * out[k - j];
        }
        out[k] = acc / den[0];
    }
    out
}

fn outer_poly(coeffs: &[f64], in_numerator: bool, log: &mut Vec<RootRecord>) -> Vec<f64> {
    let lead = *coeffs.last().unwrap();
    let mut poly = vec![C64::new(lead.abs(), 0.0)];
    for r in poly_roots(coeffs) {
        let reflected = r.norm() < 1.0;
        // (z − r) for outer roots, (1 − conj(r) z) for inner ones: same modulus on the circle
        let (c0, c1) = if reflected {
            (C64::new(1.0, 0.0), -r.conj())
        } else {
            (-r, C64::new(1.0, 0.0))
        };
        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            next[i] += p * c0;
            next[i + 1] += p * c1;
        }
        poly = next;
        log.push(RootRecord { root: r, in_numerator, reflected });
    }
    poly.iter().map(|c| c.re).collect()
}

pub fn outer_factorize(reg: &RationalRegularPart, len: usize) -> Result<OuterFactor> {
    let mut roots = Vec::new();
    let mut numerator = outer_poly(&reg.numerator, true, &mut roots);
    let denominator = outer_poly(&reg.denominator, false, &mut roots);
    if roots.iter().any(|r| (r.root.norm() - 1.0).abs() <= CIRCLE_GAP) {
        return Err(Error::RootOnCircle(1.0));
    }
    if numerator[0] / denominator[0] < 0.0 {
        numerator.iter_mut().for_each(|c| *c = -*c);
    }
    let coeffs = series_divide(&numerator, &denominator, len.max(1))
        .into_iter()
        .map(|c| C64::new(c, 0.0))
        .collect();
    let outer = OuterFactor { numerator, denominator, coeffs, roots };
    for i in 0..64 {
        let th = 2.0 * PI * i as f64 / 64.0;
        let want = reg.eval(th);
        let got = outer.eval(C64::from_polar(1.0, th)).norm_sqr();
        if !((got - want).abs() <= 1e-9 * want) {
            return Err(Error::NotPositive);
        }
    }
    Ok(outer)
}

/// JSON form: {"alpha", "theta0", "numerator", "denominator"}, ascending powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub alpha: f64,
    pub theta0: f64,
    #[serde(default = "unit_poly")]
    pub numerator: Vec<f64>,
    #[serde(default = "unit_poly")]
    pub denominator: Vec<f64>,
}

fn unit_poly() -> Vec<f64> {
    vec![1.0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerSymbol {
    pub alpha: f64,
    pub theta0: f64,
    pub regular: RationalRegularPart,
    pub outer: OuterFactor,
}

impl GegenbauerSymbol {
    pub fn new(alpha: f64, theta0: f64, regular: RationalRegularPart) -> Result<Self> {
        if !(alpha > -0.5 && alpha <= 0.5) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (-1/2, 1/2]")));
        }
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(Error::Domain(format!("theta0 = {theta0} outside (0, pi)")));
        }
        let outer = outer_factorize(&regular, 64)?;
        Ok(GegenbauerSymbol { alpha, theta0, regular, outer })
    }

    pub fn plain(alpha: f64, theta0: f64) -> Result<Self> {
        Self::new(alpha, theta0, RationalRegularPart::one())
    }

    pub fn from_spec(spec: &SymbolSpec) -> Result<Self> {
        let reg = RationalRegularPart::new(&spec.numerator, &spec.denominator)?;
        Self::new(spec.alpha, spec.theta0, reg)
    }

    pub fn spec(&self) -> SymbolSpec {
        SymbolSpec {
            alpha: self.alpha,
            theta0: self.theta0,
            numerator: self.regular.numerator.clone(),
            denominator: self.regular.denominator.clone(),
        }
    }

    /// Same zero and regular part with another order.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.theta0, self.regular.clone())
    }

    pub fn chi0(&self) -> C64 {
        C64::from_polar(1.0, self.theta0)
    }

    /// Outer function g with g·conj(g) equal to the weight on the circle,
    /// g(z) = (1 − conj(χ₀) z)^α (1 − χ₀ z)^α c_{1,1}(z), principal branches.
    pub fn outer_g(&self, z: C64) -> C64 {
        let c0 = self.chi0();
        let one = C64::new(1.0, 0.0);
        (one - c0.conj() * z).powf(self.alpha) * (one - c0 * z).powf(self.alpha) * self.outer.eval(z)
    }
}

pub fn eval_symbol(sym: &GegenbauerSymbol, theta: f64) -> f64 {
    let a = (2.0 * ((theta - sym.theta0) / 2.0).sin()).abs();
    let b = (2.0 * ((theta + sym.theta0) / 2.0).sin()).abs();
    a.powf(2.0 * sym.alpha) * b.powf(2.0 * sym.alpha) * sym.regular.eval(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FourierMethod {
    Analytic,
    Quadrature,
}

/// ĥ(s) for 0 ≤ s ≤ n_max; negative indices follow from ĥ(−s) = conj(ĥ(s)).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    pub method: FourierMethod,
    pub coeffs: Vec<C64>,
}

impl FourierTable {
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, s: i64) -> C64 {
        if s >= 0 {
            self.coeffs[s as usize]
        } else {
            self.coeffs[(-s) as usize].conj()
        }
    }

    pub fn max_diff(&self, other: &FourierTable) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Fourier coefficients c_t, t ≥ 0, of |1 − e^{iφ}|^{2α} (even in t).
pub fn abs_power_coeffs(alpha: f64, n: usize) -> Vec<f64> {
    use statrs::function::gamma::ln_gamma;
    let mut c = vec![0.0; n + 1];
    c[0] = if alpha == 0.0 { 1.0 } else { (ln_gamma(2.0 * alpha + 1.0) - 2.0 * ln_gamma(alpha + 1.0)).exp() };
    for t in 0..n {
        c[t + 1] = c[t] * (t as f64 - alpha) / (t as f64 + 1.0 + alpha);
    }
    c
}

/// Σ_{k≥0} f_k z^k from the first terms of a slowly varying f, via the Euler transform.
pub fn euler_tail(f: &[f64], z: C64) -> C64 {
    let mut diff = f.to_vec();
    let one = C64::new(1.0, 0.0);
    let q = z / (one - z);
    let mut factor = one / (one - z);
    let mut acc = C64::new(0.0, 0.0);
    for _ in 0..f.len() {
        acc += factor * diff[0];
        factor *= q;
        for i in 0..diff.len() - 1 {
            diff[i] = diff[i + 1] - diff[i];
        }
        diff.pop();
    }
    acc
}

const EULER_SPLIT: usize = 3000;
const EULER_TERMS: usize = 12;

/// Fourier coefficients ŝ(s), 0 ≤ s ≤ n, of |e^{iθ} − χ₀|^{2α}|e^{iθ} − χ̄₀|^{2α}; real and even.
pub fn singular_fourier(alpha: f64, theta0: f64, n: usize) -> Vec<f64> {
    let b = EULER_SPLIT;
    let c = abs_power_coeffs(alpha, n + b + EULER_TERMS + 1);
    let z = C64::from_polar(1.0, 2.0 * theta0);
    let zpow: Vec<C64> = (0..=(n + 2 * b))
        .map(|i| C64::from_polar(1.0, 2.0 * theta0 * (i as f64 - b as f64)))
        .collect();
    let zp = |t: i64| zpow[(t + b as i64) as usize];
    par::map_range(n + 1, |s| {
        let si = s as i64;
        let mut acc = C64::new(0.0, 0.0);
        for t in (1 - b as i64)..(si + b as i64) {
            acc += zp(t) * (c[t.unsigned_abs() as usize] * c[(si - t).unsigned_abs() as usize]);
        }
        let f: Vec<f64> = (0..=EULER_TERMS).map(|k| c[s + b + k] * c[b + k]).collect();
        acc += euler_tail(&f, z) * zp(si + b as i64);
        acc += euler_tail(&f, z.conj()) * zp(-(b as i64));
        (C64::from_polar(1.0, -theta0 * s as f64) * acc).re
    })
}

fn fft_coeffs(samples: &[f64]) -> Vec<C64> {
    let l = samples.len();
    let mut buf: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(l).process(&mut buf);
    buf.iter().map(|c| c / l as f64).collect()
}

/// Fourier coefficients of a smooth periodic function, grown until the tail is negligible.
pub fn smooth_fourier(f: &dyn Fn(f64) -> C64) -> Result<(Vec<C64>, Vec<C64>)> {
    let mut l = 64usize;
    loop {
        let mut re = Vec::with_capacity(l);
        let mut im = Vec::with_capacity(l);
        for i in 0..l {
            let v = f(2.0 * PI * i as f64 / l as f64);
            re.push(v.re);
            im.push(v.im);
        }
        let a = fft_coeffs(&re);
        let b = fft_coeffs(&im);
        let coef: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + C64::new(0.0, 1.0) * y).collect();
        let scale = coef.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        let tail = coef[l / 4..3 * l / 4].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if tail <= 1e-16 * scale {
            let keep = l / 4;
            let pos = coef[..keep].to_vec();
            let neg = (0..keep).map(|j| coef[(l - j) % l]).collect();
            return Ok((pos, neg));
        }
        if l >= 1 << 22 {
            return Err(Error::NoConvergence("smooth Fourier series".into()));
        }
        l *= 2;
    }
}

fn regular_laurent(reg: &RationalRegularPart) -> Result<Vec<f64>> {
    if reg.is_constant() {
        return Ok(vec![reg.eval(0.0)]);
    }
    let (pos, _) = smooth_fourier(&|th| C64::new(reg.eval(th), 0.0))?;
    let r0 = pos[0].re;
    let mut r: Vec<f64> = pos.iter().map(|c| c.re).collect();
    while r.len() > 1 && r.last().unwrap().abs() < 1e-18 * r0 {
        r.pop();
    }
    Ok(r)
}

fn analytic_fourier(sym: &GegenbauerSymbol, n_max: usize) -> Result<Vec<C64>> {
    let r = regular_laurent(&sym.regular)?;
    let j_max = r.len() - 1;
    let s_hat = singular_fourier(sym.alpha, sym.theta0, n_max + j_max);
    Ok((0..=n_max)
        .map(|s| {
            let mut acc = 0.0;
            for j in -(j_max as i64)..=(j_max as i64) {
                acc += s_hat[(s as i64 - j).unsigned_abs() as usize] * r[j.unsigned_abs() as usize];
            }
            C64::new(acc, 0.0)
        })
        .collect())
}

// endpoint distances down to ~1e-275 of the arc length
const TS_TMAX: f64 = 6.0;
const TS_CHUNK: usize = 512;

/// Fourier coefficients (1/2π)∫ w(θ) e^{−isθ} dθ of a weight with zeros at angles a < b < a + 2π,
/// by double-exponential trapezoid sums on the two arcs between the zeros.
/// `w(θ, d_a, d_b)` receives the distances from θ to the arc endpoints.
pub fn two_arc_fourier(
    a: f64,
    b: f64,
    w: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    n_max: usize,
    tol: f64,
) -> Result<Vec<C64>> {
    let arcs = [(a, b), (b, a + 2.0 * PI)];
    let n_start = 8 * n_max.max(8);
    let mut h = 2.0 * TS_TMAX / n_start as f64;
    let mut raw = vec![C64::new(0.0, 0.0); n_max + 1];
    let mut prev: Option<Vec<C64>> = None;
    let mut level = 0;
    loop {
        // level 0 takes every multiple of h, later levels only the odd ones
        let j_max = (TS_TMAX / h).ceil() as i64;
        let ts: Vec<f64> = (-j_max..=j_max)
            .filter(|j| level == 0 || j.rem_euclid(2) == 1)
            .map(|j| j as f64 * h)
            .collect();
        for &(lo, hi) in &arcs {
            let len = hi - lo;
            let chunks: Vec<&[f64]> = ts.chunks(TS_CHUNK).collect();
            let partial = par::map_slice(&chunks, |chunk| {
                let mut acc = vec![C64::new(0.0, 0.0); n_max + 1];
                for &t in chunk.iter() {
                    let v = 0.5 * PI * t.sinh();
                    let da = len / (1.0 + (-2.0 * v).exp());
                    let db = len / (1.0 + (2.0 * v).exp());
                    let jac = 0.5 * len * 0.5 * PI * t.cosh() / v.cosh().powi(2);
                    if jac == 0.0 || da == 0.0 || db == 0.0 {
                        continue;
                    }
                    let theta = if t <= 0.0 { lo + da } else { hi - db };
                    let val = w(theta, da, db) * jac;
                    if val == 0.0 {
                        continue;
                    }
                    let step = C64::from_polar(1.0, -theta);
                    let mut p = C64::new(val, 0.0);
                    for slot in acc.iter_mut() {
                        *slot += p;
                        p *= step;
                    }
                }
                acc
            });
            for part in partial {
                for (r, p) in raw.iter_mut().zip(part) {
                    *r += p;
                }
            }
        }
        let est: Vec<C64> = raw.iter().map(|r| r * (h / (2.0 * PI))).collect();
        if est.iter().any(|c| !c.is_finite()) {
            return Err(Error::NoConvergence("non-finite quadrature sum".into()));
        }
        if let Some(p) = &prev {
            let diff = p.iter().zip(&est).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            if diff < tol {
                return Ok(est);
            }
        }
        prev = Some(est);
        if ((2.0 * TS_TMAX / h) as usize) > (1 << 23) {
            return Err(Error::NoConvergence("quadrature refinement stalled".into()));
        }
        h /= 2.0;
        level += 1;
    }
}

fn quadrature_fourier(sym: &GegenbauerSymbol, n_max: usize) -> Result<Vec<C64>> {
    let two_alpha = 2.0 * sym.alpha;
    let reg = &sym.regular;
    let w = move |theta: f64, da: f64, db: f64| {
        (2.0 * (0.5 * da).sin()).powf(two_alpha) * (2.0 * (0.5 * db).sin()).powf(two_alpha) * reg.eval(theta)
    };
    let mut c = two_arc_fourier(-sym.theta0, sym.theta0, &w, n_max, 1e-10)?;
    for v in c.iter_mut() {
        v.im = 0.0;
    }
    Ok(c)
}

pub fn symbol_fourier(sym: &GegenbauerSymbol, n_max: usize, method: FourierMethod) -> Result<FourierTable> {
    let coeffs = match method {
        FourierMethod::Analytic => analytic_fourier(sym, n_max)?,
        FourierMethod::Quadrature => quadrature_fourier(sym, n_max)?,
    };
    Ok(FourierTable { method, coeffs })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointData {
    pub c1_at_chi0: f64,
    pub phi0: f64,
    pub phi0_prime: f64,
}

pub fn point_data(sym: &GegenbauerSymbol) -> PointData {
    let phi0 = sym.outer.eval(sym.chi0()).arg();
    PointData {
        c1_at_chi0: sym.regular.eval(sym.theta0),
        phi0,
        phi0_prime: wrap_angle(2.0 * phi0),
    }
}

/// Evaluate a Taylor series given by complex coefficients.
pub fn eval_series(coeffs: &[C64], z: C64) -> C64 {
    eval_cpoly(coeffs, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_four() -> RationalRegularPart {
        RationalRegularPart::new(&[2.0, 1.0], &[1.0]).unwrap()
    }

    #[test]
    fn symbol_values() {
        let s = GegenbauerSymbol::plain(0.5, PI / 2.0).unwrap();
        assert!((eval_symbol(&s, 0.0) - 2.0).abs() < 1e-14);
        let s = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        assert!((eval_symbol(&s, PI) - 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(eval_symbol(&s, PI / 3.0), 0.0);
        let s = GegenbauerSymbol::new(0.3, 1.1, five_four()).unwrap();
        for i in 0..50 {
            let th = 0.1 + i as f64 * 0.12;
            let direct = (2.0 * (th.cos() - 1.1f64.cos()).abs()).powf(0.6) * (5.0 + 4.0 * th.cos());
            assert!((eval_symbol(&s, th) - direct).abs() < 1e-12 * direct.max(1.0));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(GegenbauerSymbol::plain(0.6, 1.0).is_err());
        assert!(GegenbauerSymbol::plain(-0.5, 1.0).is_err());
        assert!(GegenbauerSymbol::plain(0.2, 0.0).is_err());
        assert!(GegenbauerSymbol::plain(0.2, PI).is_err());
        assert!(matches!(
            RationalRegularPart::new(&[1.0, 1.0], &[1.0]),
            Err(Error::RootOnCircle(_))
        ));
        assert!(RationalRegularPart::new(&[1.0, 0.0], &[1.0]).is_err());
    }

    #[test]
    fn outer_factor_examples() {
        let one = outer_factorize(&RationalRegularPart::one(), 8).unwrap();
        assert_eq!(one.numerator, vec![1.0]);
        let o = outer_factorize(&five_four(), 8).unwrap();
        assert!((o.eval(C64::new(0.3, 0.2)) - C64::new(2.3, 0.2)).norm() < 1e-12);
        let inner = RationalRegularPart::new(&[1.0, 2.0], &[1.0]).unwrap();
        let o = outer_factorize(&inner, 8).unwrap();
        assert!((o.numerator[0] - 2.0).abs() < 1e-12 && (o.numerator[1] - 1.0).abs() < 1e-12);
        assert!(o.roots[0].reflected);
    }

    #[test]
    fn outer_factor_reconstructs_modulus() {
        let reg = RationalRegularPart::new(&[0.5, -0.3, 1.0], &[1.0, 0.4, 3.0]).unwrap();
        let o = outer_factorize(&reg, 16).unwrap();
        assert!(o.at_zero() > 0.0);
        for i in 0..4096 {
            let th = 2.0 * PI * i as f64 / 4096.0;
            let want = reg.eval(th);
            let got = o.eval(C64::from_polar(1.0, th)).norm_sqr();
            assert!((got - want).abs() < 1e-9 * want);
        }
        for r in &o.roots {
            let placed = if r.reflected { 1.0 / r.root.conj() } else { r.root };
            assert!(placed.norm() > 1.0);
        }
    }

    #[test]
    fn outer_factor_matches_log_modulus_quadrature() {
        // log c_{1,1}(0) equals the mean of (1/2) log c₁ over the circle for an outer function
        let reg = RationalRegularPart::new(&[1.0, 2.0, 0.5], &[3.0, 1.0]).unwrap();
        let o = outer_factorize(&reg, 4).unwrap();
        let n = 4096;
        let mean: f64 = (0..n).map(|i| 0.5 * reg.eval(2.0 * PI * i as f64 / n as f64).ln()).sum::<f64>() / n as f64;
        assert!((mean - o.at_zero().ln()).abs() < 1e-12);
    }

    #[test]
    fn abs_power_mean_is_four_over_pi() {
        let c = abs_power_coeffs(0.5, 3);
        assert!((c[0] - 4.0 / PI).abs() < 1e-14);
        assert!((c[1] + 4.0 / (3.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn analytic_half_order() {
        let s = GegenbauerSymbol::plain(0.5, PI / 2.0).unwrap();
        let t = symbol_fourier(&s, 4, FourierMethod::Analytic).unwrap();
        assert!((t.coeffs[0].re - 4.0 / PI).abs() < 1e-13);
        // |2cos θ| has only even harmonics
        assert!(t.coeffs[1].norm() < 1e-13 && t.coeffs[3].norm() < 1e-13);
        assert!((t.coeffs[2].re - 4.0 / (3.0 * PI)).abs() < 1e-13);
    }

    #[test]
    fn analytic_and_quadrature_agree() {
        for (a, th, reg) in [
            (0.25, PI / 3.0, RationalRegularPart::one()),
            (-0.25, PI / 2.0, RationalRegularPart::one()),
            (0.4, 2.5, five_four()),
            (-0.443, 0.3, RationalRegularPart::one()),
        ] {
            let s = GegenbauerSymbol::new(a, th, reg).unwrap();
            let x = symbol_fourier(&s, 64, FourierMethod::Analytic).unwrap();
            let y = symbol_fourier(&s, 64, FourierMethod::Quadrature).unwrap();
            assert!(x.max_diff(&y) < 1e-8, "alpha {a}: {}", x.max_diff(&y));
        }
    }

    #[test]
    fn point_data_examples() {
        let s = GegenbauerSymbol::plain(0.25, 1.0).unwrap();
        let p = point_data(&s);
        assert_eq!((p.c1_at_chi0, p.phi0, p.phi0_prime), (1.0, 0.0, 0.0));
        let s = GegenbauerSymbol::new(0.25, PI / 2.0, five_four()).unwrap();
        let p = point_data(&s);
        assert!((p.c1_at_chi0 - 5.0).abs() < 1e-12);
        assert!((p.phi0 - 0.5f64.atan()).abs() < 1e-12);
        assert!((p.phi0_prime - 2.0 * 0.5f64.atan()).abs() < 1e-12);
    }
}
