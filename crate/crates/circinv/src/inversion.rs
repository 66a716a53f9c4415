//! The inverse of T_N(f) written through the Hankel operators of Φ_N = (g/ḡ)χ^{N+1}:
//!
//! T_N⁻¹P = (1/g)π₊(P/ḡ) − (1/g)π₊(Φ_N Σ_s (H*H)^s π₊(Φ̄_N π₊(P/ḡ))).
//!
//! The Hankel matrices have entries ψ̂(−m), m ≥ N+2, where ψ = g/ḡ. Deforming the
//! Fourier integral of ψ into the disk gives ψ̂(−m) = Σ_i w_i λ_i^m exactly up to
//! quadrature, with nodes on the two branch cuts [r₀χ₀, χ₀], [r₀χ̄₀, χ̄₀] and on the
//! circle |λ| = r₀. Every vector in the series is then a combination of Cauchy
//! kernels 1/(1 − conj(λ)x), so the operators act on values at the nodes and the
//! infinite index sums are never truncated.

use crate::coefficients::beta_raw_series;
use crate::error::{Error, Result};
use crate::par;
use crate::quad::{gauss_legendre, gauss_on};
use crate::symbol::GegenbauerSymbol;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

// u = (1 − r₀)·logistic(τ), uniform in ln u near the branch point as the scale-invariant
// kernel 1/(u + v) requires. Node values grow like u^{−2|α|} there, so the lower end of τ is
// pushed down until the neglected mass u^{1−2|α|} is below TAIL_EPS.
const TAIL_EPS: f64 = 1e-15;
const TAU_FLOOR: f64 = -600.0;
const TAU_HI: f64 = 40.0;

fn tau_range(alpha: f64) -> (f64, f64) {
    let lo = (TAIL_EPS.ln() / (1.0 - 2.0 * alpha.abs())).max(TAU_FLOOR);
    (lo.min(-40.0), TAU_HI)
}
const MAX_TERMS: usize = 200_000;

/// Discretization of the Hankel operators: `nodes` quadrature points per branch cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelQuadrature {
    pub nodes: usize,
    pub tol: f64,
    pub max_terms: usize,
}

impl HankelQuadrature {
    pub fn new(nodes: usize, tol: f64) -> Self {
        HankelQuadrature { nodes, tol, max_terms: MAX_TERMS }
    }
}

#[derive(Debug, Clone)]
struct Node {
    lam: C64,
    /// ln|λ|, kept separately so that |λ| = 1 − u is not rounded to 1.
    ln_mod: f64,
    /// 1 − |λ| on the cuts, `None` on the inner circle.
    u: Option<f64>,
    ray: i8,
    weight: C64,
}

impl Node {
    fn pow(&self, p: f64) -> C64 {
        C64::from_polar((p * self.ln_mod).exp(), p * self.lam.arg())
    }
}

fn cauchy_nodes(sym: &GegenbauerSymbol, m: usize) -> Vec<Node> {
    let a = sym.alpha;
    let c0 = sym.chi0();
    let one = C64::new(1.0, 0.0);
    let r0 = 0.5f64.max(0.5 * (1.0 + sym.outer.max_inner_pole()));
    let mut nodes = Vec::new();
    let (tau_lo, tau_hi) = tau_range(a);
    let h = (tau_hi - tau_lo) / (m - 1) as f64;
    let amp = (PI * a).sin() / PI;
    for (ray, zeta) in [(0i8, c0), (1i8, c0.conj())] {
        for i in 0..m {
            let tau = tau_lo + h * i as f64;
            let (logistic, co) = if tau < 0.0 {
                let e = tau.exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = (-tau).exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let u = (1.0 - r0) * logistic;
            let du = (1.0 - r0) * logistic * co * h;
            let s = 1.0 - u;
            let z = zeta * s;
            // jump of ψ across the cut, divided by 2πi s
            let dens = amp
                * s.powf(a - 1.0)
                * (one - zeta * zeta * s).powf(a)
                * sym.outer.eval(z)
                / ((one - zeta.conj() * zeta.conj() / s).powf(a) * sym.outer.eval(one / z));
            nodes.push(Node { lam: z, ln_mod: (-u).ln_1p(), u: Some(u), ray, weight: dens * du });
        }
    }
    let nc = (m / 4).max(32);
    let rule = gauss_legendre(nc);
    let t0 = sym.theta0;
    for (lo, hi) in [(-t0, t0), (t0, 2.0 * PI - t0)] {
        for (phi, w) in gauss_on(lo, hi, &rule) {
            let z = C64::from_polar(r0, phi);
            let psi = sym.outer_g(z) / sym.outer_g(one / z);
            nodes.push(Node { lam: z, ln_mod: r0.ln(), u: None, ray: -1, weight: psi * (w / (2.0 * PI)) });
        }
    }
    nodes
}

/// ψ̂(−m) ≈ Σ_i w_i λ_i^m for m ≥ 1, from the node representation.
pub fn ratio_coeff_negative(sym: &GegenbauerSymbol, m: usize, nodes: usize) -> C64 {
    cauchy_nodes(sym, nodes).iter().map(|nd| nd.weight * nd.pow(m as f64)).sum()
}

/// Hankel operators of one system order, assembled once and applied to many right-hand sides.
pub struct InversionOperator {
    n: usize,
    beta: Vec<C64>,
    nodes: Vec<Node>,
    /// C_{ki} = 1/(1 − λ_i conj(λ_k)), row-major, Hermitian.
    kernel: Vec<C64>,
    /// w_i λ_i^{N+2}.
    scaled: Vec<C64>,
    quad: HankelQuadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub values: Vec<C64>,
    pub terms: usize,
    pub increments: Vec<f64>,
}

impl InversionOperator {
    pub fn new(sym: &GegenbauerSymbol, n: usize, quad: HankelQuadrature) -> Result<Self> {
        if sym.alpha.abs() >= 0.5 {
            return Err(Error::Domain("the inversion series needs |alpha| < 1/2".into()));
        }
        if quad.nodes < 8 {
            return Err(Error::Domain("at least 8 quadrature nodes per cut".into()));
        }
        let nodes = cauchy_nodes(sym, quad.nodes);
        let len = nodes.len();
        let kernel = par::map_range(len * len, |idx| {
            let (k, i) = (idx / len, idx % len);
            let (a, b) = (&nodes[i], &nodes[k]);
            match (a.u, b.u) {
                // real, and small enough that complex division would underflow
                (Some(ua), Some(ub)) if a.ray == b.ray => C64::new(1.0 / (ua + ub - ua * ub), 0.0),
                _ => 1.0 / (1.0 - a.lam * b.lam.conj()),
            }
        });
        let scaled = nodes.iter().map(|nd| nd.weight * nd.pow((n + 2) as f64)).collect();
        Ok(InversionOperator { n, beta: beta_raw_series(sym, n), nodes, kernel, scaled, quad })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn kernel_apply(&self, x: &[C64], conjugate: bool) -> Vec<C64> {
        let len = self.len();
        par::map_range(len, |j| {
            let row = &self.kernel[j * len..(j + 1) * len];
            if conjugate {
                row.iter().zip(x).map(|(c, v)| c.conj() * v).sum()
            } else {
                row.iter().zip(x).map(|(c, v)| c * v).sum()
            }
        })
    }

    /// One application of H*H in node values.
    fn step(&self, t: &[C64]) -> Vec<C64> {
        let x: Vec<C64> = t.iter().zip(&self.scaled).map(|(v, a)| v * a).collect();
        let y = self.kernel_apply(&x, false);
        let z: Vec<C64> = y.iter().zip(&self.scaled).map(|(v, a)| v * a.conj()).collect();
        self.kernel_apply(&z, true)
    }

    fn weighted_norm(&self, t: &[C64]) -> f64 {
        t.iter().zip(&self.nodes).map(|(v, nd)| v.norm() * nd.weight.norm()).sum()
    }

    /// Σ_s (H*H)^s v₀, stopping once an increment falls below the tolerance.
    pub fn neumann(&self, v0: Vec<C64>) -> Result<SeriesResult> {
        let mut sum = v0.clone();
        let mut term = v0;
        let mut increments = vec![self.weighted_norm(&term)];
        let mut rising = 0;
        for m in 1..=self.quad.max_terms {
            let inc = *increments.last().unwrap();
            if inc < self.quad.tol {
                return Ok(SeriesResult { values: sum, terms: m, increments });
            }
            term = self.step(&term);
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
            let next = self.weighted_norm(&term);
            if m > 2 && next >= inc {
                rising += 1;
                if rising >= 3 {
                    return Err(Error::SeriesDiverging(m));
                }
            } else {
                rising = 0;
            }
            increments.push(next);
        }
        Err(Error::NoConvergence("Neumann series term limit".into()))
    }

    /// Spectral radius of H*H by power iteration.
    pub fn contraction(&self, iterations: usize) -> f64 {
        let mut v = vec![C64::new(1.0, 0.0); self.len()];
        let mut ratio = 0.0;
        for _ in 0..iterations {
            let w = self.step(&v);
            let a = self.weighted_norm(&v);
            let b = self.weighted_norm(&w);
            ratio = b / a;
            v = w.iter().map(|x| x / b).collect();
        }
        ratio
    }

    /// Coefficients 0..=N of π₊(P/ḡ).
    fn project(&self, p: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..=n)
            .map(|i| (i..p.len().min(n + 1)).map(|j| p[j] * self.beta[j - i].conj()).sum())
            .collect()
    }

    /// Node values Σ_j q_j conj(λ_i)^{N+1−j}.
    fn moments(&self, q: &[C64]) -> Vec<C64> {
        let n = self.n;
        par::map_slice(&self.nodes, |nd| {
            let lc = nd.lam.conj();
            let mut p = lc;
            let mut acc = C64::new(0.0, 0.0);
            for j in (0..=n).rev() {
                acc += q[j] * p;
                p *= lc;
            }
            acc
        })
    }

    /// Node values of π₊(Φ̄_N q).
    fn start(&self, q: &[C64]) -> Vec<C64> {
        let mom = self.moments(q);
        let x: Vec<C64> = mom.iter().zip(&self.nodes).map(|(m, nd)| m * nd.weight.conj()).collect();
        self.kernel_apply(&x, true)
    }

    /// Coefficients 0..=N of π₊(Φ_N S) from node values of S.
    fn finish(&self, s: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        for (nd, v) in self.nodes.iter().zip(s) {
            let mut p = nd.weight * v;
            let mut pw = Vec::with_capacity(n + 2);
            for _ in 0..=n + 1 {
                pw.push(p);
                p *= nd.lam;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += pw[n + 1 - i];
            }
        }
        out
    }

    /// T_N⁻¹P, coefficients 0..=N.
    pub fn apply(&self, p: &[C64]) -> Result<Vec<C64>> {
        if p.len() > self.n + 1 {
            return Err(Error::Domain("polynomial degree above N".into()));
        }
        let q = self.project(p);
        let s = self.neumann(self.start(&q))?;
        let w = self.finish(&s.values);
        let d: Vec<C64> = q.iter().zip(&w).map(|(a, b)| a - b).collect();
        Ok((0..=self.n)
            .map(|k| (0..=k).map(|j| self.beta[k - j] * d[j]).sum())
            .collect())
    }

    fn unit(&self, k: usize) -> Vec<C64> {
        let mut p = vec![C64::new(0.0, 0.0); k + 1];
        p[k] = C64::new(1.0, 0.0);
        p
    }

    /// Inverse entry from the two inner products ⟨π₊(χ^k/ḡ), χ^l/ḡ⟩ − ⟨S_k, π₊(Φ̄_N χ^l/ḡ)⟩.
    pub fn entry(&self, k: usize, l: usize) -> Result<C64> {
        if k > self.n || l > self.n {
            return Err(Error::IndexOutOfRange(k, l));
        }
        let qk = self.project(&self.unit(k));
        let ql = self.project(&self.unit(l));
        let first: C64 = (0..=k.min(l)).map(|i| qk[i] * ql[i].conj()).sum();
        let s = self.neumann(self.start(&qk))?;
        let ml = self.moments(&ql);
        let second: C64 = self
            .nodes
            .iter()
            .zip(&s.values)
            .zip(&ml)
            .map(|((nd, sv), m)| nd.weight * m.conj() * sv)
            .sum();
        Ok(first - second)
    }

    /// H_N(u), 0 ≤ u ≤ N, with (T_N⁻¹)_{1,k+1} = conj(β₀)(β_k − Σ_{u≤k} β_{k−u} H_N(u)).
    pub fn h_series(&self) -> Result<(Vec<C64>, usize)> {
        let q = self.project(&[C64::new(1.0, 0.0)]);
        let s = self.neumann(self.start(&q))?;
        let b0 = self.beta[0].conj();
        Ok((self.finish(&s.values).into_iter().map(|w| w / b0).collect(), s.terms))
    }

    pub fn beta(&self) -> &[C64] {
        &self.beta
    }
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// T_N⁻¹P by the Hankel series, with the node count doubled once as a check.
pub fn apply_inversion(sym: &GegenbauerSymbol, n: usize, p: &[C64], m: usize, tol: f64) -> Result<Vec<C64>> {
    let coarse = InversionOperator::new(sym, n, HankelQuadrature::new(m, tol))?.apply(p)?;
    let fine = InversionOperator::new(sym, n, HankelQuadrature::new(2 * m, tol))?.apply(p)?;
    let change = max_diff(&coarse, &fine);
    if change > tol.max(1e-13) {
        return Err(Error::TruncationTooSmall(change));
    }
    Ok(fine)
}

pub fn inverse_entry_series(sym: &GegenbauerSymbol, n: usize, k: usize, l: usize, m: usize, tol: f64) -> Result<C64> {
    let a = InversionOperator::new(sym, n, HankelQuadrature::new(m, tol))?.entry(k, l)?;
    let b = InversionOperator::new(sym, n, HankelQuadrature::new(2 * m, tol))?.entry(k, l)?;
    if (a - b).norm() > tol.max(1e-13) {
        return Err(Error::TruncationTooSmall((a - b).norm()));
    }
    Ok(b)
}

/// H_N(u) with at most `m_max` Neumann terms and `trunc` nodes per cut.
pub fn h_n_series(sym: &GegenbauerSymbol, n: usize, u: usize, m_max: usize, trunc: usize) -> Result<C64> {
    if u > n {
        return Err(Error::IndexOutOfRange(u, n));
    }
    let quad = HankelQuadrature { nodes: trunc, tol: 1e-12, max_terms: m_max };
    let coarse = InversionOperator::new(sym, n, HankelQuadrature { nodes: trunc / 2, ..quad })?.h_series()?.0;
    let fine = InversionOperator::new(sym, n, quad)?.h_series()?.0;
    if (coarse[u] - fine[u]).norm() > 1e-9 {
        return Err(Error::TruncationTooSmall((coarse[u] - fine[u]).norm()));
    }
    Ok(fine[u])
}

/// First row of T_N⁻¹ rebuilt from H_N(u).
pub fn first_row_from_h(op: &InversionOperator) -> Result<Vec<C64>> {
    let (h, _) = op.h_series()?;
    let b = op.beta();
    let b0 = b[0].conj();
    Ok((0..=op.order())
        .map(|k| b0 * (b[k] - (0..=k).map(|u| b[k - u] * h[u]).sum::<C64>()))
        .collect())
}

const F_XI_LO: f64 = -30.0;
const F_XI_HI: f64 = 60.0;
const F_XI_STEP: f64 = 0.1;

/// Terms F_m(z), m = 0, 1, …, of the nested sums with kernel 1/(N+1+n+n′+α), boundary
/// vector 1/(1+(1+α)/N+n/N−z) and weights 1/(N+1+n), each weighted by (sin πα/π)^{2m}.
pub fn f_terms(n: usize, alpha: f64, z: f64, m_max: usize, trunc: usize) -> Result<Vec<f64>> {
    if !(z < 1.0) || trunc < 3 || n == 0 {
        return Err(Error::Domain("need z < 1, trunc ≥ 3, N ≥ 1".into()));
    }
    let nf = n as f64;
    let mut x: Vec<f64> = (0..trunc).map(|i| i as f64).collect();
    let mut w = vec![1.0; trunc];
    // Euler–Maclaurin join between the integer sum and the integral from trunc − 1/2
    w[trunc - 1] += 2.0 / 24.0;
    w[trunc - 2] -= 3.0 / 24.0;
    w[trunc - 3] += 1.0 / 24.0;
    let steps = ((F_XI_HI - F_XI_LO) / F_XI_STEP).round() as usize;
    for i in 0..=steps {
        let xi = F_XI_LO + F_XI_STEP * i as f64;
        let e = nf * xi.exp();
        x.push(trunc as f64 - 0.5 + e);
        w.push(F_XI_STEP * e);
    }
    let len = x.len();
    let r = ((PI * alpha).sin() / PI).powi(2);
    let kernel: Vec<f64> = par::map_range(len * len, |idx| 1.0 / (nf + 1.0 + x[idx / len] + x[idx % len] + alpha));
    let apply = |v: &[f64]| -> Vec<f64> {
        par::map_range(len, |i| kernel[i * len..(i + 1) * len].iter().zip(v).map(|(k, y)| k * y).sum())
    };
    let a: Vec<f64> = x.iter().map(|&t| 1.0 / (nf + 1.0 + t)).collect();
    let mut v: Vec<f64> = x
        .iter()
        .zip(&w)
        .map(|(&t, &wt)| wt / (1.0 + (1.0 + alpha) / nf + t / nf - z))
        .collect();
    let mut terms = Vec::new();
    let mut scale = 1.0;
    let mut total = 0.0;
    for m in 0..=m_max {
        let fm: f64 = a.iter().zip(&v).map(|(p, q)| p * q).sum();
        let term = scale * fm;
        terms.push(term);
        total += term;
        if m >= 3 && terms[m] >= terms[m - 1] && terms[m - 1] >= terms[m - 2] && term > 0.0 {
            return Err(Error::SeriesDiverging(m));
        }
        if term.abs() < 1e-13 * total.abs() {
            return Ok(terms);
        }
        for _ in 0..2 {
            let y = apply(&v);
            v = y.iter().zip(&w).map(|(p, q)| p * q).collect();
        }
        scale *= r;
    }
    Ok(terms)
}

/// (sin πα/π)²·Σ_m (sin πα/π)^{2m} F_m(z), the normalization under which F(0) tends to α².
pub fn eval_f(n: usize, alpha: f64, z: f64, m_max: usize, trunc: usize) -> Result<f64> {
    let r = ((PI * alpha).sin() / PI).powi(2);
    Ok(r * f_terms(n, alpha, z, m_max, trunc)?.iter().sum::<f64>())
}
