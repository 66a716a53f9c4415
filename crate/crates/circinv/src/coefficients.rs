//! Coefficient families: Taylor coefficients of (1 − z)^{−α}, of 1/g, and the
//! Fourier coefficients of the unimodular ratio g/ḡ.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, gauss_on};
use crate::symbol::{euler_tail, smooth_fourier, GegenbauerSymbol};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Γ(x), using reflection below 1/2.
pub fn gamma_fn(x: f64) -> f64 {
    use statrs::function::gamma::gamma;
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        gamma(x)
    }
}

pub fn beta_tilde_series(alpha: f64, n: usize) -> Vec<f64> {
    let mut b = vec![1.0; n + 1];
    for k in 1..=n {
        b[k] = b[k - 1] * (k as f64 - 1.0 + alpha) / k as f64;
    }
    b
}

/// k-th Taylor coefficient of (1 − z)^{−α}.
pub fn beta_tilde(alpha: f64, k: usize) -> f64 {
    beta_tilde_series(alpha, k)[k]
}

/// Taylor coefficients of (1 − χ₀z)^{−α}(1 − χ̄₀z)^{−α}.
pub fn beta_theta0_series(alpha: f64, theta0: f64, n: usize) -> Vec<C64> {
    let bt = beta_tilde_series(alpha, n);
    let c0 = C64::from_polar(1.0, theta0);
    let a: Vec<C64> = (0..=n).map(|u| c0.powu(u as u32) * bt[u]).collect();
    (0..=n)
        .map(|k| (0..=k).map(|u| a[u] * a[k - u].conj()).sum())
        .collect()
}

pub fn beta_theta0(alpha: f64, theta0: f64, k: usize) -> C64 {
    beta_theta0_series(alpha, theta0, k)[k]
}

/// Taylor coefficients of 1/g, g the outer factor of the weight (no normalization).
pub fn beta_raw_series(sym: &GegenbauerSymbol, n: usize) -> Vec<C64> {
    let b = beta_theta0_series(sym.alpha, sym.theta0, n);
    let c = sym.outer.inverse_coeffs(n + 1);
    (0..=n)
        .map(|k| (0..=k).map(|s| b[s] * c[k - s]).sum())
        .collect()
}

/// Coefficients of 1/g rescaled so the constant term is 1.
pub fn beta_theta0_c1_series(sym: &GegenbauerSymbol, n: usize) -> Vec<C64> {
    let raw = beta_raw_series(sym, n);
    let b0 = raw[0];
    raw.into_iter().map(|v| v / b0).collect()
}

pub fn beta_theta0_c1(sym: &GegenbauerSymbol, k: usize) -> C64 {
    beta_theta0_c1_series(sym, k)[k]
}

pub fn gamma_tilde(alpha: f64, k: i64) -> Result<f64> {
    let d = k as f64 + alpha;
    if d == 0.0 {
        return Err(Error::PoleAtIndex(k));
    }
    Ok((PI * alpha).sin() / PI / d)
}

fn gamma_tilde_unchecked(alpha: f64, v: f64) -> f64 {
    (PI * alpha).sin() / PI / (v + alpha)
}

const RATIO_EULER_TERMS: usize = 12;

/// Fourier coefficient of (1 − χ̄₀χ)^α(1 − χ₀χ)^α / conj(same), written as the
/// convolution Σ_v γ₁(v)γ₂(−k−v) with γ₁(v) = χ₀^v γ̃_v and γ₂(v) = χ̄₀^v γ̃_v.
fn singular_ratio_coeff(alpha: f64, theta0: f64, k: i64, trunc: usize) -> C64 {
    let z = C64::from_polar(1.0, 2.0 * theta0);
    let f = |v: i64| gamma_tilde_unchecked(alpha, v as f64) * gamma_tilde_unchecked(alpha, (-k - v) as f64);
    let lo = k.min(0).min(-k) - trunc as i64;
    let hi = k.max(0).max(-k) + trunc as i64;
    let mut acc = C64::new(0.0, 0.0);
    for v in lo..=hi {
        acc += C64::from_polar(1.0, 2.0 * theta0 * v as f64) * f(v);
    }
    let up: Vec<f64> = (0..=RATIO_EULER_TERMS as i64).map(|j| f(hi + 1 + j)).collect();
    let down: Vec<f64> = (0..=RATIO_EULER_TERMS as i64).map(|j| f(lo - 1 - j)).collect();
    acc += euler_tail(&up, z) * C64::from_polar(1.0, 2.0 * theta0 * (hi + 1) as f64);
    acc += euler_tail(&down, z.conj()) * C64::from_polar(1.0, 2.0 * theta0 * (lo - 1) as f64);
    C64::from_polar(1.0, theta0 * k as f64) * acc
}

/// Fourier coefficient of order k of the unimodular ratio g/ḡ (g the outer factor,
/// including c_{1,1}/conj(c_{1,1})).
pub fn gamma_full(sym: &GegenbauerSymbol, k: i64, trunc: usize) -> Result<C64> {
    let reg: (Vec<C64>, Vec<C64>) = if sym.regular.is_constant() {
        (vec![C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0)])
    } else {
        smooth_fourier(&|th| {
            let v = sym.outer.eval(C64::from_polar(1.0, th));
            v / v.conj()
        })?
    };
    let eval = |t: usize| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, r) in reg.0.iter().enumerate() {
            acc += r * singular_ratio_coeff(sym.alpha, sym.theta0, k - j as i64, t);
        }
        for (j, r) in reg.1.iter().enumerate().skip(1) {
            acc += r * singular_ratio_coeff(sym.alpha, sym.theta0, k + j as i64, t);
        }
        acc
    };
    let full = eval(trunc);
    let half = eval(trunc / 2);
    let change = (full - half).norm();
    if change > 1e-10 {
        return Err(Error::TruncationTooShort(change));
    }
    Ok(full)
}

/// Fourier coefficient of g/ḡ by Gauss–Legendre quadrature on the two arcs between
/// the zeros, where the ratio is smooth.
pub fn gamma_full_quadrature(sym: &GegenbauerSymbol, k: i64, nodes_per_arc: usize) -> C64 {
    let rule = gauss_legendre(nodes_per_arc);
    let t0 = sym.theta0;
    let mut acc = C64::new(0.0, 0.0);
    for (a, b) in [(-t0, t0), (t0, 2.0 * PI - t0)] {
        for (th, w) in gauss_on(a, b, &rule) {
            let g = sym.outer_g(C64::from_polar(1.0, th));
            acc += g / g.conj() * C64::from_polar(w, -(k as f64) * th);
        }
    }
    acc / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::RationalRegularPart;
    use proptest::prelude::*;

    #[test]
    fn beta_tilde_examples() {
        assert_eq!(beta_tilde(0.3, 0), 1.0);
        assert!((beta_tilde(0.25, 1) - 0.25).abs() < 1e-15);
        let asym = 1000f64.powf(-0.75) / gamma_fn(0.25);
        assert!((beta_tilde(0.25, 1000) / asym - 1.0).abs() < 2e-3);
    }

    #[test]
    fn beta_tilde_matches_gamma_ratio() {
        use statrs::function::gamma::ln_gamma;
        for &a in &[0.25, 0.4, 0.1] {
            let b = beta_tilde_series(a, 50);
            for k in 0..=50 {
                let direct = (ln_gamma(k as f64 + a) - ln_gamma(a) - ln_gamma(k as f64 + 1.0)).exp();
                assert!((b[k] / direct - 1.0).abs() < 1e-12);
            }
        }
        let b = beta_tilde_series(-0.25, 50);
        for k in 1..=50 {
            let direct = gamma_fn(k as f64 - 0.25) / (gamma_fn(-0.25) * gamma_fn(k as f64 + 1.0));
            assert!((b[k] / direct - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_gamma() {
        assert!((gamma_fn(-0.25) - (-4.901666809860711)).abs() < 1e-12);
        assert!((gamma_fn(0.5) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn beta_theta0_examples() {
        assert!((beta_theta0(0.25, 1.0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(beta_theta0(0.25, PI / 2.0, 1).norm() < 1e-15);
        let s = beta_theta0_series(0.3, 0.9, 40);
        assert!(s.iter().all(|v| v.im.abs() < 1e-13));
    }

    #[test]
    fn beta_theta0_reflection_symmetry() {
        let a = beta_theta0_series(0.3, 0.8, 30);
        let b = beta_theta0_series(0.3, PI - 0.8, 30);
        for k in 0..=30 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((b[k] - a[k].conj() * sign).norm() < 1e-13);
        }
    }

    #[test]
    fn beta_raw_inverts_outer_factor() {
        let reg = RationalRegularPart::new(&[2.0, 1.0], &[1.0, 0.3]).unwrap();
        let sym = GegenbauerSymbol::new(0.3, 1.2, reg).unwrap();
        let b = beta_raw_series(&sym, 30);
        let z = C64::new(0.2, -0.1);
        let series: C64 = b.iter().enumerate().map(|(k, v)| v * z.powu(k as u32)).sum();
        assert!((series * sym.outer_g(z) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn normalized_beta_examples() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        let a = beta_theta0_c1_series(&sym, 20);
        let b = beta_theta0_series(0.25, PI / 3.0, 20);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-15));
        let reg = RationalRegularPart::new(&[2.0, 1.0], &[1.0]).unwrap();
        let sym = GegenbauerSymbol::new(0.25, PI / 3.0, reg).unwrap();
        assert_eq!(beta_theta0_c1(&sym, 0), C64::new(1.0, 0.0));
    }

    #[test]
    fn gamma_tilde_examples() {
        assert!((gamma_tilde(0.25, 0).unwrap() - 2.0 * 2f64.sqrt() / PI).abs() < 1e-15);
        assert!(gamma_tilde(0.25, -2).unwrap() < 0.0);
        assert!(gamma_tilde(1e-9, 3).unwrap().abs() < 1e-9);
        assert_eq!(gamma_tilde(0.0, 0), Err(Error::PoleAtIndex(0)));
    }

    #[test]
    fn gamma_tilde_is_ratio_coefficient() {
        // (1 − χ̄)^α/(1 − χ)^α has phase α(π − θ) on (0, 2π); its coefficients are γ̃_k
        let a = 0.25;
        let rule = gauss_legendre(400);
        for k in [-3i64, -1, 0, 2, 5] {
            let v: C64 = gauss_on(0.0, 2.0 * PI, &rule)
                .map(|(th, w)| C64::from_polar(w, a * (PI - th) - k as f64 * th))
                .sum::<C64>()
                / (2.0 * PI);
            assert!((v.re - gamma_tilde(a, k).unwrap()).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_full_matches_quadrature() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 2.0).unwrap();
        let a = gamma_full(&sym, -50, 4000).unwrap();
        let b = gamma_full_quadrature(&sym, -50, 400);
        assert!((a - b).norm() < 1e-6, "{a} {b}");
        let reg = RationalRegularPart::new(&[2.0, 1.0], &[1.0, -0.4]).unwrap();
        let sym = GegenbauerSymbol::new(-0.3, 1.0, reg).unwrap();
        for k in [-7i64, 0, 3, 20] {
            let a = gamma_full(&sym, k, 4000).unwrap();
            let b = gamma_full_quadrature(&sym, k, 400);
            assert!((a - b).norm() < 1e-9, "{k}: {a} {b}");
        }
    }

    #[test]
    fn gamma_full_parseval() {
        let reg = RationalRegularPart::new(&[2.0, 1.0], &[1.0]).unwrap();
        let sym = GegenbauerSymbol::new(0.25, 1.0, reg).unwrap();
        let total: f64 = (-300i64..=300).map(|k| gamma_full(&sym, k, 2000).unwrap().norm_sqr()).sum();
        assert!(total <= 1.0 + 1e-6 && total > 0.99);
    }

    #[test]
    fn gamma_full_envelope_halves() {
        let sym = GegenbauerSymbol::plain(0.25, PI / 3.0).unwrap();
        let env = |k0: i64| {
            let ks: Vec<i64> = (k0..k0 + 24).collect();
            let vals: Vec<f64> = ks.iter().map(|&k| gamma_full(&sym, -k, 2000).unwrap().re).collect();
            let kf: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
            crate::envelope::fit(&kf, &vals, PI / 3.0).amplitude
        };
        let r = env(1000) / env(500);
        assert!((r - 0.5).abs() < 0.05, "{r}");
    }

    fn partial(beta: f64, theta0: f64, m0: u64, m1: u64) -> f64 {
        let z = C64::from_polar(1.0, 2.0 * theta0);
        let mut p = z.powu(m0 as u32);
        let mut s = C64::new(0.0, 0.0);
        for u in m0..=m1 {
            s += p * (u as f64).powf(beta);
            p *= z;
        }
        s.norm()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn oscillatory_partial_sums_are_bounded(
            beta in 0.05f64..0.9,
            theta0 in 0.3f64..2.8,
            m0 in 1u64..2000,
            span in 1u64..20000,
        ) {
            let m1 = m0 + span;
            // Abel summation: partial sums of z^u are bounded by 2/|1 − z| = 1/sin θ₀
            let c = 2.0 / theta0.sin() * (1.0 + 1e-9);
            prop_assert!(partial(beta, theta0, m0, m1) <= c * (m1 as f64).powf(beta));
            let nb = -beta;
            prop_assert!(partial(nb, theta0, m0, m1) <= c * (m0 as f64).powf(nb));
        }
    }
}
