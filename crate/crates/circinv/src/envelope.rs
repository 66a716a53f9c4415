//! Windowed least-squares envelope fit of oscillatory sequences.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub amplitude: f64,
    pub phase: f64,
}

/// Fit a·cos(kθ) + b·sin(kθ) = A·cos(kθ + ψ) by least squares over the given points.
pub fn fit(ks: &[f64], values: &[f64], theta: f64) -> Envelope {
    let (mut cc, mut cs, mut ss, mut yc, mut ys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&k, &y) in ks.iter().zip(values) {
        let (s, c) = (k * theta).sin_cos();
        cc += c * c;
        cs += c * s;
        ss += s * s;
        yc += y * c;
        ys += y * s;
    }
    let det = cc * ss - cs * cs;
    let a = (yc * ss - ys * cs) / det;
    let b = (ys * cc - yc * cs) / det;
    Envelope { amplitude: a.hypot(b), phase: (-b).atan2(a) }
}

/// Window width ⌈2π/θ⌉·4.
pub fn window(theta: f64) -> usize {
    (2.0 * PI / theta).ceil() as usize * 4
}

/// Integer window of width `window(theta)` centred at k0, clipped to [lo, hi].
pub fn window_indices(k0: usize, theta: f64, lo: usize, hi: usize) -> Vec<usize> {
    let w = window(theta);
    let start = k0.saturating_sub(w / 2).max(lo);
    let end = (start + w).min(hi);
    (start..end).collect()
}

/// Fit a sequence given as a function of the index over the window around k0.
pub fn fit_fn(k0: usize, theta: f64, lo: usize, hi: usize, f: &dyn Fn(usize) -> f64) -> Envelope {
    let idx = window_indices(k0, theta, lo, hi);
    let ks: Vec<f64> = idx.iter().map(|&k| k as f64).collect();
    let vs: Vec<f64> = idx.iter().map(|&k| f(k)).collect();
    fit(&ks, &vs, theta)
}

pub fn rel_err(exact: f64, pred: f64) -> f64 {
    (exact - pred).abs() / pred.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_pure_cosine() {
        let ks: Vec<f64> = (100..124).map(|k| k as f64).collect();
        let vs: Vec<f64> = ks.iter().map(|k| 0.7 * (1.1 * k + 0.3).cos()).collect();
        let e = fit(&ks, &vs, 1.1);
        assert!((e.amplitude - 0.7).abs() < 1e-12);
        assert!((e.phase - 0.3).abs() < 1e-12);
    }
}
