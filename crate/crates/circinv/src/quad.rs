//! Gauss–Legendre rules and an adaptive integrator built on them.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Map a rule on [−1, 1] to [a, b].
pub fn gauss_on(a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> impl Iterator<Item = (f64, f64)> + '_ {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0.iter().zip(&rule.1).map(move |(&x, &w)| (m + r * x, r * w))
}

fn panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    gauss_on(a, b, rule).map(|(x, w)| w * f(x)).sum()
}

/// Adaptive bisection with 10- and 20-point panels until each panel meets `rel` of the running total.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> Result<f64> {
    let lo = gauss_legendre(10);
    let hi = gauss_legendre(20);
    let whole = panel(f, a, b, &hi);
    let scale = whole.abs().max(1e-300);
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    while let Some((x, y, depth)) = stack.pop() {
        let coarse = panel(f, x, y, &lo);
        let fine = panel(f, x, y, &hi);
        if (fine - coarse).abs() <= rel * scale * (y - x) / (b - a) || (fine - coarse).abs() < 1e-300 {
            total += fine;
        } else if depth > 60 {
            return Err(Error::NoConvergence("adaptive quadrature depth".into()));
        } else {
            let m = 0.5 * (x + y);
            stack.push((m, y, depth + 1));
            stack.push((x, m, depth + 1));
        }
    }
    if !total.is_finite() {
        return Err(Error::NoConvergence("non-finite integral".into()));
    }
    Ok(total)
}
