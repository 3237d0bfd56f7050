#![allow(dead_code)]

use statrs::distribution::{Beta, ContinuousCDF};

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
    }
    (x, w)
}

/// Composite Gauss–Legendre rule over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(16);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * f(lo + 0.5 * h * (xi + 1.0));
        }
    }
    0.5 * h * sum
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Beta(a, b) CDF. statrs rounds the CDF to 1 within about 1e-15 of the
/// upper end, which hides real mass when b is small, so the upper half goes
/// through the reflected law.
pub fn beta_cdf(a: f64, b: f64) -> impl Fn(f64) -> f64 {
    let lower = Beta::new(a, b).unwrap();
    let upper = Beta::new(b, a).unwrap();
    move |x| {
        let x = x.clamp(0.0, 1.0);
        if x <= 0.5 {
            lower.cdf(x)
        } else {
            1.0 - upper.cdf(1.0 - x)
        }
    }
}
