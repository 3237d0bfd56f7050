#![allow(dead_code)]

use std::io::Write;

use statrs::distribution::{Beta, ContinuousCDF};

use rieszcap::{
    collect_hits, estimate_capacity, CapacityEstimate64, CollectOptions, EstimatorConfig64, Shape64, WalkConfig64,
    Walker,
};

/// Writes the verdict line straight to stderr so it survives output capture.
pub fn verdict(criterion: u32, title: &str, pass: bool, detail: &str) {
    let line = format!(
        "acceptance criterion {criterion:>2} [{}] {title}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

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

/// Tensor Gauss–Legendre rule over a rectangle.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, (a0, a1): (f64, f64), (b0, b1): (f64, f64), order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let (ha, hb) = (0.5 * (a1 - a0), 0.5 * (b1 - b0));
    let mut sum = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let u = a0 + ha * (xi + 1.0);
        for (xj, wj) in x.iter().zip(&w) {
            sum += wi * wj * f(u, b0 + hb * (xj + 1.0));
        }
    }
    ha * hb * sum
}

/// Pearson χ² over cells with expected counts; cells expecting fewer than 5
/// are pooled. Returns (statistic, degrees of freedom).
pub fn chi_square(observed: &[f64], expected: &[f64]) -> (f64, usize) {
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pooled_o, mut pooled_e) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 5.0 {
            pooled_o += o;
            pooled_e += e;
        } else {
            stat += (o - e) * (o - e) / e;
            cells += 1;
        }
    }
    if pooled_e >= 5.0 {
        stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}

/// Walks `n` hits and estimates the capacity.
pub fn capacity_run(
    shape: &Shape64,
    config: &WalkConfig64,
    n: usize,
    estimator: &EstimatorConfig64,
) -> CapacityEstimate64 {
    let walker = Walker::default_for(config.alpha);
    let set = collect_hits(config, shape, n, walker, &CollectOptions::default()).unwrap();
    estimate_capacity(&set.hits, config.alpha, estimator).unwrap()
}

/// `|a - b| <= z sqrt(sa² + sb²)`.
pub fn within_joint_ci(a: f64, sa: f64, b: f64, sb: f64, z: f64) -> bool {
    (a - b).abs() <= z * sa.hypot(sb)
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
