//! Small statistical helpers shared by the walkers, the estimator and the
//! distribution tests: normal quantiles and Kolmogorov–Smirnov statistics.

use statrs::distribution::{ContinuousCDF, Normal};

/// Standard normal quantile `Φ⁻¹(p)`.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p)
}

/// Two-sided critical value `z_{δ/2}` of a `1 − δ` interval.
pub fn z_two_sided(delta: f64) -> f64 {
    normal_quantile(1.0 - delta / 2.0)
}

fn sorted(sample: &[f64]) -> Vec<f64> {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// One-sample KS distance `sup |F_n − F|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let s = sorted(sample);
    let n = s.len() as f64;
    s.iter().enumerate().fold(0.0_f64, |acc, (i, &x)| {
        let f = cdf(x);
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        acc.max(upper).max(lower)
    })
}

/// Two-sample KS distance `sup |F_n − G_m|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0_f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic Kolmogorov tail `P(D > d)` for effective sample size `n`, with
/// the usual small-sample correction of the scaled statistic.
pub fn ks_p_value(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    kolmogorov_survival(lambda)
}

pub fn ks_two_sample_p_value(d: f64, n: usize, m: usize) -> f64 {
    ks_p_value(d, (n * m) as f64 / (n + m) as f64)
}

/// `Q(λ) = 2 Σ (−1)^{k−1} exp(−2k²λ²)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Empirical CDF of `sample` evaluated on `grid`.
pub fn ecdf_on_grid(sample: &[f64], grid: &[f64]) -> Vec<f64> {
    let s = sorted(sample);
    let n = s.len() as f64;
    grid.iter()
        .map(|&x| s.partition_point(|&v| v <= x) as f64 / n)
        .collect()
}
