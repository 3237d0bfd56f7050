//! Estimates the α-capacity of the unit ball and compares it with the closed form.
//!
//! `cargo run --release -p rieszcap --example unit_ball -- 1.5 3 10000`

use std::time::Instant;

use rieszcap::{ball_capacity, collect_hits, estimate_capacity, CollectOptions, EstimatorConfig64, Shape64, WalkConfig64, Walker};

fn main() -> rieszcap::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let alpha: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(1.5);
    let d: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let seed: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1);

    let ball = Shape64::unit_ball(d)?;
    let config = WalkConfig64::with_radii(alpha, d, 2.0, 4.0).with_seed(seed);
    let t0 = Instant::now();
    let hits = collect_hits(&config, &ball, n, Walker::default_for(alpha), &CollectOptions::default())?;
    let t1 = Instant::now();
    let cap = estimate_capacity(&hits.hits, alpha, &EstimatorConfig64::default())?;
    let t2 = Instant::now();

    println!("alpha = {alpha}, d = {d}, n = {n}");
    println!(
        "paths {} escapes {} mean steps/path {:.1}",
        hits.paths_run, hits.escapes, hits.steps.mean_per_path
    );
    println!("estimate {:.5} CI {:?}", cap.value, cap.ci());
    println!("exact    {:.5}", ball_capacity(alpha, d, 1.0)?);
    println!(
        "tau {:.4} nu_hat {:?} n3 {} I1 {:.5} I2 {:.5}",
        cap.energy.tau, cap.energy.nu_hat, cap.energy.n3, cap.energy.i1, cap.energy.i2
    );
    println!("walk {:.2?}  estimate {:.2?}", t1 - t0, t2 - t1);
    Ok(())
}
