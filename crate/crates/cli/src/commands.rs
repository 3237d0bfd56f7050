//! Experiment drivers. Each returns a serializable report; writing files is
//! left to the caller.

use rieszcap::stats::{ks_statistic, ks_two_sample};
use rieszcap::{
    ball_capacity, capacity_from_hit_fraction, collect_hits, derive_seed, estimate_capacity, CapacityEstimate64,
    EstimatorConfig64, HitSet64, PointCloud64, Shape64, WalkConfig64, Walker,
};
use serde::Serialize;

use crate::config::{RunConfig, Settings};
use crate::error::{CliError, CliResult};
use crate::shape_file::as_single_ball;

/// Runs paths from infinity until `run.n` hits are recorded.
///
/// Configuration warnings are returned as messages.
pub fn simulate(shape: &Shape64, run: &RunConfig, record_paths: usize) -> CliResult<(HitSet64, Vec<String>)> {
    let warnings = run
        .walk
        .validate_for(shape)?
        .into_iter()
        .map(|w| format!("{w:?}"))
        .collect();
    let options = run.collect_options().with_recorded_paths(record_paths);
    let set = collect_hits(&run.walk, shape, run.n, run.walker, &options)?;
    Ok((set, warnings))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HitStats {
    pub walker: String,
    pub hits: usize,
    pub paths_run: u64,
    pub escapes: u64,
    pub cap_exceeded: u64,
    pub hit_fraction: f64,
    pub steps_total: u64,
    pub steps_max: u64,
    pub steps_mean_per_path: f64,
    pub steps_mean_per_hit: f64,
}

impl HitStats {
    pub fn new(set: &HitSet64, run: &RunConfig) -> Self {
        HitStats {
            walker: set.walker.name().to_string(),
            hits: set.len(),
            paths_run: set.paths_run,
            escapes: set.escapes,
            cap_exceeded: set.cap_exceeded,
            hit_fraction: set.hit_fraction(run.walk.step_cap_policy),
            steps_total: set.steps.total,
            steps_max: set.steps.max,
            steps_mean_per_path: set.steps.mean_per_path,
            steps_mean_per_hit: set.steps.mean_per_hit,
        }
    }
}

/// Capacity output. Infinite energies are written as `null`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub alpha: f64,
    pub d: usize,
    pub n: usize,
    pub n1: usize,
    pub p_tau: f64,
    pub tau: f64,
    pub nu_hat: Option<f64>,
    pub n3: usize,
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: Option<f64>,
    #[serde(rename = "I")]
    pub i: Option<f64>,
    pub capacity: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub infinite_energy: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl From<&CapacityEstimate64> for CapacityReport {
    fn from(c: &CapacityEstimate64) -> Self {
        let e = &c.energy;
        CapacityReport {
            alpha: e.alpha,
            d: e.d,
            n: e.n,
            n1: e.n1,
            p_tau: e.p_tau,
            tau: e.tau,
            nu_hat: e.nu_hat.and_then(finite),
            n3: e.n3,
            i1: e.i1,
            i2: finite(e.i2),
            i: finite(e.i),
            capacity: c.value,
            ci_low: c.ci_low,
            ci_high: c.ci_high,
            infinite_energy: c.infinite_energy(),
        }
    }
}

/// Estimator warnings as messages.
pub fn estimate_warnings(c: &CapacityEstimate64) -> Vec<String> {
    c.energy.warnings.iter().map(|w| format!("{w:?}")).collect()
}

pub fn capacity_from_points(points: &PointCloud64, alpha: f64, cfg: &EstimatorConfig64) -> CliResult<CapacityEstimate64> {
    Ok(estimate_capacity(points, alpha, cfg)?)
}

/// Simulates and estimates in one go.
pub fn capacity_of_shape(shape: &Shape64, run: &RunConfig) -> CliResult<CapacityEstimate64> {
    let (set, _) = simulate(shape, run, 0)?;
    capacity_from_points(&set.hits, run.walk.alpha, &run.estimator)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub capacity: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Capacity over that of the equal-volume ball.
    pub relative_capacity: Option<f64>,
}

/// One capacity estimate per α with seeds derived from the base seed.
pub fn sweep(shape: &Shape64, alphas: &[f64], settings: &Settings, normalize: bool) -> CliResult<Vec<SweepRow>> {
    let base_seed = RunConfig::resolve(settings, shape)?.walk.seed;
    let reference = if normalize { Some(shape.ball_same_volume()?) } else { None };
    alphas
        .iter()
        .enumerate()
        .map(|(k, &alpha)| {
            let s = settings.clone().overlay(Settings {
                alpha: Some(alpha),
                seed: Some(derive_seed(base_seed, k as u64)),
                walker: settings.walker.clone().or(Some("auto".into())),
                ..Default::default()
            });
            let run = RunConfig::resolve(&s, shape)?;
            let est = capacity_of_shape(shape, &run)?;
            let relative_capacity = match &reference {
                Some(ball) if !rieszcap::is_recurrent(alpha, shape.dim()) => Some(est.value / ball.capacity(alpha)?),
                _ => None,
            };
            Ok(SweepRow {
                alpha,
                capacity: est.value,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
                relative_capacity,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub alpha: f64,
    pub d: usize,
    pub radius: f64,
    pub exact: f64,
    pub n: usize,
    pub p_tau: f64,
    pub replications: usize,
    pub covered: usize,
    pub coverage: f64,
    pub infinite_energy: usize,
    pub mean_capacity: f64,
    pub mean_ci_width: Option<f64>,
}

/// Fraction of `replications` intervals containing the exact ball capacity.
pub fn coverage(shape: &Shape64, replications: usize, settings: &Settings) -> CliResult<CoverageReport> {
    let (_, radius) = as_single_ball(shape).ok_or_else(|| {
        CliError::Usage("coverage needs a shape with a closed-form capacity: a single ball".into())
    })?;
    if replications == 0 {
        return Err(CliError::Usage("replications must be at least 1".into()));
    }
    let base = RunConfig::resolve(settings, shape)?;
    let alpha = base.walk.alpha;
    let exact = ball_capacity(alpha, shape.dim(), radius)?;
    let mut covered = 0;
    let mut infinite = 0;
    let mut sum = 0.0;
    let mut widths = Vec::new();
    for k in 0..replications {
        let mut run = base.clone();
        run.walk.seed = derive_seed(base.walk.seed, k as u64);
        let est = capacity_of_shape(shape, &run)?;
        covered += usize::from(est.ci_contains(exact));
        infinite += usize::from(est.infinite_energy());
        sum += est.value;
        if let Some((lo, hi)) = est.ci() {
            widths.push(hi - lo);
        }
    }
    Ok(CoverageReport {
        alpha,
        d: shape.dim(),
        radius,
        exact,
        n: base.n,
        p_tau: base.estimator.p_tau,
        replications,
        covered,
        coverage: covered as f64 / replications as f64,
        infinite_energy: infinite,
        mean_capacity: sum / replications as f64,
        mean_ci_width: (!widths.is_empty()).then(|| widths.iter().sum::<f64>() / widths.len() as f64),
    })
}

/// Half-thickness of the thin disk in three dimensions.
pub const SUBORDINATION_HALF_THICKNESS: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubordinationReport {
    pub n: usize,
    pub grid: Vec<f64>,
    /// Brownian hits on the thin disk in ℝ³, radius in the disk plane.
    pub wos_disk_3d: Vec<f64>,
    /// α = 1 hits on the unit disk in ℝ².
    pub wiob_disk_2d: Vec<f64>,
    /// `1 − √(1 − r²)`.
    pub exact: Vec<f64>,
    pub ks_wos_wiob: f64,
    pub ks_wos_exact: f64,
    pub ks_wiob_exact: f64,
}

impl SubordinationReport {
    pub fn max_ks(&self) -> f64 {
        self.ks_wos_wiob.max(self.ks_wos_exact).max(self.ks_wiob_exact)
    }
}

pub fn exact_disk_cdf(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    1.0 - (1.0 - r * r).sqrt()
}

fn ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

/// The Brownian equilibrium measure of a flat disk in ℝ³ and the α = 1
/// equilibrium measure of the disk in ℝ² share one radial law.
pub fn subordination(n: usize, seed: u64, workers: usize, grid_points: usize) -> CliResult<SubordinationReport> {
    if grid_points < 2 {
        return Err(CliError::Usage("the radius grid needs at least 2 points".into()));
    }
    let options = rieszcap::CollectOptions::default().with_workers(workers);

    let coin = Shape64::coin(3, 1.0, SUBORDINATION_HALF_THICKNESS)?;
    let cfg3 = WalkConfig64::with_radii(2.0, 3, 5.0, 8.0).with_seed(derive_seed(seed, 0));
    let hits3 = collect_hits(&cfg3, &coin, n, Walker::Wos, &options)?;
    // The coin's axis is x1, so the in-plane radius uses x2 and x3.
    let mut r3: Vec<f64> = hits3.hits.iter().map(|p| p[1].hypot(p[2])).collect();

    let disk = Shape64::unit_ball(2)?;
    let cfg2 = WalkConfig64::with_radii(1.0, 2, 2.0, 4.0).with_seed(derive_seed(seed, 1));
    let hits2 = collect_hits(&cfg2, &disk, n, Walker::Wiob, &options)?;
    let mut r2 = hits2.hits.radii();

    r3.sort_by(f64::total_cmp);
    r2.sort_by(f64::total_cmp);
    let grid: Vec<f64> = (0..grid_points).map(|k| k as f64 / (grid_points - 1) as f64).collect();
    Ok(SubordinationReport {
        n,
        wos_disk_3d: grid.iter().map(|&r| ecdf(&r3, r)).collect(),
        wiob_disk_2d: grid.iter().map(|&r| ecdf(&r2, r)).collect(),
        exact: grid.iter().map(|&r| exact_disk_cdf(r)).collect(),
        ks_wos_wiob: ks_two_sample(&r3, &r2),
        ks_wos_exact: ks_statistic(&r3, exact_disk_cdf),
        ks_wiob_exact: ks_statistic(&r2, exact_disk_cdf),
        grid,
    })
}

/// Closed-form capacity of the ball of radius `r`.
pub fn ball_exact(alpha: f64, d: usize, r: f64) -> CliResult<f64> {
    Ok(ball_capacity(alpha, d, r)?)
}

/// Hit-fraction capacity for α = 2, as a JSON-ready pair of value and interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HitFractionReport {
    pub capacity: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub hit_fraction: f64,
    pub trials: u64,
}

pub fn hit_fraction_report(set: &HitSet64, run: &RunConfig) -> CliResult<HitFractionReport> {
    let c = capacity_from_hit_fraction(set, &run.walk, run.estimator.delta)?;
    Ok(HitFractionReport {
        capacity: c.value,
        ci_low: c.ci_low,
        ci_high: c.ci_high,
        hit_fraction: c.hit_fraction,
        trials: c.trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_disk_curve() {
        assert_eq!(exact_disk_cdf(0.0), 0.0);
        assert_eq!(exact_disk_cdf(1.0), 1.0);
        assert!((exact_disk_cdf(0.6) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn ball_exact_values() {
        assert!((ball_exact(2.0, 3, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((ball_exact(2.0, 3, 2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((ball_exact(1.0, 2, 1.0).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-14);
        let err = ball_exact(2.0, 2, 1.0).unwrap_err().to_string();
        assert!(err.contains("recurrent"), "{err}");
    }

    #[test]
    fn coverage_rejects_non_balls() {
        let cube = Shape64::centered_cube(3, 1.0).unwrap();
        assert!(coverage(&cube, 1, &Settings::default()).is_err());
    }
}
