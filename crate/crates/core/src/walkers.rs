//! Path generators producing hitting locations of a target set from a start
//! "at infinity": the simple stable random walk, Walk-On-Spheres (α = 2) and
//! Walk-In-and-Out-of-Balls (α < 2), plus the batch driver.
//!
//! Paths start from the hitting law of the launch ball (uniform on its sphere
//! for α = 2, its equilibrium measure for α < 2). Whenever a path ends up
//! beyond the escape radius it either escapes for good, with the exact
//! probability of never returning to the launch ball, or re-enters the launch
//! ball at an exactly sampled hitting location.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::ball_kernels::{hit_ball_probability, hit_location_into, reentry_into, CenteredExit};
use crate::error::{invalid, Error, Result};
use crate::geometry::Shape;
use crate::points::PointCloud;
use crate::rng::RngStream;
use crate::stable_sampling::{EquilibriumBall, IsotropicStable, StableStepParams};
use crate::stats::normal_quantile;
use crate::vecops::{axpy, norm, scale_in_place, scaled};
use crate::Real;

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
/// Default launch radius as a multiple of the shape's bounding radius.
pub const DEFAULT_LAUNCH_FACTOR: f64 = 1.2;
pub const DEFAULT_ESCAPE_FACTOR: f64 = 2.0;
/// Default simple-walk step scale as a fraction of the launch radius.
pub const DEFAULT_GAMMA_FRACTION: f64 = 0.01;

/// Consecutive misses after which a run with a negligible hit rate is aborted.
pub const ABORT_CONSECUTIVE_MISSES: u64 = 100_000;
pub const ABORT_HIT_PROBABILITY: f64 = 1e-6;

/// What to do with paths that exhaust `max_steps`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepCapPolicy {
    /// Leave them out of the hit-fraction denominator.
    #[default]
    Exclude,
    /// Count them as misses.
    CountAsMiss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Walker {
    Simple,
    Wos,
    Wiob,
}

impl Walker {
    /// WOS for α = 2, WIOB otherwise.
    pub fn default_for<T: Real>(alpha: T) -> Self {
        if alpha == T::lit(2.0) {
            Walker::Wos
        } else {
            Walker::Wiob
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Walker::Simple => "simple",
            Walker::Wos => "wos",
            Walker::Wiob => "wiob",
        }
    }
}

impl fmt::Display for Walker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Walker {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(Walker::Simple),
            "wos" => Ok(Walker::Wos),
            "wiob" => Ok(Walker::Wiob),
            other => Err(invalid(format!("unknown walker '{other}' (expected simple, wos or wiob)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkConfig<T> {
    pub alpha: T,
    pub d: usize,
    /// Step scale of the simple stable walk.
    pub gamma: T,
    /// Hit tolerance.
    pub epsilon: T,
    pub r_launch: T,
    pub r_escape: T,
    pub max_steps: u64,
    pub seed: u64,
    pub step_cap_policy: StepCapPolicy,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigWarning {
    /// `epsilon << gamma << r_launch` does not hold (by a factor of 10 each).
    ScaleOrdering { epsilon: f64, gamma: f64, r_launch: f64 },
    /// α = d = 2: paths never escape, every path eventually hits.
    Recurrent,
}

impl<T: Real> WalkConfig<T> {
    /// Defaults for a shape: launch radius 1.2× the bounding radius, escape
    /// radius twice that, ε = 1e-6, γ = R_launch/100.
    pub fn for_shape(alpha: T, shape: &Shape<T>) -> Self {
        let r_launch = T::lit(DEFAULT_LAUNCH_FACTOR) * shape.bounding_radius();
        Self::with_radii(alpha, shape.dim(), r_launch, T::lit(DEFAULT_ESCAPE_FACTOR) * r_launch)
    }

    pub fn with_radii(alpha: T, d: usize, r_launch: T, r_escape: T) -> Self {
        Self {
            alpha,
            d,
            gamma: T::lit(DEFAULT_GAMMA_FRACTION) * r_launch,
            epsilon: T::lit(DEFAULT_EPSILON),
            r_launch,
            r_escape,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            step_cap_policy: StepCapPolicy::Exclude,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self) -> Result<Vec<ConfigWarning>> {
        let two = T::lit(2.0);
        if !(self.alpha > T::zero() && self.alpha <= two) {
            return Err(invalid(format!("alpha must lie in (0, 2], got {}", self.alpha)));
        }
        if self.d < 2 {
            return Err(Error::InvalidDimension(self.d));
        }
        if !(self.gamma > T::zero() && self.gamma.is_finite()) {
            return Err(invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.epsilon >= T::zero() && self.epsilon.is_finite()) {
            return Err(invalid(format!("epsilon must be non-negative, got {}", self.epsilon)));
        }
        if !(self.r_launch > T::zero() && self.r_launch < self.r_escape && self.r_escape.is_finite()) {
            return Err(invalid(format!(
                "need 0 < r_launch < r_escape (got {} and {})",
                self.r_launch, self.r_escape
            )));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps must be positive"));
        }
        let mut warnings = Vec::new();
        let ten = T::lit(10.0);
        if !(self.epsilon * ten <= self.gamma && self.gamma * ten <= self.r_launch) {
            warnings.push(ConfigWarning::ScaleOrdering {
                epsilon: self.epsilon.as_f64(),
                gamma: self.gamma.as_f64(),
                r_launch: self.r_launch.as_f64(),
            });
        }
        if T::from_count(self.d) <= self.alpha {
            warnings.push(ConfigWarning::Recurrent);
        }
        Ok(warnings)
    }

    /// [`WalkConfig::validate`] plus the shape checks: matching dimension and
    /// containment in the launch ball.
    pub fn validate_for(&self, shape: &Shape<T>) -> Result<Vec<ConfigWarning>> {
        let warnings = self.validate()?;
        if shape.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: shape.dim(),
            });
        }
        let rb = shape.bounding_radius();
        if rb > self.r_launch {
            return Err(invalid(format!(
                "shape (bounding radius {rb}) is not contained in the launch ball (radius {})",
                self.r_launch
            )));
        }
        Ok(warnings)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Termination<T> {
    Hit(Vec<T>),
    Escaped,
    StepCapExceeded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkOutcome<T> {
    pub termination: Termination<T>,
    /// Moves made (stable steps, sphere or ball exits); re-entries do not count.
    pub steps: u64,
    /// Every visited position including the launch point, when recorded.
    pub path: Option<Vec<Vec<T>>>,
}

impl<T> WalkOutcome<T> {
    pub fn is_hit(&self) -> bool {
        matches!(self.termination, Termination::Hit(_))
    }

    pub fn location(&self) -> Option<&[T]> {
        match &self.termination {
            Termination::Hit(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Reentry<T> {
    Escaped,
    Reentered(Vec<T>),
}

/// A configured simulation: parameters, target and precomputed samplers.
#[derive(Clone, Debug)]
pub struct Walk<'a, T: Real> {
    config: &'a WalkConfig<T>,
    shape: &'a Shape<T>,
    launch: EquilibriumBall<T>,
    step: IsotropicStable<T>,
    exit: Option<CenteredExit<T>>,
}

impl<'a, T: Real> Walk<'a, T> {
    pub fn new(config: &'a WalkConfig<T>, shape: &'a Shape<T>) -> Result<Self> {
        config.validate_for(shape)?;
        Self::unchecked(config, shape)
    }

    fn unchecked(config: &'a WalkConfig<T>, shape: &'a Shape<T>) -> Result<Self> {
        let exit = if config.alpha < T::lit(2.0) {
            Some(CenteredExit::new(config.alpha, config.d)?)
        } else {
            None
        };
        Ok(Self {
            config,
            shape,
            launch: EquilibriumBall::new(config.alpha, config.d)?,
            step: IsotropicStable::new(StableStepParams::new(config.alpha, config.gamma, config.d)?)?,
            exit,
        })
    }

    pub fn config(&self) -> &WalkConfig<T> {
        self.config
    }

    pub fn launch_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        let mut x = vec![T::zero(); self.config.d];
        self.launch.sample_into(&mut x, rng);
        scale_in_place(&mut x, self.config.r_launch);
        x
    }

    /// Escape decision for a point beyond the escape sphere.
    pub fn escape_or_reenter<R: Rng + ?Sized>(&self, x: &[T], rng: &mut R) -> Result<Reentry<T>> {
        let c = self.config;
        let r = norm(x);
        if !(r > c.r_escape) {
            return Err(Error::Domain(format!("escape check needs |x| > r_escape ({r} <= {})", c.r_escape)));
        }
        let p = hit_ball_probability(c.alpha, c.d, r / c.r_launch)?;
        if !(T::unit(rng) < p) {
            return Ok(Reentry::Escaped);
        }
        let unit_start = scaled(x, c.r_launch.recip());
        let mut y = vec![T::zero(); c.d];
        if c.alpha == T::lit(2.0) {
            reentry_into(&unit_start, &mut y, rng)?;
        } else {
            hit_location_into(&self.launch, &unit_start, &mut y, rng)?;
        }
        scale_in_place(&mut y, c.r_launch);
        Ok(Reentry::Reentered(y))
    }

    pub fn run<R: Rng + ?Sized>(&self, walker: Walker, rng: &mut R, record_path: bool) -> Result<WalkOutcome<T>> {
        match walker {
            Walker::Simple => self.run_simple(rng, record_path),
            Walker::Wos => {
                if self.config.alpha != T::lit(2.0) {
                    return Err(invalid(format!(
                        "walk-on-spheres needs alpha = 2 (got {}); use wiob",
                        self.config.alpha
                    )));
                }
                self.run_ball_walk(rng, record_path)
            }
            Walker::Wiob => {
                if self.config.alpha >= T::lit(2.0) {
                    return Err(invalid("walk-in-and-out-of-balls needs alpha < 2; use wos"));
                }
                self.run_ball_walk(rng, record_path)
            }
        }
    }

    fn run_simple<R: Rng + ?Sized>(&self, rng: &mut R, record_path: bool) -> Result<WalkOutcome<T>> {
        let c = self.config;
        let mut path = record_path.then(Vec::new);
        let mut x = self.launch_point(rng);
        let mut y = vec![T::zero(); c.d];
        let mut steps = 0u64;
        loop {
            if let Some(p) = path.as_mut() {
                p.push(x.clone());
            }
            if self.shape.is_hit(&x, c.epsilon) {
                return Ok(finish(Termination::Hit(x), steps, path));
            }
            if steps >= c.max_steps {
                return Ok(finish(Termination::StepCapExceeded, steps, path));
            }
            self.step.sample_into(&mut y, rng);
            axpy(&mut x, T::one(), &y);
            steps += 1;
            if norm(&x) > c.r_escape {
                match self.escape_or_reenter(&x, rng)? {
                    Reentry::Escaped => return Ok(finish(Termination::Escaped, steps, path)),
                    Reentry::Reentered(z) => x = z,
                }
            }
        }
    }

    /// WOS (α = 2, uniform sphere exits) and WIOB (α < 2, centred ball exits)
    /// share the same loop.
    fn run_ball_walk<R: Rng + ?Sized>(&self, rng: &mut R, record_path: bool) -> Result<WalkOutcome<T>> {
        let c = self.config;
        let mut path = record_path.then(Vec::new);
        let mut x = self.launch_point(rng);
        let mut u = vec![T::zero(); c.d];
        let mut steps = 0u64;
        loop {
            if let Some(p) = path.as_mut() {
                p.push(x.clone());
            }
            let r = self.shape.dist(&x);
            if r <= c.epsilon {
                return Ok(finish(Termination::Hit(x), steps, path));
            }
            if steps >= c.max_steps {
                return Ok(finish(Termination::StepCapExceeded, steps, path));
            }
            match &self.exit {
                Some(exit) => exit.sample_into(&mut u, rng),
                None => crate::stable_sampling::fill_uniform_sphere(&mut u, rng),
            }
            axpy(&mut x, r, &u);
            steps += 1;
            if norm(&x) > c.r_escape {
                match self.escape_or_reenter(&x, rng)? {
                    Reentry::Escaped => return Ok(finish(Termination::Escaped, steps, path)),
                    Reentry::Reentered(z) => x = z,
                }
            }
        }
    }
}

fn finish<T>(termination: Termination<T>, steps: u64, path: Option<Vec<Vec<T>>>) -> WalkOutcome<T> {
    WalkOutcome {
        termination,
        steps,
        path,
    }
}

/// Starting point: uniform on the launch sphere (α = 2) or the launch ball's
/// equilibrium measure (α < 2).
pub fn launch_point<T: Real, R: Rng + ?Sized>(config: &WalkConfig<T>, rng: &mut R) -> Result<Vec<T>> {
    config.validate()?;
    let mut x = vec![T::zero(); config.d];
    EquilibriumBall::new(config.alpha, config.d)?.sample_into(&mut x, rng);
    scale_in_place(&mut x, config.r_launch);
    Ok(x)
}

/// Escape-or-re-enter decision for `|x| > r_escape` (no target needed).
pub fn escape_or_reenter<T: Real, R: Rng + ?Sized>(
    config: &WalkConfig<T>,
    x: &[T],
    rng: &mut R,
) -> Result<Reentry<T>> {
    config.validate()?;
    if x.len() != config.d {
        return Err(Error::DimensionMismatch {
            expected: config.d,
            found: x.len(),
        });
    }
    // Any shape inside the launch ball gives the same samplers.
    let placeholder = Shape::unit_ball(config.d)?;
    Walk::unchecked(config, &placeholder)?.escape_or_reenter(x, rng)
}

pub fn run_simple_stable_walk<T: Real, R: Rng + ?Sized>(
    config: &WalkConfig<T>,
    shape: &Shape<T>,
    rng: &mut R,
) -> Result<WalkOutcome<T>> {
    Walk::new(config, shape)?.run(Walker::Simple, rng, false)
}

pub fn run_wos<T: Real, R: Rng + ?Sized>(
    config: &WalkConfig<T>,
    shape: &Shape<T>,
    rng: &mut R,
) -> Result<WalkOutcome<T>> {
    Walk::new(config, shape)?.run(Walker::Wos, rng, false)
}

pub fn run_wiob<T: Real, R: Rng + ?Sized>(
    config: &WalkConfig<T>,
    shape: &Shape<T>,
    rng: &mut R,
) -> Result<WalkOutcome<T>> {
    Walk::new(config, shape)?.run(Walker::Wiob, rng, false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollectOptions {
    /// Worker threads; results do not depend on it.
    pub workers: usize,
    /// Number of leading paths (by path index) whose positions are kept.
    pub record_paths: usize,
    /// Paths simulated per scheduling round.
    pub batch_size: usize,
}

impl Default for CollectOptions {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            record_paths: 0,
            batch_size: 1024,
        }
    }
}

impl CollectOptions {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_recorded_paths(mut self, n: usize) -> Self {
        self.record_paths = n;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepSummary {
    pub total: u64,
    pub max: u64,
    /// Mean moves per simulated path.
    pub mean_per_path: f64,
    /// Mean moves per path that hit.
    pub mean_per_hit: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecordedPath<T> {
    pub path_id: u64,
    pub positions: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HitSet<T> {
    pub hits: PointCloud<T>,
    pub walker: Walker,
    pub paths_run: u64,
    pub escapes: u64,
    pub cap_exceeded: u64,
    pub steps: StepSummary,
    pub paths: Vec<RecordedPath<T>>,
}

impl<T: Real> HitSet<T> {
    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }

    /// Paths that count towards the hit fraction under `policy`.
    pub fn trials(&self, policy: StepCapPolicy) -> u64 {
        match policy {
            StepCapPolicy::Exclude => self.paths_run - self.cap_exceeded,
            StepCapPolicy::CountAsMiss => self.paths_run,
        }
    }

    pub fn hit_fraction(&self, policy: StepCapPolicy) -> f64 {
        let trials = self.trials(policy);
        if trials == 0 {
            0.0
        } else {
            self.hits.len() as f64 / trials as f64
        }
    }
}

/// Runs paths until `target_hits` hits are recorded.
///
/// Path `k` draws from `RngStream::new(config.seed, k)` and outcomes are
/// consumed in path order, so the result is identical for every worker count.
pub fn collect_hits<T: Real>(
    config: &WalkConfig<T>,
    shape: &Shape<T>,
    target_hits: usize,
    walker: Walker,
    options: &CollectOptions,
) -> Result<HitSet<T>> {
    if target_hits < 2 {
        return Err(invalid(format!("need at least 2 target hits, got {target_hits}")));
    }
    let walk = Walk::new(config, shape)?;
    // Surface walker/alpha mismatches before spinning up workers.
    if walker == Walker::Wos && config.alpha != T::lit(2.0) || walker == Walker::Wiob && config.alpha >= T::lit(2.0) {
        walk.run(walker, &mut RngStream::new(config.seed, 0), false)?;
    }

    let pool = if options.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.workers)
                .build()
                .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?,
        )
    } else {
        None
    };
    let batch = options.batch_size.max(1) as u64;
    let run_one = |k: u64| {
        let mut rng = RngStream::new(config.seed, k);
        walk.run(walker, &mut rng, (k as usize) < options.record_paths)
    };

    let mut set = HitSet {
        hits: PointCloud::new(config.d),
        walker,
        paths_run: 0,
        escapes: 0,
        cap_exceeded: 0,
        steps: StepSummary::default(),
        paths: Vec::new(),
    };
    let mut hit_steps = 0u64;
    let mut consecutive_misses = 0u64;
    let mut next = 0u64;
    while set.hits.len() < target_hits {
        let range = next..next + batch;
        next += batch;
        let outcomes: Vec<Result<WalkOutcome<T>>> = match &pool {
            Some(pool) => pool.install(|| range.clone().into_par_iter().map(run_one).collect()),
            None => range.clone().map(run_one).collect(),
        };
        for (k, outcome) in range.zip(outcomes) {
            let outcome = outcome?;
            set.paths_run += 1;
            set.steps.total += outcome.steps;
            set.steps.max = set.steps.max.max(outcome.steps);
            if let Some(positions) = outcome.path {
                set.paths.push(RecordedPath { path_id: k, positions });
            }
            match outcome.termination {
                Termination::Hit(x) => {
                    set.hits.push(&x)?;
                    hit_steps += outcome.steps;
                    consecutive_misses = 0;
                }
                Termination::Escaped => {
                    set.escapes += 1;
                    consecutive_misses += 1;
                }
                Termination::StepCapExceeded => {
                    set.cap_exceeded += 1;
                    consecutive_misses += 1;
                }
            }
            if set.hits.len() == target_hits {
                break;
            }
            if consecutive_misses >= ABORT_CONSECUTIVE_MISSES
                && (set.hits.len() as f64) / (set.paths_run as f64) < ABORT_HIT_PROBABILITY
            {
                return Err(Error::HitProbabilityTooLow {
                    hits: set.hits.len(),
                    paths: set.paths_run,
                    consecutive_misses,
                });
            }
        }
    }
    set.steps.mean_per_path = set.steps.total as f64 / set.paths_run as f64;
    set.steps.mean_per_hit = hit_steps as f64 / set.hits.len() as f64;
    Ok(set)
}

/// Newtonian capacity from the hit fraction: `R_launch^(d-2) · P(hit)`, with a
/// Wald interval from the binomial variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HitFractionCapacity<T> {
    pub value: T,
    pub std_error: T,
    pub ci_low: T,
    pub ci_high: T,
    pub hit_fraction: T,
    pub trials: u64,
}

pub fn capacity_from_hit_fraction<T: Real>(
    hits: &HitSet<T>,
    config: &WalkConfig<T>,
    delta: T,
) -> Result<HitFractionCapacity<T>> {
    if config.alpha != T::lit(2.0) {
        return Err(invalid(format!(
            "hit-fraction capacity only holds for alpha = 2 (got {})",
            config.alpha
        )));
    }
    if !(delta > T::zero() && delta < T::one()) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let trials = hits.trials(config.step_cap_policy);
    if trials == 0 {
        return Err(Error::InsufficientSample { needed: 1, got: 0 });
    }
    let p = T::from_count(hits.len()) / T::lit(trials as f64);
    let factor = config.r_launch.powi(config.d as i32 - 2);
    let se = factor * (p * (T::one() - p) / T::lit(trials as f64)).sqrt();
    let z = T::lit(normal_quantile(1.0 - delta.as_f64() / 2.0));
    let value = factor * p;
    Ok(HitFractionCapacity {
        value,
        std_error: se,
        ci_low: value - z * se,
        ci_high: value + z * se,
        hit_fraction: p,
        trials,
    })
}
