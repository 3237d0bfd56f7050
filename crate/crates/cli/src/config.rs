//! Run settings with the precedence flags > config file > defaults.

use std::path::Path;

use rieszcap::estimator::{DEFAULT_DELTA, DEFAULT_P_TAU};
use rieszcap::walkers::{
    DEFAULT_EPSILON, DEFAULT_ESCAPE_FACTOR, DEFAULT_GAMMA_FRACTION, DEFAULT_LAUNCH_FACTOR, DEFAULT_MAX_STEPS,
};
use rieszcap::{CollectOptions, EstimatorConfig64, Shape64, StepCapPolicy, VarianceForm, WalkConfig64, Walker};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, json_err, CliError, CliResult};

pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_HITS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

/// Every tunable of a run. Unset fields fall through to the next source.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// `wos`, `wiob`, `simple` or `auto` (WOS at α = 2, WIOB otherwise).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walker: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_launch: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_escape: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    /// `exclude` or `count-as-miss`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_cap_policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// `row-mean` or `literal`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident, $($f:ident),*) => {
        Settings { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Settings {
    /// Fields set in `top` win.
    pub fn overlay(self, top: Settings) -> Settings {
        let base = self;
        overlay_fields!(
            base, top, alpha, walker, n, seed, epsilon, gamma, r_launch, r_escape, max_steps, step_cap_policy, n1,
            p_tau, delta, variance_form, workers
        )
    }

    /// Reads a config file. A run manifest is accepted too; its `config` echo is used.
    pub fn load(path: &Path) -> CliResult<Settings> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let source = path.display().to_string();
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| json_err(&source, e))?;
        let inner = match value.get("config") {
            Some(c) if value.get("tool").is_some() => c.clone(),
            _ => value,
        };
        serde_json::from_value(inner).map_err(|e| CliError::Field {
            path: source,
            field: "config".into(),
            message: e.to_string(),
        })
    }
}

pub fn parse_policy(s: &str) -> CliResult<StepCapPolicy> {
    match s {
        "exclude" => Ok(StepCapPolicy::Exclude),
        "count-as-miss" => Ok(StepCapPolicy::CountAsMiss),
        other => Err(CliError::Usage(format!(
            "unknown step-cap policy `{other}` (exclude, count-as-miss)"
        ))),
    }
}

pub fn policy_name(p: StepCapPolicy) -> &'static str {
    match p {
        StepCapPolicy::Exclude => "exclude",
        StepCapPolicy::CountAsMiss => "count-as-miss",
    }
}

pub fn parse_variance_form(s: &str) -> CliResult<VarianceForm> {
    match s {
        "row-mean" => Ok(VarianceForm::RowMeanDeviation),
        "literal" => Ok(VarianceForm::Literal),
        other => Err(CliError::Usage(format!("unknown variance form `{other}` (row-mean, literal)"))),
    }
}

pub fn variance_form_name(f: VarianceForm) -> &'static str {
    match f {
        VarianceForm::RowMeanDeviation => "row-mean",
        VarianceForm::Literal => "literal",
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Estimator part of the settings; needs no shape.
pub fn estimator_from(settings: &Settings) -> CliResult<EstimatorConfig64> {
    let mut estimator = EstimatorConfig64::default()
        .with_p_tau(settings.p_tau.unwrap_or(DEFAULT_P_TAU))
        .with_delta(settings.delta.unwrap_or(DEFAULT_DELTA));
    if let Some(n1) = settings.n1 {
        estimator = estimator.with_n1(n1);
    }
    if let Some(f) = &settings.variance_form {
        estimator = estimator.with_variance_form(parse_variance_form(f)?);
    }
    estimator.validate()?;
    Ok(estimator)
}

/// Fully resolved run parameters.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub walk: WalkConfig64,
    pub walker: Walker,
    pub n: usize,
    pub estimator: EstimatorConfig64,
    pub workers: usize,
}

impl RunConfig {
    /// Resolves `settings` against the defaults for `shape`.
    pub fn resolve(settings: &Settings, shape: &Shape64) -> CliResult<RunConfig> {
        let alpha = settings.alpha.unwrap_or(DEFAULT_ALPHA);
        let r_launch = settings
            .r_launch
            .unwrap_or(DEFAULT_LAUNCH_FACTOR * shape.bounding_radius());
        let r_escape = settings.r_escape.unwrap_or(DEFAULT_ESCAPE_FACTOR * r_launch);
        let mut walk = WalkConfig64::with_radii(alpha, shape.dim(), r_launch, r_escape)
            .with_seed(settings.seed.unwrap_or(DEFAULT_SEED))
            .with_epsilon(settings.epsilon.unwrap_or(DEFAULT_EPSILON))
            .with_gamma(settings.gamma.unwrap_or(DEFAULT_GAMMA_FRACTION * r_launch))
            .with_max_steps(settings.max_steps.unwrap_or(DEFAULT_MAX_STEPS));
        if let Some(p) = &settings.step_cap_policy {
            walk.step_cap_policy = parse_policy(p)?;
        }
        let walker = match settings.walker.as_deref() {
            None | Some("auto") => Walker::default_for(alpha),
            Some(name) => name.parse::<Walker>()?,
        };
        if walker == Walker::Wiob && alpha == 2.0 {
            return Err(CliError::Usage(
                "the wiob walker needs alpha < 2; use --walker wos for Brownian motion".into(),
            ));
        }
        if walker == Walker::Wos && alpha != 2.0 {
            return Err(CliError::Usage(format!(
                "the wos walker is for alpha = 2 only; use --walker wiob for alpha = {alpha}"
            )));
        }
        let estimator = estimator_from(settings)?;
        let workers = settings.workers.unwrap_or_else(default_workers);
        if workers == 0 {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        Ok(RunConfig {
            walk,
            walker,
            n: settings.n.unwrap_or(DEFAULT_HITS),
            estimator,
            workers,
        })
    }

    pub fn collect_options(&self) -> CollectOptions {
        CollectOptions::default().with_workers(self.workers)
    }

    /// Complete echo; loading it back as a config file reproduces this run.
    pub fn echo(&self) -> Settings {
        Settings {
            alpha: Some(self.walk.alpha),
            walker: Some(self.walker.name().to_string()),
            n: Some(self.n),
            seed: Some(self.walk.seed),
            epsilon: Some(self.walk.epsilon),
            gamma: Some(self.walk.gamma),
            r_launch: Some(self.walk.r_launch),
            r_escape: Some(self.walk.r_escape),
            max_steps: Some(self.walk.max_steps),
            step_cap_policy: Some(policy_name(self.walk.step_cap_policy).to_string()),
            n1: self.estimator.n1,
            p_tau: Some(self.estimator.p_tau),
            delta: Some(self.estimator.delta),
            variance_form: Some(variance_form_name(self.estimator.variance_form).to_string()),
            workers: Some(self.workers),
        }
    }
}
