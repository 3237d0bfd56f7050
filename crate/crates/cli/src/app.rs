//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commands::{
    ball_exact, capacity_from_points, coverage, estimate_warnings, simulate, subordination, sweep, CapacityReport,
    HitStats,
};
use crate::config::{estimator_from, variance_form_name, RunConfig, Settings, DEFAULT_SEED};
use crate::error::{CliError, CliResult};
use crate::io::{read_points_csv, to_json_string, write_json, write_paths_csv, write_points_csv};
use crate::manifest::{manifest_path_for, RunManifest, Timer, TOOL};
use crate::shape_file::resolve_shape;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "RIESZCAP_SEED";

/// Riesz α-capacity of compact sets by α-stable walks and a split energy estimator.
///
/// Settings come from flags, then the `--config` file, then defaults. The
/// default seed can be set through RIESZCAP_SEED.
#[derive(Debug, Parser)]
#[command(name = "rieszcap", version)]
pub struct Cli {
    /// JSON config file with any run settings; a run manifest also works.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Print the resolved configuration to stderr before running.
    #[arg(long, global = true)]
    pub print_config: bool,

    /// Worker threads for path simulation [default: available parallelism].
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    /// Shape file (JSON) or `builtin:<name>`: ball, cube, coin:<half-thickness>,
    /// square, hollow-square:<wall>, bar:<half-length>.
    #[arg(long, value_name = "SOURCE")]
    pub shape: Option<String>,

    /// Dimension of a built-in shape.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WalkFlags {
    /// Stability index in (0, 2] [default: 2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// wos, wiob, simple or auto (wos at alpha = 2, wiob otherwise) [default: auto].
    #[arg(long)]
    pub walker: Option<String>,
    /// Number of hits to collect [default: 10000].
    #[arg(long)]
    pub n: Option<usize>,
    /// Base seed [default: $RIESZCAP_SEED, else 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Hit tolerance [default: 1e-6].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Step scale of the simple walk [default: r_launch / 100].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Launch radius [default: 1.2 × bounding radius].
    #[arg(long)]
    pub r_launch: Option<f64>,
    /// Escape radius [default: 2 × r_launch].
    #[arg(long)]
    pub r_escape: Option<f64>,
    /// Step cap per path [default: 1000000].
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// exclude or count-as-miss [default: exclude].
    #[arg(long)]
    pub step_cap_policy: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EstimatorFlags {
    /// Group-1 size [default: n/2].
    #[arg(long)]
    pub n1: Option<usize>,
    /// Threshold quantile [default: 0.995].
    #[arg(long)]
    pub p_tau: Option<f64>,
    /// CI level is 1 − delta [default: 0.05].
    #[arg(long)]
    pub delta: Option<f64>,
    /// row-mean or literal [default: row-mean].
    #[arg(long)]
    pub variance_form: Option<String>,
}

impl WalkFlags {
    fn settings(&self) -> Settings {
        Settings {
            alpha: self.alpha,
            walker: self.walker.clone(),
            n: self.n,
            seed: self.seed,
            epsilon: self.epsilon,
            gamma: self.gamma,
            r_launch: self.r_launch,
            r_escape: self.r_escape,
            max_steps: self.max_steps,
            step_cap_policy: self.step_cap_policy.clone(),
            ..Default::default()
        }
    }
}

impl EstimatorFlags {
    fn settings(&self) -> Settings {
        Settings {
            n1: self.n1,
            p_tau: self.p_tau,
            delta: self.delta,
            variance_form: self.variance_form.clone(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate hitting locations from infinity and write them as CSV.
    Hits {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        walk: WalkFlags,
        /// Hit CSV with header x1,...,xd.
        #[arg(long)]
        out: PathBuf,
        /// Escape and step statistics (JSON).
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Dump of the first --record-paths paths (CSV).
        #[arg(long)]
        paths: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        record_paths: usize,
    },
    /// Estimate the capacity from a hit CSV or by simulating on a shape.
    Capacity {
        /// Hit CSV written by `hits`.
        #[arg(long, conflicts_with = "shape")]
        hits: Option<PathBuf>,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        walk: WalkFlags,
        #[command(flatten)]
        estimator: EstimatorFlags,
        /// Capacity JSON [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Manifest path [default: <out>.manifest.json; none for stdout].
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Capacity over a list of alphas (CSV).
    Sweep {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Comma-separated alphas.
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        /// Add capacity relative to the ball of equal volume.
        #[arg(long)]
        normalize: bool,
        #[command(flatten)]
        walk: WalkFlags,
        #[command(flatten)]
        estimator: EstimatorFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// CI coverage over independent replications on a ball (JSON).
    Coverage {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 100)]
        replications: usize,
        #[command(flatten)]
        walk: WalkFlags,
        #[command(flatten)]
        estimator: EstimatorFlags,
        /// Report JSON [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radius CDFs of the thin-disk WOS, planar α = 1 WIOB and exact laws (CSV).
    Subordination {
        /// Hits per walk.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// [default: $RIESZCAP_SEED, else 1]
        #[arg(long)]
        seed: Option<u64>,
        /// Radius grid points on [0, 1].
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-form capacity of a ball.
    BallExact {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Re-run the command recorded in a manifest.
    Rerun { manifest: PathBuf },
}

fn warn(messages: impl IntoIterator<Item = String>) {
    for m in messages {
        eprintln!("warning: {m}");
    }
}

fn seed_from_env() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

struct Context {
    cli_config: Option<PathBuf>,
    print_config: bool,
    workers: Option<usize>,
    argv: Vec<String>,
}

impl Context {
    /// Defaults < environment seed < config file < flags.
    fn settings(&self, flags: Settings) -> CliResult<Settings> {
        let env = Settings {
            seed: seed_from_env()?,
            ..Default::default()
        };
        let file = match &self.cli_config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let flags = flags.overlay(Settings {
            workers: self.workers,
            ..Default::default()
        });
        Ok(env.overlay(file).overlay(flags))
    }

    fn show<S: Serialize>(&self, config: &S) {
        if self.print_config {
            eprintln!("{}", to_json_string(config));
        }
    }

    fn manifest(&self, command: &str, shape: Option<(&str, usize)>, config: Settings, timer: &Timer, outputs: &[&Path]) -> RunManifest {
        RunManifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv: self.argv.clone(),
            shape: shape.map(|s| s.0.to_string()),
            dimension: shape.map(|s| s.1),
            seed: config.seed.unwrap_or(DEFAULT_SEED),
            config,
            started_unix_secs: timer.started_unix_secs(),
            wall_clock_secs: timer.elapsed(),
            timings: timer.phases().clone(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }
}

fn required_shape(args: &ShapeArgs) -> CliResult<&str> {
    args.shape
        .as_deref()
        .ok_or_else(|| CliError::Usage("--shape is required".into()))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(crate::error::io_err(p)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Parses `argv` (without the program name) and runs it.
pub fn run_args(argv: Vec<String>) -> CliResult<()> {
    let cli = Cli::try_parse_from(std::iter::once(TOOL.to_string()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli, argv)
}

pub fn run(cli: Cli, argv: Vec<String>) -> CliResult<()> {
    let ctx = Context {
        cli_config: cli.config.clone(),
        print_config: cli.print_config,
        workers: cli.workers,
        argv,
    };
    match cli.command {
        Command::Hits {
            shape,
            walk,
            out,
            stats,
            paths,
            record_paths,
        } => {
            let mut timer = Timer::new();
            let source = required_shape(&shape)?;
            let solid = resolve_shape(source, shape.dim)?;
            let run = RunConfig::resolve(&ctx.settings(walk.settings())?, &solid)?;
            ctx.show(&run.echo());
            let recorded = if paths.is_some() { record_paths } else { 0 };
            let (set, warnings) = timer.time("walk", || simulate(&solid, &run, recorded))?;
            warn(warnings);
            let mut outputs = vec![out.as_path()];
            timer.time("write", || -> CliResult<()> {
                write_points_csv(&out, &set.hits)?;
                if let Some(p) = &stats {
                    write_json(p, &HitStats::new(&set, &run))?;
                }
                if let Some(p) = &paths {
                    write_paths_csv(p, solid.dim(), &set.paths)?;
                }
                Ok(())
            })?;
            outputs.extend(stats.as_deref());
            outputs.extend(paths.as_deref());
            ctx.manifest("hits", Some((source, solid.dim())), run.echo(), &timer, &outputs)
                .write(&manifest_path_for(&out))
        }
        Command::Capacity {
            hits,
            shape,
            walk,
            estimator,
            out,
            manifest,
        } => {
            let mut timer = Timer::new();
            let settings = ctx.settings(walk.settings().overlay(estimator.settings()))?;
            let (est, shape_info, echo) = match &hits {
                Some(path) => {
                    let alpha = settings
                        .alpha
                        .ok_or_else(|| CliError::Usage("--alpha is required with --hits".into()))?;
                    let cfg = estimator_from(&settings)?;
                    let echo = Settings {
                        alpha: Some(alpha),
                        n1: cfg.n1,
                        p_tau: Some(cfg.p_tau),
                        delta: Some(cfg.delta),
                        variance_form: Some(variance_form_name(cfg.variance_form).to_string()),
                        ..Default::default()
                    };
                    ctx.show(&echo);
                    let points = timer.time("read", || read_points_csv(path))?;
                    let est = timer.time("estimate", || capacity_from_points(&points, alpha, &cfg))?;
                    (est, None, echo)
                }
                None => {
                    let source = required_shape(&shape)?;
                    let solid = resolve_shape(source, shape.dim)?;
                    let run = RunConfig::resolve(&settings, &solid)?;
                    ctx.show(&run.echo());
                    let (set, warnings) = timer.time("walk", || simulate(&solid, &run, 0))?;
                    warn(warnings);
                    let est =
                        timer.time("estimate", || capacity_from_points(&set.hits, run.walk.alpha, &run.estimator))?;
                    (est, Some((source, solid.dim())), run.echo())
                }
            };
            warn(estimate_warnings(&est));
            emit(out.as_deref(), &to_json_string(&CapacityReport::from(&est)))?;
            let manifest_path = manifest.or_else(|| out.as_deref().map(manifest_path_for));
            if let Some(mp) = manifest_path {
                let outputs: Vec<&Path> = out.as_deref().into_iter().collect();
                ctx.manifest("capacity", shape_info, echo, &timer, &outputs).write(&mp)?;
            }
            Ok(())
        }
        Command::Sweep {
            shape,
            alphas,
            normalize,
            walk,
            estimator,
            out,
        } => {
            let mut timer = Timer::new();
            let source = required_shape(&shape)?;
            let solid = resolve_shape(source, shape.dim)?;
            let settings = ctx.settings(walk.settings().overlay(estimator.settings()))?;
            let echo = RunConfig::resolve(&settings, &solid).map(|r| r.echo()).unwrap_or(settings.clone());
            ctx.show(&echo);
            let rows = timer.time("sweep", || sweep(&solid, &alphas, &settings, normalize))?;
            let mut w = csv::Writer::from_path(&out).map_err(|source| CliError::Csv {
                path: out.display().to_string(),
                source,
            })?;
            let mut header = vec!["alpha", "capacity", "ci_low", "ci_high"];
            if normalize {
                header.push("relative_capacity");
            }
            let cell = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            let csv_err = |source| CliError::Csv {
                path: out.display().to_string(),
                source,
            };
            w.write_record(&header).map_err(csv_err)?;
            for r in &rows {
                let mut rec = vec![r.alpha.to_string(), r.capacity.to_string(), cell(r.ci_low), cell(r.ci_high)];
                if normalize {
                    rec.push(cell(r.relative_capacity));
                }
                w.write_record(&rec).map_err(csv_err)?;
            }
            w.flush().map_err(crate::error::io_err(&out))?;
            let mut echo = echo;
            echo.alpha = None;
            ctx.manifest("sweep", Some((source, solid.dim())), echo, &timer, &[out.as_path()])
                .write(&manifest_path_for(&out))
        }
        Command::Coverage {
            shape,
            replications,
            walk,
            estimator,
            out,
        } => {
            let mut timer = Timer::new();
            let source = required_shape(&shape)?;
            let solid = resolve_shape(source, shape.dim)?;
            let settings = ctx.settings(walk.settings().overlay(estimator.settings()))?;
            let run = RunConfig::resolve(&settings, &solid)?;
            ctx.show(&run.echo());
            let report = timer.time("coverage", || coverage(&solid, replications, &settings))?;
            emit(out.as_deref(), &to_json_string(&report))?;
            if let Some(o) = &out {
                ctx.manifest("coverage", Some((source, solid.dim())), run.echo(), &timer, &[o.as_path()])
                    .write(&manifest_path_for(o))?;
            }
            Ok(())
        }
        Command::Subordination { n, seed, grid, out } => {
            let mut timer = Timer::new();
            let settings = ctx.settings(Settings {
                seed,
                n: Some(n),
                ..Default::default()
            })?;
            let seed = settings.seed.unwrap_or(DEFAULT_SEED);
            let workers = settings.workers.unwrap_or_else(crate::config::default_workers);
            let echo = Settings {
                seed: Some(seed),
                n: Some(n),
                workers: Some(workers),
                ..Default::default()
            };
            ctx.show(&echo);
            let report = timer.time("walk", || subordination(n, seed, workers, grid))?;
            let csv_err = |source| CliError::Csv {
                path: out.display().to_string(),
                source,
            };
            let mut w = csv::Writer::from_path(&out).map_err(csv_err)?;
            w.write_record(["r", "wos_disk_3d", "wiob_disk_2d", "exact"]).map_err(csv_err)?;
            for k in 0..report.grid.len() {
                w.write_record([
                    report.grid[k].to_string(),
                    report.wos_disk_3d[k].to_string(),
                    report.wiob_disk_2d[k].to_string(),
                    report.exact[k].to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(crate::error::io_err(&out))?;
            eprintln!(
                "ks: wos-wiob {:.4}, wos-exact {:.4}, wiob-exact {:.4}",
                report.ks_wos_wiob, report.ks_wos_exact, report.ks_wiob_exact
            );
            ctx.manifest("subordination", None, echo, &timer, &[out.as_path()])
                .write(&manifest_path_for(&out))
        }
        Command::BallExact { alpha, d, r } => {
            println!("{}", ball_exact(alpha, d, r)?);
            Ok(())
        }
        Command::Rerun { manifest } => {
            let m = RunManifest::load(&manifest)?;
            let mut argv = Vec::with_capacity(m.argv.len() + 2);
            let mut skip = false;
            for a in m.argv {
                if skip {
                    skip = false;
                } else if a == "--config" {
                    skip = true;
                } else if !a.starts_with("--config=") {
                    argv.push(a);
                }
            }
            argv.push("--config".into());
            argv.push(manifest.display().to_string());
            run_args(argv)
        }
    }
}
