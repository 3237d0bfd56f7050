//! Monte Carlo estimation of Riesz α-capacities.
//!
//! Hitting locations of a set `K` by an isotropic α-stable process started
//! "at infinity" are distributed as the equilibrium measure of `K`. This
//! crate simulates those locations (walk-on-spheres for α = 2,
//! walk-in-and-out-of-balls for α < 2, or a plain stable random walk) and
//! turns them into a capacity estimate with a confidence interval through a
//! split heavy-tail energy estimator.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the scalar.
//!
//! ```
//! use rieszcap::{collect_hits, estimate_capacity, CollectOptions, EstimatorConfig, Shape, WalkConfig, Walker};
//!
//! let ball = Shape::<f64>::unit_ball(3).unwrap();
//! let config = WalkConfig::with_radii(1.5, 3, 2.0, 4.0).with_seed(7);
//! let hits = collect_hits(&config, &ball, 400, Walker::Wiob, &CollectOptions::default()).unwrap();
//! let cap = estimate_capacity(&hits.hits, 1.5, &EstimatorConfig::default()).unwrap();
//! assert!(cap.value > 0.0);
//! ```

pub mod ball_kernels;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod points;
mod real;
pub mod rng;
pub mod special;
pub mod stable_sampling;
pub mod stats;
pub mod vecops;
pub mod walkers;

pub use ball_kernels::{
    ball_capacity, beta_cdf, hit_ball_probability, hit_ball_probability_series, is_recurrent, make_rotation_to_axis,
    sample_brownian_reentry_sphere, sample_exit_location_from_ball, sample_hit_location_in_ball, BallGeometry,
    CenteredExit, RotationPlan,
};
pub use error::{Error, Result};
pub use estimator::{
    capacity_with_ci, choose_threshold, estimate_capacity, estimate_energy, estimate_i1, estimate_i2, hill_estimator,
    naive_energy_estimate, pairwise_kernel, select_tail_sample, CapacityEstimate, EnergyEstimate, EstimatorConfig,
    EstimatorWarning, KernelMatrix, PairWeights, PointKernel, RieszKernel, VarianceForm,
};
pub use geometry::{ball_volume, radius_for_volume, Shape, Solid, VolumeEstimate};
pub use points::PointCloud;
pub use real::Real;
pub use rng::{derive_seed, RngStream};
pub use stable_sampling::{
    sample_equilibrium_ball, sample_isotropic_stable_step, sample_positive_stable, sample_uniform_sphere,
    EquilibriumBall, IsotropicStable, PositiveStable, StableStepParams,
};
pub use walkers::{
    capacity_from_hit_fraction, collect_hits, escape_or_reenter, launch_point, run_simple_stable_walk, run_wiob,
    run_wos, CollectOptions, ConfigWarning, HitFractionCapacity, HitSet, RecordedPath, Reentry, StepCapPolicy, Termination, Walk,
    WalkConfig, WalkOutcome, Walker,
};

pub type Shape64 = Shape<f64>;
pub type Shape32 = Shape<f32>;
pub type PointCloud64 = PointCloud<f64>;
pub type PointCloud32 = PointCloud<f32>;
pub type WalkConfig64 = WalkConfig<f64>;
pub type WalkConfig32 = WalkConfig<f32>;
pub type HitSet64 = HitSet<f64>;
pub type HitSet32 = HitSet<f32>;
pub type EstimatorConfig64 = EstimatorConfig<f64>;
pub type EstimatorConfig32 = EstimatorConfig<f32>;
pub type CapacityEstimate64 = CapacityEstimate<f64>;
pub type CapacityEstimate32 = CapacityEstimate<f32>;
