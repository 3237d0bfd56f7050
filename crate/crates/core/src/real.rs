//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::distr::StandardUniform;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01, StandardNormal};

/// Floating-point scalar the simulation and estimation code is generic over.
///
/// Implemented for `f32` and `f64`. Random draws are exposed as methods so
/// that generic code does not have to repeat the `rand_distr` trait bounds.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Unit-scale Gamma sampler for this scalar.
    type GammaDist: Distribution<Self> + Clone + Debug + Send + Sync;

    /// Converts an `f64` literal; rounding is the only possible loss.
    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;

    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Unit-mean exponential variate.
    fn exp1<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform on the open interval (0, 1).
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform on [0, 1).
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Gamma(shape, 1); `None` unless the shape is finite and positive.
    fn gamma_dist(shape: Self) -> Option<Self::GammaDist>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            type GammaDist = Gamma<$t>;

            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            #[inline]
            fn exp1<R: Rng + ?Sized>(rng: &mut R) -> Self {
                Exp1.sample(rng)
            }

            #[inline]
            fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self {
                Open01.sample(rng)
            }

            #[inline]
            fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardUniform.sample(rng)
            }

            fn gamma_dist(shape: Self) -> Option<Self::GammaDist> {
                if shape.is_finite() && shape > 0.0 {
                    Gamma::new(shape, 1.0).ok()
                } else {
                    None
                }
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);
