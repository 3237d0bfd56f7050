//! Random variates needed by the walkers: uniform directions, Beta, one-sided
//! stable, isotropic stable steps and the equilibrium measure of a ball.
//!
//! Each sampler comes in two forms: a validating free function that allocates
//! its result, and a precomputed distribution struct with a `sample_into`
//! method for the inner loops.

use rand::Rng;
use rand_distr::Distribution;

use crate::error::{invalid, Error, Result};
use crate::vecops::{norm_sq, scale_in_place};
use crate::Real;

/// Fills `out` with a point uniformly distributed on the unit sphere.
#[inline]
pub fn fill_uniform_sphere<T: Real, R: Rng + ?Sized>(out: &mut [T], rng: &mut R) {
    loop {
        for x in out.iter_mut() {
            *x = T::standard_normal(rng);
        }
        let r2 = norm_sq(out);
        if r2 > T::zero() && r2.is_finite() {
            let r = r2.sqrt();
            out.iter_mut().for_each(|x| *x = *x / r);
            return;
        }
    }
}

pub fn sample_uniform_sphere<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Vec<T>> {
    if d < 1 {
        return Err(Error::InvalidDimension(d));
    }
    let mut out = vec![T::zero(); d];
    fill_uniform_sphere(&mut out, rng);
    Ok(out)
}

/// Beta(a, b) as `G_a / (G_a + G_b)` with independent Gamma variates.
///
/// The ratio keeps full relative precision at both ends, so draws within an
/// ulp of 1 round to 1 instead of being lost. With a second parameter near
/// 0.15 that is a few tenths of a percent of the mass.
#[derive(Clone, Debug)]
pub struct BetaSampler<T: Real> {
    ga: T::GammaDist,
    gb: T::GammaDist,
}

impl<T: Real> BetaSampler<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        T::gamma_dist(a)
            .zip(T::gamma_dist(b))
            .map(|(ga, gb)| Self { ga, gb })
            .ok_or_else(|| invalid(format!("Beta parameters must be positive (a = {a}, b = {b})")))
    }

    /// A draw on (0, 1]; never 0, since callers divide by it.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        loop {
            let x = self.ga.sample(rng);
            let y = self.gb.sample(rng);
            let b = x / (x + y);
            if b > T::zero() && b <= T::one() {
                return b;
            }
        }
    }
}

pub fn sample_beta<T: Real, R: Rng + ?Sized>(a: T, b: T, rng: &mut R) -> Result<T> {
    Ok(BetaSampler::new(a, b)?.sample(rng))
}

/// Totally skewed (β = 1) stable law of index in (0, 1) and zero shift,
/// drawn with the Chambers–Mallows–Stuck transform.
///
/// With `scale` σ the Laplace transform is
/// `E exp(-λ S) = exp(-(σ λ)^index / cos(π index / 2))`.
#[derive(Clone, Copy, Debug)]
pub struct PositiveStable<T> {
    index: T,
    scale: T,
    /// `cos(π index / 2)^(-1/index)`
    skew_factor: T,
}

impl<T: Real> PositiveStable<T> {
    pub fn new(index: T, scale: T) -> Result<Self> {
        if !(index > T::zero() && index < T::one()) {
            return Err(invalid(format!("positive stable index must lie in (0, 1), got {index}")));
        }
        if !(scale > T::zero() && scale.is_finite()) {
            return Err(invalid(format!("positive stable scale must be positive, got {scale}")));
        }
        let skew_factor = (T::FRAC_PI_2() * index).cos().powf(-index.recip());
        Ok(Self {
            index,
            scale,
            skew_factor,
        })
    }

    pub fn index(&self) -> T {
        self.index
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let a = self.index;
        let half_pi = T::FRAC_PI_2();
        loop {
            let v = (T::open01(rng) - T::lit(0.5)) * T::PI();
            let w = T::exp1(rng);
            let num = (a * (v + half_pi)).sin();
            let den = v.cos().powf(a.recip());
            let tail = (((T::one() - a) * v - a * half_pi).cos() / w).powf((T::one() - a) / a);
            let s = self.scale * self.skew_factor * num / den * tail;
            if s > T::zero() && s.is_finite() {
                return s;
            }
        }
    }
}

pub fn sample_positive_stable<T: Real, R: Rng + ?Sized>(index: T, scale: T, rng: &mut R) -> Result<T> {
    Ok(PositiveStable::new(index, scale)?.sample(rng))
}

/// Parameters of one isotropic stable step with characteristic function
/// `exp(-gamma^alpha |u|^alpha)` in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StableStepParams<T> {
    pub alpha: T,
    pub gamma: T,
    pub d: usize,
}

impl<T: Real> StableStepParams<T> {
    pub fn new(alpha: T, gamma: T, d: usize) -> Result<Self> {
        let p = Self { alpha, gamma, d };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero() && self.alpha <= T::lit(2.0)) {
            return Err(invalid(format!("alpha must lie in (0, 2], got {}", self.alpha)));
        }
        if !(self.gamma > T::zero() && self.gamma.is_finite()) {
            return Err(invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.d < 2 {
            return Err(Error::InvalidDimension(self.d));
        }
        Ok(())
    }
}

/// Isotropic α-stable step as a Gaussian scale mixture `Y = sqrt(S) Z`.
///
/// For α < 2, `S` is positive (α/2)-stable with scale `2 γ² cos(πα/4)^(2/α)`,
/// which gives `E exp(i u·Y) = exp(-(γ|u|)^α)`. For α = 2 the step is Gaussian
/// with per-component variance `2 γ²`.
#[derive(Clone, Copy, Debug)]
pub struct IsotropicStable<T> {
    params: StableStepParams<T>,
    subordinator: Option<PositiveStable<T>>,
    gaussian_scale: T,
}

impl<T: Real> IsotropicStable<T> {
    pub fn new(params: StableStepParams<T>) -> Result<Self> {
        params.validate()?;
        let two = T::lit(2.0);
        let (subordinator, gaussian_scale) = if params.alpha == two {
            (None, two.sqrt() * params.gamma)
        } else {
            let a = params.alpha;
            let scale = two * params.gamma * params.gamma * (T::FRAC_PI_4() * a).cos().powf(two / a);
            (Some(PositiveStable::new(a / two, scale)?), T::zero())
        };
        Ok(Self {
            params,
            subordinator,
            gaussian_scale,
        })
    }

    pub fn params(&self) -> StableStepParams<T> {
        self.params
    }

    #[inline]
    pub fn sample_into<R: Rng + ?Sized>(&self, out: &mut [T], rng: &mut R) {
        debug_assert_eq!(out.len(), self.params.d);
        let scale = match &self.subordinator {
            Some(s) => s.sample(rng).sqrt(),
            None => self.gaussian_scale,
        };
        for x in out.iter_mut() {
            *x = scale * T::standard_normal(rng);
        }
    }
}

pub fn sample_isotropic_stable_step<T: Real, R: Rng + ?Sized>(
    params: StableStepParams<T>,
    rng: &mut R,
) -> Result<Vec<T>> {
    let dist = IsotropicStable::new(params)?;
    let mut out = vec![T::zero(); params.d];
    dist.sample_into(&mut out, rng);
    Ok(out)
}

/// Equilibrium (capacitary) measure of the unit ball.
///
/// α < 2: `sqrt(B) Z/|Z|` with `B ~ Beta(d/2, 1 - α/2)`, i.e. radial density
/// proportional to `r^(d-1) (1 - r²)^(-α/2)`. α = 2: uniform on the sphere.
#[derive(Clone, Debug)]
pub struct EquilibriumBall<T: Real> {
    d: usize,
    radius_sq: Option<BetaSampler<T>>,
}

impl<T: Real> EquilibriumBall<T> {
    pub fn new(alpha: T, d: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(invalid(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let radius_sq = if alpha == T::lit(2.0) {
            None
        } else {
            Some(BetaSampler::new(T::from_count(d) / T::lit(2.0), T::one() - alpha / T::lit(2.0))?)
        };
        Ok(Self { d, radius_sq })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn sample_into<R: Rng + ?Sized>(&self, out: &mut [T], rng: &mut R) {
        debug_assert_eq!(out.len(), self.d);
        fill_uniform_sphere(out, rng);
        if let Some(beta) = &self.radius_sq {
            scale_in_place(out, beta.sample(rng).sqrt());
        }
    }
}

pub fn sample_equilibrium_ball<T: Real, R: Rng + ?Sized>(alpha: T, d: usize, rng: &mut R) -> Result<Vec<T>> {
    let dist = EquilibriumBall::new(alpha, d)?;
    let mut out = vec![T::zero(); d];
    dist.sample_into(&mut out, rng);
    Ok(out)
}
