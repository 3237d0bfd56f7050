//! Entering and leaving balls: hitting probabilities, hitting and exit
//! locations, Brownian re-entry and Givens rotation plans.
//!
//! Everything is stated for the unit ball centred at the origin;
//! [`BallGeometry`] maps arbitrary balls onto that case.

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::special::{ln_gamma, regularized_incomplete_beta};
use crate::stable_sampling::{fill_uniform_sphere, BetaSampler, EquilibriumBall};
use crate::vecops::{dist, norm, norm_sq, scale_in_place};
use crate::Real;

pub use crate::special::regularized_incomplete_beta as beta_cdf;

/// Proposal budget of the rejection samplers before giving up.
pub const MAX_PROPOSALS: u64 = 1_000_000;

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha <= T::lit(2.0) {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 2], got {alpha}")))
    }
}

fn check_jump_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::lit(2.0) {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 2) for jump kernels, got {alpha}")))
    }
}

/// True when the d-dimensional α-stable motion is recurrent (d <= α).
pub fn is_recurrent<T: Real>(alpha: T, d: usize) -> bool {
    T::from_count(d) <= alpha
}

/// Probability that a path started at distance `rho >= 1` from the centre of
/// the unit ball ever enters it: 1 if recurrent, else `F(1/rho²; (d-α)/2, α/2)`.
pub fn hit_ball_probability<T: Real>(alpha: T, d: usize, rho: T) -> Result<T> {
    check_alpha(alpha)?;
    if d < 1 {
        return Err(Error::InvalidDimension(d));
    }
    if !(rho >= T::one()) {
        return Err(Error::Domain(format!("start point inside the ball (rho = {rho})")));
    }
    if is_recurrent(alpha, d) || rho == T::one() {
        return Ok(T::one());
    }
    if rho.is_infinite() {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    regularized_incomplete_beta((rho * rho).recip(), (T::from_count(d) - alpha) / two, alpha / two)
}

/// Truncated power series `sum_{j < n_terms} c_j rho^-(d - α + 2j)` for the
/// transient hitting probability. Every coefficient is positive for α < 2,
/// so each truncation is a lower bound.
pub fn hit_ball_probability_series<T: Real>(alpha: T, d: usize, rho: T, n_terms: usize) -> Result<T> {
    check_alpha(alpha)?;
    if is_recurrent(alpha, d) {
        return Err(invalid(format!("series only defined in the transient case (alpha = {alpha}, d = {d})")));
    }
    if !(rho > T::one()) {
        return Err(Error::Domain(format!("series needs rho > 1, got {rho}")));
    }
    if n_terms == 0 {
        return Err(invalid("n_terms must be at least 1"));
    }
    let two = T::lit(2.0);
    let dm = T::from_count(d) - alpha;
    let ln_rho = rho.ln();
    // log-space recursion on c_j so nothing underflows before the cut-off.
    let mut ln_c = ln_gamma(T::from_count(d) / two) - ln_gamma((dm + two) / two) - ln_gamma(alpha / two);
    let mut sum = T::zero();
    for j in 0..n_terms {
        if j > 0 {
            let jj = T::from_count(j);
            let ratio = (two * jj - alpha) * (dm + two * (jj - T::one())) / (two * jj * (dm + two * jj));
            if ratio <= T::zero() {
                break;
            }
            ln_c = ln_c + ratio.ln();
        }
        let term = (ln_c - (dm + two * T::from_count(j)) * ln_rho).exp();
        sum = sum + term;
        if term < T::lit(1e-16) * sum {
            break;
        }
    }
    Ok(sum)
}

/// Exact α-capacity of the ball of radius `r` in `R^d`:
/// `r^(d-α) Γ(d/2) / (Γ(α/2) Γ((d-α+2)/2))`.
pub fn ball_capacity<T: Real>(alpha: T, d: usize, r: T) -> Result<T> {
    check_alpha(alpha)?;
    if d < 1 {
        return Err(Error::InvalidDimension(d));
    }
    if is_recurrent(alpha, d) {
        return Err(Error::Recurrent {
            alpha: alpha.as_f64(),
            d,
        });
    }
    if !(r > T::zero()) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let two = T::lit(2.0);
    let dd = T::from_count(d);
    let ln_cap = ln_gamma(dd / two) - ln_gamma(alpha / two) - ln_gamma((dd - alpha + two) / two);
    Ok(r.powf(dd - alpha) * ln_cap.exp())
}

/// Samples the hitting density `f_BGR(x, ·)` of the open unit ball for a
/// stable path started at `start` (`|start| > 1`, 0 < α < 2), conditional on
/// the ball being hit.
///
/// Rejection from the equilibrium proposal `∝ (1 - |y|²)^(-α/2)` with
/// acceptance `((|x| - 1) / |x - y|)^d`.
pub fn sample_hit_location_in_ball<T: Real, R: Rng + ?Sized>(
    alpha: T,
    d: usize,
    start: &[T],
    rng: &mut R,
) -> Result<Vec<T>> {
    check_jump_alpha(alpha)?;
    check_dim(d, start)?;
    let proposal = EquilibriumBall::new(alpha, d)?;
    let mut out = vec![T::zero(); d];
    hit_location_into(&proposal, start, &mut out, rng)?;
    Ok(out)
}

pub(crate) fn hit_location_into<T: Real, R: Rng + ?Sized>(
    proposal: &EquilibriumBall<T>,
    start: &[T],
    out: &mut [T],
    rng: &mut R,
) -> Result<()> {
    let rho = norm(start);
    if !(rho > T::one()) {
        return Err(Error::Domain(format!("hitting sampler needs |start| > 1, got {rho}")));
    }
    let gap = rho - T::one();
    let d = out.len() as i32;
    for _ in 0..MAX_PROPOSALS {
        proposal.sample_into(out, rng);
        let accept = (gap / dist(start, out)).powi(d);
        debug_assert!(accept <= T::one() + T::lit(1e-12), "acceptance {accept} > 1");
        if T::unit(rng) < accept {
            return Ok(());
        }
    }
    Err(Error::RejectionCapExceeded {
        proposals: MAX_PROPOSALS,
        context: format!("ball hitting location from |x| = {rho}"),
    })
}

/// Exit law of the unit ball for a path started at `start` (`|start| < 1`,
/// 0 < α < 2). Returns a point with `|y| >= 1`; exits within an ulp of the
/// sphere round onto it.
///
/// The centred law is `Z / sqrt(B)` with `B ~ Beta(α/2, 1 - α/2)`. Off centre
/// the exit density is `P(x, y) ∝ (|y|² - 1)^(-α/2) |x - y|^(-d)`; its Kelvin
/// dual is the hitting density from `x / |x|²` reweighted by `|y|^(d-α)`, which
/// is exactly the centred law times `(|y| / |x - y|)^d`. We sample that by
/// rejection from the centred law with acceptance
/// `((1 - |x|) |y| / |x - y|)^d`.
pub fn sample_exit_location_from_ball<T: Real, R: Rng + ?Sized>(
    alpha: T,
    d: usize,
    start: &[T],
    rng: &mut R,
) -> Result<Vec<T>> {
    check_jump_alpha(alpha)?;
    check_dim(d, start)?;
    let law = CenteredExit::new(alpha, d)?;
    let mut out = vec![T::zero(); d];
    exit_location_into(&law, start, &mut out, rng)?;
    Ok(out)
}

/// `Z / sqrt(B)`, `B ~ Beta(α/2, 1 - α/2)`: exit law of the unit ball from its centre.
#[derive(Clone, Debug)]
pub struct CenteredExit<T: Real> {
    d: usize,
    beta: BetaSampler<T>,
}

impl<T: Real> CenteredExit<T> {
    pub fn new(alpha: T, d: usize) -> Result<Self> {
        check_jump_alpha(alpha)?;
        if d < 1 {
            return Err(Error::InvalidDimension(d));
        }
        let half = alpha / T::lit(2.0);
        Ok(Self {
            d,
            beta: BetaSampler::new(half, T::one() - half)?,
        })
    }

    #[inline]
    pub fn sample_into<R: Rng + ?Sized>(&self, out: &mut [T], rng: &mut R) {
        debug_assert_eq!(out.len(), self.d);
        fill_uniform_sphere(out, rng);
        scale_in_place(out, self.beta.sample(rng).sqrt().recip());
    }
}

pub(crate) fn exit_location_into<T: Real, R: Rng + ?Sized>(
    law: &CenteredExit<T>,
    start: &[T],
    out: &mut [T],
    rng: &mut R,
) -> Result<()> {
    let r = norm(start);
    if !(r < T::one()) {
        return Err(Error::Domain(format!("exit sampler needs |start| < 1, got {r}")));
    }
    if r == T::zero() {
        law.sample_into(out, rng);
        return Ok(());
    }
    let gap = T::one() - r;
    let d = out.len() as i32;
    for _ in 0..MAX_PROPOSALS {
        law.sample_into(out, rng);
        let accept = (gap * norm(out) / dist(start, out)).powi(d);
        debug_assert!(accept <= T::one() + T::lit(1e-12), "acceptance {accept} > 1");
        if T::unit(rng) < accept {
            return Ok(());
        }
    }
    Err(Error::RejectionCapExceeded {
        proposals: MAX_PROPOSALS,
        context: format!("ball exit location from |x| = {r}"),
    })
}

/// Brownian re-entry point on the unit sphere from an exterior start: the
/// Poisson kernel `(|x|² - 1) / |x - y|^d`, by rejection from the uniform
/// sphere with acceptance `((|x| - 1) / |x - y|)^d`.
pub fn sample_brownian_reentry_sphere<T: Real, R: Rng + ?Sized>(
    d: usize,
    start: &[T],
    rng: &mut R,
) -> Result<Vec<T>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_dim(d, start)?;
    let mut out = vec![T::zero(); d];
    reentry_into(start, &mut out, rng)?;
    Ok(out)
}

pub(crate) fn reentry_into<T: Real, R: Rng + ?Sized>(start: &[T], out: &mut [T], rng: &mut R) -> Result<()> {
    let rho = norm(start);
    if !(rho > T::one()) {
        return Err(Error::Domain(format!("re-entry sampler needs |start| > 1, got {rho}")));
    }
    let gap = rho - T::one();
    let d = out.len() as i32;
    for _ in 0..MAX_PROPOSALS {
        fill_uniform_sphere(out, rng);
        let accept = (gap / dist(start, out)).powi(d);
        debug_assert!(accept <= T::one() + T::lit(1e-12), "acceptance {accept} > 1");
        if T::unit(rng) < accept {
            return Ok(());
        }
    }
    Err(Error::RejectionCapExceeded {
        proposals: MAX_PROPOSALS,
        context: format!("Poisson-kernel re-entry from |x| = {rho}"),
    })
}

fn check_dim<T>(d: usize, x: &[T]) -> Result<()> {
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Givens<T> {
    /// Plane `(i, i + 1)`; the rotation folds component `i + 1` into `i`.
    pub i: usize,
    pub cos: T,
    pub sin: T,
}

/// Sequence of Givens rotations taking a vector `x` to `(|x|, 0, ..., 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationPlan<T> {
    dim: usize,
    rotations: Vec<Givens<T>>,
}

impl<T: Real> RotationPlan<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rotations(&self) -> &[Givens<T>] {
        &self.rotations
    }

    pub fn is_identity(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Applies `U`, so that `U x = (|x|, 0, ..., 0)` for the source vector.
    pub fn apply(&self, v: &mut [T]) {
        debug_assert_eq!(v.len(), self.dim);
        for g in &self.rotations {
            let (a, b) = (v[g.i], v[g.i + 1]);
            v[g.i] = g.cos * a + g.sin * b;
            v[g.i + 1] = -g.sin * a + g.cos * b;
        }
    }

    /// Applies `U⁻¹ = Uᵀ`.
    pub fn apply_inverse(&self, v: &mut [T]) {
        debug_assert_eq!(v.len(), self.dim);
        for g in self.rotations.iter().rev() {
            let (a, b) = (v[g.i], v[g.i + 1]);
            v[g.i] = g.cos * a - g.sin * b;
            v[g.i + 1] = g.sin * a + g.cos * b;
        }
    }
}

/// Builds the rotation plan zeroing components `d-1, d-2, ..., 1` of `x` in
/// turn. Construction and application are O(d).
pub fn make_rotation_to_axis<T: Real>(x: &[T]) -> Result<RotationPlan<T>> {
    if x.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    if norm_sq(x) == T::zero() || x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("rotation target must be a finite nonzero vector"));
    }
    let mut v = x.to_vec();
    let mut rotations = Vec::new();
    for i in (0..x.len().saturating_sub(1)).rev() {
        let (a, b) = (v[i], v[i + 1]);
        if b == T::zero() {
            continue;
        }
        let r = a.hypot(b);
        let g = Givens {
            i,
            cos: a / r,
            sin: b / r,
        };
        v[i] = r;
        v[i + 1] = T::zero();
        rotations.push(g);
    }
    Ok(RotationPlan {
        dim: x.len(),
        rotations,
    })
}

/// Ball `center + radius·B`. Every unit-ball kernel is available through it by
/// shifting and scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct BallGeometry<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Real> BallGeometry<T> {
    pub fn new(center: Vec<T>, radius: T) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(invalid(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn centered(d: usize, radius: T) -> Result<Self> {
        Self::new(vec![T::zero(); d], radius)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn to_unit(&self, x: &[T]) -> Vec<T> {
        x.iter().zip(&self.center).map(|(&v, &c)| (v - c) / self.radius).collect()
    }

    pub fn from_unit(&self, y: &[T]) -> Vec<T> {
        y.iter().zip(&self.center).map(|(&v, &c)| c + v * self.radius).collect()
    }

    fn unit_start(&self, x: &[T]) -> Result<Vec<T>> {
        check_dim(self.dim(), x)?;
        Ok(self.to_unit(x))
    }

    pub fn hit_probability(&self, alpha: T, x: &[T]) -> Result<T> {
        let u = self.unit_start(x)?;
        hit_ball_probability(alpha, self.dim(), norm(&u))
    }

    pub fn sample_hit_location<R: Rng + ?Sized>(&self, alpha: T, x: &[T], rng: &mut R) -> Result<Vec<T>> {
        let u = self.unit_start(x)?;
        Ok(self.from_unit(&sample_hit_location_in_ball(alpha, self.dim(), &u, rng)?))
    }

    pub fn sample_exit_location<R: Rng + ?Sized>(&self, alpha: T, x: &[T], rng: &mut R) -> Result<Vec<T>> {
        let u = self.unit_start(x)?;
        Ok(self.from_unit(&sample_exit_location_from_ball(alpha, self.dim(), &u, rng)?))
    }

    pub fn sample_brownian_reentry<R: Rng + ?Sized>(&self, x: &[T], rng: &mut R) -> Result<Vec<T>> {
        let u = self.unit_start(x)?;
        Ok(self.from_unit(&sample_brownian_reentry_sphere(self.dim(), &u, rng)?))
    }

    pub fn capacity(&self, alpha: T) -> Result<T> {
        ball_capacity(alpha, self.dim(), self.radius)
    }
}
