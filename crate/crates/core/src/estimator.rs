//! Split-sample energy estimator and capacity confidence interval.
//!
//! The hit sample is split into two groups. Group 1 defines the truncation
//! threshold τ (an upper quantile of its pairwise kernel values) and the
//! truncated U-statistic Î₁ with Sen's row-mean variance. Group 2 supplies an
//! index-disjoint sample of kernel values above τ, whose Pareto tail index
//! (Hill estimator) gives the tail contribution Î₂. Kernel values are computed
//! on the fly, so memory stays linear in the number of hits.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Error, Result};
use crate::points::PointCloud;
use crate::stats::z_two_sided;
use crate::vecops::dist_sq;
use crate::Real;

pub const DEFAULT_P_TAU: f64 = 0.995;
pub const DEFAULT_DELTA: f64 = 0.05;
/// Group-1 pair count below which the threshold quantile is flagged as unreliable.
pub const MIN_THRESHOLD_PAIRS: usize = 10;

/// How the group-1 row-mean dispersion `v₁` is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VarianceForm {
    /// `Σ (x̄ⱼ − Î₁)² / (n₁ − 1)`, the sample variance of the row means.
    #[default]
    RowMeanDeviation,
    /// `Σ (x̄ⱼ² − Î₁)² / (n₁ − 1)`, kept for comparison only.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorConfig<T> {
    /// Group-1 size; `None` means half the sample.
    pub n1: Option<usize>,
    pub p_tau: T,
    pub delta: T,
    pub variance_form: VarianceForm,
}

impl<T: Real> Default for EstimatorConfig<T> {
    fn default() -> Self {
        Self {
            n1: None,
            p_tau: T::lit(DEFAULT_P_TAU),
            delta: T::lit(DEFAULT_DELTA),
            variance_form: VarianceForm::RowMeanDeviation,
        }
    }
}

impl<T: Real> EstimatorConfig<T> {
    pub fn with_n1(mut self, n1: usize) -> Self {
        self.n1 = Some(n1);
        self
    }

    pub fn with_p_tau(mut self, p_tau: T) -> Self {
        self.p_tau = p_tau;
        self
    }

    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_variance_form(mut self, form: VarianceForm) -> Self {
        self.variance_form = form;
        self
    }

    /// Resolved group-1 size for a sample of `n` points.
    pub fn group1_size(&self, n: usize) -> Result<usize> {
        if n < 4 {
            return Err(Error::InsufficientSample { needed: 4, got: n });
        }
        let n1 = self.n1.unwrap_or(n / 2);
        if n1 < 2 || n1 >= n {
            return Err(invalid(format!("n1 must satisfy 2 <= n1 < n = {n}, got {n1}")));
        }
        Ok(n1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_tau > T::zero() && self.p_tau < T::one()) {
            return Err(invalid(format!("p_tau must lie in (0, 1), got {}", self.p_tau)));
        }
        if !(self.delta > T::zero() && self.delta < T::one()) {
            return Err(invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EstimatorWarning {
    /// Every group-1 kernel value is equal; τ is that value.
    DegenerateThreshold { value: f64 },
    FewThresholdPairs { pairs: usize },
    /// Pairs of coincident points left out of the sums.
    CoincidentPairs { group1: usize, group2: usize },
    /// No group-2 pair exceeds τ; the tail term is taken as zero.
    EmptyTailSample,
    /// Group-1 points whose every pair was coincident.
    DroppedRows { rows: usize },
}

/// Riesz kernel `|x − y|^(α−d)` evaluated from squared distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieszKernel<T> {
    exponent: T,
    half_exponent: T,
    int_exponent: Option<i32>,
}

impl<T: Real> RieszKernel<T> {
    /// Requires `0 < α ≤ 2` and `α ≤ d`; `α = d` gives the constant kernel.
    pub fn new(alpha: T, d: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(invalid(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let exponent = alpha - T::from_count(d);
        if exponent > T::zero() {
            return Err(invalid(format!("alpha = {alpha} exceeds d = {d}")));
        }
        let int_exponent = (exponent.fract() == T::zero()).then(|| exponent.to_i32()).flatten();
        Ok(Self {
            exponent,
            half_exponent: exponent / T::lit(2.0),
            int_exponent,
        })
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    /// True when the kernel blows up at distance zero.
    pub fn is_singular(&self) -> bool {
        self.exponent < T::zero()
    }

    #[inline]
    pub fn from_dist_sq(&self, r2: T) -> T {
        match self.int_exponent {
            Some(0) => T::one(),
            _ if r2 == T::zero() => T::infinity(),
            // Integer exponents stay exact under power-of-two rescaling.
            Some(k) => r2.sqrt().powi(k),
            None => r2.powf(self.half_exponent),
        }
    }

    #[inline]
    pub fn eval(&self, x: &[T], y: &[T]) -> T {
        self.from_dist_sq(dist_sq(x, y))
    }

    /// Squared distance beyond which the kernel is certainly `≤ tau`.
    fn dist_sq_cut(&self, tau: T) -> T {
        if self.exponent == T::zero() {
            return if T::one() > tau { T::infinity() } else { -T::one() };
        }
        let r2 = tau.powf(T::lit(2.0) / self.exponent);
        if r2.is_finite() {
            r2 * T::lit(1.0 + 1e-6)
        } else {
            T::infinity()
        }
    }
}

/// Read access to the symmetric off-diagonal kernel values of a sample.
///
/// Each pair has a `key` that orders pairs by decreasing weight (a smaller key
/// never has a smaller weight), so quantile and exceedance scans can skip the
/// weight evaluation for most pairs.
pub trait PairWeights<T: Real> {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(&self, i: usize, j: usize) -> T;

    fn weight_of_key(&self, key: T) -> T;

    /// Pairs left out of every sum (coincident points).
    fn is_excluded(&self, key: T) -> bool;

    /// Any pair with `key > key_cut(tau)` has weight `≤ tau`.
    fn key_cut(&self, tau: T) -> T;

    fn weight(&self, i: usize, j: usize) -> T {
        self.weight_of_key(self.key(i, j))
    }
}

/// Streaming kernel over a point cloud: keys are squared distances.
#[derive(Clone, Copy, Debug)]
pub struct PointKernel<'a, T> {
    points: &'a PointCloud<T>,
    kernel: RieszKernel<T>,
}

impl<'a, T: Real> PointKernel<'a, T> {
    pub fn new(points: &'a PointCloud<T>, alpha: T) -> Result<Self> {
        Ok(Self {
            points,
            kernel: RieszKernel::new(alpha, points.dim())?,
        })
    }

    pub fn kernel(&self) -> RieszKernel<T> {
        self.kernel
    }
}

impl<T: Real> PairWeights<T> for PointKernel<'_, T> {
    fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    fn key(&self, i: usize, j: usize) -> T {
        dist_sq(self.points.point(i), self.points.point(j))
    }

    #[inline]
    fn weight_of_key(&self, key: T) -> T {
        self.kernel.from_dist_sq(key)
    }

    #[inline]
    fn is_excluded(&self, key: T) -> bool {
        key == T::zero() && self.kernel.is_singular()
    }

    fn key_cut(&self, tau: T) -> T {
        self.kernel.dist_sq_cut(tau)
    }
}

/// Dense symmetric kernel matrix; the diagonal is unset (zero).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix<T> {
    n: usize,
    data: Vec<T>,
    coincident: usize,
}

impl<T: Real> KernelMatrix<T> {
    /// Builds from a function of the pair `(i, j)`, `i < j`.
    pub fn from_fn<F: FnMut(usize, usize) -> T>(n: usize, mut f: F) -> Self {
        let mut data = vec![T::zero(); n * n];
        let mut coincident = 0;
        for i in 0..n {
            for j in i + 1..n {
                let w = f(i, j);
                if w.is_infinite() {
                    coincident += 1;
                }
                data[i * n + j] = w;
                data[j * n + i] = w;
            }
        }
        Self { n, data, coincident }
    }

    /// Builds from the upper triangle listed row by row.
    pub fn from_upper(n: usize, upper: &[T]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(invalid(format!("{n} points need {} pair values, got {}", n * n.saturating_sub(1) / 2, upper.len())));
        }
        let mut it = upper.iter().copied();
        Ok(Self::from_fn(n, |_, _| it.next().expect("length checked")))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Pairs with an infinite entry.
    pub fn coincident_pairs(&self) -> usize {
        self.coincident
    }

    pub fn upper_values(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            v.extend_from_slice(&self.data[i * self.n + i + 1..(i + 1) * self.n]);
        }
        v
    }
}

impl<T: Real> PairWeights<T> for KernelMatrix<T> {
    fn len(&self) -> usize {
        self.n
    }

    fn key(&self, i: usize, j: usize) -> T {
        -self.get(i, j)
    }

    fn weight_of_key(&self, key: T) -> T {
        -key
    }

    fn is_excluded(&self, key: T) -> bool {
        key.is_infinite()
    }

    fn key_cut(&self, tau: T) -> T {
        -tau
    }
}

/// Contiguous index range of another pair source.
#[derive(Clone, Copy, Debug)]
pub struct Block<'a, P> {
    inner: &'a P,
    offset: usize,
    len: usize,
}

impl<'a, P> Block<'a, P> {
    pub fn new<T: Real>(inner: &'a P, range: std::ops::Range<usize>) -> Result<Self>
    where
        P: PairWeights<T>,
    {
        if range.end > inner.len() || range.start > range.end {
            return Err(invalid(format!("block {range:?} out of bounds for {} points", inner.len())));
        }
        Ok(Self {
            inner,
            offset: range.start,
            len: range.end - range.start,
        })
    }
}

impl<T: Real, P: PairWeights<T>> PairWeights<T> for Block<'_, P> {
    fn len(&self) -> usize {
        self.len
    }

    #[inline]
    fn key(&self, i: usize, j: usize) -> T {
        self.inner.key(self.offset + i, self.offset + j)
    }

    #[inline]
    fn weight_of_key(&self, key: T) -> T {
        self.inner.weight_of_key(key)
    }

    #[inline]
    fn is_excluded(&self, key: T) -> bool {
        self.inner.is_excluded(key)
    }

    fn key_cut(&self, tau: T) -> T {
        self.inner.key_cut(tau)
    }
}

/// Kernel matrix of a point set; coincident points give `+∞` entries.
pub fn pairwise_kernel<T: Real>(points: &PointCloud<T>, alpha: T) -> Result<KernelMatrix<T>> {
    if points.len() < 2 {
        return Err(Error::InsufficientSample {
            needed: 2,
            got: points.len(),
        });
    }
    let kernel = RieszKernel::new(alpha, points.dim())?;
    Ok(KernelMatrix::from_fn(points.len(), |i, j| {
        kernel.eval(points.point(i), points.point(j))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold<T> {
    pub tau: T,
    /// Pairs that entered the quantile.
    pub pairs: usize,
    /// Pairs left out as coincident.
    pub excluded: usize,
    /// All included values were equal.
    pub degenerate: bool,
}

/// Position and interpolation weight of the linear-interpolation quantile:
/// with ascending order statistics `v₀ ≤ … ≤ v_{m−1}`, the `p`-quantile is
/// `v_lo + f·(v_{lo+1} − v_lo)` where `h = (m − 1)p`, `lo = ⌊h⌋`, `f = h − lo`.
fn quantile_position<T: Real>(m: usize, p: T) -> (usize, T) {
    let h = T::from_count(m - 1) * p;
    let lo = h.floor();
    (lo.to_usize().unwrap_or(0).min(m - 1), h - lo)
}

fn interpolate<T: Real>(lo: T, hi: T, frac: T) -> T {
    if frac == T::zero() || lo == hi {
        lo
    } else {
        lo + frac * (hi - lo)
    }
}

/// Linear-interpolation `p_tau`-quantile of a list of kernel values.
/// Infinite values (coincident points) are left out.
pub fn choose_threshold<T: Real>(values: &[T], p_tau: T) -> Result<Threshold<T>> {
    check_level(p_tau)?;
    let mut v: Vec<T> = values.iter().copied().filter(|w| w.is_finite()).collect();
    let excluded = values.len() - v.len();
    if v.is_empty() {
        return Err(Error::InsufficientSample { needed: 1, got: 0 });
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let (lo, frac) = quantile_position(v.len(), p_tau);
    let hi = v[(lo + 1).min(v.len() - 1)];
    Ok(Threshold {
        tau: interpolate(v[lo], hi, frac),
        pairs: v.len(),
        excluded,
        degenerate: v[0] == v[v.len() - 1],
    })
}

fn check_level<T: Real>(p: T) -> Result<()> {
    if p > T::zero() && p < T::one() {
        Ok(())
    } else {
        Err(invalid(format!("p_tau must lie in (0, 1), got {p}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
struct Key<T>(T);

impl<T: PartialEq> Eq for Key<T> {}

impl<T: PartialOrd> Ord for Key<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

/// Same quantile as [`choose_threshold`] over all pairs of `group`, computed
/// in one pass that keeps only the largest values in a heap.
pub fn threshold_for_pairs<T: Real, P: PairWeights<T>>(group: &P, p_tau: T) -> Result<Threshold<T>> {
    check_level(p_tau)?;
    let n = group.len();
    let total = n * n.saturating_sub(1) / 2;
    if total == 0 {
        return Err(Error::InsufficientSample { needed: 2, got: n });
    }
    // The number of top values the quantile needs grows with the pair count,
    // so sizing for the full count also covers fewer (non-excluded) pairs.
    let (lo_total, _) = quantile_position(total, p_tau);
    let keep = total - lo_total + 1;

    let mut heap: BinaryHeap<Key<T>> = BinaryHeap::with_capacity(keep + 1);
    let mut excluded = 0usize;
    let mut min_key = T::infinity();
    let mut max_key = T::neg_infinity();
    for i in 0..n {
        for j in i + 1..n {
            let k = group.key(i, j);
            if group.is_excluded(k) {
                excluded += 1;
                continue;
            }
            min_key = min_key.min(k);
            max_key = max_key.max(k);
            if heap.len() < keep {
                heap.push(Key(k));
            } else if let Some(top) = heap.peek() {
                if k < top.0 {
                    heap.pop();
                    heap.push(Key(k));
                }
            }
        }
    }
    let m = total - excluded;
    if m == 0 {
        return Err(Error::InsufficientSample { needed: 1, got: 0 });
    }
    // Ascending keys are descending weights: weight rank r (ascending) sits at
    // key rank m − 1 − r.
    let keys = heap.into_sorted_vec();
    let (lo, frac) = quantile_position(m, p_tau);
    let w_lo = group.weight_of_key(keys[m - 1 - lo].0);
    let w_hi = if lo + 1 < m {
        group.weight_of_key(keys[m - 2 - lo].0)
    } else {
        w_lo
    };
    Ok(Threshold {
        tau: interpolate(w_lo, w_hi, frac),
        pairs: m,
        excluded,
        degenerate: group.weight_of_key(min_key) == group.weight_of_key(max_key),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct I1Estimate<T> {
    pub i1: T,
    pub v1: T,
    pub sigma1_sq: T,
    /// Rows entering the estimate.
    pub rows: usize,
    pub excluded_pairs: usize,
    pub row_means: Vec<T>,
}

/// Truncated U-statistic `Î₁` over all pairs of `group` with Sen's
/// row-mean variance `σ₁² = 4v₁/n₁`.
pub fn estimate_i1<T: Real, P: PairWeights<T>>(group: &P, tau: T, form: VarianceForm) -> Result<I1Estimate<T>> {
    if !(tau > T::zero()) {
        return Err(invalid(format!("tau must be positive, got {tau}")));
    }
    let n = group.len();
    let mut sums = vec![T::zero(); n];
    let mut counts = vec![0usize; n];
    let mut excluded = 0usize;
    for i in 0..n {
        let mut row = T::zero();
        for j in i + 1..n {
            let k = group.key(i, j);
            if group.is_excluded(k) {
                excluded += 1;
                continue;
            }
            let w = group.weight_of_key(k).min(tau);
            row = row + w;
            sums[j] = sums[j] + w;
            counts[i] += 1;
            counts[j] += 1;
        }
        sums[i] = sums[i] + row;
    }
    let row_means: Vec<T> = sums
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&s, &c)| s / T::from_count(c))
        .collect();
    let rows = row_means.len();
    if rows < 2 {
        return Err(Error::InsufficientSample { needed: 2, got: rows });
    }
    let nr = T::from_count(rows);
    let i1 = row_means.iter().copied().sum::<T>() / nr;
    let ss: T = match form {
        VarianceForm::RowMeanDeviation => row_means.iter().map(|&x| (x - i1) * (x - i1)).sum(),
        VarianceForm::Literal => row_means.iter().map(|&x| (x * x - i1) * (x * x - i1)).sum(),
    };
    let v1 = ss / T::from_count(rows - 1);
    Ok(I1Estimate {
        i1,
        v1,
        sigma1_sq: T::lit(4.0) * v1 / nr,
        rows,
        excluded_pairs: excluded,
        row_means,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TailSample<T> {
    pub z: Vec<T>,
    /// Selected pairs in local indices, `i < j`.
    pub pairs: Vec<(usize, usize)>,
    /// Coincident pairs met during the scan.
    pub excluded_pairs: usize,
}

/// Greedy lexicographic scan for values above `tau`, using every index at
/// most once so the selected values are mutually independent.
pub fn select_tail_sample<T: Real, P: PairWeights<T>>(group: &P, tau: T) -> TailSample<T> {
    let n = group.len();
    let cut = group.key_cut(tau);
    let mut used = vec![false; n];
    let mut out = TailSample::default();
    for i in 0..n {
        if used[i] {
            continue;
        }
        for j in i + 1..n {
            if used[j] {
                continue;
            }
            let k = group.key(i, j);
            if k > cut {
                continue;
            }
            if group.is_excluded(k) {
                out.excluded_pairs += 1;
                continue;
            }
            let w = group.weight_of_key(k);
            if w > tau {
                used[i] = true;
                used[j] = true;
                out.z.push(w);
                out.pairs.push((i, j));
                break;
            }
        }
    }
    out
}

/// Hill estimate `ν̂ = (mean ln(zᵢ/τ))⁻¹` of a Pareto tail index.
pub fn hill_estimator<T: Real>(z: &[T], tau: T) -> Result<T> {
    if z.is_empty() {
        return Err(Error::InsufficientSample { needed: 1, got: 0 });
    }
    if !(tau > T::zero()) {
        return Err(invalid(format!("tau must be positive, got {tau}")));
    }
    if let Some(bad) = z.iter().find(|&&v| !(v > tau && v.is_finite())) {
        return Err(Error::Domain(format!("tail value {bad} does not exceed tau = {tau}")));
    }
    let mean_log = z.iter().map(|&v| (v / tau).ln()).sum::<T>() / T::from_count(z.len());
    Ok(mean_log.recip())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct I2Estimate<T> {
    /// `+∞` when `ν̂ ≤ 1`.
    pub value: T,
    /// Delta-method variance; undefined for an infinite tail term.
    pub sigma_sq: Option<T>,
}

/// Tail term `Î₂ = (1 − p_τ)τ/(ν̂ − 1)` and its delta-method variance
/// `g′(ν̂)²·ν̂²/n₃`.
pub fn estimate_i2<T: Real>(nu_hat: T, tau: T, p_tau: T, n3: usize) -> I2Estimate<T> {
    if nu_hat <= T::one() {
        return I2Estimate {
            value: T::infinity(),
            sigma_sq: None,
        };
    }
    let mass = (T::one() - p_tau) * tau;
    let excess = nu_hat - T::one();
    let g_prime = mass / (excess * excess);
    let sigma_sq = (n3 > 0).then(|| g_prime * g_prime * nu_hat * nu_hat / T::from_count(n3));
    I2Estimate {
        value: mass / excess,
        sigma_sq,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyEstimate<T> {
    pub alpha: T,
    pub d: usize,
    pub n: usize,
    pub n1: usize,
    pub p_tau: T,
    pub tau: T,
    pub i1: T,
    pub v1: T,
    pub sigma1_sq: T,
    /// `None` when the tail sample is empty.
    pub nu_hat: Option<T>,
    pub n3: usize,
    pub i2: T,
    pub sigma2_sq: Option<T>,
    pub i: T,
    /// `σ₁² + σ₂²`; undefined for infinite energy.
    pub sigma_i_sq: Option<T>,
    pub warnings: Vec<EstimatorWarning>,
}

impl<T: Real> EnergyEstimate<T> {
    pub fn is_infinite(&self) -> bool {
        self.i.is_infinite()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityEstimate<T> {
    /// `1/Î`, or zero when the energy is infinite.
    pub value: T,
    /// Standard error `σ_I/Î²`.
    pub sigma: Option<T>,
    pub ci_low: Option<T>,
    pub ci_high: Option<T>,
    pub delta: T,
    pub energy: EnergyEstimate<T>,
}

impl<T: Real> CapacityEstimate<T> {
    pub fn infinite_energy(&self) -> bool {
        self.energy.is_infinite()
    }

    pub fn ci(&self) -> Option<(T, T)> {
        self.ci_low.zip(self.ci_high)
    }

    pub fn ci_contains(&self, value: T) -> bool {
        self.ci().is_some_and(|(lo, hi)| lo <= value && value <= hi)
    }
}

/// Energy estimate from any pair source; group 1 is the first `n1` indices.
pub fn estimate_energy_from<T: Real, P: PairWeights<T>>(
    pairs: &P,
    alpha: T,
    d: usize,
    config: &EstimatorConfig<T>,
) -> Result<EnergyEstimate<T>> {
    config.validate()?;
    let n = pairs.len();
    let n1 = config.group1_size(n)?;
    let group1 = Block::new(pairs, 0..n1)?;
    let group2 = Block::new(pairs, n1..n)?;
    let mut warnings = Vec::new();

    let threshold = threshold_for_pairs(&group1, config.p_tau)?;
    let tau = threshold.tau;
    if threshold.degenerate {
        warnings.push(EstimatorWarning::DegenerateThreshold { value: tau.as_f64() });
    }
    if threshold.pairs < MIN_THRESHOLD_PAIRS {
        warnings.push(EstimatorWarning::FewThresholdPairs { pairs: threshold.pairs });
    }
    if !(tau > T::zero() && tau.is_finite()) {
        return Err(Error::Domain(format!("threshold {tau} is not a positive finite value")));
    }

    let first = estimate_i1(&group1, tau, config.variance_form)?;
    if first.rows < n1 {
        warnings.push(EstimatorWarning::DroppedRows { rows: n1 - first.rows });
    }
    let tail = select_tail_sample(&group2, tau);
    if first.excluded_pairs > 0 || tail.excluded_pairs > 0 {
        warnings.push(EstimatorWarning::CoincidentPairs {
            group1: first.excluded_pairs,
            group2: tail.excluded_pairs,
        });
    }

    let n3 = tail.z.len();
    let (nu_hat, second) = if n3 == 0 {
        warnings.push(EstimatorWarning::EmptyTailSample);
        (
            None,
            I2Estimate {
                value: T::zero(),
                sigma_sq: Some(T::zero()),
            },
        )
    } else {
        let nu = hill_estimator(&tail.z, tau)?;
        (Some(nu), estimate_i2(nu, tau, config.p_tau, n3))
    };

    let i = first.i1 + second.value;
    Ok(EnergyEstimate {
        alpha,
        d,
        n,
        n1,
        p_tau: config.p_tau,
        tau,
        i1: first.i1,
        v1: first.v1,
        sigma1_sq: first.sigma1_sq,
        nu_hat,
        n3,
        i2: second.value,
        sigma2_sq: second.sigma_sq,
        i,
        sigma_i_sq: second.sigma_sq.map(|s2| first.sigma1_sq + s2),
        warnings,
    })
}

/// Energy estimate of the empirical measure of `points`.
pub fn estimate_energy<T: Real>(
    points: &PointCloud<T>,
    alpha: T,
    config: &EstimatorConfig<T>,
) -> Result<EnergyEstimate<T>> {
    let pairs = PointKernel::new(points, alpha)?;
    estimate_energy_from(&pairs, alpha, points.dim(), config)
}

/// Capacity `1/Î` with a normal interval of half-width `z_{δ/2}·σ_I/Î²`
/// centred on the capacity itself.
pub fn capacity_with_ci<T: Real>(energy: &EnergyEstimate<T>, delta: T) -> Result<CapacityEstimate<T>> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if energy.is_infinite() {
        return Ok(CapacityEstimate {
            value: T::zero(),
            sigma: None,
            ci_low: None,
            ci_high: None,
            delta,
            energy: energy.clone(),
        });
    }
    if !(energy.i > T::zero()) {
        return Err(Error::Domain(format!("energy estimate {} is not positive", energy.i)));
    }
    let value = energy.i.recip();
    let sigma = energy.sigma_i_sq.map(|s| s.sqrt() / (energy.i * energy.i));
    let z = T::lit(z_two_sided(delta.as_f64()));
    Ok(CapacityEstimate {
        value,
        sigma,
        ci_low: sigma.map(|s| value - z * s),
        ci_high: sigma.map(|s| value + z * s),
        delta,
        energy: energy.clone(),
    })
}

/// End-to-end capacity estimate from hitting locations.
pub fn estimate_capacity<T: Real>(
    points: &PointCloud<T>,
    alpha: T,
    config: &EstimatorConfig<T>,
) -> Result<CapacityEstimate<T>> {
    let energy = estimate_energy(points, alpha, config)?;
    capacity_with_ci(&energy, config.delta)
}

/// Plain U-statistic `mean_{i<j} |xᵢ − xⱼ|^(α−d)`; `+∞` with coincident points.
pub fn naive_energy_estimate<T: Real>(points: &PointCloud<T>, alpha: T) -> Result<T> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientSample { needed: 2, got: n });
    }
    let kernel = RieszKernel::new(alpha, points.dim())?;
    let mut sum = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            sum = sum + kernel.eval(points.point(i), points.point(j));
        }
    }
    Ok(sum / T::from_count(n * (n - 1) / 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn kernel_values() {
        let k = RieszKernel::new(1.0_f64, 3).unwrap();
        assert_eq!(k.eval(&[0.0, 0.0, 0.0], &[0.5, 0.0, 0.0]), 4.0);
        let k = RieszKernel::new(2.0_f64, 3).unwrap();
        assert_eq!(k.eval(&[0.0, 0.0, 0.0], &[0.0, 2.0, 0.0]), 0.5);
        for alpha in [0.3, 1.0, 1.7] {
            let k = RieszKernel::new(alpha, 4).unwrap();
            assert!(close(k.from_dist_sq(1.0), 1.0, 1e-15));
        }
        assert!(RieszKernel::new(2.0_f64, 3).unwrap().from_dist_sq(0.0).is_infinite());
        assert_eq!(RieszKernel::new(2.0_f64, 2).unwrap().from_dist_sq(0.0), 1.0);
        assert!(RieszKernel::new(2.5_f64, 3).is_err());
    }

    #[test]
    fn pairwise_needs_two_points() {
        let one = PointCloud::from_points(3, &[[0.0_f64, 0.0, 0.0]]).unwrap();
        assert!(pairwise_kernel(&one, 1.0).is_err());
        let two = PointCloud::from_points(3, &[[0.0_f64, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(pairwise_kernel(&two, 1.0).unwrap().coincident_pairs(), 1);
    }

    #[test]
    fn threshold_examples() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let t = choose_threshold(&v, 0.99).unwrap();
        assert!((t.tau - 99.01).abs() < 1e-12);
        let t = choose_threshold(&[5.0_f64; 20], 0.9).unwrap();
        assert!(t.degenerate && t.tau == 5.0);
        assert!(choose_threshold(&v, 1.0).is_err());
    }

    #[test]
    fn heap_threshold_matches_sorting() {
        let upper: Vec<f64> = (0..45).map(|k| ((k * 37) % 45) as f64 + 0.5).collect();
        let m = KernelMatrix::from_upper(10, &upper).unwrap();
        for p in [0.1, 0.5, 0.9, 0.99, 0.999] {
            let a = choose_threshold(&upper, p).unwrap().tau;
            let b = threshold_for_pairs(&m, p).unwrap().tau;
            assert_eq!(a, b, "p = {p}");
        }
    }

    #[test]
    fn i1_constant_and_truncated() {
        let m = KernelMatrix::from_fn(6, |_, _| 2.0_f64);
        let e = estimate_i1(&m, 3.0, VarianceForm::RowMeanDeviation).unwrap();
        assert_eq!((e.i1, e.v1, e.sigma1_sq), (2.0, 0.0, 0.0));
        let e = estimate_i1(&m, 1.5, VarianceForm::RowMeanDeviation).unwrap();
        assert_eq!(e.i1, 1.5);
    }

    #[test]
    fn tail_selection_trace() {
        // Local indices 1..5 in the text map to 0..4 here.
        let big = 10.0_f64;
        let m = KernelMatrix::from_fn(5, |i, j| match (i, j) {
            (0, 1) | (0, 2) | (3, 4) => big,
            _ => 1.0,
        });
        let t = select_tail_sample(&m, 5.0);
        assert_eq!(t.pairs, vec![(0, 1), (3, 4)]);
        assert_eq!(t.z, vec![big, big]);
        let none = select_tail_sample(&KernelMatrix::from_fn(5, |_, _| 1.0_f64), 5.0);
        assert!(none.z.is_empty());
    }

    #[test]
    fn hill_examples() {
        let tau = 3.0_f64;
        let nu = hill_estimator(&[tau * std::f64::consts::E; 7], tau).unwrap();
        assert!(close(nu, 1.0, 1e-14));
        let nu = hill_estimator(&[tau * 0.5_f64.exp(); 7], tau).unwrap();
        assert!(close(nu, 2.0, 1e-14));
        assert!(hill_estimator(&[2.0], tau).is_err());
        assert!(hill_estimator::<f64>(&[], tau).is_err());
    }

    #[test]
    fn i2_examples() {
        let e = estimate_i2(2.0_f64, 10.0, 0.99, 50);
        assert!(close(e.value, 0.1, 1e-14));
        let s = 0.1_f64 * 0.1 * 4.0 / 50.0;
        assert!(close(e.sigma_sq.unwrap(), s, 1e-14));
        let e = estimate_i2(0.9_f64, 10.0, 0.99, 50);
        assert!(e.value.is_infinite() && e.sigma_sq.is_none());
    }

    fn energy(i: f64, sigma_i: f64) -> EnergyEstimate<f64> {
        EnergyEstimate {
            alpha: 1.0,
            d: 3,
            n: 10,
            n1: 5,
            p_tau: 0.995,
            tau: 1.0,
            i1: i,
            v1: 0.0,
            sigma1_sq: sigma_i * sigma_i,
            nu_hat: None,
            n3: 0,
            i2: 0.0,
            sigma2_sq: Some(0.0),
            i,
            sigma_i_sq: Some(sigma_i * sigma_i),
            warnings: vec![],
        }
    }

    #[test]
    fn ci_examples() {
        let c = capacity_with_ci(&energy(1.0, 0.0), 0.05).unwrap();
        assert_eq!((c.value, c.ci_low, c.ci_high), (1.0, Some(1.0), Some(1.0)));
        let c = capacity_with_ci(&energy(2.0, 0.2), 0.05).unwrap();
        assert_eq!(c.value, 0.5);
        let half = 1.959963984540054 * 0.2 / 4.0;
        assert!(close(c.ci_low.unwrap(), 0.5 - half, 1e-12));
        assert!(close(c.ci_high.unwrap(), 0.5 + half, 1e-12));
        let mut inf = energy(1.0, 0.1);
        inf.i = f64::INFINITY;
        inf.sigma_i_sq = None;
        let c = capacity_with_ci(&inf, 0.05).unwrap();
        assert_eq!(c.value, 0.0);
        assert!(c.ci().is_none() && c.infinite_energy());
    }

    #[test]
    fn naive_examples() {
        let two = PointCloud::from_points(3, &[[0.0_f64, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(naive_energy_estimate(&two, 1.3).unwrap(), 1.0);
        // Pairwise distances {1, 2, 3}.
        let three = PointCloud::from_points(3, &[[0.0_f64, 0.0, 0.0], [1.0, 0.0, 0.0], [3.0, 0.0, 0.0]]).unwrap();
        let want = (1.0 + 0.5 + 1.0 / 3.0) / 3.0;
        assert!(close(naive_energy_estimate(&three, 2.0).unwrap(), want, 1e-15));
        let dup = PointCloud::from_points(3, &[[0.0_f64, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        assert!(naive_energy_estimate(&dup, 1.0).unwrap().is_infinite());
    }

    #[test]
    fn insufficient_sample() {
        let pts = PointCloud::from_points(3, &[[0.0_f64, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let err = estimate_capacity(&pts, 1.0, &EstimatorConfig::default());
        assert!(matches!(err, Err(Error::InsufficientSample { needed: 4, got: 3 })));
    }

    #[test]
    fn recurrent_kernel_gives_unit_capacity() {
        let pts = PointCloud::from_points(2, &(0..20).map(|k| [k as f64, 0.5 * k as f64]).collect::<Vec<_>>()).unwrap();
        let c = estimate_capacity(&pts, 2.0, &EstimatorConfig::default()).unwrap();
        assert_eq!(c.value, 1.0);
        assert!(c.energy.warnings.contains(&EstimatorWarning::EmptyTailSample));
    }
}
