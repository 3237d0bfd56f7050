//! Target sets: unions of balls, axis-aligned boxes and finite cylinders, with
//! exact Euclidean distance queries.

use crate::ball_kernels::BallGeometry;
use crate::error::{invalid, Error, Result};
use crate::rng::RngStream;
use crate::special::ln_gamma;
use crate::vecops::{dist_sq, dot, norm, norm_sq};
use crate::Real;

/// Sample size of the Monte Carlo volume fallback for overlapping unions.
pub const VOLUME_MC_POINTS: usize = 10_000_000;

/// Node of a shape tree. Build through [`Shape`]'s constructors, which check
/// the invariants (positive radii, ordered box corners, common dimension).
#[derive(Clone, Debug, PartialEq)]
pub enum Solid<T> {
    Ball { center: Vec<T>, radius: T },
    Box { min: Vec<T>, max: Vec<T> },
    /// Flat-ended solid cylinder around the segment `start..end`.
    Cylinder { start: Vec<T>, end: Vec<T>, radius: T },
    Union(Vec<Solid<T>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shape<T> {
    dim: usize,
    root: Solid<T>,
}

/// Volume with an optional relative standard error (set only by the Monte
/// Carlo fallback).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeEstimate<T> {
    pub value: T,
    pub relative_error: Option<T>,
}

impl<T: Real> Shape<T> {
    pub fn ball(center: Vec<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(invalid(format!("ball radius must be positive, got {radius}")));
        }
        Self::leaf(Solid::Ball { center, radius })
    }

    pub fn unit_ball(d: usize) -> Result<Self> {
        Self::ball(vec![T::zero(); d], T::one())
    }

    pub fn cuboid(min: Vec<T>, max: Vec<T>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::DimensionMismatch {
                expected: min.len(),
                found: max.len(),
            });
        }
        if min.iter().zip(&max).any(|(a, b)| !(a < b)) {
            return Err(invalid("box corners must satisfy min < max componentwise"));
        }
        Self::leaf(Solid::Box { min, max })
    }

    /// The cube `[-side/2, side/2]^d`.
    pub fn centered_cube(d: usize, side: T) -> Result<Self> {
        let h = side / T::lit(2.0);
        Self::cuboid(vec![-h; d], vec![h; d])
    }

    pub fn cylinder(start: Vec<T>, end: Vec<T>, radius: T) -> Result<Self> {
        if start.len() != end.len() {
            return Err(Error::DimensionMismatch {
                expected: start.len(),
                found: end.len(),
            });
        }
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(invalid(format!("cylinder radius must be positive, got {radius}")));
        }
        if !(dist_sq(&start, &end) > T::zero()) {
            return Err(invalid("cylinder axis segment must have positive length"));
        }
        Self::leaf(Solid::Cylinder { start, end, radius })
    }

    /// Thin disk of radius `radius` and half-thickness `half_thickness`,
    /// perpendicular to the first axis and centred at the origin.
    pub fn coin(d: usize, radius: T, half_thickness: T) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let mut a = vec![T::zero(); d];
        let mut b = vec![T::zero(); d];
        a[0] = -half_thickness;
        b[0] = half_thickness;
        Self::cylinder(a, b, radius)
    }

    /// Square shell in the plane: outer square `[-side/2, side/2]²` with walls
    /// of thickness `wall`, as four disjoint boxes.
    pub fn hollow_square(side: T, wall: T) -> Result<Self> {
        let h = side / T::lit(2.0);
        if !(wall > T::zero() && wall < h) {
            return Err(invalid(format!("wall thickness must lie in (0, side/2), got {wall}")));
        }
        let i = h - wall;
        Self::union(vec![
            Self::cuboid(vec![-h, -h], vec![h, -i])?,
            Self::cuboid(vec![-h, i], vec![h, h])?,
            Self::cuboid(vec![-h, -i], vec![-i, i])?,
            Self::cuboid(vec![i, -i], vec![h, i])?,
        ])
    }

    /// The bar `[-half_length, half_length] × [-1, 1]^(d-1)`.
    pub fn bar(d: usize, half_length: T) -> Result<Self> {
        let mut min = vec![-T::one(); d];
        let mut max = vec![T::one(); d];
        min[0] = -half_length;
        max[0] = half_length;
        Self::cuboid(min, max)
    }

    pub fn union(children: Vec<Shape<T>>) -> Result<Self> {
        let first = children.first().ok_or_else(|| invalid("union needs at least one child"))?;
        let dim = first.dim;
        if let Some(bad) = children.iter().find(|c| c.dim != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim,
            });
        }
        Ok(Self {
            dim,
            root: Solid::Union(children.into_iter().map(|c| c.root).collect()),
        })
    }

    /// Validates an arbitrary tree.
    pub fn from_solid(root: Solid<T>) -> Result<Self> {
        match root {
            Solid::Ball { center, radius } => Self::ball(center, radius),
            Solid::Box { min, max } => Self::cuboid(min, max),
            Solid::Cylinder { start, end, radius } => Self::cylinder(start, end, radius),
            Solid::Union(children) => Self::union(
                children
                    .into_iter()
                    .map(Self::from_solid)
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    fn leaf(root: Solid<T>) -> Result<Self> {
        let dim = match &root {
            Solid::Ball { center, .. } => center.len(),
            Solid::Box { min, .. } => min.len(),
            Solid::Cylinder { start, .. } => start.len(),
            Solid::Union(_) => unreachable!(),
        };
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { dim, root })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn solid(&self) -> &Solid<T> {
        &self.root
    }

    /// Leaves of the tree in depth-first order.
    pub fn primitives(&self) -> Vec<&Solid<T>> {
        fn walk<'a, T>(s: &'a Solid<T>, out: &mut Vec<&'a Solid<T>>) {
            match s {
                Solid::Union(children) => children.iter().for_each(|c| walk(c, out)),
                leaf => out.push(leaf),
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Euclidean distance from `x` to the solid set (0 inside).
    pub fn distance(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.dist(x))
    }

    /// [`Shape::distance`] without the dimension check.
    #[inline]
    pub fn dist(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.dim);
        solid_distance(&self.root, x)
    }

    /// `distance(x) <= epsilon`.
    #[inline]
    pub fn is_hit(&self, x: &[T], epsilon: T) -> bool {
        self.dist(x) <= epsilon
    }

    /// Radius of the smallest origin-centred ball containing the shape.
    pub fn bounding_radius(&self) -> T {
        self.primitives()
            .into_iter()
            .map(|p| match p {
                Solid::Ball { center, radius } => norm(center) + *radius,
                Solid::Box { min, max } => min
                    .iter()
                    .zip(max)
                    .map(|(a, b)| {
                        let m = a.abs().max(b.abs());
                        m * m
                    })
                    .sum::<T>()
                    .sqrt(),
                Solid::Cylinder { start, end, radius } => {
                    let axis = unit_axis(start, end);
                    [start, end]
                        .into_iter()
                        .map(|p| {
                            let along = dot(p, &axis);
                            let perp = (norm_sq(p) - along * along).max(T::zero()).sqrt();
                            (norm_sq(p) + *radius * *radius + T::lit(2.0) * *radius * perp).sqrt()
                        })
                        .fold(T::zero(), T::max)
                }
                Solid::Union(_) => unreachable!(),
            })
            .fold(T::zero(), T::max)
    }

    /// Volume of the shape: exact when the leaves are pairwise disjoint,
    /// otherwise a fixed-seed Monte Carlo estimate over the bounding box.
    pub fn volume(&self) -> VolumeEstimate<T> {
        let leaves = self.primitives();
        let disjoint = leaves
            .iter()
            .enumerate()
            .all(|(i, a)| leaves[i + 1..].iter().all(|b| provably_disjoint(a, b)));
        if disjoint {
            return VolumeEstimate {
                value: leaves.iter().map(|p| primitive_volume(p, self.dim)).sum(),
                relative_error: None,
            };
        }
        self.monte_carlo_volume(VOLUME_MC_POINTS, 0x5eed_7015)
    }

    /// Hit-or-miss volume over the union's bounding box.
    pub fn monte_carlo_volume(&self, points: usize, seed: u64) -> VolumeEstimate<T> {
        let (lo, hi) = self.bounding_box();
        let box_vol: T = lo.iter().zip(&hi).map(|(a, b)| *b - *a).fold(T::one(), |acc, w| acc * w);
        let mut rng = RngStream::new(seed, 0);
        let mut x = vec![T::zero(); self.dim];
        let mut inside = 0usize;
        for _ in 0..points {
            for (k, v) in x.iter_mut().enumerate() {
                *v = lo[k] + (hi[k] - lo[k]) * T::unit(&mut rng);
            }
            if self.dist(&x) == T::zero() {
                inside += 1;
            }
        }
        let n = T::from_count(points);
        let p = T::from_count(inside) / n;
        let value = box_vol * p;
        let relative_error = if inside == 0 {
            T::infinity()
        } else {
            ((T::one() - p) / (p * n)).sqrt()
        };
        VolumeEstimate {
            value,
            relative_error: Some(relative_error),
        }
    }

    /// Axis-aligned bounding box of the whole shape.
    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        let mut lo = vec![T::infinity(); self.dim];
        let mut hi = vec![T::neg_infinity(); self.dim];
        for p in self.primitives() {
            let (a, b) = primitive_aabb(p);
            for k in 0..self.dim {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        (lo, hi)
    }

    /// Origin-centred ball with the same volume.
    pub fn ball_same_volume(&self) -> Result<BallGeometry<T>> {
        let v = self.volume().value;
        if !(v > T::zero()) {
            return Err(invalid("shape has zero volume"));
        }
        BallGeometry::centered(self.dim, radius_for_volume(v, self.dim))
    }

    /// The image of the shape under `x ↦ factor·x`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        if !(factor > T::zero() && factor.is_finite()) {
            return Err(invalid(format!("scale factor must be positive, got {factor}")));
        }
        Ok(self.map_solid(&|v: &[T]| v.iter().map(|&x| x * factor).collect(), factor))
    }

    /// The image of the shape under `x ↦ x + shift`.
    pub fn translated(&self, shift: &[T]) -> Result<Self> {
        if shift.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: shift.len(),
            });
        }
        Ok(self.map_solid(&|v: &[T]| v.iter().zip(shift).map(|(&x, &s)| x + s).collect(), T::one()))
    }

    fn map_solid(&self, f: &dyn Fn(&[T]) -> Vec<T>, length_scale: T) -> Self {
        fn go<T: Real>(s: &Solid<T>, f: &dyn Fn(&[T]) -> Vec<T>, k: T) -> Solid<T> {
            match s {
                Solid::Ball { center, radius } => Solid::Ball {
                    center: f(center),
                    radius: *radius * k,
                },
                Solid::Box { min, max } => Solid::Box { min: f(min), max: f(max) },
                Solid::Cylinder { start, end, radius } => Solid::Cylinder {
                    start: f(start),
                    end: f(end),
                    radius: *radius * k,
                },
                Solid::Union(c) => Solid::Union(c.iter().map(|s| go(s, f, k)).collect()),
            }
        }
        Self {
            dim: self.dim,
            root: go(&self.root, f, length_scale),
        }
    }
}

/// Volume of the d-dimensional ball of radius `r`.
pub fn ball_volume<T: Real>(d: usize, r: T) -> T {
    let dd = T::from_count(d);
    let half = dd / T::lit(2.0);
    (half * T::PI().ln() - ln_gamma(half + T::one())).exp() * r.powf(dd)
}

/// Radius of the d-dimensional ball with the given volume.
pub fn radius_for_volume<T: Real>(volume: T, d: usize) -> T {
    let dd = T::from_count(d);
    let half = dd / T::lit(2.0);
    (volume.ln() + ln_gamma(half + T::one()) - half * T::PI().ln()).exp().powf(dd.recip())
}

fn unit_axis<T: Real>(start: &[T], end: &[T]) -> Vec<T> {
    let len = dist_sq(start, end).sqrt();
    end.iter().zip(start).map(|(&b, &a)| (b - a) / len).collect()
}

fn solid_distance<T: Real>(s: &Solid<T>, x: &[T]) -> T {
    match s {
        Solid::Ball { center, radius } => (dist_sq(center, x).sqrt() - *radius).max(T::zero()),
        Solid::Box { min, max } => {
            let mut acc = T::zero();
            for k in 0..x.len() {
                let q = (min[k] - x[k]).max(x[k] - max[k]).max(T::zero());
                acc = acc + q * q;
            }
            acc.sqrt()
        }
        Solid::Cylinder { start, end, radius } => {
            let half = T::lit(0.5);
            let len = dist_sq(start, end).sqrt();
            let mut along = T::zero();
            let mut r2 = T::zero();
            // x relative to the segment midpoint, split into axial and radial parts.
            for k in 0..x.len() {
                let u = (end[k] - start[k]) / len;
                along = along + (x[k] - half * (start[k] + end[k])) * u;
            }
            for k in 0..x.len() {
                let u = (end[k] - start[k]) / len;
                let rel = x[k] - half * (start[k] + end[k]) - along * u;
                r2 = r2 + rel * rel;
            }
            let da = (along.abs() - half * len).max(T::zero());
            let dr = (r2.sqrt() - *radius).max(T::zero());
            (da * da + dr * dr).sqrt()
        }
        Solid::Union(children) => children
            .iter()
            .map(|c| solid_distance(c, x))
            .fold(T::infinity(), T::min),
    }
}

fn primitive_volume<T: Real>(p: &Solid<T>, d: usize) -> T {
    match p {
        Solid::Ball { radius, .. } => ball_volume(d, *radius),
        Solid::Box { min, max } => min.iter().zip(max).fold(T::one(), |acc, (a, b)| acc * (*b - *a)),
        Solid::Cylinder { start, end, radius } => ball_volume(d - 1, *radius) * dist_sq(start, end).sqrt(),
        Solid::Union(_) => unreachable!(),
    }
}

fn primitive_aabb<T: Real>(p: &Solid<T>) -> (Vec<T>, Vec<T>) {
    match p {
        Solid::Ball { center, radius } => (
            center.iter().map(|&c| c - *radius).collect(),
            center.iter().map(|&c| c + *radius).collect(),
        ),
        Solid::Box { min, max } => (min.clone(), max.clone()),
        Solid::Cylinder { start, end, radius } => {
            // Each end disk extends radius·sqrt(1 - u_k²) along axis k.
            let u = unit_axis(start, end);
            let lo = (0..start.len())
                .map(|k| {
                    let e = *radius * (T::one() - u[k] * u[k]).max(T::zero()).sqrt();
                    start[k].min(end[k]) - e
                })
                .collect();
            let hi = (0..start.len())
                .map(|k| {
                    let e = *radius * (T::one() - u[k] * u[k]).max(T::zero()).sqrt();
                    start[k].max(end[k]) + e
                })
                .collect();
            (lo, hi)
        }
        Solid::Union(_) => unreachable!(),
    }
}

/// Conservative interior-disjointness test between two leaves.
fn provably_disjoint<T: Real>(a: &Solid<T>, b: &Solid<T>) -> bool {
    if let (Solid::Ball { center: c1, radius: r1 }, Solid::Ball { center: c2, radius: r2 }) = (a, b) {
        return dist_sq(c1, c2).sqrt() >= *r1 + *r2;
    }
    let (alo, ahi) = primitive_aabb(a);
    let (blo, bhi) = primitive_aabb(b);
    (0..alo.len()).any(|k| ahi[k] <= blo[k] || bhi[k] <= alo[k])
}
