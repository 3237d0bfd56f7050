use crate::error::{Error, Result};
use crate::Real;

/// Flat row-major storage of `len` points in `R^dim`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointCloud<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> PointCloud<T> {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn from_flat(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if data.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.len() % dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_points<P: AsRef<[T]>>(dim: usize, points: &[P]) -> Result<Self> {
        let mut cloud = Self::new(dim);
        for p in points {
            cloud.push(p.as_ref())?;
        }
        Ok(cloud)
    }

    pub fn push(&mut self, p: &[T]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        self.data.extend_from_slice(p);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[T] {
        &self.data
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    /// Euclidean norms of every point.
    pub fn radii(&self) -> Vec<T> {
        self.iter().map(crate::vecops::norm).collect()
    }
}
