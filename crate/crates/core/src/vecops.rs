//! Small dense-vector helpers on slices.

use crate::Real;

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm_sq<T: Real>(a: &[T]) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    norm_sq(a).sqrt()
}

#[inline]
pub fn dist_sq<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let t = x - y;
        acc + t * t
    })
}

#[inline]
pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    dist_sq(a, b).sqrt()
}

#[inline]
pub fn scale_in_place<T: Real>(a: &mut [T], s: T) {
    a.iter_mut().for_each(|x| *x = *x * s);
}

/// `a += s * b`
#[inline]
pub fn axpy<T: Real>(a: &mut [T], s: T, b: &[T]) {
    a.iter_mut().zip(b).for_each(|(x, &y)| *x = *x + s * y);
}

#[inline]
pub fn scaled<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}
