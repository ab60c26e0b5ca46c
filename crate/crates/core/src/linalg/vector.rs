use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the ambient space: a finite sequence of real coordinates with
/// the Euclidean inner product.
///
/// Public construction rejects non-finite coordinates; arithmetic between
/// vectors of different dimensions panics, mirroring the behaviour of dense
/// linear-algebra crates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    /// Builds a vector, rejecting NaN and infinite coordinates.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if let Some(bad) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coordinate at index {bad}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![T::zero(); dim],
        }
    }

    /// i-th canonical basis vector of `R^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "unit index {i} out of range for dim {dim}");
        let mut coords = vec![T::zero(); dim];
        coords[i] = T::one();
        Self { coords }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> T) -> Self {
        Self {
            coords: (0..dim).map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.coords.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn norm_squared(&self) -> T {
        self.coords.iter().map(|&c| c * c).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// `self + alpha * other`, dimension-checked.
    pub fn axpy(&self, alpha: T, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn scale(&self, alpha: T) -> Self {
        Self {
            coords: self.coords.iter().map(|&c| alpha * c).collect(),
        }
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self.scale(T::one() / n))
        } else {
            None
        }
    }

    pub fn distance_to(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "distance dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt()
    }

    /// Dot product without a dimension check; callers validate once up front.
    pub(crate) fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub(crate) fn from_raw(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }
}

/// Euclidean inner product `sum_i x_i y_i`.
pub fn inner<T: Scalar>(x: &Vector<T>, y: &Vector<T>) -> Result<T> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(x.dot(y))
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        self.axpy(T::one(), rhs)
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        self.axpy(-T::one(), rhs)
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul<T> for &Vector<T> {
    type Output = Vector<T>;
    fn mul(self, rhs: T) -> Vector<T> {
        self.scale(rhs)
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_orthogonal_units() {
        let x = Vector::<f64>::unit(2, 0);
        let y = Vector::<f64>::unit(2, 1);
        assert_eq!(inner(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn inner_direct_arithmetic() {
        let x = Vector::new(vec![1.0, 2.0]).unwrap();
        let y = Vector::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(inner(&x, &y).unwrap(), 11.0);
    }

    #[test]
    fn inner_matches_norm_squared() {
        let mut rng = crate::random::rng_from_seed(11);
        for _ in 0..20 {
            let x: Vector<f64> = crate::random::gaussian_vector(7, &mut rng);
            let diff: f64 = inner(&x, &x).unwrap() - x.norm_squared();
            assert!(diff.abs() <= 1e-14 * x.norm_squared().max(1.0));
        }
    }

    #[test]
    fn inner_dimension_mismatch_errors() {
        let x = Vector::<f64>::zeros(2);
        let y = Vector::<f64>::zeros(3);
        assert!(matches!(
            inner(&x, &y),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn new_rejects_non_finite() {
        assert!(Vector::new(vec![0.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
    }
}
