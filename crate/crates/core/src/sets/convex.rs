use super::{Projectable, Subspace};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;

/// A closed convex set with a closed-form nearest-point projection.
///
/// All projections here are analytic; no inner iterative solves are hidden
/// behind them, so inequality checks downstream carry no nested-solver error.
#[derive(Debug, Clone)]
pub enum ConvexSet<T> {
    /// `{x : <normal, x> <= offset}`.
    Halfspace { normal: Vector<T>, offset: T },
    /// Closed Euclidean ball.
    Ball { center: Vector<T>, radius: T },
    /// Axis-aligned box `[lower, upper]`.
    Box { lower: Vector<T>, upper: Vector<T> },
    /// A linear subspace viewed as a convex set.
    SubspaceSet(Subspace<T>),
    /// Affine translate `anchor + S`.
    Affine {
        subspace: Subspace<T>,
        anchor: Vector<T>,
    },
}

impl<T: Scalar> ConvexSet<T> {
    pub fn halfspace(normal: Vector<T>, offset: T) -> Result<Self> {
        if normal.norm_squared() == T::zero() {
            return Err(Error::InvalidParameter(
                "halfspace normal must be nonzero".into(),
            ));
        }
        Ok(Self::Halfspace { normal, offset })
    }

    pub fn ball(center: Vector<T>, radius: T) -> Result<Self> {
        if radius < T::zero() || !radius.is_finite() {
            return Err(Error::InvalidParameter(
                "ball radius must be finite and nonnegative".into(),
            ));
        }
        Ok(Self::Ball { center, radius })
    }

    #[allow(clippy::self_named_constructors)]
    pub fn boxed(lower: Vector<T>, upper: Vector<T>) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                got: upper.dim(),
            });
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidParameter(
                "box lower bound exceeds upper bound".into(),
            ));
        }
        Ok(Self::Box { lower, upper })
    }

    pub fn affine(subspace: Subspace<T>, anchor: Vector<T>) -> Result<Self> {
        if anchor.dim() != subspace.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: subspace.ambient_dim(),
                got: anchor.dim(),
            });
        }
        Ok(Self::Affine { subspace, anchor })
    }

    pub fn contains(&self, x: &Vector<T>, tol: T) -> bool {
        self.distance(x) <= tol
    }
}

impl<T: Scalar> Projectable<T> for ConvexSet<T> {
    fn ambient_dim(&self) -> usize {
        match self {
            Self::Halfspace { normal, .. } => normal.dim(),
            Self::Ball { center, .. } => center.dim(),
            Self::Box { lower, .. } => lower.dim(),
            Self::SubspaceSet(s) => s.ambient_dim(),
            Self::Affine { subspace, .. } => subspace.ambient_dim(),
        }
    }

    fn project(&self, x: &Vector<T>) -> Vector<T> {
        assert_eq!(x.dim(), self.ambient_dim(), "projection dimension mismatch");
        match self {
            Self::Halfspace { normal, offset } => {
                let excess = normal.dot(x) - *offset;
                if excess > T::zero() {
                    x.axpy(-excess / normal.norm_squared(), normal)
                } else {
                    x.clone()
                }
            }
            Self::Ball { center, radius } => {
                let r = x - center;
                let dist = r.norm();
                if dist <= *radius {
                    x.clone()
                } else {
                    center.axpy(*radius / dist, &r)
                }
            }
            Self::Box { lower, upper } => Vector::from_fn(x.dim(), |i| {
                let c = x[i];
                if c < lower[i] {
                    lower[i]
                } else if c > upper[i] {
                    upper[i]
                } else {
                    c
                }
            }),
            Self::SubspaceSet(s) => s.project(x),
            Self::Affine { subspace, anchor } => {
                anchor + &subspace.project(&(x - anchor))
            }
        }
    }

    fn is_subspace(&self) -> bool {
        matches!(self, Self::SubspaceSet(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn halfspace_clamps_one_coordinate() {
        let h = ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        assert_eq!(h.project(&v(&[1.0, 1.0])), v(&[0.0, 1.0]));
    }

    #[test]
    fn ball_radial_scaling() {
        let b = ConvexSet::ball(Vector::zeros(2), 1.0).unwrap();
        let p = b.project(&v(&[3.0, 4.0]));
        assert!((p[0] - 0.6).abs() <= 1e-14);
        assert!((p[1] - 0.8).abs() <= 1e-14);
        assert!((b.distance(&v(&[3.0, 4.0])) - 4.0).abs() <= 1e-14);
    }

    #[test]
    fn interior_point_is_fixed() {
        let sets = [
            ConvexSet::halfspace(v(&[0.0, 1.0]), 2.0).unwrap(),
            ConvexSet::ball(v(&[0.5, 0.5]), 3.0).unwrap(),
            ConvexSet::boxed(v(&[-1.0, -1.0]), v(&[1.0, 1.0])).unwrap(),
        ];
        let x = v(&[0.25, -0.5]);
        for s in &sets {
            assert_eq!(s.project(&x), x);
            assert_eq!(s.distance(&x), 0.0);
        }
    }

    #[test]
    fn box_componentwise_clamp() {
        let b = ConvexSet::boxed(v(&[-1.0, 0.0]), v(&[1.0, 2.0])).unwrap();
        assert_eq!(b.project(&v(&[5.0, -3.0])), v(&[1.0, 0.0]));
    }

    #[test]
    fn affine_projection_translates() {
        let s = Subspace::span(&[v(&[1.0, 0.0])]);
        let a = ConvexSet::affine(s, v(&[0.0, 2.0])).unwrap();
        assert_eq!(a.project(&v(&[3.0, 7.0])), v(&[3.0, 2.0]));
    }

    #[test]
    fn invalid_constructions_error() {
        assert!(ConvexSet::halfspace(Vector::<f64>::zeros(2), 1.0).is_err());
        assert!(ConvexSet::ball(Vector::<f64>::zeros(2), -1.0).is_err());
        assert!(ConvexSet::boxed(v(&[1.0]), v(&[0.0])).is_err());
    }

    #[test]
    fn distance_satisfies_subspace_example() {
        let s = Subspace::span(&[v(&[1.0, 0.0])]);
        assert!((s.distance(&v(&[3.0, 4.0])) - 4.0).abs() <= 1e-14);
    }

    #[test]
    fn firmly_nonexpansive_on_probe_pairs() {
        let mut rng = crate::random::rng_from_seed(17);
        let sets = [
            ConvexSet::halfspace(v(&[1.0, -2.0, 0.5]), 0.3).unwrap(),
            ConvexSet::ball(v(&[0.2, -0.1, 0.0]), 0.8).unwrap(),
            ConvexSet::boxed(v(&[-0.5, -0.5, -0.5]), v(&[0.5, 0.5, 0.5])).unwrap(),
            ConvexSet::SubspaceSet(Subspace::span(&[v(&[1.0, 1.0, 0.0])])),
            ConvexSet::affine(Subspace::span(&[v(&[0.0, 1.0, 1.0])]), v(&[1.0, 0.0, 0.0]))
                .unwrap(),
        ];
        for s in &sets {
            for _ in 0..50 {
                let x: Vector<f64> = crate::random::gaussian_vector(3, &mut rng);
                let y: Vector<f64> = crate::random::gaussian_vector(3, &mut rng);
                let px = s.project(&x);
                let py = s.project(&y);
                let lhs = (&px - &py).norm_squared();
                let rhs = (&px - &py).dot(&(&x - &y));
                assert!(lhs <= rhs + 1e-9, "firm nonexpansiveness violated");
            }
        }
    }
}
