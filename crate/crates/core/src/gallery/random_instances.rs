use std::sync::Arc;

use rand::Rng;

use crate::cyclic::CyclicOperator;
use crate::error::{Error, Result};
use crate::linalg::{Vector, DEFAULT_RANK_TOL};
use crate::product::ProductSpace;
use crate::random::{gaussian_vector, rng_from_seed, standard_normal};
use crate::scalar::Scalar;
use crate::sets::{intersect, ConvexSet, Projectable, Subspace};

/// Seeded random subspace instance: the subspaces, their complements and
/// the intersection, all basis-backed.
pub struct RandomSubspaceBundle<T: Scalar> {
    pub subspaces: Vec<Arc<Subspace<T>>>,
    pub complements: Vec<Arc<Subspace<T>>>,
    pub intersection: Arc<Subspace<T>>,
    pub ambient_dim: usize,
    pub seed: u64,
}

impl<T: Scalar> RandomSubspaceBundle<T> {
    pub fn sets(&self) -> Vec<Arc<dyn Projectable<T>>> {
        self.subspaces
            .iter()
            .map(|s| s.clone() as Arc<dyn Projectable<T>>)
            .collect()
    }

    pub fn complement_sets(&self) -> Vec<Arc<dyn Projectable<T>>> {
        self.complements
            .iter()
            .map(|s| s.clone() as Arc<dyn Projectable<T>>)
            .collect()
    }

    pub fn operator(&self) -> CyclicOperator<T> {
        CyclicOperator::new(self.sets()).expect("bundle sets are consistent")
    }

    pub fn product_space(&self) -> ProductSpace<T> {
        ProductSpace::new(
            self.sets(),
            self.complement_sets(),
            self.intersection.clone(),
        )
        .expect("bundle lifts to the product space")
    }
}

/// Draws `dims[i]`-dimensional subspaces of `R^d` from Gaussian spanning
/// sets, orthonormalized. Deterministic per seed. A spanning set that
/// collapses below its requested dimension is an error.
pub fn make_random_subspaces<T: Scalar>(
    d: usize,
    dims: &[usize],
    seed: u64,
) -> Result<RandomSubspaceBundle<T>> {
    if dims.is_empty() {
        return Err(Error::InvalidParameter("need at least one subspace".into()));
    }
    for &dim in dims {
        if dim > d {
            return Err(Error::InvalidParameter(format!(
                "subspace dimension {dim} exceeds ambient dimension {d}"
            )));
        }
    }
    let mut rng = rng_from_seed(seed);
    let mut subspaces = Vec::with_capacity(dims.len());
    for &dim in dims {
        if dim == 0 {
            subspaces.push(Arc::new(Subspace::zero(d)));
            continue;
        }
        let spanning: Vec<Vector<T>> = (0..dim).map(|_| gaussian_vector(d, &mut rng)).collect();
        let s = Subspace::from_spanning(&spanning, T::from_config(DEFAULT_RANK_TOL));
        if s.dim() < dim {
            return Err(Error::RankCollapse {
                requested: dim,
                achieved: s.dim(),
            });
        }
        subspaces.push(Arc::new(s));
    }
    let complements: Vec<Arc<Subspace<T>>> = subspaces
        .iter()
        .map(|s| Arc::new(s.complement()))
        .collect();
    let intersection = Arc::new(intersect(&subspaces)?);
    Ok(RandomSubspaceBundle {
        subspaces,
        complements,
        intersection,
        ambient_dim: d,
        seed,
    })
}

/// Seeded random convex instance. Every set contains the origin, so the
/// zero vector is a certified intersection witness.
pub struct RandomConvexBundle<T: Scalar> {
    pub sets: Vec<Arc<ConvexSet<T>>>,
    pub witness: Vector<T>,
    pub ambient_dim: usize,
    pub seed: u64,
}

impl<T: Scalar> RandomConvexBundle<T> {
    pub fn projectable_sets(&self) -> Vec<Arc<dyn Projectable<T>>> {
        self.sets
            .iter()
            .map(|s| s.clone() as Arc<dyn Projectable<T>>)
            .collect()
    }

    pub fn operator(&self) -> CyclicOperator<T> {
        CyclicOperator::new(self.projectable_sets()).expect("bundle sets are consistent")
    }
}

/// Mixes halfspaces, balls and boxes, each constructed around the origin.
pub fn make_random_convex<T: Scalar>(d: usize, m: usize, seed: u64) -> Result<RandomConvexBundle<T>> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "convex instances need d >= 1 and m >= 1".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let margin = T::from_config(0.1);
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let kind = rng.random_range(0..3u32);
        let set = match kind {
            0 => {
                let normal: Vector<T> = gaussian_vector(d, &mut rng);
                let offset = margin + standard_normal::<T, _>(&mut rng).abs();
                ConvexSet::halfspace(normal, offset)?
            }
            1 => {
                let center: Vector<T> = gaussian_vector(d, &mut rng);
                let radius = center.norm() + margin + standard_normal::<T, _>(&mut rng).abs();
                ConvexSet::ball(center, radius)?
            }
            _ => {
                let lower = Vector::from_fn(d, |_| {
                    -(margin + standard_normal::<T, _>(&mut rng).abs())
                });
                let upper =
                    Vector::from_fn(d, |_| margin + standard_normal::<T, _>(&mut rng).abs());
                ConvexSet::boxed(lower, upper)?
            }
        };
        sets.push(Arc::new(set));
    }
    Ok(RandomConvexBundle {
        sets,
        witness: Vector::zeros(d),
        ambient_dim: d,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_bundle_is_reproducible() {
        let a = make_random_subspaces::<f64>(8, &[3, 3, 3], 7).unwrap();
        let b = make_random_subspaces::<f64>(8, &[3, 3, 3], 7).unwrap();
        for (s, t) in a.subspaces.iter().zip(&b.subspaces) {
            for (u, v) in s.basis().vectors().iter().zip(t.basis().vectors()) {
                assert_eq!(u, v);
            }
        }
        let c = make_random_subspaces::<f64>(8, &[3, 3, 3], 8).unwrap();
        assert_ne!(
            a.subspaces[0].basis().vectors()[0],
            c.subspaces[0].basis().vectors()[0]
        );
    }

    #[test]
    fn zero_dimension_member_allowed() {
        let bundle = make_random_subspaces::<f64>(5, &[0, 2], 3).unwrap();
        assert_eq!(bundle.subspaces[0].dim(), 0);
        assert_eq!(bundle.complements[0].dim(), 5);
    }

    #[test]
    fn full_space_members_reduce_t() {
        let bundle = make_random_subspaces::<f64>(4, &[4, 2], 11).unwrap();
        assert_eq!(bundle.subspaces[0].dim(), 4);
        let op = bundle.operator();
        let mut rng = rng_from_seed(12);
        for _ in 0..5 {
            let x: Vector<f64> = gaussian_vector(4, &mut rng);
            // Full-space projector is the identity, so T = P2.
            let lhs = op.apply(&x).unwrap();
            let rhs = bundle.subspaces[1].project(&x);
            assert!(lhs.distance_to(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn oversized_dimension_errors() {
        assert!(make_random_subspaces::<f64>(4, &[5], 1).is_err());
    }

    #[test]
    fn convex_bundle_contains_origin() {
        for seed in [1u64, 2, 3] {
            let bundle = make_random_convex::<f64>(10, 5, seed).unwrap();
            for set in &bundle.sets {
                assert!(set.contains(&bundle.witness, 1e-12));
            }
        }
    }

    #[test]
    fn convex_bundle_is_reproducible() {
        let a = make_random_convex::<f64>(10, 5, 3).unwrap();
        let b = make_random_convex::<f64>(10, 5, 3).unwrap();
        let mut rng = rng_from_seed(4);
        for _ in 0..10 {
            let x: Vector<f64> = gaussian_vector(10, &mut rng);
            for (s, t) in a.sets.iter().zip(&b.sets) {
                assert_eq!(s.project(&x), t.project(&x));
            }
        }
    }

    #[test]
    fn single_ball_converges_in_one_step() {
        let bundle = RandomConvexBundle {
            sets: vec![Arc::new(
                ConvexSet::ball(Vector::<f64>::zeros(2), 1.0).unwrap(),
            )],
            witness: Vector::zeros(2),
            ambient_dim: 2,
            seed: 0,
        };
        let op = bundle.operator();
        let y0 = Vector::new(vec![3.0, 4.0]).unwrap();
        let y1 = op.apply(&y0).unwrap();
        assert!(bundle.sets[0].contains(&y1, 1e-12));
        // Further sweeps are stationary.
        assert!(op.apply(&y1).unwrap().distance_to(&y1) <= 1e-15);
    }
}
