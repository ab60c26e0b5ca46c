//! The cyclic operator `T = P_m ... P_1`, trajectory generation, partial
//! products, starting-point generators and the complexified action.

mod complex;
mod starts;
mod trajectory;

pub use complex::{complex_apply_t, complex_inner, ComplexVector};
pub use starts::{gen_start_in_xp, gen_start_in_y, CertificateCheck, StartCertificate};
pub use trajectory::{run_trajectory, Trajectory};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{LinearOp, Vector};
use crate::scalar::Scalar;
use crate::sets::Projectable;

/// One full sweep of projections in fixed order: `T(x) = P_m ... P_1 (x)`.
///
/// All sets share an ambient dimension. When every set is a linear subspace
/// the operator is linear with adjoint `P_1 ... P_m`; otherwise it is the
/// nonexpansive cyclic product over convex sets.
#[derive(Clone)]
pub struct CyclicOperator<T: Scalar> {
    sets: Vec<Arc<dyn Projectable<T>>>,
    ambient_dim: usize,
    subspace_mode: bool,
}

impl<T: Scalar> CyclicOperator<T> {
    pub fn new(sets: Vec<Arc<dyn Projectable<T>>>) -> Result<Self> {
        let first = sets
            .first()
            .ok_or_else(|| Error::InvalidParameter("cyclic operator needs m >= 1 sets".into()))?;
        let ambient_dim = first.ambient_dim();
        for s in &sets {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: s.ambient_dim(),
                });
            }
        }
        let subspace_mode = sets.iter().all(|s| s.is_subspace());
        Ok(Self {
            sets,
            ambient_dim,
            subspace_mode,
        })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// True when every set is a linear subspace.
    pub fn subspace_mode(&self) -> bool {
        self.subspace_mode
    }

    pub fn sets(&self) -> &[Arc<dyn Projectable<T>>] {
        &self.sets
    }

    /// `T(x)`, dimension-checked.
    pub fn apply(&self, x: &Vector<T>) -> Result<Vector<T>> {
        self.check_dim(x)?;
        Ok(self.sweep(x))
    }

    pub(crate) fn sweep(&self, x: &Vector<T>) -> Vector<T> {
        let mut v = x.clone();
        for set in &self.sets {
            v = set.project(&v);
        }
        v
    }

    fn check_dim(&self, x: &Vector<T>) -> Result<()> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// Partial products `[Q_0 x, Q_1 x, ..., Q_m x]` with `Q_0 = I` and
    /// `Q_i = P_i ... P_1`, so the last entry equals `T(x)`.
    pub fn partial_products(&self, x: &Vector<T>) -> Result<Vec<Vector<T>>> {
        self.check_dim(x)?;
        let mut stages = Vec::with_capacity(self.m() + 1);
        stages.push(x.clone());
        let mut v = x.clone();
        for set in &self.sets {
            v = set.project(&v);
            stages.push(v.clone());
        }
        Ok(stages)
    }

    /// Residual of the decomposition `I - T = sum_i P_{M_i^perp} Q_{i-1}`,
    /// evaluated at `x`.
    ///
    /// When explicit complement projectors are supplied the right-hand side
    /// goes through them, giving an independent evaluation route; otherwise
    /// each complement acts as `I - P_i`.
    pub fn residual_decomposition(
        &self,
        x: &Vector<T>,
        complements: Option<&[Arc<dyn Projectable<T>>]>,
    ) -> Result<T> {
        if !self.subspace_mode {
            return Err(Error::InvalidParameter(
                "decomposition residual requires subspace mode".into(),
            ));
        }
        if let Some(comps) = complements {
            if comps.len() != self.m() {
                return Err(Error::InvalidParameter(format!(
                    "expected {} complement projectors, got {}",
                    self.m(),
                    comps.len()
                )));
            }
        }
        let stages = self.partial_products(x)?;
        let lhs = x - stages.last().unwrap();
        let mut rhs = Vector::zeros(self.ambient_dim);
        for (i, set) in self.sets.iter().enumerate() {
            let term = match complements {
                Some(comps) => comps[i].project(&stages[i]),
                None => &stages[i] - &set.project(&stages[i]),
            };
            rhs = &rhs + &term;
        }
        Ok(lhs.distance_to(&rhs))
    }

    /// The reordered operator `T_sigma = P_{sigma(m)} ... P_{sigma(1)}`,
    /// where `sigma` is a zero-based permutation of the set indices. In
    /// subspace mode, reversal yields the adjoint of `T`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        let m = self.m();
        if sigma.len() != m {
            return Err(Error::InvalidPermutation { m });
        }
        let mut seen = vec![false; m];
        for &i in sigma {
            if i >= m || seen[i] {
                return Err(Error::InvalidPermutation { m });
            }
            seen[i] = true;
        }
        Ok(Self {
            sets: sigma.iter().map(|&i| self.sets[i].clone()).collect(),
            ambient_dim: self.ambient_dim,
            subspace_mode: self.subspace_mode,
        })
    }

    /// `T` as a linear operator; requires subspace mode.
    pub fn linear_op(&self) -> Result<CyclicOp<T>> {
        if !self.subspace_mode {
            return Err(Error::InvalidParameter(
                "linear operator view requires subspace mode".into(),
            ));
        }
        Ok(CyclicOp {
            sets: self.sets.clone(),
            ambient_dim: self.ambient_dim,
        })
    }
}

/// Linear-operator view of a subspace-mode cyclic product. The adjoint is
/// the reversed sweep, since each factor is self-adjoint.
pub struct CyclicOp<T: Scalar> {
    sets: Vec<Arc<dyn Projectable<T>>>,
    ambient_dim: usize,
}

impl<T: Scalar> LinearOp<T> for CyclicOp<T> {
    fn domain_dim(&self) -> usize {
        self.ambient_dim
    }
    fn codomain_dim(&self) -> usize {
        self.ambient_dim
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        let mut v = x.clone();
        for set in &self.sets {
            v = set.project(&v);
        }
        v
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        let mut v = y.clone();
        for set in self.sets.iter().rev() {
            v = set.project(&v);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_vector, rng_from_seed};
    use crate::sets::{ConvexSet, Subspace};

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn sixty_degree_operator() -> CyclicOperator<f64> {
        let theta = std::f64::consts::FRAC_PI_3;
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let m2 = Subspace::span(&[v(&[theta.cos(), theta.sin()])]);
        CyclicOperator::new(vec![Arc::new(m1), Arc::new(m2)]).unwrap()
    }

    #[test]
    fn sixty_degree_sweep() {
        let op = sixty_degree_operator();
        let y = op.apply(&v(&[1.0, 0.0])).unwrap();
        assert!((y[0] - 0.25).abs() <= 1e-14);
        assert!((y[1] - 3.0f64.sqrt() / 4.0).abs() <= 1e-14);
    }

    #[test]
    fn intersection_point_is_fixed() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]);
        let m2 = Subspace::span(&[v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])]);
        let op = CyclicOperator::new(vec![Arc::new(m1), Arc::new(m2)]).unwrap();
        let x = v(&[0.0, 2.5, 0.0]);
        assert!(op.apply(&x).unwrap().distance_to(&x) <= 1e-10);
    }

    #[test]
    fn single_set_is_plain_projection() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let op = CyclicOperator::new(vec![Arc::new(m1.clone())]).unwrap();
        let x = v(&[0.7, -0.3]);
        assert_eq!(op.apply(&x).unwrap(), m1.project(&x));
        assert_eq!(op.partial_products(&x).unwrap().len(), 2);
    }

    #[test]
    fn nonexpansive_on_probe_pairs() {
        let op = sixty_degree_operator();
        let mut rng = rng_from_seed(23);
        for _ in 0..30 {
            let x: Vector<f64> = gaussian_vector(2, &mut rng);
            let y: Vector<f64> = gaussian_vector(2, &mut rng);
            let dx = op.apply(&x).unwrap().distance_to(&op.apply(&y).unwrap());
            assert!(dx <= x.distance_to(&y) + 1e-14);
        }
    }

    #[test]
    fn partial_products_stage_by_stage() {
        let op = sixty_degree_operator();
        let stages = op.partial_products(&v(&[1.0, 0.0])).unwrap();
        assert_eq!(stages.len(), 3);
        assert_eq!(stages[0], v(&[1.0, 0.0]));
        assert_eq!(stages[1], v(&[1.0, 0.0]));
        assert!((stages[2][0] - 0.25).abs() <= 1e-14);
        assert!((stages[2][1] - 3.0f64.sqrt() / 4.0).abs() <= 1e-14);
    }

    #[test]
    fn decomposition_residual_single_set() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let comp = Arc::new(m1.complement()) as Arc<dyn Projectable<f64>>;
        let op = CyclicOperator::new(vec![Arc::new(m1)]).unwrap();
        let x = v(&[0.4, -1.1]);
        let r = op.residual_decomposition(&x, Some(&[comp])).unwrap();
        assert!(r <= 1e-12, "residual {r}");
    }

    #[test]
    fn decomposition_residual_random_three_sets() {
        let mut rng = rng_from_seed(31);
        let d = 6;
        let subspaces: Vec<Subspace<f64>> = (0..3)
            .map(|_| {
                let spanning: Vec<Vector<f64>> =
                    (0..2).map(|_| gaussian_vector(d, &mut rng)).collect();
                Subspace::span(&spanning)
            })
            .collect();
        let comps: Vec<Arc<dyn Projectable<f64>>> = subspaces
            .iter()
            .map(|s| Arc::new(s.complement()) as Arc<dyn Projectable<f64>>)
            .collect();
        let op = CyclicOperator::new(
            subspaces
                .into_iter()
                .map(|s| Arc::new(s) as Arc<dyn Projectable<f64>>)
                .collect(),
        )
        .unwrap();
        for _ in 0..10 {
            let x: Vector<f64> = gaussian_vector(d, &mut rng);
            let r = op.residual_decomposition(&x, Some(&comps)).unwrap();
            assert!(r <= 1e-10, "residual {r}");
        }
    }

    #[test]
    fn permutation_identity_keeps_behaviour() {
        let op = sixty_degree_operator();
        let same = op.permuted(&[0, 1]).unwrap();
        let x = v(&[0.3, 0.9]);
        assert_eq!(op.apply(&x).unwrap(), same.apply(&x).unwrap());
    }

    #[test]
    fn reversal_is_adjoint_in_subspace_mode() {
        let mut rng = rng_from_seed(37);
        let d = 5;
        let subspaces: Vec<Arc<dyn Projectable<f64>>> = (0..3)
            .map(|_| {
                let spanning: Vec<Vector<f64>> =
                    (0..2).map(|_| gaussian_vector(d, &mut rng)).collect();
                Arc::new(Subspace::span(&spanning)) as Arc<dyn Projectable<f64>>
            })
            .collect();
        let op = CyclicOperator::new(subspaces).unwrap();
        let rev = op.permuted(&[2, 1, 0]).unwrap();
        for _ in 0..20 {
            let x: Vector<f64> = gaussian_vector(d, &mut rng);
            let y: Vector<f64> = gaussian_vector(d, &mut rng);
            let lhs = crate::linalg::inner(&rev.apply(&x).unwrap(), &y).unwrap();
            let rhs = crate::linalg::inner(&x, &op.apply(&y).unwrap()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10);
        }
    }

    #[test]
    fn invalid_permutations_error() {
        let op = sixty_degree_operator();
        assert!(matches!(
            op.permuted(&[0, 0]),
            Err(Error::InvalidPermutation { m: 2 })
        ));
        assert!(op.permuted(&[0]).is_err());
        assert!(op.permuted(&[0, 2]).is_err());
    }

    #[test]
    fn single_set_permutation_unchanged() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let op = CyclicOperator::new(vec![Arc::new(m1)]).unwrap();
        let x = v(&[0.2, 0.4]);
        assert_eq!(
            op.permuted(&[0]).unwrap().apply(&x).unwrap(),
            op.apply(&x).unwrap()
        );
    }

    #[test]
    fn convex_mode_rejects_linear_view() {
        let h = ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        let op = CyclicOperator::new(vec![Arc::new(h) as Arc<dyn Projectable<f64>>]).unwrap();
        assert!(!op.subspace_mode());
        assert!(op.linear_op().is_err());
    }

    #[test]
    fn dimension_mismatch_on_apply() {
        let op = sixty_degree_operator();
        assert!(op.apply(&v(&[1.0, 0.0, 0.0])).is_err());
    }
}
