use std::sync::Arc;

use super::vector::Vector;
use crate::error::{Error, Result};
use crate::random::{gaussian_vector, rng_from_seed};
use crate::scalar::Scalar;

/// A bounded linear operator given by its action and the action of its
/// adjoint. Compositions stay lazy: no matrices are materialized, so
/// structured problems keep their per-application cost.
pub trait LinearOp<T: Scalar>: Send + Sync {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn apply(&self, x: &Vector<T>) -> Vector<T>;
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T>;
}

impl<T: Scalar> LinearOp<T> for Arc<dyn LinearOp<T>> {
    fn domain_dim(&self) -> usize {
        (**self).domain_dim()
    }
    fn codomain_dim(&self) -> usize {
        (**self).codomain_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        (**self).apply_adjoint(y)
    }
}

/// Identity on `R^dim`.
#[derive(Debug, Clone)]
pub struct IdentityOp {
    pub dim: usize,
}

impl<T: Scalar> LinearOp<T> for IdentityOp {
    fn domain_dim(&self) -> usize {
        self.dim
    }
    fn codomain_dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        x.clone()
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        y.clone()
    }
}

/// Composition `ops[0] * ops[1] * ... * ops[n-1]`: the rightmost factor is
/// applied first, matching the written order of an operator product.
pub struct ComposedOp<T: Scalar> {
    ops: Vec<Arc<dyn LinearOp<T>>>,
}

/// Builds the composition, checking adjacent dimension compatibility.
pub fn compose<T: Scalar>(ops: Vec<Arc<dyn LinearOp<T>>>) -> Result<ComposedOp<T>> {
    if ops.is_empty() {
        return Err(Error::InvalidParameter(
            "compose needs at least one operator".into(),
        ));
    }
    for pair in ops.windows(2) {
        if pair[0].domain_dim() != pair[1].codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: pair[0].domain_dim(),
                got: pair[1].codomain_dim(),
            });
        }
    }
    Ok(ComposedOp { ops })
}

impl<T: Scalar> LinearOp<T> for ComposedOp<T> {
    fn domain_dim(&self) -> usize {
        self.ops.last().unwrap().domain_dim()
    }
    fn codomain_dim(&self) -> usize {
        self.ops.first().unwrap().codomain_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        let mut v = x.clone();
        for op in self.ops.iter().rev() {
            v = op.apply(&v);
        }
        v
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        let mut v = y.clone();
        for op in self.ops.iter() {
            v = op.apply_adjoint(&v);
        }
        v
    }
}

/// Difference `A - B` of two operators with matching shapes.
pub struct DiffOp<T: Scalar> {
    a: Arc<dyn LinearOp<T>>,
    b: Arc<dyn LinearOp<T>>,
}

impl<T: Scalar> DiffOp<T> {
    pub fn new(a: Arc<dyn LinearOp<T>>, b: Arc<dyn LinearOp<T>>) -> Result<Self> {
        if a.domain_dim() != b.domain_dim() || a.codomain_dim() != b.codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: a.domain_dim(),
                got: b.domain_dim(),
            });
        }
        Ok(Self { a, b })
    }
}

impl<T: Scalar> LinearOp<T> for DiffOp<T> {
    fn domain_dim(&self) -> usize {
        self.a.domain_dim()
    }
    fn codomain_dim(&self) -> usize {
        self.a.codomain_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        &self.a.apply(x) - &self.b.apply(x)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        &self.a.apply_adjoint(y) - &self.b.apply_adjoint(y)
    }
}

/// `A^k` for a square operator, by repeated application. `k = 0` is the identity.
pub struct PowerOp<T: Scalar> {
    op: Arc<dyn LinearOp<T>>,
    k: usize,
}

impl<T: Scalar> PowerOp<T> {
    pub fn new(op: Arc<dyn LinearOp<T>>, k: usize) -> Result<Self> {
        if op.domain_dim() != op.codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: op.domain_dim(),
                got: op.codomain_dim(),
            });
        }
        Ok(Self { op, k })
    }
}

impl<T: Scalar> LinearOp<T> for PowerOp<T> {
    fn domain_dim(&self) -> usize {
        self.op.domain_dim()
    }
    fn codomain_dim(&self) -> usize {
        self.op.codomain_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        let mut v = x.clone();
        for _ in 0..self.k {
            v = self.op.apply(&v);
        }
        v
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        let mut v = y.clone();
        for _ in 0..self.k {
            v = self.op.apply_adjoint(&v);
        }
        v
    }
}

/// `alpha * A`.
pub struct ScaledOp<T: Scalar> {
    pub op: Arc<dyn LinearOp<T>>,
    pub alpha: T,
}

impl<T: Scalar> LinearOp<T> for ScaledOp<T> {
    fn domain_dim(&self) -> usize {
        self.op.domain_dim()
    }
    fn codomain_dim(&self) -> usize {
        self.op.codomain_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        self.op.apply(x).scale(self.alpha)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        self.op.apply_adjoint(y).scale(self.alpha)
    }
}

/// Settings for the power-iteration norm estimator.
#[derive(Debug, Clone, Copy)]
pub struct PowerIterConfig {
    /// Relative change between successive Rayleigh quotients at termination.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerIterConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
            seed: 1,
        }
    }
}

/// Operator norm `sqrt(lambda_max(A* A))` by Krylov-accelerated power
/// iteration (Lanczos with full reorthogonalization) on `A* A`.
///
/// Iterating on `A* A` rather than `A` keeps the estimator valid for
/// non-symmetric compositions. Compositions like `I - T^k` carry whole
/// clusters of singular values at 1, where the plain power step contracts
/// at the cluster gap and stalls; the Krylov recurrence converges at the
/// square-root of that rate and is exact once the subspace is exhausted.
///
/// The start vector is a seeded Gaussian draw; a start annihilated by the
/// operator is retried once with a fresh seed, after which the norm is
/// reported as zero (two independent Gaussian kernel directions only
/// happen for the zero operator in practice). Termination follows the
/// relative change of successive top Ritz values against `config.tol`,
/// required on two consecutive steps.
pub fn operator_norm<T: Scalar>(op: &dyn LinearOp<T>, config: &PowerIterConfig) -> Result<T> {
    let dim = op.domain_dim();
    if dim == 0 {
        return Ok(T::zero());
    }
    let apply_gram = |v: &Vector<T>| op.apply_adjoint(&op.apply(v));
    for attempt in 0..2u64 {
        let mut rng = rng_from_seed(config.seed.wrapping_add(attempt));
        let Some(v0) = gaussian_vector::<T, _>(dim, &mut rng).normalized() else {
            continue;
        };
        if op.apply(&v0).norm_squared() == T::zero() {
            continue; // start annihilated; retry with a new seed
        }
        return lanczos_top_singular_value(op, &apply_gram, v0, config);
    }
    Ok(T::zero())
}

fn lanczos_top_singular_value<T: Scalar>(
    op: &dyn LinearOp<T>,
    apply_gram: &impl Fn(&Vector<T>) -> Vector<T>,
    v0: Vector<T>,
    config: &PowerIterConfig,
) -> Result<T> {
    let dim = op.domain_dim();
    let mut basis: Vec<Vector<T>> = vec![v0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut theta_prev = f64::NAN;
    let mut small_changes = 0usize;
    let max_steps = config.max_iter.min(dim + 2);
    for _ in 0..max_steps {
        let vj = basis.last().unwrap().clone();
        let mut w = apply_gram(&vj);
        let alpha = w.dot(&vj);
        alphas.push(alpha.to_f64().unwrap());
        w = w.axpy(-alpha, &vj);
        if let Some(prev) = basis.len().checked_sub(2).map(|i| &basis[i]) {
            w = w.axpy(-T::from_config(*betas.last().unwrap()), prev);
        }
        // Full reorthogonalization, twice.
        for _ in 0..2 {
            for q in &basis {
                let c = w.dot(q);
                w = w.axpy(-c, q);
            }
        }
        let theta = tridiagonal_top_eigenvalue(&alphas, &betas).max(0.0);
        if theta_prev.is_finite() {
            let change = (theta - theta_prev).abs();
            if change <= config.tol * theta.max(f64::MIN_POSITIVE) {
                small_changes += 1;
                if small_changes >= 2 {
                    return Ok(T::from_config(theta.sqrt()));
                }
            } else {
                small_changes = 0;
            }
        }
        theta_prev = theta;
        let beta = w.norm().to_f64().unwrap();
        // Breakdown: the Krylov space is invariant, so the Ritz value is
        // exact up to rounding.
        if beta <= 1e-14 * theta.max(1e-300) || basis.len() == dim {
            return Ok(T::from_config(theta.sqrt()));
        }
        betas.push(beta);
        basis.push(w.scale(T::one() / T::from_config(beta)));
    }
    let theta = tridiagonal_top_eigenvalue(&alphas, &betas).max(0.0);
    let residual = if theta_prev.is_finite() && theta > 0.0 {
        (theta - theta_prev).abs() / theta
    } else {
        f64::NAN
    };
    Err(Error::PowerIterationDiverged {
        estimate: theta.sqrt(),
        residual,
        iterations: max_steps,
    })
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alphas` and off-diagonal `betas`, by Sturm-count bisection.
fn tridiagonal_top_eigenvalue(alphas: &[f64], betas: &[f64]) -> f64 {
    let n = alphas.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return alphas[0];
    }
    // Gershgorin bracket.
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { betas[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { betas[i].abs() } else { 0.0 };
        lo = lo.max(alphas[i]);
        hi = hi.max(alphas[i] + left + right);
    }
    if hi <= lo {
        return lo;
    }
    // Count of eigenvalues strictly below x, via the LDL^T recurrence.
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut q = 1.0f64;
        for i in 0..n {
            let b2 = if i > 0 { betas[i - 1] * betas[i - 1] } else { 0.0 };
            q = (alphas[i] - x) - b2 / q;
            if q == 0.0 {
                q = -1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Subspace;

    fn line_through<T: Scalar>(coords: Vec<T>) -> Subspace<T> {
        Subspace::from_spanning(
            &[Vector::new(coords).unwrap()],
            T::from_config(super::super::basis::DEFAULT_RANK_TOL),
        )
    }

    #[test]
    fn projector_norm_is_one() {
        let p = line_through::<f64>(vec![1.0, 0.0]).into_linear_op();
        let norm = operator_norm(&p, &PowerIterConfig::default()).unwrap();
        assert!((norm - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn zero_operator_norm_is_zero() {
        let zero = Subspace::<f64>::zero(3).into_linear_op();
        let norm = operator_norm(&zero, &PowerIterConfig::default()).unwrap();
        assert_eq!(norm, 0.0);
    }

    #[test]
    fn sixty_degree_composition_norm() {
        // P2 P1 with M1 = span{e1}, M2 = span{(cos 60, sin 60)}: norm cos 60 = 0.5.
        let theta = std::f64::consts::FRAC_PI_3;
        let p1 = Arc::new(line_through(vec![1.0, 0.0]).into_linear_op());
        let p2 = Arc::new(line_through(vec![theta.cos(), theta.sin()]).into_linear_op());
        let t = compose::<f64>(vec![p2, p1]).unwrap();
        let norm = operator_norm(&t, &PowerIterConfig::default()).unwrap();
        assert!((norm - 0.5).abs() <= 1e-9, "norm = {norm}");
    }

    #[test]
    fn compose_singleton_acts_like_member() {
        let p = Arc::new(line_through::<f64>(vec![0.0, 1.0]).into_linear_op());
        let c = compose(vec![p.clone() as Arc<dyn LinearOp<f64>>]).unwrap();
        let x = Vector::new(vec![0.3, -0.8]).unwrap();
        assert_eq!(c.apply(&x), p.apply(&x));
    }

    #[test]
    fn compose_applies_right_to_left() {
        let theta = std::f64::consts::FRAC_PI_3;
        let p1 = Arc::new(line_through(vec![1.0, 0.0]).into_linear_op());
        let p2 = Arc::new(line_through(vec![theta.cos(), theta.sin()]).into_linear_op());
        let t = compose::<f64>(vec![p2, p1]).unwrap();
        let y = t.apply(&Vector::new(vec![1.0, 0.0]).unwrap());
        assert!((y[0] - 0.25).abs() <= 1e-14);
        assert!((y[1] - 3.0f64.sqrt() / 4.0).abs() <= 1e-14);
    }

    #[test]
    fn adjoint_of_composition_reverses_order() {
        let theta = std::f64::consts::FRAC_PI_3;
        let p1 = Arc::new(line_through(vec![1.0, 0.0]).into_linear_op());
        let p2 = Arc::new(line_through(vec![theta.cos(), theta.sin()]).into_linear_op());
        let fwd = compose::<f64>(vec![p2.clone(), p1.clone()]).unwrap();
        let rev = compose::<f64>(vec![p1, p2]).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..10 {
            let x: Vector<f64> = gaussian_vector(2, &mut rng);
            assert!(fwd.apply_adjoint(&x).distance_to(&rev.apply(&x)) <= 1e-10);
        }
    }

    #[test]
    fn compose_dimension_mismatch_errors() {
        let a = Arc::new(IdentityOp { dim: 2 }) as Arc<dyn LinearOp<f64>>;
        let b = Arc::new(IdentityOp { dim: 3 }) as Arc<dyn LinearOp<f64>>;
        assert!(compose(vec![a, b]).is_err());
    }

    #[test]
    fn norm_equals_adjoint_norm() {
        let theta: f64 = 0.7;
        let p1 = Arc::new(line_through(vec![1.0, 0.0, 0.0]).into_linear_op());
        let p2 = Arc::new(line_through(vec![theta.cos(), theta.sin(), 0.2]).into_linear_op());
        let t = Arc::new(compose::<f64>(vec![p2, p1]).unwrap());
        struct AdjointOf<T: Scalar>(Arc<dyn LinearOp<T>>);
        impl<T: Scalar> LinearOp<T> for AdjointOf<T> {
            fn domain_dim(&self) -> usize {
                self.0.codomain_dim()
            }
            fn codomain_dim(&self) -> usize {
                self.0.domain_dim()
            }
            fn apply(&self, x: &Vector<T>) -> Vector<T> {
                self.0.apply_adjoint(x)
            }
            fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
                self.0.apply(y)
            }
        }
        let cfg = PowerIterConfig::default();
        let n1 = operator_norm(&(t.clone() as Arc<dyn LinearOp<f64>>), &cfg).unwrap();
        let n2 = operator_norm(&AdjointOf(t), &cfg).unwrap();
        assert!((n1 - n2).abs() <= 1e-8);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let p = line_through::<f64>(vec![3.0, 4.0]).into_linear_op();
        let cfg = PowerIterConfig {
            max_iter: 1,
            ..Default::default()
        };
        match operator_norm(&p, &cfg) {
            Err(Error::PowerIterationDiverged { estimate, .. }) => {
                assert!(estimate.is_finite());
            }
            other => panic!("expected divergence error, got {other:?}"),
        }
    }
}
