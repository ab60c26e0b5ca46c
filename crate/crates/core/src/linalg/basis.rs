use super::vector::Vector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rank tolerance for dropping dependent vectors during orthonormalization.
/// Chosen so that downstream inequality checks stay meaningful at 1e-7 slack.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// An ordered orthonormal set of vectors in a common ambient space.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis<T> {
    vectors: Vec<Vector<T>>,
    ambient_dim: usize,
}

impl<T: Scalar> OrthonormalBasis<T> {
    /// Empty basis (zero subspace) of the given ambient space.
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            vectors: Vec::new(),
            ambient_dim,
        }
    }

    /// Wraps vectors that are already orthonormal; validated to 1e-10.
    pub fn from_orthonormal(vectors: Vec<Vector<T>>, ambient_dim: usize) -> Result<Self> {
        let basis = Self {
            vectors,
            ambient_dim,
        };
        for v in &basis.vectors {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.dim(),
                });
            }
        }
        let residual = basis.orthonormality_residual();
        if residual > T::from_config(1e-10) {
            return Err(Error::InvalidParameter(format!(
                "input is not orthonormal: max |<q_i,q_j> - delta_ij| = {residual}"
            )));
        }
        Ok(basis)
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    /// Orthogonal projection `sum_j <x,q_j> q_j`.
    pub fn project(&self, x: &Vector<T>) -> Vector<T> {
        assert_eq!(x.dim(), self.ambient_dim, "projection dimension mismatch");
        let mut out = Vector::zeros(self.ambient_dim);
        for q in &self.vectors {
            out = out.axpy(x.dot(q), q);
        }
        out
    }

    /// Coefficients of `x` against the basis.
    pub fn coefficients(&self, x: &Vector<T>) -> Vec<T> {
        assert_eq!(x.dim(), self.ambient_dim);
        self.vectors.iter().map(|q| x.dot(q)).collect()
    }

    /// Linear combination `sum_j c_j q_j`.
    pub fn synthesize(&self, coeffs: &[T]) -> Vector<T> {
        assert_eq!(coeffs.len(), self.count());
        let mut out = Vector::zeros(self.ambient_dim);
        for (q, &c) in self.vectors.iter().zip(coeffs) {
            out = out.axpy(c, q);
        }
        out
    }

    /// `max_ij |<q_i,q_j> - delta_ij|`, the Gram residual against identity.
    pub fn orthonormality_residual(&self) -> T {
        let mut worst = T::zero();
        for (i, qi) in self.vectors.iter().enumerate() {
            for (j, qj) in self.vectors.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                let dev = (qi.dot(qj) - target).abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual after projection onto the running basis has norm
/// `<= rank_tol` are dropped, so the output is an orthonormal basis of the
/// span of the input. An empty input yields the empty basis of a
/// zero-dimensional space (the ambient dimension cannot be inferred).
pub fn mgs_orthonormalize<T: Scalar>(spanning: &[Vector<T>], rank_tol: T) -> OrthonormalBasis<T> {
    assert!(rank_tol > T::zero(), "rank_tol must be positive");
    let Some(first) = spanning.first() else {
        return OrthonormalBasis::empty(0);
    };
    let ambient_dim = first.dim();
    let mut basis: Vec<Vector<T>> = Vec::new();
    for v in spanning {
        assert_eq!(v.dim(), ambient_dim, "spanning vectors must share dimension");
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = r.dot(q);
                r = r.axpy(-c, q);
            }
        }
        let norm = r.norm();
        if norm > rank_tol {
            basis.push(r.scale(T::one() / norm));
        }
    }
    OrthonormalBasis {
        vectors: basis,
        ambient_dim,
    }
}
