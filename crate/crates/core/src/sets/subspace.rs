use std::borrow::Borrow;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::Projectable;
use crate::error::{Error, Result};
use crate::linalg::{mgs_orthonormalize, LinearOp, OrthonormalBasis, Vector, DEFAULT_RANK_TOL};
use crate::scalar::Scalar;

/// Eigenvalue threshold below one that still counts as the fixed space of
/// the averaged projector.
const INTERSECT_EIGEN_TOL: f64 = 1e-8;

/// A closed linear subspace represented by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace<T> {
    basis: OrthonormalBasis<T>,
}

impl<T: Scalar> Subspace<T> {
    /// Subspace spanned by the given vectors; dependent directions are
    /// dropped at `rank_tol`.
    pub fn from_spanning(spanning: &[Vector<T>], rank_tol: T) -> Self {
        Self {
            basis: mgs_orthonormalize(spanning, rank_tol),
        }
    }

    /// Span with the default rank tolerance.
    pub fn span(spanning: &[Vector<T>]) -> Self {
        Self::from_spanning(spanning, T::from_config(DEFAULT_RANK_TOL))
    }

    pub fn from_basis(basis: OrthonormalBasis<T>) -> Self {
        Self { basis }
    }

    /// Validates orthonormality of the provided vectors.
    pub fn from_orthonormal(vectors: Vec<Vector<T>>, ambient_dim: usize) -> Result<Self> {
        Ok(Self {
            basis: OrthonormalBasis::from_orthonormal(vectors, ambient_dim)?,
        })
    }

    /// The zero subspace `{0}`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: OrthonormalBasis::empty(ambient_dim),
        }
    }

    /// The full ambient space.
    pub fn full(ambient_dim: usize) -> Self {
        let vectors = (0..ambient_dim).map(|i| Vector::unit(ambient_dim, i)).collect();
        Self {
            basis: OrthonormalBasis::from_orthonormal(vectors, ambient_dim)
                .expect("canonical basis is orthonormal"),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.count()
    }

    pub fn basis(&self) -> &OrthonormalBasis<T> {
        &self.basis
    }

    /// Dimension-checked projection (the inherent entry point; the
    /// [`Projectable`] impl asserts instead).
    pub fn try_project(&self, x: &Vector<T>) -> Result<Vector<T>> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.dim(),
            });
        }
        Ok(self.basis.project(x))
    }

    /// Orthogonal complement, built by extending the basis with canonical
    /// directions so that `dim(S) + dim(S^perp) = ambient_dim` exactly.
    pub fn complement(&self) -> Self {
        let d = self.ambient_dim();
        let mut extended: Vec<Vector<T>> = self.basis.vectors().to_vec();
        for i in 0..d {
            extended.push(Vector::unit(d, i));
        }
        let full = mgs_orthonormalize(&extended, T::from_config(DEFAULT_RANK_TOL));
        let vectors = full.vectors()[self.dim()..].to_vec();
        Self {
            basis: OrthonormalBasis::from_orthonormal(vectors, d)
                .expect("extension of an orthonormal basis stays orthonormal"),
        }
    }

    /// Membership test at tolerance `tol` on the projection residual.
    pub fn contains(&self, x: &Vector<T>, tol: T) -> bool {
        self.distance(x) <= tol
    }

    /// The projector as a linear operator.
    pub fn into_linear_op(self) -> ProjectorOp<T> {
        ProjectorOp {
            set: Arc::new(self),
        }
    }
}

impl<T: Scalar> Projectable<T> for Subspace<T> {
    fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    fn project(&self, x: &Vector<T>) -> Vector<T> {
        assert_eq!(
            x.dim(),
            self.ambient_dim(),
            "projection dimension mismatch"
        );
        self.basis.project(x)
    }

    fn is_subspace(&self) -> bool {
        true
    }
}

/// Orthogonal projector onto a linear set, as a (self-adjoint) linear operator.
pub struct ProjectorOp<T: Scalar> {
    set: Arc<dyn Projectable<T>>,
}

impl<T: Scalar> ProjectorOp<T> {
    pub fn new(set: Arc<dyn Projectable<T>>) -> Result<Self> {
        if !set.is_subspace() {
            return Err(Error::InvalidParameter(
                "projector operator requires a linear subspace".into(),
            ));
        }
        Ok(Self { set })
    }
}

impl<T: Scalar> LinearOp<T> for ProjectorOp<T> {
    fn domain_dim(&self) -> usize {
        self.set.ambient_dim()
    }
    fn codomain_dim(&self) -> usize {
        self.set.ambient_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        self.set.project(x)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        self.set.project(y)
    }
}

/// `I - P`, the projector onto the orthogonal complement, evaluated without
/// forming a complement basis.
pub struct ComplementOp<T: Scalar> {
    set: Arc<dyn Projectable<T>>,
}

impl<T: Scalar> ComplementOp<T> {
    pub fn new(set: Arc<dyn Projectable<T>>) -> Result<Self> {
        if !set.is_subspace() {
            return Err(Error::InvalidParameter(
                "complement operator requires a linear subspace".into(),
            ));
        }
        Ok(Self { set })
    }
}

impl<T: Scalar> LinearOp<T> for ComplementOp<T> {
    fn domain_dim(&self) -> usize {
        self.set.ambient_dim()
    }
    fn codomain_dim(&self) -> usize {
        self.set.ambient_dim()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        x - &self.set.project(x)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        y - &self.set.project(y)
    }
}

/// Intersection of subspaces, computed as the eigenspace of the averaged
/// projector `A = (1/m) sum_i P_i` for eigenvalues `>= 1 - 1e-8`
/// (`x` lies in the intersection iff `A x = x`). Robust near parallel
/// subspaces, where iterating the cyclic product itself would be slow.
pub fn intersect<T: Scalar, S: Borrow<Subspace<T>>>(subspaces: &[S]) -> Result<Subspace<T>> {
    let first: &Subspace<T> = subspaces
        .first()
        .ok_or_else(|| Error::InvalidParameter("intersect needs at least one subspace".into()))?
        .borrow();
    let d = first.ambient_dim();
    for s in subspaces {
        if s.borrow().ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: s.borrow().ambient_dim(),
            });
        }
    }
    let m = subspaces.len() as f64;
    // Dense averaged projector, assembled column by column in f64.
    let mut avg = DMatrix::<f64>::zeros(d, d);
    for s in subspaces {
        for j in 0..d {
            let col = s.borrow().project(&Vector::unit(d, j));
            for i in 0..d {
                avg[(i, j)] += col[i].to_f64().unwrap() / m;
            }
        }
    }
    let eigen = nalgebra::SymmetricEigen::try_new(avg, 1e-13, 10_000)
        .ok_or(Error::EigenNonConvergence)?;
    let mut members: Vec<Vector<T>> = Vec::new();
    for (j, &lambda) in eigen.eigenvalues.iter().enumerate() {
        if lambda >= 1.0 - INTERSECT_EIGEN_TOL {
            let col = eigen.eigenvectors.column(j);
            members.push(Vector::from_fn(d, |i| T::from_config(col[i])));
        }
    }
    let basis = mgs_orthonormalize(&members, T::from_config(DEFAULT_RANK_TOL));
    let result = if members.is_empty() {
        Subspace::zero(d)
    } else {
        Subspace::from_basis(basis)
    };
    // Postcondition: every basis vector is fixed by every projector.
    let tol = T::from_config(1e-7);
    for v in result.basis.vectors() {
        for s in subspaces {
            if (&s.borrow().project(v) - v).norm() > tol {
                return Err(Error::EigenNonConvergence);
            }
        }
    }
    Ok(result)
}

/// Cosine of the Friedrichs angle between two subspaces.
///
/// Both subspaces are deflated by their intersection `M`; the value is the
/// largest singular value of the cross-Gram matrix of the deflated bases,
/// clamped to `[0, 1]`. When either deflated part is trivial the supremum
/// runs over the empty set and the convention here is `0`.
pub fn friedrichs_cosine<T: Scalar>(m1: &Subspace<T>, m2: &Subspace<T>) -> Result<T> {
    if m1.ambient_dim() != m2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: m1.ambient_dim(),
            got: m2.ambient_dim(),
        });
    }
    let meet = intersect(&[m1, m2])?;
    let deflate = |s: &Subspace<T>| -> OrthonormalBasis<T> {
        let residuals: Vec<Vector<T>> = s
            .basis
            .vectors()
            .iter()
            .map(|q| q - &meet.project(q))
            .collect();
        mgs_orthonormalize(&residuals, T::from_config(DEFAULT_RANK_TOL))
    };
    let q1 = deflate(m1);
    let q2 = deflate(m2);
    if q1.count() == 0 || q2.count() == 0 {
        return Ok(T::zero());
    }
    let mut cross = DMatrix::<f64>::zeros(q1.count(), q2.count());
    for (i, u) in q1.vectors().iter().enumerate() {
        for (j, v) in q2.vectors().iter().enumerate() {
            cross[(i, j)] = u.dot(v).to_f64().unwrap();
        }
    }
    let top = cross
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    Ok(T::from_config(top.clamp(0.0, 1.0)))
}
