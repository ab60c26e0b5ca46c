//! The Pierra product space `H^m` with its `(1/m)`-scaled inner product,
//! the projections onto `C`, `D`, `C ∩ D` and `C^perp`, the componentwise
//! operator `T`, and the norm quantities connecting base and product space.

mod ops;
mod quantities;

pub use ops::{ChunkwiseOp, DiagonalAveragerOp};
pub use quantities::{
    NormQuantity, SandwichChain, SandwichReport, INCREMENT_EQUALITY_TOL, SANDWICH_SLACK,
};

use std::sync::Arc;

use crate::cyclic::CyclicOperator;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;
use crate::sets::Projectable;

/// An element of `H^m`: an m-tuple of base-space vectors with
/// `||x||^2 = (1/m) sum_i ||x_i||^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductVector<T> {
    components: Vec<Vector<T>>,
}

impl<T: Scalar> ProductVector<T> {
    pub fn new(components: Vec<Vector<T>>) -> Result<Self> {
        let first = components.first().ok_or_else(|| {
            Error::InvalidParameter("product vector needs at least one component".into())
        })?;
        let dim = first.dim();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        Ok(Self { components })
    }

    /// The diagonal embedding `(x, ..., x)` with `m` copies.
    pub fn replicate(x: Vector<T>, m: usize) -> Self {
        Self {
            components: vec![x; m.max(1)],
        }
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn component_dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn components(&self) -> &[Vector<T>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Vector<T> {
        &self.components[i]
    }

    /// Scaled inner product `(1/m) sum_i <x_i, y_i>`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.m() != other.m() || self.component_dim() != other.component_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.m() * self.component_dim(),
                got: other.m() * other.component_dim(),
            });
        }
        let sum: T = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| crate::linalg::inner(a, b).unwrap())
            .sum();
        Ok(sum / T::from_usize(self.m()).unwrap())
    }

    pub fn norm_squared(&self) -> T {
        let sum: T = self.components.iter().map(|c| c.norm_squared()).sum();
        sum / T::from_usize(self.m()).unwrap()
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn distance_to(&self, other: &Self) -> T {
        let sum: T = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).norm_squared())
            .sum();
        (sum / T::from_usize(self.m()).unwrap()).sqrt()
    }

    /// Concatenated coordinates; used by the flattened operator adapters.
    pub fn flatten(&self) -> Vector<T> {
        let mut coords = Vec::with_capacity(self.m() * self.component_dim());
        for c in &self.components {
            coords.extend_from_slice(c.as_slice());
        }
        Vector::from_raw(coords)
    }

    pub fn from_flat(flat: &Vector<T>, m: usize) -> Result<Self> {
        if m == 0 || flat.dim() % m != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot split a {}-dim vector into {m} equal components",
                flat.dim()
            )));
        }
        let d = flat.dim() / m;
        let components = (0..m)
            .map(|i| Vector::from_raw(flat.as_slice()[i * d..(i + 1) * d].to_vec()))
            .collect();
        Ok(Self { components })
    }
}

/// A subspace-mode problem lifted to the product space: the sets `M_i`,
/// their complements, and the projector onto the intersection `M`.
pub struct ProductSpace<T: Scalar> {
    sets: Vec<Arc<dyn Projectable<T>>>,
    complements: Vec<Arc<dyn Projectable<T>>>,
    m_projector: Arc<dyn Projectable<T>>,
    base: CyclicOperator<T>,
}

impl<T: Scalar> ProductSpace<T> {
    pub fn new(
        sets: Vec<Arc<dyn Projectable<T>>>,
        complements: Vec<Arc<dyn Projectable<T>>>,
        m_projector: Arc<dyn Projectable<T>>,
    ) -> Result<Self> {
        let base = CyclicOperator::new(sets.clone())?;
        if !base.subspace_mode() {
            return Err(Error::InvalidParameter(
                "product space requires linear subspaces".into(),
            ));
        }
        if complements.len() != sets.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} complements, got {}",
                sets.len(),
                complements.len()
            )));
        }
        let d = base.ambient_dim();
        for c in &complements {
            if c.ambient_dim() != d || !c.is_subspace() {
                return Err(Error::InvalidParameter(
                    "complements must be subspaces of the same ambient space".into(),
                ));
            }
        }
        if m_projector.ambient_dim() != d || !m_projector.is_subspace() {
            return Err(Error::InvalidParameter(
                "intersection projector must be a subspace of the same ambient space".into(),
            ));
        }
        Ok(Self {
            sets,
            complements,
            m_projector,
            base,
        })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn base_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    pub fn base_operator(&self) -> &CyclicOperator<T> {
        &self.base
    }

    pub fn sets(&self) -> &[Arc<dyn Projectable<T>>] {
        &self.sets
    }

    pub fn complements(&self) -> &[Arc<dyn Projectable<T>>] {
        &self.complements
    }

    fn check(&self, x: &ProductVector<T>) -> Result<()> {
        if x.m() != self.m() || x.component_dim() != self.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.m() * self.base_dim(),
                got: x.m() * x.component_dim(),
            });
        }
        Ok(())
    }

    /// `P_C(x) = (P_{M_i}(x_i))_i`.
    pub fn proj_c(&self, x: &ProductVector<T>) -> Result<ProductVector<T>> {
        self.check(x)?;
        Ok(ProductVector {
            components: self
                .sets
                .iter()
                .zip(x.components())
                .map(|(s, xi)| s.project(xi))
                .collect(),
        })
    }

    /// `P_D(x) = (s, ..., s)` with `s = (1/m) sum_i x_i`.
    pub fn proj_d(&self, x: &ProductVector<T>) -> Result<ProductVector<T>> {
        self.check(x)?;
        Ok(ProductVector::replicate(self.mean(x), self.m()))
    }

    /// `P_{C ∩ D}(x) = (P_M(s), ..., P_M(s))`.
    pub fn proj_cd(&self, x: &ProductVector<T>) -> Result<ProductVector<T>> {
        self.check(x)?;
        let pm_s = self.m_projector.project(&self.mean(x));
        Ok(ProductVector::replicate(pm_s, self.m()))
    }

    /// `P_{C^perp}(x) = (P_{M_i^perp}(x_i))_i`.
    pub fn proj_cperp(&self, x: &ProductVector<T>) -> Result<ProductVector<T>> {
        self.check(x)?;
        Ok(ProductVector {
            components: self
                .complements
                .iter()
                .zip(x.components())
                .map(|(c, xi)| c.project(xi))
                .collect(),
        })
    }

    /// `T(x) = (T(x_i))_i`, the componentwise cyclic product.
    pub fn bold_t(&self, x: &ProductVector<T>) -> Result<ProductVector<T>> {
        self.check(x)?;
        Ok(ProductVector {
            components: x.components().iter().map(|xi| self.base.sweep(xi)).collect(),
        })
    }

    fn mean(&self, x: &ProductVector<T>) -> Vector<T> {
        let mut s = Vector::zeros(self.base_dim());
        for xi in x.components() {
            s = &s + xi;
        }
        s.scale(T::one() / T::from_usize(self.m()).unwrap())
    }

    /// `||P_{M_i} P_D x - P_D P_{M_i} x||` in the product norm, where
    /// `P_{M_i}` acts on every component. Commutation holds exactly for
    /// orthogonal projectors onto `M_i = M_i x ... x M_i`.
    pub fn commutation_residual(&self, i: usize, x: &ProductVector<T>) -> Result<T> {
        self.check(x)?;
        if i >= self.m() {
            return Err(Error::InvalidParameter(format!(
                "set index {i} out of range for m = {}",
                self.m()
            )));
        }
        let proj_all = |v: &ProductVector<T>| ProductVector {
            components: v.components().iter().map(|c| self.sets[i].project(c)).collect(),
        };
        let a = proj_all(&self.proj_d(x)?);
        let b = self.proj_d(&proj_all(x))?;
        Ok(a.distance_to(&b))
    }

    /// `||T P_D x - P_D T x||` in the product norm.
    pub fn t_commutation_residual(&self, x: &ProductVector<T>) -> Result<T> {
        self.check(x)?;
        let a = self.bold_t(&self.proj_d(x)?)?;
        let b = self.proj_d(&self.bold_t(x)?)?;
        Ok(a.distance_to(&b))
    }
}
