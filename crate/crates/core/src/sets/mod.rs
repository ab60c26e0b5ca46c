//! Closed linear subspaces and closed convex sets with exact nearest-point
//! projections.

mod convex;
mod subspace;

pub use convex::ConvexSet;
pub use subspace::{friedrichs_cosine, intersect, ComplementOp, ProjectorOp, Subspace};

use crate::linalg::Vector;
use crate::scalar::Scalar;

/// A closed set with a nearest-point projection onto it.
///
/// `project` panics on an ambient-dimension mismatch; drivers validate
/// dimensions once when a problem is assembled.
pub trait Projectable<T: Scalar>: Send + Sync {
    fn ambient_dim(&self) -> usize;

    /// Nearest point of the set.
    fn project(&self, x: &Vector<T>) -> Vector<T>;

    /// `||x - P x||`; zero exactly when `x` lies in the set.
    fn distance(&self, x: &Vector<T>) -> T {
        (x - &self.project(x)).norm()
    }

    /// Whether the set is a linear subspace (so the projection is linear
    /// and self-adjoint).
    fn is_subspace(&self) -> bool {
        false
    }
}
