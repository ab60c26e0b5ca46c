//! A numerical laboratory for the method of cyclic projections.
//!
//! The crate builds finite-dimensional instances of the iteration
//! `y_k = (P_m ... P_1)^k(y_0)` over closed linear subspaces or closed
//! convex sets, and instruments everything the convergence analysis talks
//! about: per-iteration error, average/maximum distance and increment
//! metrics, the Pierra product-space lift with its norm identities and
//! sandwich inequalities, operator-norm decay quantities, empirical rate
//! fits, and a gallery of reproducible problem instances including the
//! block-diagonal two-subspace family with closed-form behaviour.
//!
//! Core math is generic over the scalar type via [`Scalar`] (`f32` or
//! `f64`); the `*64` aliases below fix the default precision used by the
//! command-line driver and the verification suites.

pub mod cyclic;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod metrics;
pub mod product;
pub mod random;
pub mod scalar;
pub mod sets;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` vector in the ambient space.
pub type Vector64 = linalg::Vector<f64>;
/// `f64` orthonormal basis.
pub type OrthonormalBasis64 = linalg::OrthonormalBasis<f64>;
/// `f64` subspace.
pub type Subspace64 = sets::Subspace<f64>;
/// `f64` convex set.
pub type ConvexSet64 = sets::ConvexSet<f64>;
/// `f64` cyclic operator.
pub type CyclicOperator64 = cyclic::CyclicOperator<f64>;
/// `f64` product-space problem.
pub type ProductSpace64 = product::ProductSpace<f64>;
/// `f64` product vector.
pub type ProductVector64 = product::ProductVector<f64>;
/// `f64` metric row.
pub type MetricRow64 = metrics::MetricRow<f64>;
/// `f64` angle-block problem.
pub type AngleBlockProblem64 = gallery::AngleBlockProblem<f64>;
