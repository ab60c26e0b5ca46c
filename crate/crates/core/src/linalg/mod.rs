//! Vectors, orthonormal bases and linear operators on finite-dimensional
//! real inner-product spaces.

mod basis;
mod operator;
mod vector;

pub use basis::{mgs_orthonormalize, OrthonormalBasis, DEFAULT_RANK_TOL};
pub use operator::{
    compose, operator_norm, ComposedOp, DiffOp, IdentityOp, LinearOp, PowerIterConfig, PowerOp,
    ScaledOp,
};
pub use vector::{inner, Vector};
