//! Shared oracle helpers: dense materialization of lazy operators and the
//! top singular value via a dense SVD, independent of the power-iteration
//! path under test.

use cyclic_projections::linalg::{LinearOp, Vector};
use nalgebra::DMatrix;

/// Materializes the operator by applying it to every canonical basis vector.
pub fn dense_matrix_of(op: &dyn LinearOp<f64>) -> DMatrix<f64> {
    let rows = op.codomain_dim();
    let cols = op.domain_dim();
    let mut mat = DMatrix::<f64>::zeros(rows, cols);
    for j in 0..cols {
        let col = op.apply(&Vector::unit(cols, j));
        for i in 0..rows {
            mat[(i, j)] = col.as_slice()[i];
        }
    }
    mat
}

/// Largest singular value of a dense matrix.
pub fn top_singular_value(mat: DMatrix<f64>) -> f64 {
    mat.svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Dense-oracle operator norm.
pub fn oracle_norm(op: &dyn LinearOp<f64>) -> f64 {
    top_singular_value(dense_matrix_of(op))
}
