//! Flattened linear-operator adapters for the product space.
//!
//! Operator norms and adjoints in `H^m` coincide with those of the
//! corresponding operators on the concatenated space `R^{m d}` because the
//! product inner product is a uniform positive multiple of the standard
//! one; the `(1/m)` scale cancels in every norm ratio and adjoint pairing.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{LinearOp, Vector};
use crate::scalar::Scalar;

/// Block-diagonal action: chunk `i` of the input goes through `per_chunk[i]`.
pub struct ChunkwiseOp<T: Scalar> {
    per_chunk: Vec<Arc<dyn LinearOp<T>>>,
    chunk_dim: usize,
}

impl<T: Scalar> ChunkwiseOp<T> {
    pub fn new(per_chunk: Vec<Arc<dyn LinearOp<T>>>) -> Result<Self> {
        let first = per_chunk.first().ok_or_else(|| {
            Error::InvalidParameter("chunkwise operator needs at least one chunk".into())
        })?;
        let chunk_dim = first.domain_dim();
        for op in &per_chunk {
            if op.domain_dim() != chunk_dim || op.codomain_dim() != chunk_dim {
                return Err(Error::DimensionMismatch {
                    expected: chunk_dim,
                    got: op.domain_dim(),
                });
            }
        }
        Ok(Self {
            per_chunk,
            chunk_dim,
        })
    }

    /// All chunks share one operator.
    pub fn uniform(op: Arc<dyn LinearOp<T>>, m: usize) -> Result<Self> {
        Self::new(vec![op; m.max(1)])
    }

    fn map_chunks(&self, x: &Vector<T>, adjoint: bool) -> Vector<T> {
        assert_eq!(x.dim(), self.chunk_dim * self.per_chunk.len());
        let mut out = Vec::with_capacity(x.dim());
        for (i, op) in self.per_chunk.iter().enumerate() {
            let chunk = Vector::from_raw(
                x.as_slice()[i * self.chunk_dim..(i + 1) * self.chunk_dim].to_vec(),
            );
            let mapped = if adjoint {
                op.apply_adjoint(&chunk)
            } else {
                op.apply(&chunk)
            };
            out.extend_from_slice(mapped.as_slice());
        }
        Vector::from_raw(out)
    }
}

impl<T: Scalar> LinearOp<T> for ChunkwiseOp<T> {
    fn domain_dim(&self) -> usize {
        self.chunk_dim * self.per_chunk.len()
    }
    fn codomain_dim(&self) -> usize {
        self.chunk_dim * self.per_chunk.len()
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        self.map_chunks(x, false)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        self.map_chunks(y, true)
    }
}

/// The diagonal projector `P_D`: every output chunk is the mean of the
/// input chunks. Self-adjoint (the flattened matrix is symmetric).
pub struct DiagonalAveragerOp {
    pub m: usize,
    pub chunk_dim: usize,
}

impl<T: Scalar> LinearOp<T> for DiagonalAveragerOp {
    fn domain_dim(&self) -> usize {
        self.m * self.chunk_dim
    }
    fn codomain_dim(&self) -> usize {
        self.m * self.chunk_dim
    }
    fn apply(&self, x: &Vector<T>) -> Vector<T> {
        assert_eq!(x.dim(), self.m * self.chunk_dim);
        let weight = T::one() / T::from_usize(self.m).unwrap();
        let mut mean = vec![T::zero(); self.chunk_dim];
        for i in 0..self.m {
            for (j, slot) in mean.iter_mut().enumerate() {
                *slot += x.as_slice()[i * self.chunk_dim + j] * weight;
            }
        }
        let mut out = Vec::with_capacity(x.dim());
        for _ in 0..self.m {
            out.extend_from_slice(&mean);
        }
        Vector::from_raw(out)
    }
    fn apply_adjoint(&self, y: &Vector<T>) -> Vector<T> {
        LinearOp::<T>::apply(self, y)
    }
}
