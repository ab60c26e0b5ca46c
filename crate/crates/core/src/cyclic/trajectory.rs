use std::collections::VecDeque;

use super::CyclicOperator;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;

/// The recorded tail of a cyclic-projection run.
///
/// Only the last `window` iterates are retained, so memory stays
/// `O(window)` rather than `O(K)`; per-iteration analysis happens in the
/// sink while the run streams.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    y0: Vector<T>,
    steps: usize,
    recent: VecDeque<Vector<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn y0(&self) -> &Vector<T> {
        &self.y0
    }

    /// Number of completed sweeps `K`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// The final iterate `y_K`.
    pub fn last(&self) -> &Vector<T> {
        self.recent.back().expect("window is never empty")
    }

    /// Retained iterates, oldest first, ending at `y_K`.
    pub fn recent(&self) -> impl Iterator<Item = &Vector<T>> {
        self.recent.iter()
    }
}

/// Runs `y_k = T^k(y_0)` for `k = 1..=steps`, feeding `(k, y_k, y_{k-1})`
/// to the sink after every sweep.
///
/// A non-finite iterate aborts the run with the offending index.
pub fn run_trajectory<T: Scalar>(
    op: &CyclicOperator<T>,
    y0: Vector<T>,
    steps: usize,
    window: usize,
    mut sink: impl FnMut(usize, &Vector<T>, &Vector<T>),
) -> Result<Trajectory<T>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("need at least one sweep".into()));
    }
    if y0.dim() != op.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: op.ambient_dim(),
            got: y0.dim(),
        });
    }
    let window = window.max(1);
    let mut recent: VecDeque<Vector<T>> = VecDeque::with_capacity(window);
    let mut prev = y0.clone();
    for k in 1..=steps {
        let y = op.sweep(&prev);
        if !y.is_finite() {
            return Err(Error::NonFiniteIterate { k });
        }
        sink(k, &y, &prev);
        if recent.len() == window {
            recent.pop_front();
        }
        recent.push_back(y.clone());
        prev = y;
    }
    Ok(Trajectory {
        y0,
        steps,
        recent,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sets::{ConvexSet, Projectable, Subspace};

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn constant_on_common_point() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]);
        let m2 = Subspace::span(&[v(&[0.0, 1.0, 0.0])]);
        let op = CyclicOperator::new(vec![Arc::new(m1), Arc::new(m2)]).unwrap();
        let y0 = v(&[0.0, 3.0, 0.0]);
        let mut increments = Vec::new();
        let traj = run_trajectory(&op, y0.clone(), 5, 2, |_, y, yp| {
            increments.push(y.distance_to(yp));
        })
        .unwrap();
        assert!(increments.iter().all(|&d| d <= 1e-14));
        assert!(traj.last().distance_to(&y0) <= 1e-14);
    }

    #[test]
    fn sixty_degree_norm_sequence() {
        let theta = std::f64::consts::FRAC_PI_3;
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let m2 = Subspace::span(&[v(&[theta.cos(), theta.sin()])]);
        let op = CyclicOperator::new(vec![Arc::new(m1), Arc::new(m2)]).unwrap();
        let mut norms = Vec::new();
        run_trajectory(&op, v(&[1.0, 0.0]), 3, 1, |_, y, _| norms.push(y.norm())).unwrap();
        let expected = [0.5, 0.125, 0.03125];
        for (n, e) in norms.iter().zip(expected) {
            assert!((n - e).abs() <= 1e-15, "got {n}, want {e}");
        }
    }

    #[test]
    fn two_halfspaces_converge_in_one_sweep() {
        let h1 = ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        let h2 = ConvexSet::halfspace(v(&[0.0, 1.0]), 0.0).unwrap();
        let op = CyclicOperator::new(vec![
            Arc::new(h1) as Arc<dyn Projectable<f64>>,
            Arc::new(h2) as Arc<dyn Projectable<f64>>,
        ])
        .unwrap();
        let traj = run_trajectory(&op, v(&[1.0, 1.0]), 2, 2, |_, _, _| {}).unwrap();
        assert_eq!(traj.last(), &Vector::zeros(2));
    }

    #[test]
    fn window_bounds_retention() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let op = CyclicOperator::new(vec![Arc::new(m1)]).unwrap();
        let traj = run_trajectory(&op, v(&[1.0, 1.0]), 10, 3, |_, _, _| {}).unwrap();
        assert_eq!(traj.recent().count(), 3);
        assert_eq!(traj.steps(), 10);
    }

    #[test]
    fn non_finite_iterate_is_reported() {
        struct Exploding;
        impl Projectable<f64> for Exploding {
            fn ambient_dim(&self) -> usize {
                1
            }
            fn project(&self, x: &Vector<f64>) -> Vector<f64> {
                Vector::from_fn(1, |_| x[0] * 1e308)
            }
        }
        let op = CyclicOperator::new(vec![Arc::new(Exploding) as Arc<dyn Projectable<f64>>])
            .unwrap();
        let err = run_trajectory(&op, v(&[1.0]), 10, 1, |_, _, _| {}).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIterate { k: 2 }));
    }

    #[test]
    fn zero_steps_rejected() {
        let m1 = Subspace::span(&[v(&[1.0, 0.0])]);
        let op = CyclicOperator::new(vec![Arc::new(m1)]).unwrap();
        assert!(run_trajectory(&op, v(&[1.0, 0.0]), 0, 1, |_, _, _| {}).is_err());
    }
}
