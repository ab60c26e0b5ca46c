use std::sync::Arc;

use crate::cyclic::{CyclicOperator, StartCertificate};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::product::ProductSpace;
use crate::random::{rng_from_seed, standard_normal};
use crate::scalar::Scalar;
use crate::sets::{Projectable, Subspace};

/// Angle sequence for the block family. Every rule produces cosines in
/// `[0, 1)`, so each 2x2 block has trivial intersection and the full
/// problem has `M = {0}`.
#[derive(Debug, Clone)]
pub enum AngleRule<T> {
    /// Fixed angle `theta` in `(0, pi/2]` for every block.
    Constant { theta: T },
    /// `cos(theta_n) = 1 - c * n^{-alpha}` with `c` in `(0, 1]`, `alpha > 0`;
    /// the angles close in on zero polynomially.
    PowerDecay { c: T, alpha: T },
    /// `cos(theta_n) = n / (n + 1)`.
    HarmonicRatio,
}

impl<T: Scalar> AngleRule<T> {
    /// The cosine sequence for blocks `n = 1..=blocks`.
    pub fn cosines(&self, blocks: usize) -> Result<Vec<T>> {
        let half_pi = T::from_config(std::f64::consts::FRAC_PI_2);
        match self {
            Self::Constant { theta } => {
                if *theta <= T::zero() || *theta > half_pi {
                    return Err(Error::InvalidParameter(
                        "constant angle must lie in (0, pi/2]".into(),
                    ));
                }
                Ok(vec![theta.cos().max(T::zero()); blocks])
            }
            Self::PowerDecay { c, alpha } => {
                if *c <= T::zero() || *c > T::one() || *alpha <= T::zero() {
                    return Err(Error::InvalidParameter(
                        "power decay needs c in (0,1] and alpha > 0".into(),
                    ));
                }
                Ok((1..=blocks)
                    .map(|n| T::one() - *c * T::from_usize(n).unwrap().powf(-*alpha))
                    .collect())
            }
            Self::HarmonicRatio => Ok((1..=blocks)
                .map(|n| {
                    T::from_usize(n).unwrap() / T::from_usize(n + 1).unwrap()
                })
                .collect()),
        }
    }
}

/// Block-diagonal subspace of `R^{2N}`: block `n` is the line spanned by a
/// unit direction `(d0, d1)` in its own plane. Projection costs `O(N)`.
#[derive(Debug, Clone)]
pub struct BlockLineSubspace<T> {
    directions: Vec<(T, T)>,
}

impl<T: Scalar> BlockLineSubspace<T> {
    /// Normalizes the given per-block directions.
    pub fn new(directions: Vec<(T, T)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(directions.len());
        for (a, b) in directions {
            let n = (a * a + b * b).sqrt();
            if n == T::zero() || !n.is_finite() {
                return Err(Error::InvalidParameter(
                    "block direction must be nonzero and finite".into(),
                ));
            }
            normalized.push((a / n, b / n));
        }
        Ok(Self {
            directions: normalized,
        })
    }

    pub fn blocks(&self) -> usize {
        self.directions.len()
    }

    /// The blockwise orthogonal subspace: every direction rotated by 90 degrees.
    pub fn rotated(&self) -> Self {
        Self {
            directions: self.directions.iter().map(|&(a, b)| (-b, a)).collect(),
        }
    }

    pub fn direction(&self, block: usize) -> (T, T) {
        self.directions[block]
    }

    /// Dense basis-backed copy, for cross-validation at small `N`.
    pub fn to_dense(&self) -> Subspace<T> {
        let d = 2 * self.blocks();
        let vectors: Vec<Vector<T>> = self
            .directions
            .iter()
            .enumerate()
            .map(|(n, &(a, b))| {
                Vector::from_fn(d, |i| {
                    if i == 2 * n {
                        a
                    } else if i == 2 * n + 1 {
                        b
                    } else {
                        T::zero()
                    }
                })
            })
            .collect();
        Subspace::from_orthonormal(vectors, d).expect("unit block directions are orthonormal")
    }
}

impl<T: Scalar> Projectable<T> for BlockLineSubspace<T> {
    fn ambient_dim(&self) -> usize {
        2 * self.directions.len()
    }

    fn project(&self, x: &Vector<T>) -> Vector<T> {
        assert_eq!(x.dim(), self.ambient_dim(), "projection dimension mismatch");
        let mut out = vec![T::zero(); x.dim()];
        for (n, &(a, b)) in self.directions.iter().enumerate() {
            let c = x[2 * n] * a + x[2 * n + 1] * b;
            out[2 * n] = c * a;
            out[2 * n + 1] = c * b;
        }
        Vector::from_raw(out)
    }

    fn is_subspace(&self) -> bool {
        true
    }
}

/// The two-subspace block family: block `n` pairs the line `span{(1,0)}`
/// with the line `span{(cos theta_n, sin theta_n)}`. For `m >= 3` the extra
/// sets duplicate the second subspace, which leaves `T` unchanged. Every
/// finite truncation has closed complement sum, so polynomial decay is a
/// pre-asymptotic window: roughly `k <= N/2` for the decaying rules, after
/// which the linear regime takes over.
#[derive(Clone)]
pub struct AngleBlockProblem<T: Scalar> {
    cosines: Vec<T>,
    m: usize,
    m1: Arc<BlockLineSubspace<T>>,
    m2: Arc<BlockLineSubspace<T>>,
    comp1: Arc<BlockLineSubspace<T>>,
    comp2: Arc<BlockLineSubspace<T>>,
}

/// Builds the block problem for `blocks >= 1` blocks and `m >= 2` sets.
pub fn make_angle_block<T: Scalar>(
    blocks: usize,
    rule: &AngleRule<T>,
    m: usize,
) -> Result<AngleBlockProblem<T>> {
    if blocks == 0 {
        return Err(Error::InvalidParameter("need at least one block".into()));
    }
    if m < 2 {
        return Err(Error::InvalidParameter("block family needs m >= 2".into()));
    }
    let cosines = rule.cosines(blocks)?;
    let m1 = BlockLineSubspace::new(vec![(T::one(), T::zero()); blocks])?;
    let m2 = BlockLineSubspace::new(
        cosines
            .iter()
            .map(|&c| {
                let s = (T::one() - c * c).max(T::zero()).sqrt();
                (c, s)
            })
            .collect(),
    )?;
    let comp1 = m1.rotated();
    let comp2 = m2.rotated();
    Ok(AngleBlockProblem {
        cosines,
        m,
        m1: Arc::new(m1),
        m2: Arc::new(m2),
        comp1: Arc::new(comp1),
        comp2: Arc::new(comp2),
    })
}

impl<T: Scalar> AngleBlockProblem<T> {
    pub fn blocks(&self) -> usize {
        self.cosines.len()
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.blocks()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cosines(&self) -> &[T] {
        &self.cosines
    }

    pub fn first_subspace(&self) -> &Arc<BlockLineSubspace<T>> {
        &self.m1
    }

    pub fn second_subspace(&self) -> &Arc<BlockLineSubspace<T>> {
        &self.m2
    }

    /// The sets `M_1, M_2, ..., M_m` with duplicates past the second.
    pub fn sets(&self) -> Vec<Arc<dyn Projectable<T>>> {
        let mut sets: Vec<Arc<dyn Projectable<T>>> =
            vec![self.m1.clone(), self.m2.clone()];
        for _ in 2..self.m {
            sets.push(self.m2.clone());
        }
        sets
    }

    /// The complements `M_i^perp`, in matching order.
    pub fn complements(&self) -> Vec<Arc<dyn Projectable<T>>> {
        let mut comps: Vec<Arc<dyn Projectable<T>>> =
            vec![self.comp1.clone(), self.comp2.clone()];
        for _ in 2..self.m {
            comps.push(self.comp2.clone());
        }
        comps
    }

    /// All angles are positive, so the intersection is the zero subspace.
    pub fn intersection(&self) -> Subspace<T> {
        Subspace::zero(self.ambient_dim())
    }

    pub fn operator(&self) -> CyclicOperator<T> {
        CyclicOperator::new(self.sets()).expect("block sets are consistent")
    }

    pub fn product_space(&self) -> ProductSpace<T> {
        ProductSpace::new(
            self.sets(),
            self.complements(),
            Arc::new(self.intersection()),
        )
        .expect("block problem lifts to the product space")
    }

    /// The Friedrichs cosine of the pair `(M_1, M_2)`: `max_n cos(theta_n)`.
    pub fn friedrichs_cosine_closed_form(&self) -> T {
        self.cosines
            .iter()
            .cloned()
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Exact operator-norm error `||T^k - P_M|| = max_n cos^{2k-1}(theta_n)`
    /// for the two-subspace problem.
    pub fn exact_error_norm(&self, k: usize) -> Result<T> {
        if self.m != 2 {
            return Err(Error::InvalidParameter(
                "the closed-form error norm holds for m = 2".into(),
            ));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(self
            .cosines
            .iter()
            .map(|&c| c.powi(2 * k as i32 - 1))
            .fold(T::zero(), |a, b| if b > a { b } else { a }))
    }

    /// Closed-form block iterate: for `k >= 1`, block `n` of `T^k(y0)` is
    /// `y0_{2n} cos^{2k-1}(theta_n) (cos theta_n, sin theta_n)`.
    pub fn exact_block_iterate(&self, block: usize, y0_block: (T, T), k: usize) -> (T, T) {
        assert!(k >= 1);
        let c = self.cosines[block];
        let s = (T::one() - c * c).max(T::zero()).sqrt();
        let coeff = y0_block.0 * c.powi(2 * k as i32 - 1);
        (coeff * c, coeff * s)
    }

    /// Starting point in `Y = sum_i M_i^perp` with per-block coefficients
    /// proportional to `n^{-1}` against the complement normals, keeping the
    /// coefficient sequence summable on every truncation.
    pub fn y_start(&self, seed: u64, scale: T) -> (Vector<T>, StartCertificate<T>) {
        let mut rng = rng_from_seed(seed);
        let d = self.ambient_dim();
        let mut components: Vec<Vector<T>> = Vec::with_capacity(self.m);
        for i in 0..self.m {
            // Draw against the per-block complement normals with 1/n damping.
            let mut coords = vec![T::zero(); d];
            let dirs: &BlockLineSubspace<T> = if i == 0 { &self.comp1 } else { &self.comp2 };
            for n in 0..self.blocks() {
                let damping = T::one() / T::from_usize(n + 1).unwrap();
                let coeff = standard_normal::<T, _>(&mut rng) * scale * damping;
                let (a, b) = dirs.direction(n);
                coords[2 * n] = coeff * a;
                coords[2 * n + 1] = coeff * b;
            }
            components.push(Vector::from_raw(coords));
        }
        let weight = T::one() / T::from_usize(self.m).unwrap();
        let mut y0 = Vector::zeros(d);
        for x in &components {
            y0 = y0.axpy(weight, x);
        }
        (
            y0,
            StartCertificate::InY {
                m_component: Vector::zeros(d),
                complement_components: components,
            },
        )
    }

    /// Dense basis-backed copies of the distinct subspaces, for
    /// cross-validation at small `N`.
    pub fn dense_pair(&self) -> (Subspace<T>, Subspace<T>) {
        (self.m1.to_dense(), self.m2.to_dense())
    }
}
