use std::sync::Arc;

use serde::Serialize;

use super::ops::{ChunkwiseOp, DiagonalAveragerOp};
use super::ProductSpace;
use crate::error::Result;
use crate::linalg::{compose, operator_norm, DiffOp, LinearOp, PowerIterConfig, PowerOp};
use crate::scalar::Scalar;
use crate::sets::ProjectorOp;

/// Slack for the norm sandwich inequalities; two power iterations at 1e-12
/// relative tolerance compose to well under this.
pub const SANDWICH_SLACK: f64 = 1e-7;

/// Tolerance for the exact equality between the product-space increment
/// norm and the base-space increment norm.
pub const INCREMENT_EQUALITY_TOL: f64 = 1e-8;

/// The ten operator-norm quantities whose decay thresholds separate the
/// polynomial regime from the linear one. The first five live in the base
/// space (maxima over set indices); the last five are their product-space
/// counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormQuantity {
    /// (i) `||T^k - T^{k-1}||`
    Increment,
    /// (ii) `max_i ||P_{M_i^perp} T^k||`
    PerpAfterPower,
    /// (iii) `max_i ||T^k P_{M_i^perp}||`
    PowerAfterPerp,
    /// (iv) `max_i ||(T^k - T^{k-1}) P_{M_i^perp}||`
    IncrementAfterPerp,
    /// (v) `max_{i,j} ||P_{M_i^perp} T^k P_{M_j^perp}||`
    PerpPowerPerp,
    /// (vi) `||(T^k - T^{k-1}) P_D||`
    ProductIncrement,
    /// (vii) `||P_{C^perp} T^k P_D||`
    ProductPerpAfterPower,
    /// (viii) `||T^k P_D P_{C^perp}||`
    ProductPowerAfterPerp,
    /// (ix) `||(T^k - T^{k-1}) P_D P_{C^perp}||`
    ProductIncrementAfterPerp,
    /// (x) `||P_{C^perp} T^k P_D P_{C^perp}||`
    ProductPerpPowerPerp,
}

impl NormQuantity {
    pub const ALL: [NormQuantity; 10] = [
        NormQuantity::Increment,
        NormQuantity::PerpAfterPower,
        NormQuantity::PowerAfterPerp,
        NormQuantity::IncrementAfterPerp,
        NormQuantity::PerpPowerPerp,
        NormQuantity::ProductIncrement,
        NormQuantity::ProductPerpAfterPower,
        NormQuantity::ProductPowerAfterPerp,
        NormQuantity::ProductIncrementAfterPerp,
        NormQuantity::ProductPerpPowerPerp,
    ];

    /// The conventional roman label, `"i"` through `"x"`.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Increment => "i",
            Self::PerpAfterPower => "ii",
            Self::PowerAfterPerp => "iii",
            Self::IncrementAfterPerp => "iv",
            Self::PerpPowerPerp => "v",
            Self::ProductIncrement => "vi",
            Self::ProductPerpAfterPower => "vii",
            Self::ProductPowerAfterPerp => "viii",
            Self::ProductIncrementAfterPerp => "ix",
            Self::ProductPerpPowerPerp => "x",
        }
    }

    /// The decay threshold exponent `p` in the `O(k^{-p})` bound for this
    /// quantity.
    pub fn decay_exponent(&self) -> f64 {
        match self {
            Self::Increment | Self::ProductIncrement => 1.0,
            Self::PerpAfterPower | Self::ProductPerpAfterPower => 0.5,
            Self::PowerAfterPerp | Self::ProductPowerAfterPerp => 0.5,
            Self::IncrementAfterPerp | Self::ProductIncrementAfterPerp => 1.5,
            Self::PerpPowerPerp | Self::ProductPerpPowerPerp => 1.0,
        }
    }

    pub fn is_product_space(&self) -> bool {
        matches!(
            self,
            Self::ProductIncrement
                | Self::ProductPerpAfterPower
                | Self::ProductPowerAfterPerp
                | Self::ProductIncrementAfterPerp
                | Self::ProductPerpPowerPerp
        )
    }
}

/// One chain of the norm sandwich: the product-space member, the base-space
/// maximum, and the inflation factor bounding the maximum from above.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichChain<T> {
    pub name: &'static str,
    pub product_value: T,
    pub base_max: T,
    pub factor: T,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub lower_margin: T,
    pub upper_margin: T,
}

/// Evaluation of all four sandwich chains plus the increment equality at a
/// fixed power `k`.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport<T> {
    pub k: usize,
    pub chains: Vec<SandwichChain<T>>,
    pub increment_product: T,
    pub increment_base: T,
    pub increment_equality_ok: bool,
    pub all_hold: bool,
}

impl<T: Scalar> ProductSpace<T> {
    fn base_t_op(&self) -> Arc<dyn LinearOp<T>> {
        Arc::new(self.base_operator().linear_op().expect("subspace mode"))
    }

    fn base_power(&self, k: usize) -> Arc<dyn LinearOp<T>> {
        Arc::new(PowerOp::new(self.base_t_op(), k).expect("square operator"))
    }

    /// `T^k - T^{k-1}` in the base space.
    fn base_increment_op(&self, k: usize) -> Arc<dyn LinearOp<T>> {
        Arc::new(DiffOp::new(self.base_power(k), self.base_power(k - 1)).expect("same shape"))
    }

    fn complement_op(&self, i: usize) -> Arc<dyn LinearOp<T>> {
        Arc::new(ProjectorOp::new(self.complements()[i].clone()).expect("subspace"))
    }

    fn diag_op(&self) -> Arc<dyn LinearOp<T>> {
        Arc::new(DiagonalAveragerOp {
            m: self.m(),
            chunk_dim: self.base_dim(),
        })
    }

    fn cperp_op(&self) -> Arc<dyn LinearOp<T>> {
        let per_chunk: Vec<Arc<dyn LinearOp<T>>> =
            (0..self.m()).map(|i| self.complement_op(i)).collect();
        Arc::new(ChunkwiseOp::new(per_chunk).expect("uniform chunks"))
    }

    fn bold_power_op(&self, k: usize) -> Arc<dyn LinearOp<T>> {
        Arc::new(ChunkwiseOp::uniform(self.base_power(k), self.m()).expect("uniform chunks"))
    }

    fn bold_increment_op(&self, k: usize) -> Arc<dyn LinearOp<T>> {
        Arc::new(
            ChunkwiseOp::uniform(self.base_increment_op(k), self.m()).expect("uniform chunks"),
        )
    }

    fn max_over_complements(
        &self,
        build: impl Fn(usize) -> Arc<dyn LinearOp<T>>,
        config: &PowerIterConfig,
    ) -> Result<T> {
        let mut worst = T::zero();
        for i in 0..self.m() {
            let value = operator_norm(&build(i), config)?;
            if value > worst {
                worst = value;
            }
        }
        Ok(worst)
    }

    /// Evaluates one of the ten norm quantities at power `k` by power
    /// iteration on the lazily composed operator.
    pub fn norm_quantity(
        &self,
        which: NormQuantity,
        k: usize,
        config: &PowerIterConfig,
    ) -> Result<T> {
        if k == 0 {
            return Err(crate::error::Error::InvalidParameter(
                "norm quantities need k >= 1".into(),
            ));
        }
        match which {
            NormQuantity::Increment => {
                operator_norm(&self.base_increment_op(k), config)
            }
            NormQuantity::PerpAfterPower => self.max_over_complements(
                |i| {
                    Arc::new(
                        compose(vec![self.complement_op(i), self.base_power(k)]).unwrap(),
                    )
                },
                config,
            ),
            NormQuantity::PowerAfterPerp => self.max_over_complements(
                |i| {
                    Arc::new(
                        compose(vec![self.base_power(k), self.complement_op(i)]).unwrap(),
                    )
                },
                config,
            ),
            NormQuantity::IncrementAfterPerp => self.max_over_complements(
                |i| {
                    Arc::new(
                        compose(vec![self.base_increment_op(k), self.complement_op(i)])
                            .unwrap(),
                    )
                },
                config,
            ),
            NormQuantity::PerpPowerPerp => {
                let mut worst = T::zero();
                for i in 0..self.m() {
                    for j in 0..self.m() {
                        let op = compose(vec![
                            self.complement_op(i),
                            self.base_power(k),
                            self.complement_op(j),
                        ])
                        .unwrap();
                        let value = operator_norm(&op, config)?;
                        if value > worst {
                            worst = value;
                        }
                    }
                }
                Ok(worst)
            }
            NormQuantity::ProductIncrement => {
                let op = compose(vec![self.bold_increment_op(k), self.diag_op()]).unwrap();
                operator_norm(&op, config)
            }
            NormQuantity::ProductPerpAfterPower => {
                let op = compose(vec![
                    self.cperp_op(),
                    self.bold_power_op(k),
                    self.diag_op(),
                ])
                .unwrap();
                operator_norm(&op, config)
            }
            NormQuantity::ProductPowerAfterPerp => {
                let op = compose(vec![
                    self.bold_power_op(k),
                    self.diag_op(),
                    self.cperp_op(),
                ])
                .unwrap();
                operator_norm(&op, config)
            }
            NormQuantity::ProductIncrementAfterPerp => {
                let op = compose(vec![
                    self.bold_increment_op(k),
                    self.diag_op(),
                    self.cperp_op(),
                ])
                .unwrap();
                operator_norm(&op, config)
            }
            NormQuantity::ProductPerpPowerPerp => {
                let op = compose(vec![
                    self.cperp_op(),
                    self.bold_power_op(k),
                    self.diag_op(),
                    self.cperp_op(),
                ])
                .unwrap();
                operator_norm(&op, config)
            }
        }
    }

    /// Checks the four product/base norm sandwiches and the increment
    /// equality at power `k`, with slack [`SANDWICH_SLACK`]. Violations are
    /// reported, not raised.
    pub fn verify_norm_sandwich(
        &self,
        k: usize,
        config: &PowerIterConfig,
    ) -> Result<SandwichReport<T>> {
        let slack = T::from_config(SANDWICH_SLACK);
        let sqrt_m = T::from_usize(self.m()).unwrap().sqrt();
        let m_factor = T::from_usize(self.m()).unwrap();
        let specs: [(&'static str, NormQuantity, NormQuantity, T); 4] = [
            (
                "perp_after_power",
                NormQuantity::ProductPerpAfterPower,
                NormQuantity::PerpAfterPower,
                sqrt_m,
            ),
            (
                "power_after_perp",
                NormQuantity::ProductPowerAfterPerp,
                NormQuantity::PowerAfterPerp,
                sqrt_m,
            ),
            (
                "increment_after_perp",
                NormQuantity::ProductIncrementAfterPerp,
                NormQuantity::IncrementAfterPerp,
                sqrt_m,
            ),
            (
                "perp_power_perp",
                NormQuantity::ProductPerpPowerPerp,
                NormQuantity::PerpPowerPerp,
                m_factor,
            ),
        ];
        let mut chains = Vec::with_capacity(4);
        for (name, product_q, base_q, factor) in specs {
            let product_value = self.norm_quantity(product_q, k, config)?;
            let base_max = self.norm_quantity(base_q, k, config)?;
            let lower_margin = base_max - product_value;
            let upper_margin = factor * product_value - base_max;
            chains.push(SandwichChain {
                name,
                product_value,
                base_max,
                factor,
                lower_ok: product_value <= base_max + slack,
                upper_ok: base_max <= factor * product_value + slack,
                lower_margin,
                upper_margin,
            });
        }
        let increment_product = self.norm_quantity(NormQuantity::ProductIncrement, k, config)?;
        let increment_base = self.norm_quantity(NormQuantity::Increment, k, config)?;
        let increment_equality_ok = (increment_product - increment_base).abs()
            <= T::from_config(INCREMENT_EQUALITY_TOL);
        let all_hold = increment_equality_ok
            && chains.iter().all(|c| c.lower_ok && c.upper_ok);
        Ok(SandwichReport {
            k,
            chains,
            increment_product,
            increment_base,
            increment_equality_ok,
            all_hold,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use crate::sets::{Projectable, Subspace};

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn space_from(subspaces: Vec<Subspace<f64>>, m_proj: Subspace<f64>) -> ProductSpace<f64> {
        let complements: Vec<Arc<dyn Projectable<f64>>> = subspaces
            .iter()
            .map(|s| Arc::new(s.complement()) as Arc<dyn Projectable<f64>>)
            .collect();
        ProductSpace::new(
            subspaces
                .into_iter()
                .map(|s| Arc::new(s) as Arc<dyn Projectable<f64>>)
                .collect(),
            complements,
            Arc::new(m_proj),
        )
        .unwrap()
    }

    #[test]
    fn increment_equality_sixty_degrees() {
        let theta = std::f64::consts::FRAC_PI_3;
        let space = space_from(
            vec![
                Subspace::span(&[v(&[1.0, 0.0])]),
                Subspace::span(&[v(&[theta.cos(), theta.sin()])]),
            ],
            Subspace::zero(2),
        );
        let cfg = PowerIterConfig::default();
        for k in 1..=4 {
            let base = space
                .norm_quantity(NormQuantity::Increment, k, &cfg)
                .unwrap();
            let product = space
                .norm_quantity(NormQuantity::ProductIncrement, k, &cfg)
                .unwrap();
            assert!(
                (base - product).abs() <= 1e-8,
                "k = {k}: base {base}, product {product}"
            );
        }
    }

    #[test]
    fn orthogonal_subspaces_vanish_at_k2() {
        // M1 = span{e1}, M2 = span{e2} in R^2: P2 P1 annihilates everything,
        // so T = 0 and every quantity vanishes for k >= 2.
        let space = space_from(
            vec![
                Subspace::span(&[v(&[1.0, 0.0])]),
                Subspace::span(&[v(&[0.0, 1.0])]),
            ],
            Subspace::zero(2),
        );
        let cfg = PowerIterConfig::default();
        // At k = 1 the increment is ||T - I|| = ||I|| = 1.
        let inc1 = space
            .norm_quantity(NormQuantity::Increment, 1, &cfg)
            .unwrap();
        assert!((inc1 - 1.0).abs() <= 1e-8, "increment at k = 1: {inc1}");
        for q in NormQuantity::ALL {
            let value = space.norm_quantity(q, 2, &cfg).unwrap();
            assert!(value <= 1e-8, "{q:?} = {value}");
        }
    }

    #[test]
    fn sandwich_collapses_for_single_set() {
        let space = space_from(
            vec![Subspace::span(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])])],
            Subspace::span(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]),
        );
        let report = space
            .verify_norm_sandwich(3, &PowerIterConfig::default())
            .unwrap();
        assert!(report.all_hold);
        for chain in &report.chains {
            assert!(
                (chain.product_value - chain.base_max).abs() <= 1e-7,
                "m = 1 chain {} should collapse to equality",
                chain.name
            );
        }
    }
}
