//! Cross-validation of the lazy-operator / power-iteration path against
//! dense-matrix SVD oracles and against the closed forms of the block
//! gallery.

mod common;

use std::sync::Arc;

use common::{dense_matrix_of, oracle_norm};
use cyclic_projections::gallery::{make_angle_block, AngleRule};
use cyclic_projections::linalg::{
    compose, operator_norm, DiffOp, IdentityOp, LinearOp, PowerIterConfig, PowerOp, Vector,
};
use cyclic_projections::product::NormQuantity;
use cyclic_projections::random::{gaussian_vector, rng_from_seed};
use cyclic_projections::sets::{friedrichs_cosine, intersect, Projectable, ProjectorOp, Subspace};

fn random_subspaces(seed: u64, d: usize, dims: &[usize]) -> Vec<Subspace<f64>> {
    let mut rng = rng_from_seed(seed);
    dims.iter()
        .map(|&dim| {
            let spanning: Vec<Vector<f64>> =
                (0..dim).map(|_| gaussian_vector(d, &mut rng)).collect();
            Subspace::span(&spanning)
        })
        .collect()
}

#[test]
fn power_iteration_matches_dense_svd_on_random_compositions() {
    let cfg = PowerIterConfig::default();
    for seed in 0..10u64 {
        let d = 6 + (seed as usize % 3);
        let subspaces = random_subspaces(100 + seed, d, &[2, 3, 2]);
        let ops: Vec<Arc<dyn LinearOp<f64>>> = subspaces
            .iter()
            .map(|s| Arc::new(s.clone().into_linear_op()) as Arc<dyn LinearOp<f64>>)
            .collect();
        let t = Arc::new(compose(ops).unwrap()) as Arc<dyn LinearOp<f64>>;
        let t3 = Arc::new(PowerOp::new(t.clone(), 3).unwrap()) as Arc<dyn LinearOp<f64>>;
        let diff = DiffOp::new(
            t3,
            Arc::new(IdentityOp { dim: d }) as Arc<dyn LinearOp<f64>>,
        )
        .unwrap();
        let estimated = operator_norm(&diff, &cfg).unwrap();
        let oracle = oracle_norm(&diff);
        assert!(
            (estimated - oracle).abs() <= 1e-8 * oracle.max(1.0),
            "seed {seed}: power iteration {estimated} vs dense SVD {oracle}"
        );
    }
}

#[test]
fn mixed_angle_block_error_norm_matches_closed_form() {
    // Mixed, well-separated angles across blocks; the operator norm of T^k
    // must equal max_n cos^{2k-1}(theta_n).
    let problem = make_angle_block::<f64>(
        8,
        &AngleRule::PowerDecay { c: 0.8, alpha: 0.7 },
        2,
    )
    .unwrap();
    let cfg = PowerIterConfig::default();
    let t = Arc::new(problem.operator().linear_op().unwrap()) as Arc<dyn LinearOp<f64>>;
    for k in 1..=10 {
        let tk = PowerOp::new(t.clone(), k).unwrap();
        let estimated = operator_norm(&tk, &cfg).unwrap();
        let exact = problem.exact_error_norm(k).unwrap();
        assert!(
            (estimated - exact).abs() <= 1e-8 * exact.max(1e-12),
            "k = {k}: {estimated} vs {exact}"
        );
    }
}

#[test]
fn block_closed_forms_for_base_quantities() {
    let problem = make_angle_block::<f64>(
        6,
        &AngleRule::PowerDecay { c: 0.9, alpha: 0.9 },
        2,
    )
    .unwrap();
    let space = problem.product_space();
    let cfg = PowerIterConfig::default();
    let max_over = |f: &dyn Fn(f64, f64) -> f64| {
        problem
            .cosines()
            .iter()
            .map(|&c| {
                let s = (1.0 - c * c).sqrt();
                f(c, s)
            })
            .fold(0.0f64, f64::max)
    };
    for k in 2..=6usize {
        let e = 2 * k as i32 - 1;
        let cases: [(NormQuantity, f64); 5] = [
            (
                NormQuantity::Increment,
                max_over(&|c, s| c.powi(e - 2) * s * s),
            ),
            (
                NormQuantity::PerpAfterPower,
                max_over(&|c, s| c.powi(e) * s),
            ),
            (
                NormQuantity::PowerAfterPerp,
                max_over(&|c, s| c.powi(e) * s),
            ),
            (
                NormQuantity::IncrementAfterPerp,
                max_over(&|c, s| c.powi(e - 2) * s * s * s),
            ),
            (
                NormQuantity::PerpPowerPerp,
                max_over(&|c, s| c.powi(e) * s * s),
            ),
        ];
        for (quantity, expected) in cases {
            let got = space.norm_quantity(quantity, k, &cfg).unwrap();
            assert!(
                (got - expected).abs() <= 1e-7 * expected.max(1e-9),
                "k = {k}, {quantity:?}: {got} vs closed form {expected}"
            );
        }
        // (vi) equals (i) exactly, and for this family (vii) = (ii)/sqrt(2)
        // because only one complement term survives.
        let vi = space
            .norm_quantity(NormQuantity::ProductIncrement, k, &cfg)
            .unwrap();
        assert!((vi - cases[0].1).abs() <= 1e-7 * cases[0].1.max(1e-9));
        let vii = space
            .norm_quantity(NormQuantity::ProductPerpAfterPower, k, &cfg)
            .unwrap();
        let expected_vii = cases[1].1 / 2.0f64.sqrt();
        assert!(
            (vii - expected_vii).abs() <= 1e-7 * expected_vii.max(1e-9),
            "k = {k}: (vii) {vii} vs {expected_vii}"
        );
    }
}

#[test]
fn product_quantities_match_dense_svd_on_random_instance() {
    let subspaces = random_subspaces(7, 7, &[3, 2, 3]);
    let complements: Vec<Arc<dyn cyclic_projections::sets::Projectable<f64>>> = subspaces
        .iter()
        .map(|s| Arc::new(s.complement()) as Arc<dyn cyclic_projections::sets::Projectable<f64>>)
        .collect();
    let m_proj = intersect(&subspaces).unwrap();
    let space = cyclic_projections::product::ProductSpace::new(
        subspaces
            .iter()
            .cloned()
            .map(|s| Arc::new(s) as Arc<dyn cyclic_projections::sets::Projectable<f64>>)
            .collect(),
        complements.clone(),
        Arc::new(m_proj),
    )
    .unwrap();
    let cfg = PowerIterConfig::default();
    let m = subspaces.len();
    let d = 7;

    // Dense route: assemble the flattened product operators explicitly.
    let t_dense = {
        let op = space.base_operator().linear_op().unwrap();
        dense_matrix_of(&op)
    };
    let pd_dense = {
        let mut mat = nalgebra::DMatrix::<f64>::zeros(m * d, m * d);
        for bi in 0..m {
            for bj in 0..m {
                for i in 0..d {
                    mat[(bi * d + i, bj * d + i)] = 1.0 / m as f64;
                }
            }
        }
        mat
    };
    let cperp_dense = {
        let mut mat = nalgebra::DMatrix::<f64>::zeros(m * d, m * d);
        for (bi, comp) in complements.iter().enumerate() {
            for j in 0..d {
                let col = comp.project(&Vector::unit(d, j));
                for i in 0..d {
                    mat[(bi * d + i, bi * d + j)] = col.as_slice()[i];
                }
            }
        }
        mat
    };
    let bold = |mat: &nalgebra::DMatrix<f64>| {
        let mut big = nalgebra::DMatrix::<f64>::zeros(m * d, m * d);
        for b in 0..m {
            big.view_mut((b * d, b * d), (d, d)).copy_from(mat);
        }
        big
    };

    for k in 1..=4usize {
        let tk = t_dense.pow(k as u32);
        let tk1 = t_dense.pow(k as u32 - 1);
        let bold_inc = bold(&(&tk - &tk1));
        let bold_tk = bold(&tk);
        let checks = [
            (NormQuantity::ProductIncrement, &bold_inc * &pd_dense),
            (
                NormQuantity::ProductPerpAfterPower,
                &cperp_dense * &bold_tk * &pd_dense,
            ),
            (
                NormQuantity::ProductPowerAfterPerp,
                &bold_tk * &pd_dense * &cperp_dense,
            ),
            (
                NormQuantity::ProductIncrementAfterPerp,
                &bold_inc * &pd_dense * &cperp_dense,
            ),
            (
                NormQuantity::ProductPerpPowerPerp,
                &cperp_dense * &bold_tk * &pd_dense * &cperp_dense,
            ),
        ];
        for (quantity, dense) in checks {
            let got = space.norm_quantity(quantity, k, &cfg).unwrap();
            let oracle = common::top_singular_value(dense);
            assert!(
                (got - oracle).abs() <= 1e-7 * oracle.max(1e-9),
                "k = {k}, {quantity:?}: {got} vs dense {oracle}"
            );
        }
    }
}

#[test]
fn friedrichs_cosine_matches_error_norm_identity() {
    // Independent route: for m = 2, ||T - P_M|| equals the Friedrichs cosine.
    let cfg = PowerIterConfig::default();
    for seed in 0..6u64 {
        let d = 6;
        let subspaces = random_subspaces(300 + seed, d, &[2, 3]);
        let cos = friedrichs_cosine(&subspaces[0], &subspaces[1]).unwrap();
        let m_proj = intersect(&subspaces).unwrap();
        let ops: Vec<Arc<dyn LinearOp<f64>>> = vec![
            Arc::new(subspaces[1].clone().into_linear_op()),
            Arc::new(subspaces[0].clone().into_linear_op()),
        ];
        let t = Arc::new(compose(ops).unwrap()) as Arc<dyn LinearOp<f64>>;
        let pm = Arc::new(
            ProjectorOp::new(Arc::new(m_proj) as Arc<dyn cyclic_projections::sets::Projectable<f64>>)
                .unwrap(),
        ) as Arc<dyn LinearOp<f64>>;
        let diff = DiffOp::new(t, pm).unwrap();
        let norm = operator_norm(&diff, &cfg).unwrap();
        assert!(
            (norm - cos).abs() <= 1e-7 * cos.max(1e-9),
            "seed {seed}: ||T - P_M|| = {norm}, friedrichs = {cos}"
        );
    }
}

#[test]
fn intersect_recovers_planted_common_subspace() {
    let d = 8;
    for seed in 0..5u64 {
        let mut rng = rng_from_seed(400 + seed);
        let planted: Vec<Vector<f64>> = (0..2).map(|_| gaussian_vector(d, &mut rng)).collect();
        let subspaces: Vec<Subspace<f64>> = (0..3)
            .map(|_| {
                let mut spanning = planted.clone();
                spanning.push(gaussian_vector(d, &mut rng));
                Subspace::span(&spanning)
            })
            .collect();
        let meet = intersect(&subspaces).unwrap();
        assert_eq!(meet.dim(), 2, "seed {seed}");
        for v in &planted {
            assert!(
                (&meet.project(v) - v).norm() <= 1e-7 * v.norm(),
                "planted vector not fixed by the intersection projector"
            );
        }
    }
}
