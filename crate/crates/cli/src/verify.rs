//! The `verify` subcommand: seeded invariant suites with one violation
//! record per failed check.

use serde::Serialize;

use cyclic_projections::cyclic::{complex_apply_t, complex_inner, ComplexVector};
use cyclic_projections::gallery::{make_random_convex, make_random_subspaces};
use cyclic_projections::linalg::{PowerIterConfig, Vector};
use cyclic_projections::metrics::{check_lemma31, metrics_at};
use cyclic_projections::random::{derive_seed, gaussian_vector, rng_from_seed};
use cyclic_projections::sets::{friedrichs_cosine, Projectable};

use crate::CliError;

pub const PROJECTOR_INSTANCES: usize = 20;
pub const LEMMA31_INSTANCES: usize = 100;
pub const LEMMA31_SWEEPS: usize = 50;
pub const LEMMA23_INSTANCES: usize = 50;
pub const LEMMA23_MAX_POWER: usize = 8;
pub const COMMUTATION_PROBES: usize = 100;
pub const COMPLEXIFY_PROBES: usize = 100;

#[derive(Debug, Serialize)]
pub struct SuiteViolation {
    pub instance_seed: u64,
    pub location: String,
    pub margin: f64,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub violations: Vec<SuiteViolation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Recorder {
    checks: usize,
    violations: Vec<SuiteViolation>,
}

impl Recorder {
    fn new() -> Self {
        Self {
            checks: 0,
            violations: Vec::new(),
        }
    }

    /// Asserts `value <= bound`; the margin records the overshoot.
    fn le(&mut self, instance_seed: u64, location: &str, value: f64, bound: f64) {
        self.checks += 1;
        if value > bound {
            self.violations.push(SuiteViolation {
                instance_seed,
                location: location.to_string(),
                margin: value - bound,
            });
        }
    }
}

pub const SUITES: [&str; 5] = ["projectors", "lemma31", "lemma23", "commutation", "complexify"];

/// Runs one named suite, or all of them.
pub fn run_suites(name: &str, seed: u64) -> Result<Vec<SuiteReport>, CliError> {
    match name {
        "projectors" => Ok(vec![projectors_suite(seed)]),
        "lemma31" => Ok(vec![lemma31_suite(seed)]),
        "lemma23" => Ok(vec![lemma23_suite(seed)]),
        "commutation" => Ok(vec![commutation_suite(seed)]),
        "complexify" => Ok(vec![complexify_suite(seed)]),
        "all" => Ok(vec![
            projectors_suite(seed),
            lemma31_suite(seed),
            lemma23_suite(seed),
            commutation_suite(seed),
            complexify_suite(seed),
        ]),
        other => Err(CliError::Usage(format!(
            "unknown suite '{other}'; expected one of {SUITES:?} or 'all'"
        ))),
    }
}

/// Projector identities: orthonormality, idempotence, self-adjointness,
/// complements, intersection absorption, Friedrichs cosines below one and
/// firm nonexpansiveness of the convex projections.
pub fn projectors_suite(seed: u64) -> SuiteReport {
    let mut rec = Recorder::new();
    for instance in 0..PROJECTOR_INSTANCES as u64 {
        let instance_seed = derive_seed(seed, 10_000 + instance);
        let mut rng = rng_from_seed(derive_seed(instance_seed, 1));
        let d = 5 + (instance as usize % 4);
        let bundle =
            make_random_subspaces::<f64>(d, &[2, d / 2, 2], instance_seed).expect("valid dims");
        for s in &bundle.subspaces {
            rec.le(
                instance_seed,
                "basis orthonormality",
                s.basis().orthonormality_residual(),
                1e-10,
            );
        }
        for _ in 0..10 {
            let x: Vector<f64> = gaussian_vector(d, &mut rng);
            let y: Vector<f64> = gaussian_vector(d, &mut rng);
            for (i, s) in bundle.subspaces.iter().enumerate() {
                let px = s.project(&x);
                rec.le(
                    instance_seed,
                    &format!("idempotence of P_{i}"),
                    s.project(&px).distance_to(&px),
                    1e-10,
                );
                let sym = (crate::inner(&px, &y) - crate::inner(&x, &s.project(&y))).abs();
                rec.le(instance_seed, &format!("self-adjointness of P_{i}"), sym, 1e-10);
                let comp = &bundle.complements[i];
                let sum = &px + &comp.project(&x);
                rec.le(
                    instance_seed,
                    &format!("complement identity for set {i}"),
                    sum.distance_to(&x),
                    1e-10,
                );
                // P_{M_i} P_M = P_M and P_{M_i^perp} P_M = 0.
                let pm = bundle.intersection.project(&x);
                rec.le(
                    instance_seed,
                    &format!("P_{i} absorbs P_M"),
                    s.project(&pm).distance_to(&pm),
                    1e-9,
                );
                rec.le(
                    instance_seed,
                    &format!("complement {i} annihilates P_M"),
                    comp.project(&pm).norm(),
                    1e-9,
                );
            }
        }
        let cos = friedrichs_cosine(&bundle.subspaces[0], &bundle.subspaces[1])
            .expect("ambient dims match");
        rec.checks += 1;
        if !(cos < 1.0) {
            rec.violations.push(SuiteViolation {
                instance_seed,
                location: "friedrichs cosine below one".into(),
                margin: cos - 1.0,
            });
        }
        // Firm nonexpansiveness over the convex variants.
        let convex = make_random_convex::<f64>(d, 4, derive_seed(instance_seed, 2))
            .expect("valid convex instance");
        for _ in 0..10 {
            let x: Vector<f64> = gaussian_vector(d, &mut rng);
            let y: Vector<f64> = gaussian_vector(d, &mut rng);
            for (i, set) in convex.sets.iter().enumerate() {
                let px = set.project(&x);
                let py = set.project(&y);
                let lhs = (&px - &py).norm_squared();
                let rhs = crate::inner(&(&px - &py), &(&x - &y));
                rec.le(
                    instance_seed,
                    &format!("firm nonexpansiveness of convex set {i}"),
                    lhs - rhs,
                    1e-9,
                );
            }
        }
    }
    SuiteReport {
        suite: "projectors".into(),
        seed,
        instances: PROJECTOR_INSTANCES,
        checks: rec.checks,
        violations: rec.violations,
    }
}

/// Distance inequalities along convex trajectories, including the sharp
/// odd-m constant.
pub fn lemma31_suite(seed: u64) -> SuiteReport {
    let mut rec = Recorder::new();
    for instance in 0..LEMMA31_INSTANCES as u64 {
        let instance_seed = derive_seed(seed, 20_000 + instance);
        let mut rng = rng_from_seed(derive_seed(instance_seed, 1));
        let d = 2 + (instance as usize % 9); // d <= 10
        let m = 1 + (instance as usize % 5); // m <= 5
        let bundle = make_random_convex::<f64>(d, m, instance_seed).expect("valid instance");
        let op = bundle.operator();
        let y0 = gaussian_vector::<f64, _>(d, &mut rng).scale(2.0);
        let sets = bundle.projectable_sets();
        let mut rows = Vec::with_capacity(LEMMA31_SWEEPS);
        let mut d_prev = Vec::with_capacity(LEMMA31_SWEEPS);
        let mut prev = y0.clone();
        cyclic_projections::cyclic::run_trajectory(
            &op,
            y0,
            LEMMA31_SWEEPS,
            1,
            |k, y, y_prev| {
                rows.push(metrics_at(k, y, y_prev, &sets, None));
                d_prev.push(prev.distance_to(&bundle.witness));
                prev = y.clone();
            },
        )
        .expect("finite trajectory");
        let report = check_lemma31(&rows, &d_prev, m, 1e-9).expect("aligned rows");
        rec.checks += 2 * rows.len() + if m % 2 == 1 { rows.len() } else { 0 };
        for v in report.violations {
            rec.violations.push(SuiteViolation {
                instance_seed,
                location: format!("{} at k={}", v.check, v.k),
                margin: v.margin,
            });
        }
    }
    SuiteReport {
        suite: "lemma31".into(),
        seed,
        instances: LEMMA31_INSTANCES,
        checks: rec.checks,
        violations: rec.violations,
    }
}

/// Product/base norm sandwiches and the increment equality over random
/// subspace instances.
pub fn lemma23_suite(seed: u64) -> SuiteReport {
    let mut rec = Recorder::new();
    let config = PowerIterConfig::default();
    for instance in 0..LEMMA23_INSTANCES as u64 {
        let instance_seed = derive_seed(seed, 30_000 + instance);
        let d = 8 + (instance as usize % 5); // d in 8..=12
        let dims = [2 + (instance as usize % 3), 3, d / 3];
        let bundle =
            make_random_subspaces::<f64>(d, &dims, instance_seed).expect("valid dims");
        let space = bundle.product_space();
        for k in 1..=LEMMA23_MAX_POWER {
            let report = space
                .verify_norm_sandwich(k, &config)
                .expect("norm estimation converges");
            rec.checks += 2 * report.chains.len() + 1;
            for chain in &report.chains {
                if !chain.lower_ok {
                    rec.violations.push(SuiteViolation {
                        instance_seed,
                        location: format!("lower bound of {} at k={k}", chain.name),
                        margin: -chain.lower_margin,
                    });
                }
                if !chain.upper_ok {
                    rec.violations.push(SuiteViolation {
                        instance_seed,
                        location: format!("upper bound of {} at k={k}", chain.name),
                        margin: -chain.upper_margin,
                    });
                }
            }
            if !report.increment_equality_ok {
                rec.violations.push(SuiteViolation {
                    instance_seed,
                    location: format!("increment equality at k={k}"),
                    margin: (report.increment_product - report.increment_base).abs(),
                });
            }
        }
    }
    SuiteReport {
        suite: "lemma23".into(),
        seed,
        instances: LEMMA23_INSTANCES,
        checks: rec.checks,
        violations: rec.violations,
    }
}

/// Commutation of the componentwise projectors (and of the componentwise
/// cyclic product) with the diagonal projector.
pub fn commutation_suite(seed: u64) -> SuiteReport {
    let mut rec = Recorder::new();
    let instances = 5usize;
    for instance in 0..instances as u64 {
        let instance_seed = derive_seed(seed, 40_000 + instance);
        let mut rng = rng_from_seed(derive_seed(instance_seed, 1));
        let d = 6 + (instance as usize % 3);
        let bundle = make_random_subspaces::<f64>(d, &[3, 2, 3], instance_seed)
            .expect("valid dims");
        let space = bundle.product_space();
        for probe in 0..COMMUTATION_PROBES {
            let x = cyclic_projections::product::ProductVector::new(
                (0..space.m()).map(|_| gaussian_vector(d, &mut rng)).collect(),
            )
            .expect("equal dims");
            for i in 0..space.m() {
                rec.le(
                    instance_seed,
                    &format!("projector commutation i={i} probe={probe}"),
                    space.commutation_residual(i, &x).expect("valid index"),
                    1e-10,
                );
            }
            rec.le(
                instance_seed,
                &format!("cyclic product commutation probe={probe}"),
                space.t_commutation_residual(&x).expect("valid input"),
                1e-10,
            );
        }
    }
    SuiteReport {
        suite: "commutation".into(),
        seed,
        instances,
        checks: rec.checks,
        violations: rec.violations,
    }
}

/// Complexification identities: the norm identity, the componentwise
/// action under iteration, and conjugate symmetry of the inner product.
pub fn complexify_suite(seed: u64) -> SuiteReport {
    let mut rec = Recorder::new();
    let instances = 4usize;
    for instance in 0..instances as u64 {
        let instance_seed = derive_seed(seed, 50_000 + instance);
        let mut rng = rng_from_seed(derive_seed(instance_seed, 1));
        let d = 5 + (instance as usize % 4);
        let bundle = make_random_subspaces::<f64>(d, &[2, 3], instance_seed)
            .expect("valid dims");
        let op = bundle.operator();
        for probe in 0..COMPLEXIFY_PROBES {
            let z = ComplexVector::new(gaussian_vector(d, &mut rng), gaussian_vector(d, &mut rng))
                .expect("equal dims");
            // Norm identity through the inner-product route.
            let (re_zz, im_zz): (f64, f64) = complex_inner(&z, &z).expect("equal dims");
            let direct = z.re.norm_squared() + z.im.norm_squared();
            rec.le(
                instance_seed,
                &format!("norm identity probe={probe}"),
                (re_zz - direct).abs().max(im_zz.abs()),
                1e-12,
            );
            // k-fold complex application versus separately iterated slices.
            let mut zk = z.clone();
            let mut re_k = z.re.clone();
            let mut im_k = z.im.clone();
            for _ in 0..3 {
                zk = complex_apply_t(&op, &zk).expect("subspace mode");
                re_k = op.apply(&re_k).expect("dims match");
                im_k = op.apply(&im_k).expect("dims match");
            }
            let action_residual =
                (zk.re.distance_to(&re_k)).max(zk.im.distance_to(&im_k));
            rec.le(
                instance_seed,
                &format!("componentwise action probe={probe}"),
                action_residual,
                1e-12,
            );
            // ||T z||^2 = ||T re||^2 + ||T im||^2.
            let tz = complex_apply_t(&op, &z).expect("subspace mode");
            let split = op.apply(&z.re).unwrap().norm_squared()
                + op.apply(&z.im).unwrap().norm_squared();
            rec.le(
                instance_seed,
                &format!("norm identity under T probe={probe}"),
                (tz.norm_squared() - split).abs(),
                1e-12,
            );
        }
    }
    SuiteReport {
        suite: "complexify".into(),
        seed,
        instances,
        checks: rec.checks,
        violations: rec.violations,
    }
}
