//! Assembly of problem instances from configuration.

use std::sync::Arc;

use cyclic_projections::cyclic::{gen_start_in_xp, gen_start_in_y, StartCertificate};
use cyclic_projections::gallery::{
    make_angle_block, make_random_convex, make_random_subspaces, AngleRule,
};
use cyclic_projections::linalg::Vector;
use cyclic_projections::random::{derive_seed, gaussian_vector, rng_from_seed};
use cyclic_projections::sets::{intersect, Projectable, Subspace};
use cyclic_projections::{AngleBlockProblem64, CyclicOperator64, ProductSpace64, Vector64};

use crate::config::{ProblemSpec, RuleSpec, StartSpec};
use crate::CliError;

/// A fully assembled instance: the projectable sets plus whatever
/// structure the problem admits (complements, intersection, witness).
pub struct ProblemHandle {
    pub name: String,
    pub sets: Vec<Arc<dyn Projectable<f64>>>,
    /// Complement projectors, present in subspace mode.
    pub complements: Option<Vec<Arc<dyn Projectable<f64>>>>,
    /// Basis-backed complements, when available for drawing `Y` starts.
    pub basis_complements: Option<Vec<Subspace<f64>>>,
    /// Basis-backed intersection `M`, present in subspace mode.
    pub m_subspace: Option<Subspace<f64>>,
    /// A known intersection point, present in convex mode.
    pub witness: Option<Vector64>,
    /// The block-gallery problem, when that is what was built.
    pub angle_block: Option<AngleBlockProblem64>,
}

impl ProblemHandle {
    pub fn ambient_dim(&self) -> usize {
        self.sets[0].ambient_dim()
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn operator(&self) -> CyclicOperator64 {
        cyclic_projections::cyclic::CyclicOperator::new(self.sets.clone())
            .expect("assembled sets are consistent")
    }

    pub fn subspace_mode(&self) -> bool {
        self.sets.iter().all(|s| s.is_subspace())
    }

    /// The Pierra lift; requires subspace mode.
    pub fn product_space(&self) -> Result<ProductSpace64, CliError> {
        let complements = self
            .complements
            .clone()
            .ok_or_else(|| CliError::Config("problem has no complement projectors".into()))?;
        let m_proj = self
            .m_subspace
            .clone()
            .ok_or_else(|| CliError::Config("problem has no intersection projector".into()))?;
        ProductSpace64::new(self.sets.clone(), complements, Arc::new(m_proj))
            .map_err(|e| CliError::Config(format!("cannot lift to the product space: {e}")))
    }
}

pub fn build_problem(spec: &ProblemSpec, seed: u64) -> Result<ProblemHandle, CliError> {
    match spec {
        ProblemSpec::AngleBlock { blocks, m, rule } => {
            let rule = match rule {
                RuleSpec::Constant { theta_degrees } => AngleRule::Constant {
                    theta: theta_degrees.to_radians(),
                },
                RuleSpec::PowerDecay { c, alpha } => AngleRule::PowerDecay {
                    c: *c,
                    alpha: *alpha,
                },
                RuleSpec::HarmonicRatio => AngleRule::HarmonicRatio,
            };
            let problem = make_angle_block::<f64>(*blocks, &rule, *m)
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(ProblemHandle {
                name: format!("angle_block(blocks={blocks}, m={m})"),
                sets: problem.sets(),
                complements: Some(problem.complements()),
                basis_complements: None,
                m_subspace: Some(problem.intersection()),
                witness: None,
                angle_block: Some(problem),
            })
        }
        ProblemSpec::RandomSubspaces { dim, subspace_dims } => {
            let bundle = make_random_subspaces::<f64>(*dim, subspace_dims, seed)
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(ProblemHandle {
                name: format!("random_subspaces(dim={dim}, dims={subspace_dims:?}, seed={seed})"),
                sets: bundle.sets(),
                complements: Some(bundle.complement_sets()),
                basis_complements: Some(
                    bundle.complements.iter().map(|c| (**c).clone()).collect(),
                ),
                m_subspace: Some((*bundle.intersection).clone()),
                witness: None,
                angle_block: None,
            })
        }
        ProblemSpec::RandomConvex { dim, sets } => {
            let bundle = make_random_convex::<f64>(*dim, *sets, seed)
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(ProblemHandle {
                name: format!("random_convex(dim={dim}, sets={sets}, seed={seed})"),
                sets: bundle.projectable_sets(),
                complements: None,
                basis_complements: None,
                m_subspace: None,
                witness: Some(bundle.witness),
                angle_block: None,
            })
        }
        ProblemSpec::ExplicitSubspaces {
            ambient_dim,
            spanning_sets,
        } => {
            let subspaces: Vec<Subspace<f64>> = spanning_sets
                .iter()
                .map(|set| {
                    if set.is_empty() {
                        return Ok(Subspace::zero(*ambient_dim));
                    }
                    let vectors: Result<Vec<Vector<f64>>, CliError> = set
                        .iter()
                        .map(|coords| {
                            Vector::new(coords.clone())
                                .map_err(|e| CliError::Config(e.to_string()))
                        })
                        .collect();
                    Ok(Subspace::span(&vectors?))
                })
                .collect::<Result<_, CliError>>()?;
            let m_subspace =
                intersect(&subspaces).map_err(|e| CliError::Config(e.to_string()))?;
            let basis_complements: Vec<Subspace<f64>> =
                subspaces.iter().map(|s| s.complement()).collect();
            Ok(ProblemHandle {
                name: format!(
                    "explicit_subspaces(ambient_dim={ambient_dim}, m={})",
                    subspaces.len()
                ),
                complements: Some(
                    basis_complements
                        .iter()
                        .map(|c| Arc::new(c.clone()) as Arc<dyn Projectable<f64>>)
                        .collect(),
                ),
                basis_complements: Some(basis_complements),
                m_subspace: Some(m_subspace),
                witness: None,
                angle_block: None,
                sets: subspaces
                    .into_iter()
                    .map(|s| Arc::new(s) as Arc<dyn Projectable<f64>>)
                    .collect(),
            })
        }
    }
}

/// Draws the configured starting point. The seed is derived from the
/// experiment seed so the problem and the start use independent streams.
pub fn build_start(
    handle: &ProblemHandle,
    start: &StartSpec,
    seed: u64,
    scale: f64,
) -> Result<(Vector64, StartCertificate<f64>), CliError> {
    let start_seed = derive_seed(seed, 1);
    match start {
        StartSpec::Generic => {
            let mut rng = rng_from_seed(start_seed);
            let y0 = gaussian_vector::<f64, _>(handle.ambient_dim(), &mut rng).scale(scale);
            Ok((y0, StartCertificate::Generic))
        }
        StartSpec::InY => {
            if let Some(problem) = &handle.angle_block {
                return Ok(problem.y_start(start_seed, scale));
            }
            let (m_subspace, complements) = match (&handle.m_subspace, &handle.basis_complements) {
                (Some(m), Some(c)) => (m, c),
                _ => {
                    return Err(CliError::Config(
                        "in_y starts need a subspace-mode problem".into(),
                    ))
                }
            };
            Ok(gen_start_in_y(m_subspace, complements, start_seed, scale))
        }
        StartSpec::InXp { p } => {
            let m_subspace = handle.m_subspace.as_ref().ok_or_else(|| {
                CliError::Config("in_xp starts need a subspace-mode problem".into())
            })?;
            gen_start_in_xp(&handle.operator(), m_subspace, *p, start_seed, scale)
                .map_err(|e| CliError::Config(e.to_string()))
        }
    }
}
