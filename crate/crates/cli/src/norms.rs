//! The `norms` subcommand: the ten operator-norm quantities per power `k`,
//! with threshold classification of each decaying column.

use serde::Serialize;

use cyclic_projections::linalg::PowerIterConfig;
use cyclic_projections::metrics::{threshold_classify, ThresholdReport};
use cyclic_projections::product::NormQuantity;

use crate::config::ExperimentConfig;
use crate::problem::build_problem;
use crate::CliError;

/// Default epsilon grid for the threshold verdicts.
pub const EPS_GRID: [f64; 2] = [0.1, 0.5];

#[derive(Debug, Serialize)]
pub struct NormsSummary {
    pub problem: String,
    pub k_max: usize,
    pub window: (usize, usize),
    pub thresholds: Vec<Option<ThresholdReport<f64>>>,
    pub threshold_notes: Vec<String>,
    pub failures: Vec<String>,
}

pub struct NormsArtifacts {
    pub csv: String,
    pub summary: NormsSummary,
}

impl NormsArtifacts {
    pub fn passed(&self) -> bool {
        self.summary.failures.is_empty()
    }
}

/// Evaluates the norm table for `k = 1..=k_max` on a subspace-mode problem.
pub fn execute_norms(
    config: &ExperimentConfig,
    k_max: usize,
    window: Option<(usize, usize)>,
) -> Result<NormsArtifacts, CliError> {
    if k_max == 0 {
        return Err(CliError::Config("k must be at least 1".into()));
    }
    let handle = build_problem(&config.problem, config.seed)?;
    if !handle.subspace_mode() {
        return Err(CliError::Config(
            "norm tables require a subspace-mode problem".into(),
        ));
    }
    let space = handle.product_space()?;
    let pi_config = PowerIterConfig::default();

    let mut csv = String::new();
    csv.push_str("k");
    for q in NormQuantity::ALL {
        csv.push(',');
        csv.push_str(q.label());
    }
    csv.push('\n');

    let mut failures = Vec::new();
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); NormQuantity::ALL.len()];
    for k in 1..=k_max {
        csv.push_str(&k.to_string());
        for (qi, q) in NormQuantity::ALL.into_iter().enumerate() {
            csv.push(',');
            match space.norm_quantity(q, k, &pi_config) {
                Ok(value) => {
                    csv.push_str(&format!("{value:e}"));
                    columns[qi].push((k, value));
                }
                Err(e) => {
                    failures.push(format!("quantity ({}) at k={k}: {e}", q.label()));
                }
            }
        }
        csv.push('\n');
    }

    let window = window.unwrap_or(((k_max / 5).max(1), k_max));
    let mut thresholds = Vec::with_capacity(NormQuantity::ALL.len());
    let mut threshold_notes = Vec::new();
    for (qi, q) in NormQuantity::ALL.into_iter().enumerate() {
        match threshold_classify(
            q.label(),
            &columns[qi],
            q.decay_exponent(),
            &EPS_GRID,
            window,
        ) {
            Ok(report) => thresholds.push(Some(report)),
            Err(e) => {
                thresholds.push(None);
                threshold_notes.push(format!("quantity ({}): {e}", q.label()));
            }
        }
    }

    Ok(NormsArtifacts {
        csv,
        summary: NormsSummary {
            problem: handle.name,
            k_max,
            window,
            thresholds,
            threshold_notes,
            failures,
        },
    })
}
