//! The `run` subcommand: one trajectory, streamed metrics, hard
//! monotonicity assertions, CSV rows and a JSON summary.

use std::collections::BTreeMap;

use serde::Serialize;

use cyclic_projections::cyclic::run_trajectory;
use cyclic_projections::metrics::{fit_rate, metrics_at, MetricRow, RateFit};
use cyclic_projections::sets::Projectable;

use crate::config::{ExperimentConfig, StartSpec};
use crate::problem::{build_problem, build_start};
use crate::CliError;

/// Slacks for the streamed monotonicity assertions.
const INCREMENT_SLACK: f64 = 1e-12;
const FEJER_SLACK: f64 = 1e-12;
const SQNE_SLACK: f64 = 1e-10;
const SUMMABILITY_SLACK: f64 = 1e-10;

pub const CSV_HEADER: &str = "k,error,avg_dist,max_dist,increment,k12_error,k1_avg,k32_increment";

#[derive(Debug, Serialize)]
pub struct CertificateSummary {
    pub reassembly_residual: Option<f64>,
    pub max_membership_residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub problem: String,
    pub start: String,
    pub seed: u64,
    pub iterations: usize,
    pub window: (usize, usize),
    pub subspace_mode: bool,
    pub y0_norm: f64,
    pub certificate: Option<CertificateSummary>,
    pub final_error: Option<f64>,
    pub final_avg_dist: f64,
    pub final_increment: f64,
    pub rate_fits: BTreeMap<String, Option<RateFit<f64>>>,
    pub fit_notes: Vec<String>,
    pub violations: Vec<String>,
}

pub struct RunArtifacts {
    pub csv: String,
    pub summary: RunSummary,
    pub rows: Vec<MetricRow<f64>>,
}

impl RunArtifacts {
    pub fn passed(&self) -> bool {
        self.summary.violations.is_empty()
    }
}

fn fmt_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:e}"),
        None => String::new(),
    }
}

fn csv_line(row: &MetricRow<f64>) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        row.k,
        fmt_cell(row.error),
        fmt_cell(Some(row.avg_dist)),
        fmt_cell(Some(row.max_dist)),
        fmt_cell(Some(row.increment)),
        fmt_cell(row.k12_error),
        fmt_cell(Some(row.k1_avg)),
        fmt_cell(Some(row.k32_increment)),
    )
}

/// Runs the configured experiment. Violations of the streamed assertions
/// are collected into the summary; callers map them to a nonzero exit.
pub fn execute_run(config: &ExperimentConfig) -> Result<RunArtifacts, CliError> {
    config.validate()?;
    let handle = build_problem(&config.problem, config.seed)?;
    let (y0, certificate) = build_start(&handle, &config.start, config.seed, config.scale)?;
    let op = handle.operator();
    let subspace_mode = op.subspace_mode();

    let pm_y0 = handle
        .m_subspace
        .as_ref()
        .map(|m| m.project(&y0))
        .filter(|_| subspace_mode);
    // Fejér reference: the projection of the start onto the intersection in
    // subspace mode, the generated witness in convex mode.
    let fejer_target = pm_y0.clone().or_else(|| handle.witness.clone());

    let certificate_summary = match &certificate {
        cyclic_projections::cyclic::StartCertificate::Generic => None,
        _ => {
            let m_proj: Box<dyn Projectable<f64>> = match &handle.m_subspace {
                Some(m) => Box::new(m.clone()),
                None => {
                    return Err(CliError::Config(
                        "structured starts need a subspace-mode problem".into(),
                    ))
                }
            };
            let complements = handle.complements.clone().unwrap_or_default();
            let check = certificate
                .verify(&y0, &op, m_proj.as_ref(), &complements)
                .map_err(|e| CliError::Config(e.to_string()))?;
            Some(CertificateSummary {
                reassembly_residual: check.reassembly_residual,
                max_membership_residual: check
                    .membership_residuals
                    .iter()
                    .cloned()
                    .fold(None, |acc: Option<f64>, r| {
                        Some(acc.map_or(r, |a| a.max(r)))
                    }),
            })
        }
    };

    let mut rows: Vec<MetricRow<f64>> = Vec::with_capacity(config.iterations);
    let mut violations: Vec<String> = Vec::new();
    let mut prev_increment: Option<f64> = None;
    let mut prev_fejer: Option<f64> = fejer_target.as_ref().map(|z| y0.distance_to(z));
    let mut increment_sq_sum = 0.0f64;
    let initial_fejer_sq = prev_fejer.map(|d| d * d);
    let m = op.m() as f64;

    run_trajectory(&op, y0.clone(), config.iterations, 2, |k, y, y_prev| {
        let row = metrics_at(k, y, y_prev, handle.sets.as_slice(), pm_y0.as_ref());
        if let Some(prev) = prev_increment {
            if row.increment > prev + INCREMENT_SLACK {
                violations.push(format!(
                    "increment increased at k={k}: {} > {}",
                    row.increment, prev
                ));
            }
        }
        prev_increment = Some(row.increment);
        if let Some(z) = &fejer_target {
            let fejer = y.distance_to(z);
            if let Some(prev) = prev_fejer {
                if fejer > prev + FEJER_SLACK {
                    violations.push(format!(
                        "distance to the intersection increased at k={k}: {fejer} > {prev}"
                    ));
                }
                let lhs = row.increment * row.increment;
                let rhs = m * (prev * prev - fejer * fejer);
                if lhs > rhs + SQNE_SLACK {
                    violations.push(format!(
                        "quasi-nonexpansiveness violated at k={k}: {lhs} > {rhs}"
                    ));
                }
            }
            prev_fejer = Some(fejer);
        }
        increment_sq_sum += row.increment * row.increment;
        rows.push(row);
    })
    .map_err(CliError::Iteration)?;

    if let Some(d0_sq) = initial_fejer_sq {
        if increment_sq_sum > m * d0_sq + SUMMABILITY_SLACK {
            violations.push(format!(
                "summability violated: sum of squared increments {increment_sq_sum} > m * {d0_sq}"
            ));
        }
    }

    let window = config.effective_window();
    let mut rate_fits: BTreeMap<String, Option<RateFit<f64>>> = BTreeMap::new();
    let mut fit_notes = Vec::new();
    let series_of = |f: &dyn Fn(&MetricRow<f64>) -> Option<f64>| -> Vec<(usize, f64)> {
        rows.iter().filter_map(|r| f(r).map(|v| (r.k, v))).collect()
    };
    let fits: [(&str, Vec<(usize, f64)>); 3] = [
        ("error", series_of(&|r| r.error)),
        ("avg_dist", series_of(&|r| Some(r.avg_dist))),
        ("increment", series_of(&|r| Some(r.increment))),
    ];
    for (label, series) in fits {
        if series.is_empty() {
            rate_fits.insert(label.to_string(), None);
            fit_notes.push(format!("{label}: series not defined for this run"));
            continue;
        }
        match fit_rate(&series, window) {
            Ok(fit) => {
                rate_fits.insert(label.to_string(), Some(fit));
            }
            Err(e) => {
                rate_fits.insert(label.to_string(), None);
                fit_notes.push(format!("{label}: {e}"));
            }
        }
    }

    let mut csv = String::with_capacity(rows.len() * 64 + CSV_HEADER.len() + 1);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&csv_line(row));
        csv.push('\n');
    }

    let last = rows.last().expect("at least one iteration");
    let summary = RunSummary {
        problem: handle.name.clone(),
        start: match &config.start {
            StartSpec::Generic => "generic".into(),
            StartSpec::InY => "in_y".into(),
            StartSpec::InXp { p } => format!("in_xp(p={p})"),
        },
        seed: config.seed,
        iterations: config.iterations,
        window,
        subspace_mode,
        y0_norm: y0.norm(),
        certificate: certificate_summary,
        final_error: last.error,
        final_avg_dist: last.avg_dist,
        final_increment: last.increment,
        rate_fits,
        fit_notes,
        violations,
    };

    Ok(RunArtifacts { csv, summary, rows })
}
