//! Experiment configuration: a single JSON document plus flag overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Angle sequence selector for the block gallery family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleSpec {
    /// Same angle for every block.
    Constant { theta_degrees: f64 },
    /// `cos(theta_n) = 1 - c * n^{-alpha}`.
    PowerDecay { c: f64, alpha: f64 },
    /// `cos(theta_n) = n / (n + 1)`.
    HarmonicRatio,
}

/// Problem selector: a gallery instance or explicit spanning sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    AngleBlock {
        blocks: usize,
        #[serde(default = "default_m")]
        m: usize,
        rule: RuleSpec,
    },
    RandomSubspaces {
        dim: usize,
        subspace_dims: Vec<usize>,
    },
    RandomConvex {
        dim: usize,
        sets: usize,
    },
    /// Subspaces given by explicit spanning vectors (one list per subspace).
    ExplicitSubspaces {
        ambient_dim: usize,
        spanning_sets: Vec<Vec<Vec<f64>>>,
    },
}

fn default_m() -> usize {
    2
}

/// Starting-point selector.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StartSpec {
    #[default]
    Generic,
    /// Drawn from `M + sum_i M_i^perp` with a membership certificate.
    InY,
    /// Drawn from `M + (I - T)^p(H)` with a membership certificate.
    InXp { p: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    #[serde(default)]
    pub start: StartSpec,
    pub iterations: usize,
    /// Rate-fit window `[lo, hi]`; defaults to `[iterations/10, iterations]`.
    #[serde(default)]
    pub window: Option<(usize, usize)>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_seed() -> u64 {
    7
}

fn default_scale() -> f64 {
    1.0
}

impl ExperimentConfig {
    /// The default experiment: the harmonic-ratio block problem, large
    /// enough that the window `[100, 5000]` is polynomial-dominated and
    /// small enough for seconds-scale runs.
    pub fn default_gallery() -> Self {
        Self {
            problem: ProblemSpec::AngleBlock {
                blocks: 2000,
                m: 2,
                rule: RuleSpec::HarmonicRatio,
            },
            start: StartSpec::Generic,
            iterations: 10_000,
            window: Some((100, 5000)),
            seed: 7,
            scale: 1.0,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// The rate-fit window, clamped into `[1, iterations]`.
    pub fn effective_window(&self) -> (usize, usize) {
        self.window
            .unwrap_or(((self.iterations / 10).max(1), self.iterations))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.iterations == 0 {
            return Err(CliError::Config("iterations must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.window {
            if lo == 0 || lo > hi || hi > self.iterations {
                return Err(CliError::Config(format!(
                    "window [{lo}, {hi}] must satisfy 1 <= lo <= hi <= iterations"
                )));
            }
        }
        if let StartSpec::InXp { p } = self.start {
            if p == 0 {
                return Err(CliError::Config("in_xp start needs p >= 1".into()));
            }
        }
        if !self.scale.is_finite() {
            return Err(CliError::Config("scale must be finite".into()));
        }
        match &self.problem {
            ProblemSpec::AngleBlock { blocks, m, .. } => {
                if *blocks == 0 {
                    return Err(CliError::Config("angle_block needs blocks >= 1".into()));
                }
                if *m < 2 {
                    return Err(CliError::Config("angle_block needs m >= 2".into()));
                }
            }
            ProblemSpec::RandomSubspaces { dim, subspace_dims } => {
                if *dim == 0 || subspace_dims.is_empty() {
                    return Err(CliError::Config(
                        "random_subspaces needs dim >= 1 and at least one subspace".into(),
                    ));
                }
                if subspace_dims.iter().any(|&s| s > *dim) {
                    return Err(CliError::Config(
                        "subspace dimension exceeds ambient dimension".into(),
                    ));
                }
            }
            ProblemSpec::RandomConvex { dim, sets } => {
                if *dim == 0 || *sets == 0 {
                    return Err(CliError::Config(
                        "random_convex needs dim >= 1 and sets >= 1".into(),
                    ));
                }
            }
            ProblemSpec::ExplicitSubspaces {
                ambient_dim,
                spanning_sets,
            } => {
                if *ambient_dim == 0 || spanning_sets.is_empty() {
                    return Err(CliError::Config(
                        "explicit_subspaces needs ambient_dim >= 1 and at least one set".into(),
                    ));
                }
                for (i, set) in spanning_sets.iter().enumerate() {
                    for v in set {
                        if v.len() != *ambient_dim {
                            return Err(CliError::Config(format!(
                                "spanning vector in set {i} has length {}, expected {ambient_dim}",
                                v.len()
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses a `--window A:B` flag.
pub fn parse_window(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {text}"))?;
    let lo: usize = a.trim().parse().map_err(|e| format!("bad window start: {e}"))?;
    let hi: usize = b.trim().parse().map_err(|e| format!("bad window end: {e}"))?;
    Ok((lo, hi))
}
