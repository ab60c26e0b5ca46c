//! The `gallery` subcommand: list and describe the built-in instance
//! families.

use serde::Serialize;

use crate::config::{ExperimentConfig, ProblemSpec, RuleSpec, StartSpec};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct ParameterDoc {
    pub name: &'static str,
    pub description: &'static str,
}

#[derive(Debug, Serialize)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub parameters: Vec<ParameterDoc>,
    pub notes: Vec<&'static str>,
    pub example_config: ExperimentConfig,
}

pub fn entries() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            name: "angle_block_constant",
            summary: "Block-diagonal pair of lines with one fixed angle; linear decay with known rate",
            parameters: vec![
                ParameterDoc { name: "blocks", description: "number of 2x2 blocks (ambient dimension is twice this)" },
                ParameterDoc { name: "m", description: "number of sets; extras past the second duplicate the rotated line" },
                ParameterDoc { name: "rule.theta_degrees", description: "angle between the lines in every block, in (0, 90]" },
            ],
            notes: vec![
                "The error norm after k sweeps is exactly max_n cos^{2k-1}(theta_n).",
                "With a single angle the decay is purely geometric from the first sweep.",
            ],
            example_config: ExperimentConfig {
                problem: ProblemSpec::AngleBlock { blocks: 1, m: 2, rule: RuleSpec::Constant { theta_degrees: 60.0 } },
                start: StartSpec::Generic,
                iterations: 10,
                window: None,
                seed: 7,
                scale: 1.0,
            },
        },
        GalleryEntry {
            name: "angle_block_power_decay",
            summary: "Block angles closing in on zero polynomially: cos(theta_n) = 1 - c n^{-alpha}",
            parameters: vec![
                ParameterDoc { name: "blocks", description: "number of 2x2 blocks" },
                ParameterDoc { name: "m", description: "number of sets" },
                ParameterDoc { name: "rule.c", description: "gap coefficient in (0, 1]" },
                ParameterDoc { name: "rule.alpha", description: "decay exponent, positive" },
            ],
            notes: vec![
                "Every finite truncation has a closed complement sum, so polynomial behaviour is a pre-asymptotic window; expect it for k up to about half the block count, after which the decay turns linear.",
            ],
            example_config: ExperimentConfig {
                problem: ProblemSpec::AngleBlock { blocks: 500, m: 2, rule: RuleSpec::PowerDecay { c: 1.0, alpha: 1.0 } },
                start: StartSpec::InY,
                iterations: 2000,
                window: Some((25, 250)),
                seed: 7,
                scale: 1.0,
            },
        },
        GalleryEntry {
            name: "angle_block_harmonic_ratio",
            summary: "Block angles with cos(theta_n) = n/(n+1); the default experiment",
            parameters: vec![
                ParameterDoc { name: "blocks", description: "number of 2x2 blocks" },
                ParameterDoc { name: "m", description: "number of sets" },
            ],
            notes: vec![
                "The default experiment uses 2000 blocks and 10^4 sweeps so the window [100, 5000] is polynomial-dominated while runs stay in the seconds range.",
                "Y starts damp per-block coefficients by 1/n against the complement normals, keeping them summable on every truncation.",
            ],
            example_config: ExperimentConfig::default_gallery(),
        },
        GalleryEntry {
            name: "random_subspaces",
            summary: "Seeded Gaussian subspaces of fixed dimensions, with complements and intersection",
            parameters: vec![
                ParameterDoc { name: "dim", description: "ambient dimension" },
                ParameterDoc { name: "subspace_dims", description: "one dimension per subspace, each at most dim" },
            ],
            notes: vec![
                "Random subspaces in generic position give geometric decay; the intersection is computed from the averaged projector's fixed space.",
            ],
            example_config: ExperimentConfig {
                problem: ProblemSpec::RandomSubspaces { dim: 8, subspace_dims: vec![3, 3, 3] },
                start: StartSpec::Generic,
                iterations: 500,
                window: Some((50, 500)),
                seed: 7,
                scale: 1.0,
            },
        },
        GalleryEntry {
            name: "random_convex",
            summary: "Seeded halfspaces, balls and boxes, all containing the origin",
            parameters: vec![
                ParameterDoc { name: "dim", description: "ambient dimension" },
                ParameterDoc { name: "sets", description: "number of convex sets" },
            ],
            notes: vec![
                "The origin certifies a nonempty intersection, so the distance inequalities can be checked with it as the witness.",
                "Error columns stay blank in convex mode; there is no intersection projector.",
            ],
            example_config: ExperimentConfig {
                problem: ProblemSpec::RandomConvex { dim: 10, sets: 5 },
                start: StartSpec::Generic,
                iterations: 50,
                window: Some((5, 50)),
                seed: 3,
                scale: 1.0,
            },
        },
    ]
}

pub fn list_text() -> String {
    let mut out = String::new();
    for e in entries() {
        out.push_str(&format!("{:<28} {}\n", e.name, e.summary));
    }
    out
}

pub fn describe_json(name: &str) -> Result<String, CliError> {
    let entry = entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown gallery instance '{name}'; run `cycproj gallery list`"
            ))
        })?;
    Ok(serde_json::to_string_pretty(&entry).expect("serializable entry"))
}
