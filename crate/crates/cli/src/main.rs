use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cyclic_projections_cli::config::{parse_window, ExperimentConfig};
use cyclic_projections_cli::{gallery_cmd, norms, run, verify, CliError};

/// Batch driver for cyclic-projection experiments, verification suites and
/// operator-norm tables.
#[derive(Parser)]
#[command(name = "cycproj", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON experiment configuration; the default gallery experiment
    /// (harmonic-ratio blocks) runs when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    /// Overrides the configured iteration count (or the norm-table depth).
    #[arg(long, value_name = "INT")]
    k: Option<usize>,
    /// Overrides the analysis window, as `A:B`.
    #[arg(long, value_name = "A:B", value_parser = parse_window)]
    window: Option<(usize, usize)>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and emit per-iteration metrics (CSV) plus a
    /// JSON summary with rate fits.
    Run(ConfigArgs),
    /// Run a verification suite (projectors | lemma31 | lemma23 |
    /// commutation | complexify | all).
    Verify {
        suite: String,
        #[arg(long, value_name = "INT", default_value_t = 1)]
        seed: u64,
        /// Optional directory for the JSON report.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Tabulate the ten operator-norm quantities for k = 1..k_max.
    Norms(ConfigArgs),
    /// List or describe the built-in problem families.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    /// One line per instance family.
    List,
    /// Full JSON description of one family.
    Describe { name: String },
}

fn load_config(args: &ConfigArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default_gallery(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(k) = args.k {
        config.iterations = k;
        // A window tuned for a different K no longer applies.
        if config
            .window
            .is_some_and(|(lo, hi)| lo > k || hi > k || lo == 0)
        {
            config.window = None;
        }
    }
    if let Some(window) = args.window {
        config.window = Some(window);
    }
    config.validate()?;
    Ok(config)
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn cmd_run(args: &ConfigArgs) -> Result<i32, CliError> {
    let config = load_config(args)?;
    let artifacts = run::execute_run(&config)?;
    let csv_path = write_text(&args.out, "metrics.csv", &artifacts.csv)?;
    let summary_text = serde_json::to_string_pretty(&artifacts.summary)
        .expect("serializable summary");
    let summary_path = write_text(&args.out, "summary.json", &summary_text)?;
    eprintln!(
        "run: {} iterations of {} -> {}, {}",
        config.iterations,
        artifacts.summary.problem,
        csv_path.display(),
        summary_path.display()
    );
    if artifacts.passed() {
        Ok(0)
    } else {
        for v in &artifacts.summary.violations {
            eprintln!("violation: {v}");
        }
        Ok(1)
    }
}

fn cmd_norms(args: &ConfigArgs) -> Result<i32, CliError> {
    let config = load_config(args)?;
    let k_max = args.k.unwrap_or(10);
    let artifacts = norms::execute_norms(&config, k_max, args.window)?;
    let csv_path = write_text(&args.out, "norms.csv", &artifacts.csv)?;
    let json_text = serde_json::to_string_pretty(&artifacts.summary)
        .expect("serializable summary");
    let json_path = write_text(&args.out, "thresholds.json", &json_text)?;
    eprintln!(
        "norms: k = 1..{} of {} -> {}, {}",
        k_max,
        artifacts.summary.problem,
        csv_path.display(),
        json_path.display()
    );
    if artifacts.passed() {
        Ok(0)
    } else {
        for f in &artifacts.summary.failures {
            eprintln!("failure: {f}");
        }
        Ok(1)
    }
}

fn cmd_verify(suite: &str, seed: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let reports = verify::run_suites(suite, seed)?;
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed() { "pass" } else { "FAIL" };
        println!(
            "{}: {} ({} instances, {} checks, {} violations)",
            report.suite,
            status,
            report.instances,
            report.checks,
            report.violations.len()
        );
        for v in &report.violations {
            println!(
                "  violation [seed {}] {}: margin {:e}",
                v.instance_seed, v.location, v.margin
            );
        }
        all_passed &= report.passed();
    }
    if let Some(dir) = out {
        let text = serde_json::to_string_pretty(&reports).expect("serializable reports");
        let path = write_text(dir, &format!("verify_{suite}.json"), &text)?;
        eprintln!("report written to {}", path.display());
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify { suite, seed, out } => cmd_verify(suite, *seed, out.as_deref()),
        Command::Norms(args) => cmd_norms(args),
        Command::Gallery { action } => match action {
            GalleryAction::List => {
                print!("{}", gallery_cmd::list_text());
                Ok(0)
            }
            GalleryAction::Describe { name } => {
                println!("{}", gallery_cmd::describe_json(name)?);
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
