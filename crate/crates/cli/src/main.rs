use std::path::PathBuf;
use std::process;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use horizon_cli::{run, write_artifacts, CliError, Command, ExitCode, ScenarioConfig};
use horizon_core::infoflow::CurvePath;

#[derive(Debug, Parser)]
#[command(
    name = "horizon",
    version,
    about = "Information flow out of evaporating black-hole models"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Output directory; tables go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for Monte Carlo sampling; overrides the config and
    /// the HORIZON_WORKERS variable.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true, value_enum)]
    path: Option<PathArg>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Sub {
    /// Correlations with the reference against qubits radiated.
    Curves,
    /// Monte Carlo check of the decoupling bounds.
    Verify,
    /// Qubit-count thresholds and chi values.
    Thresholds,
    /// Haar-average purities for every subsystem tag.
    Purity,
    /// Entropy ledger of one sampled evaporation trajectory.
    Sample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PathArg {
    Analytic,
    Montecarlo,
}

fn load(cli: &Cli, env_workers: Option<usize>) -> Result<ScenarioConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::field("config", "a scenario file is required (--config PATH)"))?;
    let mut config = ScenarioConfig::load(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(samples) = cli.samples {
        config.samples = samples;
    }
    if let Some(out) = &cli.out {
        config.out = Some(out.clone());
    }
    if let Some(path) = cli.path {
        config.path = match path {
            PathArg::Analytic => CurvePath::Analytic,
            PathArg::Montecarlo => CurvePath::Montecarlo,
        };
    }
    // Flag over config over environment.
    config.workers = cli.workers.or(config.workers).or(env_workers);
    config.validate()?;
    Ok(config)
}

fn main() {
    let env_workers = std::env::var("HORIZON_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok());
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match execute(&cli, env_workers) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    process::exit(code as i32);
}

fn execute(cli: &Cli, env_workers: Option<usize>) -> Result<ExitCode, CliError> {
    let config = load(cli, env_workers)?;
    if let Some(workers) = config.workers {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let command = match cli.command {
        Sub::Curves => Command::Curves,
        Sub::Verify => Command::Verify,
        Sub::Thresholds => Command::Thresholds,
        Sub::Purity => Command::Purity,
        Sub::Sample => Command::Sample,
    };
    let output = run(command, &config)?;
    match &config.out {
        Some(dir) => {
            write_artifacts(dir, &output.artifacts)?;
            for a in &output.artifacts {
                eprintln!("wrote {}", dir.join(&a.name).display());
            }
        }
        None => print!("{}", output.artifacts[0].contents),
    }
    for w in &output.report.warnings {
        let code = serde_json::to_value(w.code).expect("code serializes");
        eprintln!(
            "warning[{}]: {}",
            code.as_str().unwrap_or_default(),
            w.message
        );
    }
    Ok(if output.verification_failed {
        ExitCode::Verification
    } else {
        ExitCode::Success
    })
}
