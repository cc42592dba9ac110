use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use eqnn_noise_core::circuit::equivariance_check;
use eqnn_noise_lab::{replay, run, Experiment, ExperimentConfig, ModelSpec};

#[derive(Parser)]
#[command(name = "eqnn-noise-lab", version, about = "Symmetry breaking of equivariant QNNs under local noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write SVG plots.
    #[arg(long)]
    plots: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Closed forms vs PTM simulation of the one-qubit model.
    Toy(RunArgs),
    /// Training histories, one row per epoch.
    Train(RunArgs),
    /// Trained test accuracy, LM and χ² over models, depths, noise and seeds.
    Sweep(RunArgs),
    /// Variance, χ² and LM of randomly initialised models.
    Symmetry(RunArgs),
    /// LM and error with and without zero-noise extrapolation.
    Zne(RunArgs),
    /// Regenerates plots from a results CSV.
    Replay {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints a model circuit and its equivariance check.
    Circuit {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

fn execute(experiment: Experiment, args: RunArgs) -> anyhow::Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.experiment != experiment {
        anyhow::bail!(
            "{} sets experiment = \"{}\" but the subcommand is {experiment}",
            args.config.display(),
            cfg.experiment
        );
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if args.jobs.is_some() {
        cfg.jobs = args.jobs;
    }
    cfg.validate()?;
    let outcome = run(&cfg, args.plots)?;
    if outcome.reused {
        println!("results for this config already exist, nothing recomputed");
    }
    println!("{} rows in {}", outcome.rows, outcome.csv.display());
    for p in outcome.plots {
        println!("plot {}", p.display());
    }
    Ok(())
}

fn main_inner(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Toy(a) => execute(Experiment::Toy, a),
        Command::Train(a) => execute(Experiment::Train, a),
        Command::Sweep(a) => execute(Experiment::Sweep, a),
        Command::Symmetry(a) => execute(Experiment::Symmetry, a),
        Command::Zne(a) => execute(Experiment::Zne, a),
        Command::Replay { csv, out } => {
            for p in replay(&csv, out.as_deref()).with_context(|| format!("replaying {}", csv.display()))? {
                println!("plot {}", p.display());
            }
            Ok(())
        }
        Command::Circuit { model, depth, n } => {
            let circuit = model.parse::<ModelSpec>()?.build(n, depth)?;
            print!("{}", circuit.to_text());
            let report = equivariance_check(&circuit);
            for g in report.gates.iter().filter(|g| !g.passed) {
                println!("# slice {}: generator {} does not commute with the symmetry", g.slice, g.generator);
            }
            println!(
                "# equivariant: {} (observable deviation {})",
                report.passed(),
                report.observable_deviation.abs()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
