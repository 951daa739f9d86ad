use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use glsim_cli::config::{load_config, ExperimentConfig};
use glsim_cli::output::write_outputs;
use glsim_cli::runner::run_replicas;
use glsim_cli::validate::run_validation;
use glsim_cli::CliError;
use glsim_core::death::death_verdict;

/// Event-driven simulator for stochastically firing neuron networks.
#[derive(Parser)]
#[command(name = "glsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded replicas and write spikes.csv + summary.json
    Simulate(CommonArgs),
    /// Print the almost-sure death verdict for the network as JSON
    Analyze(CommonArgs),
    /// Cross-check samplers against quadrature and empirical statistics
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Override the seed from the config file
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for simulate
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the replica count from the config file
    #[arg(long)]
    replicas: Option<u64>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Samples per law for the distribution checks
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = load_config(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.run.seed = seed;
    }
    if let Some(replicas) = common.replicas {
        if replicas == 0 {
            return Err(CliError::Config("--replicas must be >= 1".into()));
        }
        cfg.run.replicas = replicas;
    }
    Ok(cfg)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(common) => {
            let cfg = load(&common)?;
            let output = run_replicas(&cfg)?;
            write_outputs(&output, &common.out)?;
            println!(
                "{} replicas ({}): death fraction {:.4}, mean events {:.2}; outputs in {}",
                output.summary.replicas,
                cfg.run.mode.as_str(),
                output.summary.death_fraction,
                output.summary.mean_events,
                common.out.display()
            );
            Ok(())
        }
        Command::Analyze(common) => {
            let cfg = load(&common)?;
            let verdict = death_verdict(&cfg.network);
            println!("{}", verdict_json(&verdict));
            Ok(())
        }
        Command::Validate(args) => {
            let cfg = load(&args.common)?;
            let outcome = run_validation(&cfg, args.samples)?;
            for check in &outcome.checks {
                println!(
                    "{}: {} ({:.3e} <= {:.3e})",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.value,
                    check.threshold
                );
            }
            let failed = outcome.failed();
            if failed == 0 {
                println!("all {} checks passed", outcome.checks.len());
                Ok(())
            } else {
                Err(CliError::ChecksFailed(failed))
            }
        }
    }
}

fn verdict_json(verdict: &glsim_core::death::DeathVerdict) -> String {
    use serde_json::{json, Value};
    let classes: Value = match &verdict.classes {
        Some(classes) => classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "id": i,
                    "class": c.class.to_string(),
                    "zero_order": c.zero_order,
                })
            })
            .collect(),
        None => Value::Null,
    };
    let arcs: Value = match &verdict.digraph {
        Some(d) => d.arcs.iter().map(|(a, b)| json!([a.0, b.0])).collect(),
        None => Value::Null,
    };
    let doc = json!({
        "classes": classes,
        "arcs": arcs,
        "dag": verdict.dag,
        "conclusion": verdict.conclusion.as_str(),
        "hypotheses_ok": verdict.hypotheses_ok,
        "violations": verdict.violations,
    });
    serde_json::to_string_pretty(&doc).expect("verdict serialization is infallible")
}
