use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use spinor_gp_core::counting::suites::{run_suite, Check, Suite, SuiteOptions};
use spinor_gp_core::experiment::{run_experiment, ExperimentConfig, Scenario, BUILD_ID};

#[derive(Parser)]
#[command(
    name = "spinor-gp",
    version,
    about = "Spinor condensate dynamics, few-boson lattice dynamics and counting diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for parameter sweeps.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run one property suite; exits nonzero on any breach.
    Suite {
        /// lemma31, lemma32, lemma33, lemma41 or lemma51.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
        /// Also write the full report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print a config with default parameters for a scenario kind.
    Template { kind: String },
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: measured {:e}, limit {:e}", c.name, c.measured, c.limit);
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out, seed, threads } => {
            set_threads(threads)?;
            let mut cfg = ExperimentConfig::load(&config).with_context(|| format!("reading {}", config.display()))?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_experiment(&cfg)?;
            print_checks(&report.checks);
            for (k, v) in &report.metrics {
                println!("{k} = {v}");
            }
            eprintln!(
                "{} finished in {:.2} s; wrote {} files to {} (build {BUILD_ID})",
                report.scenario,
                report.elapsed.as_secs_f64(),
                report.files.len(),
                cfg.output_dir.display()
            );
            Ok(report.passed())
        }
        Command::Suite { name, seed, cases, json, threads } => {
            set_threads(threads)?;
            let suite: Suite = name.parse()?;
            let mut opts = SuiteOptions { seed, ..SuiteOptions::default() };
            if let Some(c) = cases {
                opts.cases = c;
            }
            let report = run_suite(suite, &opts)?;
            print_checks(&report.checks);
            for (k, v) in &report.constants {
                println!("{k} = {v}");
            }
            for n in &report.notes {
                println!("note: {n}");
            }
            if let Some(path) = json {
                std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(report.passed())
        }
        Command::Template { kind } => {
            let Some(scenario) = Scenario::default_for(&kind) else {
                bail!("unknown scenario kind {kind:?}; expected one of {}", Scenario::KINDS.join(", "));
            };
            println!("{}", ExperimentConfig::new(scenario).to_json()?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
