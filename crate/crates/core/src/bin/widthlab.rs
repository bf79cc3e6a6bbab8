//! CLI: run reproducible width experiments and verify their reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use widthlab::runner::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "widthlab", about = "min-max width laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the scenario described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Replace the config's seed.
        #[arg(long)]
        seed_override: Option<u64>,
        /// Rayon worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Artifact directory (default: ./out or the config's out_dir).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Re-check a report's recorded invariants from its witnesses.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    match Cli::parse().command {
        Command::Run {
            config,
            seed_override,
            jobs,
            out_dir,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if let Some(seed) = seed_override {
                cfg.seed = seed;
            }
            if jobs.is_some() {
                cfg.jobs = jobs;
            }
            let out = out_dir
                .or_else(|| cfg.out_dir.clone().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            let report = runner::run(&cfg, &out)?;
            for a in &report.assertions {
                println!(
                    "{} {}: {}",
                    if a.passed { "PASS" } else { "FAIL" },
                    a.name,
                    a.detail
                );
            }
            println!(
                "report written under {} ({} assertions)",
                out.display(),
                report.assertions.len()
            );
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Verify { report } => {
            let text = std::fs::read_to_string(&report)?;
            let parsed: runner::Report = serde_json::from_str(&text)?;
            match runner::verify::verify(&parsed) {
                Ok(n) => {
                    println!("verified: {n} recorded facts re-checked");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("verification failed: {e}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
    }
}
