use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cpdp::data::load_dir;
use cpdp::eval::Measure;
use cpdp::runner::{
    filter_datasets, load_records, rank_report, run_experiment, summarize, write_rank_report, write_summary,
    BenchmarkId, RunConfig, RunnerError,
};
use cpdp::synth::{write_surrogates, SynthParams};

#[derive(Parser)]
#[command(name = "cpdp", version, about = "Instance-selection benchmarks for cross-project defect prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run leave-one-project-out experiments and write a run directory.
    Run {
        #[arg(long)]
        data_dir: PathBuf,
        /// Comma-separated glob patterns over benchmark names.
        #[arg(long, default_value = "*")]
        benchmarks: String,
        /// Comma-separated dataset names to keep (default: all files).
        #[arg(long, value_delimiter = ',')]
        datasets: Vec<String>,
        #[arg(long, default_value_t = 20)]
        reps: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write per-dataset median tables for one measure.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "f")]
        measure: String,
    },
    /// Rank benchmarks with Scott-Knott ESD.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "f")]
        measure: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.2)]
        negligible_d: f64,
    },
    /// Write surrogate data files with the thirteen releases' sizes.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        datasets: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn measure(name: &str) -> Result<Measure, RunnerError> {
    Measure::parse(name).ok_or_else(|| RunnerError::UnknownMeasure(name.to_string()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), RunnerError> {
    match cli.command {
        Command::Run { data_dir, benchmarks, datasets, reps, seed, jobs, out } => {
            let config = RunConfig { benchmarks: BenchmarkId::select(&benchmarks)?, reps, seed, jobs, out };
            let data = filter_datasets(load_dir(&data_dir)?, &datasets)?;
            let outcome = run_experiment(&config, &data, Some(&data_dir))?;
            println!(
                "{} records, {} failures written to {}",
                outcome.records.len(),
                outcome.failures.len(),
                config.out.display()
            );
            for f in outcome.failures.iter().take(10) {
                eprintln!("failed: {} on {} rep {}: {}", f.benchmark, f.holdout, f.repetition, f.error);
            }
        }
        Command::Summarize { input, measure: m } => {
            let records = load_records(&input)?;
            let summary = summarize(&records, measure(&m)?)?;
            println!("{}", write_summary(&summary, &input)?.display());
        }
        Command::Rank { input, measure: m, alpha, negligible_d } => {
            let records = load_records(&input)?;
            let report = rank_report(&records, measure(&m)?, alpha, negligible_d)?;
            let (csv, txt) = write_rank_report(&report, &input)?;
            println!("{}\n{}", csv.display(), txt.display());
        }
        Command::Synth { out, datasets, seed } => {
            let names: Vec<&str> = datasets.iter().map(String::as_str).collect();
            for p in write_surrogates(&out, &names, &SynthParams::default(), seed)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}
