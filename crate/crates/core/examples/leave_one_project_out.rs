//! A small end-to-end experiment: surrogate data, leave-one-project-out runs
//! of the NB benchmarks, then the F summary table and rank report.
//!
//! ```text
//! cargo run --release --example leave_one_project_out -- [out_dir]
//! ```

use std::path::PathBuf;

use cpdp::data::load_dir;
use cpdp::eval::Measure;
use cpdp::runner::{rank_report, run_experiment, summarize, write_rank_report, write_summary, BenchmarkId, RunConfig};
use cpdp::synth::{write_surrogates, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("lopo-run"), PathBuf::from);
    let data_dir = out.join("data");
    write_surrogates(&data_dir, &["ant-1.7", "ivy-2.0", "jedit-4.3", "velocity-1.6"], &SynthParams::default(), 1)?;

    let config = RunConfig {
        benchmarks: BenchmarkId::select("LSH-NB,NNF-NB,GIS(FX-*)-NB")?,
        reps: 2,
        seed: 1,
        jobs: 2,
        out: out.clone(),
    };
    let outcome = run_experiment(&config, &load_dir(&data_dir)?, Some(&data_dir))?;
    println!("{} records, {} failures", outcome.records.len(), outcome.failures.len());

    let summary = summarize(&outcome.records, Measure::F)?;
    println!("{:<16} {}", "benchmark", summary.datasets.join("  "));
    for row in &summary.rows {
        let cells: Vec<String> = row.per_dataset.iter().map(|v| format!("{v:.3}")).collect();
        println!("{:<16} {}  median {:.3}", row.benchmark, cells.join("  "), row.median);
    }
    write_summary(&summary, &out)?;

    let report = rank_report(&outcome.records, Measure::F, 0.05, 0.2)?;
    for g in &report.groups {
        println!("rank {}: {}", g.rank, g.members.join(", "));
    }
    let (csv, txt) = write_rank_report(&report, &out)?;
    println!("wrote {} and {}", csv.display(), txt.display());
    Ok(())
}
