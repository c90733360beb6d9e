//! Writes surrogate CSV files with the thirteen PROMISE releases' sizes and
//! defect counts, for running the pipeline without the real data.
//!
//! ```text
//! cargo run --example generate_surrogate_data -- [out_dir]
//! ```

use std::path::PathBuf;

use cpdp::data::load_dir;
use cpdp::synth::{write_surrogates, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("surrogate-data"), PathBuf::from);
    // an empty name list writes every release
    let written = write_surrogates(&out, &[], &SynthParams::default(), 1)?;
    println!("wrote {} files to {}", written.len(), out.display());
    for d in load_dir(&out)? {
        println!("{:<14} {:>4} classes {:>4} defective", d.name, d.len(), d.defect_count());
    }
    Ok(())
}
