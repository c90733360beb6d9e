//! Genetic instance selection on one split, printing the best fitness per
//! generation for each chromosome-size and validation mode.
//!
//! ```text
//! cargo run --release --example gis_search -- [holdout]
//! ```

use cpdp::data::build_pool;
use cpdp::learners::{LearnerKind, LearnerSpec};
use cpdp::rng::seeded;
use cpdp::selectors::{gis_select, GisConfig, SizeMode, ValidationMode};
use cpdp::synth::{synth_release, SynthParams};
use cpdp::validation::{gen_random_validation, DEFAULT_RANDOM_SETS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let holdout = std::env::args().nth(1).unwrap_or_else(|| "velocity-1.6".into());
    let datasets: Vec<_> =
        cpdp::data::PROMISE_RELEASES.iter().map(|r| synth_release(r, &SynthParams::default(), 1)).collect();
    let pool = build_pool(&datasets, &holdout)?;
    let test = datasets.iter().find(|d| d.name == holdout).ok_or("unknown holdout")?.features();
    let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(1))?;
    let spec = LearnerSpec::default_for(LearnerKind::NaiveBayes);

    for size in [SizeMode::Fixed, SizeMode::Variable] {
        for val in [ValidationMode::NearestNeighbors, ValidationMode::MultipleRandom] {
            let config = GisConfig::new(size, val);
            let out = gis_select(&pool, &config, &test, &sets, &spec, &mut seeded(2))?;
            let curve: Vec<String> = out.best_fitness_per_generation.iter().map(|f| format!("{f:.3}")).collect();
            println!(
                "GIS({config}): {} instances ({} label flips), {} trainings\n  {}",
                out.dataset.len(),
                out.chromosome.flipped.iter().filter(|&&f| f).count(),
                out.trainings,
                curve.join(" ")
            );
        }
    }
    Ok(())
}
