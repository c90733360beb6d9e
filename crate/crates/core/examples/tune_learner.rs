//! Grid search over a learner's hyper-parameters on random validation sets.
//!
//! ```text
//! cargo run --release --example tune_learner -- [NB|LOG|J48]
//! ```

use cpdp::data::build_pool;
use cpdp::learners::LearnerKind;
use cpdp::rng::seeded;
use cpdp::synth::{synth_release, SynthParams};
use cpdp::tuning::grid_search;
use cpdp::validation::{gen_random_validation, DEFAULT_RANDOM_SETS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kind = LearnerKind::from_abbrev(&std::env::args().nth(1).unwrap_or_else(|| "J48".into()))?;
    let datasets: Vec<_> =
        cpdp::data::PROMISE_RELEASES.iter().map(|r| synth_release(r, &SynthParams::default(), 1)).collect();
    let pool = build_pool(&datasets, "poi-3.0")?;
    let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(1))?;
    let training = pool.as_dataset("pool");

    let result = grid_search(kind, &training, &sets)?;
    for (spec, score) in &result.scores {
        println!("{:<40} {score:.4}", spec.to_string());
    }
    println!("best: {} ({:.4} over {} validation sets)", result.best_spec, result.best_score, result.validation_count);
    Ok(())
}
