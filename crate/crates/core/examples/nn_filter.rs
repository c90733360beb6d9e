//! NN-Filter: the union of every test instance's k nearest pool instances,
//! with k tuned on random validation sets.
//!
//! ```text
//! cargo run --release --example nn_filter -- [holdout]
//! ```

use cpdp::data::build_pool;
use cpdp::learners::{LearnerKind, LearnerSpec};
use cpdp::rng::seeded;
use cpdp::selectors::{nn_filter_select, tune_nn_k, NN_K_RANGE};
use cpdp::synth::{synth_release, SynthParams};
use cpdp::validation::{gen_random_validation, DEFAULT_RANDOM_SETS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let holdout = std::env::args().nth(1).unwrap_or_else(|| "ivy-2.0".into());
    let datasets: Vec<_> =
        cpdp::data::PROMISE_RELEASES.iter().map(|r| synth_release(r, &SynthParams::default(), 1)).collect();
    let pool = build_pool(&datasets, &holdout)?;
    let test = datasets.iter().find(|d| d.name == holdout).ok_or("unknown holdout")?.features();

    for k in NN_K_RANGE {
        let selected = nn_filter_select(&pool, &test, k)?;
        println!("k = {k:>2}: {:>5} of {} pool instances, {:>4} defective", selected.len(), pool.len(), selected.defect_count());
    }

    let spec = LearnerSpec::default_for(LearnerKind::NaiveBayes);
    let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(1))?;
    println!("tuned k for {spec}: {}", tune_nn_k(&pool, &test, &sets, &spec)?);
    Ok(())
}
