//! Times the three selectors on one leave-one-project-out split of the
//! surrogate releases.
//!
//! ```text
//! cargo run --release --example selection_timing -- [holdout] [learner]
//! ```

use std::time::Instant;

use cpdp::data::build_pool;
use cpdp::learners::{LearnerKind, LearnerSpec};
use cpdp::rng::seeded;
use cpdp::selectors::{gis_select, lsh_select, nn_filter_select, tune_nn_k, GisConfig, LshGrid, SizeMode, ValidationMode};
use cpdp::synth::{synth_release, SynthParams};
use cpdp::validation::{gen_random_validation, DEFAULT_RANDOM_SETS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let holdout = args.first().map_or("ant-1.7", String::as_str);
    let learner = LearnerKind::from_abbrev(args.get(1).map_or("NB", String::as_str))?;
    let spec = LearnerSpec::default_for(learner);

    let datasets: Vec<_> =
        cpdp::data::PROMISE_RELEASES.iter().map(|r| synth_release(r, &SynthParams::default(), 1)).collect();
    let pool = build_pool(&datasets, holdout)?;
    let test = datasets.iter().find(|d| d.name == holdout).ok_or("unknown holdout")?;
    let test_features = test.features();
    println!("pool {} instances, test {} instances, learner {spec}", pool.len(), test.len());

    let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(1))?;

    let t = Instant::now();
    let lsh = lsh_select(&pool, &sets, &spec, &LshGrid::default(), &mut seeded(2))?;
    println!(
        "LSH  {:>8.3}s  selected {:>5}  buckets evaluated {}",
        t.elapsed().as_secs_f64(),
        lsh.dataset.len(),
        lsh.evaluated_buckets
    );

    let t = Instant::now();
    let k = tune_nn_k(&pool, &test_features, &sets, &spec)?;
    let nnf = nn_filter_select(&pool, &test_features, k)?;
    println!("NNF  {:>8.3}s  selected {:>5}  k = {k}", t.elapsed().as_secs_f64(), nnf.len());

    for (size, val) in [
        (SizeMode::Fixed, ValidationMode::NearestNeighbors),
        (SizeMode::Variable, ValidationMode::NearestNeighbors),
        (SizeMode::Fixed, ValidationMode::MultipleRandom),
        (SizeMode::Variable, ValidationMode::MultipleRandom),
    ] {
        let config = GisConfig::new(size, val);
        let t = Instant::now();
        let gis = gis_select(&pool, &config, &test_features, &sets, &spec, &mut seeded(3))?;
        println!(
            "GIS({config}) {:>8.3}s  selected {:>5}  fitness {:.3} -> {:.3}",
            t.elapsed().as_secs_f64(),
            gis.dataset.len(),
            gis.initial_best,
            gis.final_best
        );
    }
    Ok(())
}
