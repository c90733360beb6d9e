//! Cross-module properties of single experiment cells.

use cpdp::data::{build_pool, Dataset};
use cpdp::eval::Measure;
use cpdp::rng::{child_seed, seeded};
use cpdp::runner::{run_cell, summarize, validation_seed, BenchmarkId};
use cpdp::synth::{synth_dataset, SynthParams};
use cpdp::validation::{gen_random_validation, DEFAULT_RANDOM_SETS};
use rand::seq::SliceRandom;

fn projects() -> Vec<Dataset> {
    let p = SynthParams::default();
    vec![
        synth_dataset("alpha", 220, 60, &p, 1),
        synth_dataset("beta", 180, 30, &p, 2),
        synth_dataset("gamma", 200, 90, &p, 3),
    ]
}

#[test]
fn every_method_keeps_the_holdout_out_of_training() {
    let datasets = projects();
    let test = &datasets[1];
    let pool = build_pool(&datasets, &test.name).unwrap();
    let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(validation_seed(5, &test.name, 1))).unwrap();
    for bench in BenchmarkId::select("*-NB,*-TunedLOG").unwrap() {
        let r = run_cell(&bench, &pool, test, &sets, 5, 1).unwrap();
        assert_eq!(r.holdout, "beta");
        assert_eq!(r.seed, child_seed(5, &bench.name(), "beta", 1));
        assert_eq!(r.confusion().total(), test.len() as u64, "{bench}");
        assert!(r.train_size >= 1 && r.train_size <= pool.len(), "{bench}: {}", r.train_size);
        if bench.tuned {
            assert!(r.detail.contains("spec="), "{bench}: {}", r.detail);
        }
    }
}

#[test]
fn validation_sets_depend_on_split_not_benchmark() {
    assert_eq!(validation_seed(1, "alpha", 2), validation_seed(1, "alpha", 2));
    assert_ne!(validation_seed(1, "alpha", 2), validation_seed(1, "alpha", 3));
    assert_ne!(validation_seed(1, "alpha", 2), validation_seed(1, "beta", 2));
}

#[test]
fn summary_ignores_record_order() {
    let datasets = projects();
    let mut records = Vec::new();
    for test in &datasets {
        let pool = build_pool(&datasets, &test.name).unwrap();
        for rep in 1..=2 {
            let sets =
                gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(validation_seed(7, &test.name, rep))).unwrap();
            for bench in BenchmarkId::select("LSH-NB,NNF-NB").unwrap() {
                records.push(run_cell(&bench, &pool, test, &sets, 7, rep).unwrap());
            }
        }
    }
    let reference = summarize(&records, Measure::F).unwrap();
    let mut rng = seeded(11);
    for _ in 0..5 {
        records.shuffle(&mut rng);
        let s = summarize(&records, Measure::F).unwrap();
        assert_eq!(s.datasets, reference.datasets);
        for (a, b) in s.rows.iter().zip(&reference.rows) {
            assert_eq!(a.benchmark, b.benchmark);
            assert_eq!(a.median.to_bits(), b.median.to_bits());
        }
    }
}
