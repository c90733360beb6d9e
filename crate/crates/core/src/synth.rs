//! Deterministic surrogate data in the PROMISE layout.
//!
//! Each release keeps its published class and defect counts. Metrics are
//! driven by a log-normal latent size that is larger for defect-prone
//! classes, plus a per-project multiplicative shift per metric so that
//! projects differ in distribution. The data are a stand-in for smoke runs,
//! examples and determinism checks; they carry none of the real releases'
//! content.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::index::sample;
use rand_distr::{Distribution, Normal};

use crate::data::{write_dataset, DataError, Dataset, Instance, Label, Origin, ReleaseInfo, Schema, PROMISE_RELEASES};
use crate::rng::{seeded, StableHasher};

/// How a metric responds to the latent size.
#[derive(Debug, Clone, Copy)]
enum Shape {
    /// `scale * size^power`, rounded to an integer.
    Count { scale: f64, power: f64 },
    /// A proportion in [0, 1] that drifts with size.
    Ratio { base: f64, slope: f64 },
    /// `scale * size^power` kept real.
    Real { scale: f64, power: f64 },
}

/// One entry per PROMISE metric, in file order.
const SHAPES: [Shape; 20] = [
    Shape::Count { scale: 6.0, power: 0.9 },   // wmc
    Shape::Count { scale: 1.5, power: 0.2 },   // dit
    Shape::Count { scale: 0.3, power: 0.6 },   // noc
    Shape::Count { scale: 5.0, power: 0.7 },   // cbo
    Shape::Count { scale: 18.0, power: 0.9 },  // rfc
    Shape::Count { scale: 20.0, power: 1.6 },  // lcom
    Shape::Count { scale: 2.5, power: 0.8 },   // ca
    Shape::Count { scale: 3.5, power: 0.7 },   // ce
    Shape::Count { scale: 5.0, power: 0.9 },   // npm
    Shape::Ratio { base: 0.6, slope: 0.1 },    // lcom3
    Shape::Count { scale: 120.0, power: 1.1 }, // loc
    Shape::Ratio { base: 0.5, slope: 0.15 },   // dam
    Shape::Count { scale: 0.6, power: 0.7 },   // moa
    Shape::Ratio { base: 0.3, slope: 0.05 },   // mfa
    Shape::Ratio { base: 0.45, slope: -0.15 }, // cam
    Shape::Count { scale: 0.3, power: 0.5 },   // ic
    Shape::Count { scale: 0.5, power: 0.6 },   // cbm
    Shape::Real { scale: 12.0, power: 0.4 },   // amc
    Shape::Count { scale: 2.5, power: 0.6 },   // max_cc
    Shape::Real { scale: 1.2, power: 0.3 },    // avg_cc
];

/// Knobs of the surrogate generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    /// Spread of the log latent size within a project.
    pub size_sd: f64,
    /// Added to the log latent size of defect-prone classes.
    pub defect_effect: f64,
    /// Spread of the per-project, per-metric log scale shift.
    pub project_shift_sd: f64,
    /// Per-value multiplicative noise (log scale).
    pub metric_noise_sd: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self { size_sd: 0.8, defect_effect: 0.9, project_shift_sd: 0.35, metric_noise_sd: 0.35 }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn round_to(x: f64, places: i32) -> f64 {
    let f = 10f64.powi(places);
    (x * f).round() / f
}

/// A dataset of `classes` rows with exactly `defective` defect-prone ones.
pub fn synth_dataset(name: &str, classes: usize, defective: usize, params: &SynthParams, seed: u64) -> Dataset {
    assert!(defective <= classes, "more defective rows than classes");
    let mut rng = seeded(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let shifts: Vec<f64> = (0..SHAPES.len()).map(|_| params.project_shift_sd * normal.sample(&mut rng)).collect();
    let size_offset = 0.3 * normal.sample(&mut rng);

    let mut labels = vec![Label::Clean; classes];
    for i in sample(&mut rng, classes, defective) {
        labels[i] = Label::Defective;
    }
    let dataset: Arc<str> = Arc::from(name);
    let instances = labels
        .into_iter()
        .enumerate()
        .map(|(row, label)| {
            let effect = if label.is_defective() { params.defect_effect } else { 0.0 };
            let log_size = size_offset + effect + params.size_sd * normal.sample(&mut rng);
            let size = log_size.exp();
            let features = SHAPES
                .iter()
                .zip(&shifts)
                .map(|(shape, shift)| {
                    let noise = params.metric_noise_sd * normal.sample(&mut rng);
                    match *shape {
                        Shape::Count { scale, power } => {
                            (scale * size.powf(power) * (shift + noise).exp()).round()
                        }
                        Shape::Real { scale, power } => round_to(scale * size.powf(power) * (shift + noise).exp(), 4),
                        Shape::Ratio { base, slope } => {
                            let logit = (base / (1.0 - base)).ln() + slope * log_size + shift + noise;
                            round_to(sigmoid(logit), 4)
                        }
                    }
                })
                .collect();
            Instance { features, label, origin: Origin { dataset: dataset.clone(), row } }
        })
        .collect();
    Dataset::new(name, instances)
}

fn release_seed(base: u64, name: &str) -> u64 {
    StableHasher::new().write_u64(base).write_str("synth").write_str(name).finish()
}

/// The surrogate for one of the study releases.
pub fn synth_release(info: &ReleaseInfo, params: &SynthParams, seed: u64) -> Dataset {
    synth_dataset(info.name, info.classes, info.defective, params, release_seed(seed, info.name))
}

/// Writes a surrogate file `<name>.csv` into `dir` for each listed release
/// (all thirteen when `names` is empty) and returns the paths written.
pub fn write_surrogates(dir: &Path, names: &[&str], params: &SynthParams, seed: u64) -> Result<Vec<PathBuf>, DataError> {
    fs::create_dir_all(dir).map_err(|source| DataError::Io { path: dir.to_path_buf(), source })?;
    let schema = Schema::promise();
    PROMISE_RELEASES
        .iter()
        .filter(|r| names.is_empty() || names.iter().any(|n| n.eq_ignore_ascii_case(r.name)))
        .map(|info| {
            let path = dir.join(format!("{}.csv", info.name));
            write_dataset(&synth_release(info, params, seed), &schema, &path)?;
            Ok(path)
        })
        .collect()
}
