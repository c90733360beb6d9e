//! Leave-one-project-out experiments over every benchmark, result
//! persistence, median tables and Scott-Knott reports.
//!
//! A run directory holds:
//!
//! * `runs.csv`: one row per (holdout, repetition, benchmark) with the raw
//!   confusion matrix. Byte-identical for identical inputs and seed.
//! * `timings.csv`: the selection wall-clock time of each row, kept apart so
//!   that `runs.csv` stays reproducible.
//! * `manifest.json`: configuration, datasets and failed cells.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{build_pool, DataError, Dataset, Pool};
use crate::eval::{ConfusionMatrix, Measure};
use crate::learners::{train, LearnerKind, LearnerSpec};
use crate::rng::{child_seed, seeded, StableHasher};
use crate::selectors::{
    gis_select, lsh_select, nn_filter_select, tune_nn_k, GisConfig, LshGrid, SelectError, SizeMode, ValidationMode,
};
use crate::stats::{group_deltas, magnitude, scott_knott_esd, RankGroup, StatsError, TreatmentSample};
use crate::tuning::grid_search;
use crate::validation::{gen_random_validation, ValidationSet, DEFAULT_RANDOM_SETS};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),
    #[error("benchmark `{0}` uses a learner that is not implemented")]
    LearnerOutOfScope(String),
    #[error("pattern `{0}` matches no benchmark")]
    NoBenchmarks(String),
    #[error("invalid pattern `{pattern}`: {message}")]
    BadPattern { pattern: String, message: String },
    #[error("at least two datasets are required, got {0}")]
    TooFewDatasets(usize),
    #[error("dataset `{0}` not found in the data directory")]
    UnknownDataset(String),
    #[error("repetitions must be at least 1")]
    ZeroReps,
    #[error("no run records in {0}")]
    EmptyStore(PathBuf),
    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),
    #[error("at least two benchmarks are required for ranking, got {0}")]
    TooFewBenchmarks(usize),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunnerError + '_ {
    move |source| RunnerError::Io { path: path.to_path_buf(), source }
}

fn fmt_err(path: &Path) -> impl FnOnce(String) -> RunnerError + '_ {
    move |message| RunnerError::Format { path: path.to_path_buf(), message }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Lsh,
    Nnf,
    Gis,
}

/// One of the compared configurations, e.g. `LSH-TunedNB` or
/// `GIS(VR-VMUL)-J48`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BenchmarkId {
    pub method: Method,
    pub learner: LearnerKind,
    /// Grid-search the learner on the selected data (LSH and NNF only).
    pub tuned: bool,
    /// Chromosome sizing and validation material (GIS only).
    pub gis: Option<(SizeMode, ValidationMode)>,
}

/// Learner abbreviations of the full study; the last two have no
/// implementation here.
const CATALOG_LEARNERS: [&str; 5] = ["NB", "LOG", "J48", "DT", "BN"];
const OUT_OF_SCOPE_LEARNERS: [&str; 2] = ["DT", "BN"];
const GIS_OPTIONS: [(SizeMode, ValidationMode); 4] = [
    (SizeMode::Fixed, ValidationMode::NearestNeighbors),
    (SizeMode::Fixed, ValidationMode::MultipleRandom),
    (SizeMode::Variable, ValidationMode::NearestNeighbors),
    (SizeMode::Variable, ValidationMode::MultipleRandom),
];

fn names_for(learner: &str) -> Vec<String> {
    let mut out = Vec::new();
    for method in ["NNF", "LSH"] {
        out.push(format!("{method}-{learner}"));
        out.push(format!("{method}-Tuned{learner}"));
    }
    for (size, val) in GIS_OPTIONS {
        out.push(format!("GIS({}-{})-{learner}", size.abbrev(), val.abbrev()));
    }
    out
}

/// The names of all 40 benchmarks of the full study, including those whose
/// learner is not implemented.
pub fn catalog() -> Vec<String> {
    CATALOG_LEARNERS.iter().flat_map(|l| names_for(l)).collect()
}

impl BenchmarkId {
    /// The 24 benchmarks runnable with the implemented learners.
    pub fn all() -> Vec<BenchmarkId> {
        LearnerKind::ALL
            .iter()
            .flat_map(|l| names_for(l.abbrev()))
            .map(|n| BenchmarkId::parse(&n).expect("catalog names parse"))
            .collect()
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn parse(name: &str) -> Result<Self, RunnerError> {
        let unknown = || RunnerError::UnknownBenchmark(name.to_string());
        let learner = |abbrev: &str| {
            if OUT_OF_SCOPE_LEARNERS.contains(&abbrev) {
                Err(RunnerError::LearnerOutOfScope(name.to_string()))
            } else {
                LearnerKind::from_abbrev(abbrev).map_err(|_| unknown())
            }
        };
        if let Some(rest) = name.strip_prefix("GIS(") {
            let (opts, learner_part) = rest.split_once(")-").ok_or_else(unknown)?;
            let gis = GIS_OPTIONS
                .iter()
                .copied()
                .find(|(s, v)| format!("{}-{}", s.abbrev(), v.abbrev()) == opts)
                .ok_or_else(unknown)?;
            return Ok(BenchmarkId { method: Method::Gis, learner: learner(learner_part)?, tuned: false, gis: Some(gis) });
        }
        let (method, rest) = name.split_once('-').ok_or_else(unknown)?;
        let method = match method {
            "LSH" => Method::Lsh,
            "NNF" => Method::Nnf,
            _ => return Err(unknown()),
        };
        let (tuned, abbrev) = match rest.strip_prefix("Tuned") {
            Some(a) => (true, a),
            None => (false, rest),
        };
        Ok(BenchmarkId { method, learner: learner(abbrev)?, tuned, gis: None })
    }

    /// Comma-separated glob patterns matched against runnable benchmark
    /// names. Naming an unimplemented benchmark exactly is an error.
    pub fn select(patterns: &str) -> Result<Vec<BenchmarkId>, RunnerError> {
        let all = BenchmarkId::all();
        let mut chosen = BTreeSet::new();
        for raw in patterns.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if catalog().iter().any(|c| c == raw) {
                BenchmarkId::parse(raw)?;
            }
            let pattern = glob::Pattern::new(raw)
                .map_err(|e| RunnerError::BadPattern { pattern: raw.to_string(), message: e.to_string() })?;
            let before = chosen.len();
            chosen.extend(all.iter().enumerate().filter(|(_, b)| pattern.matches(&b.name())).map(|(i, _)| i));
            if chosen.len() == before && !all.iter().any(|b| pattern.matches(&b.name())) {
                return Err(RunnerError::NoBenchmarks(raw.to_string()));
            }
        }
        if chosen.is_empty() {
            return Err(RunnerError::NoBenchmarks(patterns.to_string()));
        }
        Ok(chosen.into_iter().map(|i| all[i]).collect())
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.learner.abbrev();
        match (self.method, self.gis) {
            (Method::Gis, Some((s, v))) => write!(f, "GIS({}-{})-{l}", s.abbrev(), v.abbrev()),
            (m, _) => {
                let m = if m == Method::Lsh { "LSH" } else { "NNF" };
                let t = if self.tuned { "Tuned" } else { "" };
                write!(f, "{m}-{t}{l}")
            }
        }
    }
}

/// The outcome of one (benchmark, holdout, repetition) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub benchmark: String,
    pub holdout: String,
    pub repetition: u32,
    pub seed: u64,
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// LSH found no eligible bucket and trained on the whole pool.
    pub fallback: bool,
    pub train_size: usize,
    /// Selected parameters, e.g. `k=3` or `n=4 l=2 b=10 bucket=7`.
    pub detail: String,
    #[serde(skip)]
    pub selection_seconds: f64,
}

impl RunRecord {
    pub fn confusion(&self) -> ConfusionMatrix {
        ConfusionMatrix { tp: self.tp, fp: self.fp, tn: self.tn, fn_: self.fn_ }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TimingRow {
    benchmark: String,
    holdout: String,
    repetition: u32,
    selection_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub benchmark: String,
    pub holdout: String,
    pub repetition: u32,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub benchmarks: Vec<BenchmarkId>,
    pub reps: u32,
    pub seed: u64,
    pub jobs: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DatasetEntry {
    name: String,
    instances: usize,
    defective: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    data_dir: Option<String>,
    benchmarks: Vec<String>,
    reps: u32,
    seed: u64,
    jobs: usize,
    datasets: Vec<DatasetEntry>,
    records: usize,
    failures: Vec<Failure>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<Failure>,
}

/// Seed of the random validation sets shared by every benchmark of one
/// (holdout, repetition).
pub fn validation_seed(base: u64, holdout: &str, repetition: u32) -> u64 {
    StableHasher::new()
        .write_u64(base)
        .write_str("validation")
        .write_str(holdout)
        .write_u64(repetition as u64)
        .finish()
}

struct Selection {
    dataset: Dataset,
    fallback: bool,
    detail: String,
}

fn select(
    bench: &BenchmarkId,
    pool: &Pool,
    test: &Dataset,
    sets: &[ValidationSet],
    seed: u64,
) -> Result<Selection, SelectError> {
    let spec = LearnerSpec::default_for(bench.learner);
    let test_features = test.features();
    let mut rng = seeded(seed);
    Ok(match bench.method {
        Method::Nnf => {
            let k = tune_nn_k(pool, &test_features, sets, &spec)?;
            Selection { dataset: nn_filter_select(pool, &test_features, k)?, fallback: false, detail: format!("k={k}") }
        }
        Method::Lsh => {
            let s = lsh_select(pool, sets, &spec, &LshGrid::default(), &mut rng)?;
            let detail = match (s.params, s.bucket_id) {
                (Some(p), Some(id)) => format!("n={} l={} b={} bucket={id}", p.depth, p.batches, p.buckets),
                _ => "whole-pool".to_string(),
            };
            Selection { dataset: s.dataset, fallback: s.fallback, detail }
        }
        Method::Gis => {
            let (size, val) = bench.gis.expect("GIS benchmarks carry options");
            let out = gis_select(pool, &GisConfig::new(size, val), &test_features, sets, &spec, &mut rng)?;
            let flips = out.chromosome.flipped.iter().filter(|&&f| f).count();
            Selection {
                dataset: out.dataset,
                fallback: false,
                detail: format!("fitness={:.4} flips={flips}", out.final_best),
            }
        }
    })
}

/// Runs one cell: selection (timed), optional tuning, training, prediction.
pub fn run_cell(
    bench: &BenchmarkId,
    pool: &Pool,
    test: &Dataset,
    sets: &[ValidationSet],
    base_seed: u64,
    repetition: u32,
) -> Result<RunRecord, String> {
    let name = bench.name();
    let seed = child_seed(base_seed, &name, &test.name, repetition);
    let start = Instant::now();
    let selection = select(bench, pool, test, sets, seed).map_err(|e| e.to_string())?;
    let selection_seconds = start.elapsed().as_secs_f64();

    if let Some(leak) = selection.dataset.instances.iter().find(|i| *i.origin.dataset == *test.name) {
        return Err(format!("holdout instance {}:{} leaked into training data", leak.origin.dataset, leak.origin.row));
    }
    let spec = if bench.tuned {
        grid_search(bench.learner, &selection.dataset, sets).map_err(|e| e.to_string())?.best_spec
    } else {
        LearnerSpec::default_for(bench.learner)
    };
    let model = train(&spec, &selection.dataset).map_err(|e| e.to_string())?;
    let cm = model.evaluate(&test.instances).map_err(|e| e.to_string())?;
    let detail = if bench.tuned { format!("{} spec={spec}", selection.detail) } else { selection.detail };
    Ok(RunRecord {
        benchmark: name,
        holdout: test.name.clone(),
        repetition,
        seed,
        tp: cm.tp,
        fp: cm.fp,
        tn: cm.tn,
        fn_: cm.fn_,
        fallback: selection.fallback,
        train_size: selection.dataset.len(),
        detail,
        selection_seconds,
    })
}

type HoldoutResult = (Vec<RunRecord>, Vec<Failure>);

fn run_holdout(config: &RunConfig, datasets: &[Dataset], test: &Dataset) -> HoldoutResult {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let fail_all = |failures: &mut Vec<Failure>, rep: u32, error: String| {
        for b in &config.benchmarks {
            failures.push(Failure { benchmark: b.name(), holdout: test.name.clone(), repetition: rep, error: error.clone() });
        }
    };
    let pool = match build_pool(datasets, &test.name) {
        Ok(p) => p,
        Err(e) => {
            for rep in 1..=config.reps {
                fail_all(&mut failures, rep, e.to_string());
            }
            return (records, failures);
        }
    };
    for rep in 1..=config.reps {
        let mut rng = seeded(validation_seed(config.seed, &test.name, rep));
        let sets = match gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut rng) {
            Ok(s) => s,
            Err(e) => {
                fail_all(&mut failures, rep, e.to_string());
                continue;
            }
        };
        for bench in &config.benchmarks {
            match run_cell(bench, &pool, test, &sets, config.seed, rep) {
                Ok(r) => records.push(r),
                Err(error) => failures.push(Failure {
                    benchmark: bench.name(),
                    holdout: test.name.clone(),
                    repetition: rep,
                    error,
                }),
            }
        }
    }
    (records, failures)
}

const RUNS_FILE: &str = "runs.csv";
const TIMINGS_FILE: &str = "timings.csv";
const MANIFEST_FILE: &str = "manifest.json";

/// Runs every benchmark with every dataset held out in turn and writes the
/// run directory. Holdouts run in parallel on `jobs` workers; results are
/// written in dataset order, so the output does not depend on scheduling.
pub fn run_experiment(
    config: &RunConfig,
    datasets: &[Dataset],
    data_dir: Option<&Path>,
) -> Result<RunOutcome, RunnerError> {
    if datasets.len() < 2 {
        return Err(RunnerError::TooFewDatasets(datasets.len()));
    }
    if config.reps == 0 {
        return Err(RunnerError::ZeroReps);
    }
    fs::create_dir_all(&config.out).map_err(io_err(&config.out))?;
    let runs_path = config.out.join(RUNS_FILE);
    let timings_path = config.out.join(TIMINGS_FILE);
    let mut runs = csv::Writer::from_path(&runs_path).map_err(|e| fmt_err(&runs_path)(e.to_string()))?;
    let mut timings = csv::Writer::from_path(&timings_path).map_err(|e| fmt_err(&timings_path)(e.to_string()))?;

    let workers = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| RunnerError::Pool(e.to_string()))?;
    let (tx, rx) = mpsc::channel::<(usize, HoldoutResult)>();

    let mut outcome = RunOutcome { records: Vec::new(), failures: Vec::new() };
    let write_result: Result<(), RunnerError> = std::thread::scope(|scope| {
        scope.spawn(move || {
            workers.install(|| {
                datasets.par_iter().enumerate().for_each_with(tx, |tx, (i, test)| {
                    let _ = tx.send((i, run_holdout(config, datasets, test)));
                });
            });
        });
        // flush holdouts strictly in dataset order
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, result) in rx {
            pending.insert(i, result);
            while let Some((records, failures)) = pending.remove(&next) {
                for r in &records {
                    runs.serialize(r).map_err(|e| fmt_err(&runs_path)(e.to_string()))?;
                    timings
                        .serialize(TimingRow {
                            benchmark: r.benchmark.clone(),
                            holdout: r.holdout.clone(),
                            repetition: r.repetition,
                            selection_seconds: r.selection_seconds,
                        })
                        .map_err(|e| fmt_err(&timings_path)(e.to_string()))?;
                }
                runs.flush().map_err(io_err(&runs_path))?;
                timings.flush().map_err(io_err(&timings_path))?;
                outcome.records.extend(records);
                outcome.failures.extend(failures);
                next += 1;
            }
        }
        Ok(())
    });
    write_result?;

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        data_dir: data_dir.map(|d| d.display().to_string()),
        benchmarks: config.benchmarks.iter().map(BenchmarkId::name).collect(),
        reps: config.reps,
        seed: config.seed,
        jobs: config.jobs,
        datasets: datasets
            .iter()
            .map(|d| DatasetEntry { name: d.name.clone(), instances: d.len(), defective: d.defect_count() })
            .collect(),
        records: outcome.records.len(),
        failures: outcome.failures.clone(),
    };
    let manifest_path = config.out.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| fmt_err(&manifest_path)(e.to_string()))?;
    fs::write(&manifest_path, text + "\n").map_err(io_err(&manifest_path))?;
    Ok(outcome)
}

/// Keeps the datasets whose names are listed, in the given order.
pub fn filter_datasets(datasets: Vec<Dataset>, names: &[String]) -> Result<Vec<Dataset>, RunnerError> {
    if names.is_empty() {
        return Ok(datasets);
    }
    names
        .iter()
        .map(|n| {
            datasets
                .iter()
                .find(|d| d.name.eq_ignore_ascii_case(n))
                .cloned()
                .ok_or_else(|| RunnerError::UnknownDataset(n.clone()))
        })
        .collect()
}

/// Reads `runs.csv` and, when present, joins the timings.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>, RunnerError> {
    let path = dir.join(RUNS_FILE);
    if !path.is_file() {
        return Err(RunnerError::Io {
            path: path.clone(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "run store not found"),
        });
    }
    let mut reader = csv::Reader::from_path(&path).map_err(|e| fmt_err(&path)(e.to_string()))?;
    let mut records: Vec<RunRecord> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e: csv::Error| fmt_err(&path)(e.to_string()))?;

    let tpath = dir.join(TIMINGS_FILE);
    if tpath.is_file() {
        let mut reader = csv::Reader::from_path(&tpath).map_err(|e| fmt_err(&tpath)(e.to_string()))?;
        let mut times = BTreeMap::new();
        for row in reader.deserialize::<TimingRow>() {
            let row = row.map_err(|e| fmt_err(&tpath)(e.to_string()))?;
            times.insert((row.benchmark, row.holdout, row.repetition), row.selection_seconds);
        }
        for r in records.iter_mut() {
            if let Some(&t) = times.get(&(r.benchmark.clone(), r.holdout.clone(), r.repetition)) {
                r.selection_seconds = t;
            }
        }
    }
    Ok(records)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub benchmark: String,
    /// Median over repetitions per dataset, aligned with
    /// [`Summary::datasets`]; NaN where the benchmark has no record.
    pub per_dataset: Vec<f64>,
    /// Median, mean and standard deviation of the per-dataset medians.
    pub median: f64,
    pub mean: f64,
    pub std: f64,
    /// Median selection time over all cells, in seconds.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub measure: Measure,
    pub datasets: Vec<String>,
    /// Ascending by overall median, then by name.
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    pub fn row(&self, benchmark: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.benchmark == benchmark)
    }

    pub fn cell(&self, benchmark: &str, dataset: &str) -> Option<f64> {
        let j = self.datasets.iter().position(|d| d == dataset)?;
        self.row(benchmark).map(|r| r.per_dataset[j])
    }
}

/// Median tables over repetitions. The result does not depend on record
/// order.
pub fn summarize(records: &[RunRecord], measure: Measure) -> Result<Summary, RunnerError> {
    if records.is_empty() {
        return Err(RunnerError::EmptyStore(PathBuf::new()));
    }
    let datasets: Vec<String> = records.iter().map(|r| r.holdout.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut cells: BTreeMap<&str, BTreeMap<&str, Vec<f64>>> = BTreeMap::new();
    let mut times: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in records {
        let value = measure.of(&r.confusion().measures());
        cells.entry(&r.benchmark).or_default().entry(&r.holdout).or_default().push(value);
        times.entry(&r.benchmark).or_default().push(r.selection_seconds);
    }
    let mut rows: Vec<SummaryRow> = cells
        .iter()
        .map(|(bench, per)| {
            let per_dataset: Vec<f64> =
                datasets.iter().map(|d| per.get(d.as_str()).map_or(f64::NAN, |v| median(v))).collect();
            let present: Vec<f64> = per_dataset.iter().copied().filter(|v| !v.is_nan()).collect();
            let mean = present.iter().sum::<f64>() / present.len() as f64;
            let var = if present.len() > 1 {
                present.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (present.len() - 1) as f64
            } else {
                0.0
            };
            SummaryRow {
                benchmark: bench.to_string(),
                median: median(&present),
                mean,
                std: var.sqrt(),
                time: median(&times[bench]),
                per_dataset,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.median.total_cmp(&b.median).then_with(|| a.benchmark.cmp(&b.benchmark)));
    Ok(Summary { measure, datasets, rows })
}

/// Writes `summary_<measure>.csv` into `dir`.
pub fn write_summary(summary: &Summary, dir: &Path) -> Result<PathBuf, RunnerError> {
    let path = dir.join(format!("summary_{}.csv", summary.measure.name()));
    let mut w = csv::Writer::from_path(&path).map_err(|e| fmt_err(&path)(e.to_string()))?;
    let mut header = vec!["benchmark".to_string()];
    header.extend(summary.datasets.iter().cloned());
    header.extend(["Med", "Avg", "Std", "Time"].map(String::from));
    w.write_record(&header).map_err(|e| fmt_err(&path)(e.to_string()))?;
    for r in &summary.rows {
        let mut row = vec![r.benchmark.clone()];
        row.extend(r.per_dataset.iter().map(|v| format!("{v:.4}")));
        row.extend([r.median, r.mean, r.std].iter().map(|v| format!("{v:.4}")));
        row.push(format!("{:.3}", r.time));
        w.write_record(&row).map_err(|e| fmt_err(&path)(e.to_string()))?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub measure: Measure,
    pub groups: Vec<RankGroup>,
    /// Cliff's delta between the per-dataset medians of each pair of groups.
    pub deltas: Vec<Vec<f64>>,
    pub treatments: Vec<TreatmentSample>,
}

impl RankReport {
    pub fn rank_of(&self, benchmark: &str) -> Option<usize> {
        self.groups.iter().find(|g| g.members.iter().any(|m| m == benchmark)).map(|g| g.rank)
    }
}

/// Scott-Knott ESD over the per-dataset medians of each benchmark.
pub fn rank_report(
    records: &[RunRecord],
    measure: Measure,
    alpha: f64,
    negligible_d: f64,
) -> Result<RankReport, RunnerError> {
    let summary = summarize(records, measure)?;
    if summary.rows.len() < 2 {
        return Err(RunnerError::TooFewBenchmarks(summary.rows.len()));
    }
    let mut treatments: Vec<TreatmentSample> = summary
        .rows
        .iter()
        .map(|r| TreatmentSample::new(&r.benchmark, r.per_dataset.iter().copied().filter(|v| !v.is_nan()).collect()))
        .collect();
    treatments.sort_by(|a, b| a.name.cmp(&b.name));
    let groups = scott_knott_esd(&treatments, alpha, negligible_d)?;
    let deltas = group_deltas(&groups, &treatments)?;
    Ok(RankReport { measure, groups, deltas, treatments })
}

/// Writes `ranks_<measure>.csv` and `ranks_<measure>.txt` into `dir`.
pub fn write_rank_report(report: &RankReport, dir: &Path) -> Result<(PathBuf, PathBuf), RunnerError> {
    let name = report.measure.name();
    let csv_path = dir.join(format!("ranks_{name}.csv"));
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| fmt_err(&csv_path)(e.to_string()))?;
    w.write_record(["rank", "benchmark", "mean", "group_min", "group_max"])
        .map_err(|e| fmt_err(&csv_path)(e.to_string()))?;
    for g in &report.groups {
        for m in &g.members {
            let mean = report.treatments.iter().find(|t| &t.name == m).map_or(f64::NAN, |t| t.mean());
            w.write_record([
                g.rank.to_string(),
                m.clone(),
                format!("{mean:.4}"),
                format!("{:.4}", g.mean_range.0),
                format!("{:.4}", g.mean_range.1),
            ])
            .map_err(|e| fmt_err(&csv_path)(e.to_string()))?;
        }
    }
    w.flush().map_err(io_err(&csv_path))?;

    let txt_path = dir.join(format!("ranks_{name}.txt"));
    let file = File::create(&txt_path).map_err(io_err(&txt_path))?;
    let mut out = BufWriter::new(file);
    write_rank_text(report, &mut out).map_err(io_err(&txt_path))?;
    out.flush().map_err(io_err(&txt_path))?;
    Ok((csv_path, txt_path))
}

fn write_rank_text(report: &RankReport, out: &mut impl Write) -> std::io::Result<()> {
    let width = report.treatments.iter().map(|t| t.name.len()).max().unwrap_or(9).max(9);
    writeln!(out, "Scott-Knott ESD groups for {} (best first)", report.measure.name())?;
    writeln!(out)?;
    writeln!(out, "{:>4}  {:<width$}  {:>8}", "rank", "benchmark", "mean")?;
    for g in &report.groups {
        for m in &g.members {
            let mean = report.treatments.iter().find(|t| &t.name == m).map_or(f64::NAN, |t| t.mean());
            writeln!(out, "{:>4}  {:<width$}  {:>8.4}", g.rank, m, mean)?;
        }
    }
    writeln!(out)?;
    writeln!(out, "Cliff's delta between groups (row vs column)")?;
    write!(out, "{:>4}", "")?;
    for g in &report.groups {
        write!(out, "  {:>18}", g.rank)?;
    }
    writeln!(out)?;
    for (i, row) in report.deltas.iter().enumerate() {
        write!(out, "{:>4}", report.groups[i].rank)?;
        for d in row {
            let m = magnitude(*d).map(|m| m.to_string()).unwrap_or_default();
            write!(out, "  {:>7.4} {:>10}", d, m)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
