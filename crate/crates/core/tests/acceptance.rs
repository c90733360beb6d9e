//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria that need the thirteen PROMISE releases look for them in
//! `$CPDP_PROMISE_DIR`, then in `data/promise` under the workspace root. When
//! the files are absent those criteria fail with a BLOCKED note instead of
//! being skipped. A finished full-scale run directory can be supplied in
//! `$CPDP_FULL_RUN_DIR` to avoid repeating the sweep.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cpdp::data::{load_promise_releases, Dataset, Instance, Label, Origin, Pool};
use cpdp::eval::Measure;
use cpdp::learners::{LearnerKind, LearnerSpec};
use cpdp::rng::seeded;
use cpdp::runner::{load_records, median, rank_report, run_experiment, summarize, BenchmarkId, Method, RunConfig, RunRecord};
use cpdp::selectors::{gis_select, nn_filter_select, GisConfig, SizeMode, SuperBitHasher, ValidationMode};
use cpdp::stats::{cliffs_delta, scott_knott_esd, TreatmentSample};
use cpdp::synth::{write_surrogates, SynthParams};
use cpdp::validation::gen_random_validation;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

/// Published (classes, defective) per release.
const TABLE: [(&str, usize, usize); 13] = [
    ("ant-1.7", 745, 166),
    ("camel-1.6", 965, 188),
    ("ivy-2.0", 352, 40),
    ("jedit-4.3", 492, 11),
    ("log4j-1.2", 205, 189),
    ("lucene-2.4", 340, 203),
    ("poi-3.0", 442, 281),
    ("prop-6.0", 660, 66),
    ("synapse-1.2", 256, 86),
    ("tomcat-6.0", 885, 77),
    ("velocity-1.6", 229, 78),
    ("xalan-2.7", 885, 411),
    ("xerces-1.4", 588, 437),
];

const SMOKE_DATASETS: [&str; 3] = ["ant-1.7", "camel-1.6", "jedit-4.3"];
const SMOKE_REPS: u32 = 3;
const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn blocked(what: &str) -> Outcome {
    verdict(false, format!("BLOCKED: {what}"))
}

fn workspace_root() -> PathBuf {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    manifest.ancestors().nth(2).unwrap_or(manifest).to_path_buf()
}

fn promise_dir() -> Option<PathBuf> {
    let candidates = [std::env::var_os("CPDP_PROMISE_DIR").map(PathBuf::from), Some(workspace_root().join("data/promise"))];
    candidates.into_iter().flatten().find(|d| load_promise_releases(d).is_ok())
}

fn promise_missing() -> String {
    format!(
        "the thirteen PROMISE releases were not found (set CPDP_PROMISE_DIR or populate {})",
        workspace_root().join("data/promise").display()
    )
}

fn within(elapsed: Duration, budget: Duration) -> String {
    format!("{:.1}s of {:.0}s budget", elapsed.as_secs_f64(), budget.as_secs_f64())
}

// 1 ------------------------------------------------------------------------

fn data_fidelity() -> Outcome {
    let Some(dir) = promise_dir() else { return blocked(&promise_missing()) };
    let start = Instant::now();
    let datasets = match load_promise_releases(&dir) {
        Ok(d) => d,
        Err(e) => return verdict(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let mut mismatches = Vec::new();
    for (name, classes, defective) in TABLE {
        match datasets.iter().find(|d| d.name == name) {
            Some(d) if d.len() == classes && d.defect_count() == defective => {}
            Some(d) => mismatches.push(format!("{name}: {}/{} vs {classes}/{defective}", d.len(), d.defect_count())),
            None => mismatches.push(format!("{name}: missing")),
        }
    }
    let budget = Duration::from_secs(5);
    verdict(
        mismatches.is_empty() && elapsed < budget,
        if mismatches.is_empty() { format!("13/13 exact, {}", within(elapsed, budget)) } else { mismatches.join("; ") },
    )
}

// 2 ------------------------------------------------------------------------

fn oracle_scale(pool: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let lo = pool.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
            let hi = pool.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (x[j] - lo) / (hi - lo)
            } else {
                0.0
            }
        })
        .collect()
}

/// All-pairs k-NN union: sort every pool row by (distance, index).
fn oracle_nn_filter(pool: &[Vec<f64>], tests: &[Vec<f64>], k: usize) -> Vec<usize> {
    let scaled: Vec<Vec<f64>> = pool.iter().map(|r| oracle_scale(pool, r)).collect();
    let mut chosen = std::collections::BTreeSet::new();
    for t in tests {
        let q = oracle_scale(pool, t);
        let mut all: Vec<(f64, usize)> = scaled
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(), i))
            .collect();
        all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        chosen.extend(all.iter().take(k).map(|p| p.1));
    }
    chosen.into_iter().collect()
}

fn oracle_cliff(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0i64;
    for x in a {
        for y in b {
            if x > y {
                s += 1;
            } else if x < y {
                s -= 1;
            }
        }
    }
    s as f64 / (a.len() * b.len()) as f64
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(SEED);
    let name: Arc<str> = Arc::from("pool");
    let mut nn_bad = 0;
    for trial in 0..100 {
        let n = rng.gen_range(1..=200);
        let d = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=10);
        // Half the trials use an integer grid so that exact distance ties
        // occur. Rows 0 and 1 pin every column's range to [0, 4], which keeps
        // scaled values at exact quarters and equal distances bit-identical.
        let coarse = trial % 2 == 0;
        let draw = |rng: &mut cpdp::rng::Rng| {
            (0..d).map(|_| if coarse { rng.gen_range(0..=4) as f64 } else { rng.gen_range(-5.0..5.0) }).collect::<Vec<f64>>()
        };
        let mut rows: Vec<Vec<f64>> = (0..n.max(2)).map(|_| draw(&mut rng)).collect();
        if coarse {
            rows[0] = vec![0.0; d];
            rows[1] = vec![4.0; d];
        }
        let tests: Vec<Vec<f64>> = (0..rng.gen_range(1..=20)).map(|_| draw(&mut rng)).collect();
        let pool = Pool {
            holdout: "test".into(),
            instances: rows
                .iter()
                .enumerate()
                .map(|(row, f)| Instance {
                    features: f.clone(),
                    label: if row % 2 == 0 { Label::Clean } else { Label::Defective },
                    origin: Origin { dataset: name.clone(), row },
                })
                .collect(),
        };
        let got: Vec<usize> = nn_filter_select(&pool, &tests, k).unwrap().instances.iter().map(|i| i.origin.row).collect();
        if got != oracle_nn_filter(&rows, &tests, k) {
            nn_bad += 1;
        }
    }
    let mut cliff_bad = 0;
    for _ in 0..100 {
        let list = |rng: &mut cpdp::rng::Rng| (0..rng.gen_range(1..=50)).map(|_| rng.gen_range(0..10) as f64).collect::<Vec<_>>();
        let a = list(&mut rng);
        let b = list(&mut rng);
        if cliffs_delta(&a, &b).unwrap() != oracle_cliff(&a, &b) {
            cliff_bad += 1;
        }
    }
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(30);
    verdict(
        nn_bad == 0 && cliff_bad == 0 && elapsed < budget,
        format!("nn-filter mismatches {nn_bad}/100, cliff's delta mismatches {cliff_bad}/100, {}", within(elapsed, budget)),
    )
}

// 3 ------------------------------------------------------------------------

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn sign_agreement() -> Outcome {
    let start = Instant::now();
    let (dim, depth, batches) = (20, 8, 4);
    let angles = [0.0, PI / 4.0, PI / 2.0];
    let mut sums = [0.0; 3];
    let mut worst_ortho: f64 = 0.0;
    let mut vec_rng = seeded(SEED ^ 0x5eed);
    let hashers = 1000;
    for h in 0..hashers {
        let hasher = SuperBitHasher::build(dim, depth, batches, &mut seeded(h)).unwrap();
        let (dot, norm) = hasher.orthonormality_error();
        worst_ortho = worst_ortho.max(dot).max(norm);
        let u = unit((0..dim).map(|_| vec_rng.sample(StandardNormal)).collect());
        let raw: Vec<f64> = (0..dim).map(|_| vec_rng.sample(StandardNormal)).collect();
        let proj: f64 = raw.iter().zip(&u).map(|(a, b)| a * b).sum();
        let w = unit(raw.iter().zip(&u).map(|(a, b)| a - proj * b).collect());
        let su = hasher.signature(&u).unwrap();
        for (slot, &theta) in sums.iter_mut().zip(&angles) {
            let v: Vec<f64> = u.iter().zip(&w).map(|(a, b)| theta.cos() * a + theta.sin() * b).collect();
            *slot += su.agreement(&hasher.signature(&v).unwrap()).unwrap();
        }
    }
    let mut ok = worst_ortho < 1e-9;
    let mut parts = Vec::new();
    for (s, theta) in sums.iter().zip(angles) {
        let mean = s / hashers as f64;
        let expected = 1.0 - theta / PI;
        ok &= (mean - expected).abs() <= 0.03;
        parts.push(format!("theta={theta:.4}: {mean:.4} vs {expected:.4}"));
    }
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(60);
    ok &= elapsed < budget;
    verdict(ok, format!("{}; max orthonormality error {worst_ortho:.1e}; {}", parts.join(", "), within(elapsed, budget)))
}

// 4 ------------------------------------------------------------------------

/// Class decided by feature 0 with a margin; the other features are noise.
/// A `noise` fraction of labels is flipped.
fn noisy_separable(n: usize, noise: f64, seed: u64, name: &str) -> Vec<Instance> {
    let mut rng = seeded(seed);
    let ds: Arc<str> = Arc::from(name);
    (0..n)
        .map(|row| {
            let defective = rng.gen_bool(0.2);
            let mut features: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..1.0)).collect();
            features[0] = if defective { rng.gen_range(0.55..1.0) } else { rng.gen_range(0.0..0.45) };
            let mut label = if defective { Label::Defective } else { Label::Clean };
            if rng.gen_bool(noise) {
                label = label.flipped();
            }
            Instance { features, label, origin: Origin { dataset: ds.clone(), row } }
        })
        .collect()
}

fn gis_convergence() -> Outcome {
    let start = Instant::now();
    let pool = Pool { holdout: "test".into(), instances: noisy_separable(5000, 0.1, SEED, "pool") };
    let test: Vec<Vec<f64>> = noisy_separable(300, 0.0, SEED + 1, "test").into_iter().map(|i| i.features).collect();
    let sets = gen_random_validation(&pool, 20, &mut seeded(SEED + 2)).unwrap();

    let mut ok = true;
    let mut runs = 0;
    let mut max_trainings = 0;
    let mut headline = String::new();
    for learner in [LearnerSpec::default_for(LearnerKind::NaiveBayes), LearnerSpec::default_for(LearnerKind::Logistic)] {
        for size in [SizeMode::Fixed, SizeMode::Variable] {
            for val in [ValidationMode::NearestNeighbors, ValidationMode::MultipleRandom] {
                let config = GisConfig::new(size, val);
                let out = gis_select(&pool, &config, &test, &sets, &learner, &mut seeded(SEED + 3)).unwrap();
                runs += 1;
                max_trainings = max_trainings.max(out.trainings);
                ok &= out.best_fitness_per_generation.windows(2).all(|w| w[1] >= w[0]);
                ok &= out.trainings <= 40 * 21;
                if learner.kind() == LearnerKind::Logistic && size == SizeMode::Fixed && val == ValidationMode::MultipleRandom {
                    let gain = out.final_best - out.initial_best;
                    ok &= gain >= 0.05;
                    headline = format!(
                        "GIS({config}) logistic on 10%-noisy pool: {:.3} -> {:.3} (gain {gain:.3})",
                        out.initial_best, out.final_best
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(300);
    ok &= elapsed < budget;
    verdict(
        ok,
        format!("{runs} runs non-decreasing, max trainings {max_trainings} <= 840; {headline}; {}", within(elapsed, budget)),
    )
}

// 5 ------------------------------------------------------------------------

fn scott_knott_sanity() -> Outcome {
    let start = Instant::now();
    let same = vec![0.3, 0.5, 0.7, 0.2];
    let identical = scott_knott_esd(
        &[TreatmentSample::new("a", same.clone()), TreatmentSample::new("b", same)],
        0.05,
        0.2,
    )
    .unwrap();

    let mut rng = seeded(SEED);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let low: Vec<f64> = (0..10).map(|_| normal.sample(&mut rng)).collect();
    let high: Vec<f64> = (0..10).map(|_| 5.0 + normal.sample(&mut rng)).collect();
    let separated =
        scott_knott_esd(&[TreatmentSample::new("low", low), TreatmentSample::new("high", high)], 0.05, 0.2).unwrap();
    let separated_ok = separated.len() == 2 && separated[0].members == ["high"];

    let mut contiguous = 0;
    for case in 0..200 {
        let k = rng.gen_range(1..=10);
        let treatments: Vec<TreatmentSample> = (0..k)
            .map(|i| {
                let centre = rng.gen_range(0.0..3.0);
                let n = rng.gen_range(2..=12);
                TreatmentSample::new(format!("t{i}"), (0..n).map(|_| centre + normal.sample(&mut rng)).collect())
            })
            .collect();
        let alpha = [0.01, 0.05, 0.5][case % 3];
        let d = [0.0, 0.2, 0.8][case % 3];
        let groups = scott_knott_esd(&treatments, alpha, d).unwrap();
        let mean_of = |name: &str| treatments.iter().find(|t| t.name == name).unwrap().mean();
        let flat: Vec<f64> = groups.iter().flat_map(|g| g.members.iter().map(|m| mean_of(m))).collect();
        let covers = flat.len() == treatments.len()
            && treatments.iter().all(|t| groups.iter().filter(|g| g.members.contains(&t.name)).count() == 1);
        if covers && flat.windows(2).all(|w| w[0] >= w[1]) {
            contiguous += 1;
        }
    }
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(30);
    verdict(
        identical.len() == 1 && separated_ok && contiguous == 200 && elapsed < budget,
        format!(
            "identical -> {} group(s); 5 sd apart -> {} group(s); contiguous {contiguous}/200; {}",
            identical.len(),
            separated.len(),
            within(elapsed, budget)
        ),
    )
}

// 6 ------------------------------------------------------------------------

fn family(name: &str) -> Option<&'static str> {
    let b = BenchmarkId::parse(name).ok()?;
    Some(match (b.method, b.gis) {
        (Method::Lsh, _) => "LSH",
        (Method::Nnf, _) => "NNF",
        (Method::Gis, Some((_, ValidationMode::NearestNeighbors))) => "GIS(VNN)",
        (Method::Gis, _) => "GIS(VMUL)",
    })
}

fn family_time_medians(records: &[RunRecord]) -> BTreeMap<&'static str, f64> {
    let mut times: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(f) = family(&r.benchmark) {
            times.entry(f).or_default().push(r.selection_seconds);
        }
    }
    times.into_iter().map(|(f, v)| (f, median(&v))).collect()
}

fn time_ordering(records: &[RunRecord]) -> (bool, String) {
    let m = family_time_medians(records);
    let get = |f: &str| m.get(f).copied().unwrap_or(f64::NAN);
    let (lsh, nnf, gis) = (get("LSH"), get("NNF"), get("GIS(VNN)"));
    (lsh < nnf && nnf < gis, format!("median selection s: LSH {lsh:.3} NNF {nnf:.3} GIS(VNN) {gis:.3}"))
}

fn jedit_low(records: &[RunRecord]) -> (bool, String) {
    let summary = summarize(records, Measure::F).unwrap();
    let mut worst = ("", f64::NEG_INFINITY);
    for row in &summary.rows {
        if let Some(v) = summary.cell(&row.benchmark, "jedit-4.3") {
            if v > worst.1 {
                worst = (&row.benchmark, v);
            }
        }
    }
    (worst.1 < 0.10, format!("max jedit-4.3 median F {:.3} ({})", worst.1, worst.0))
}

fn full_run(dir: &Path) -> Result<(Vec<RunRecord>, Duration), String> {
    if let Some(existing) = std::env::var_os("CPDP_FULL_RUN_DIR").map(PathBuf::from) {
        if existing.join("runs.csv").is_file() {
            return load_records(&existing).map(|r| (r, Duration::ZERO)).map_err(|e| e.to_string());
        }
    }
    let datasets = load_promise_releases(dir).map_err(|e| e.to_string())?;
    let out = workspace_root().join("target/acceptance-full");
    let config = RunConfig {
        benchmarks: BenchmarkId::all(),
        reps: 20,
        seed: SEED,
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        out: out.clone(),
    };
    let start = Instant::now();
    run_experiment(&config, &datasets, Some(dir)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    load_records(&out).map(|r| (r, elapsed)).map_err(|e| e.to_string())
}

fn replication() -> Vec<(String, Outcome)> {
    let Some(dir) = promise_dir() else {
        return ["6a recall", "6b rank groups", "6c time ordering", "6d jedit-4.3", "6 smoke profile"]
            .into_iter()
            .map(|n| (n.to_string(), blocked(&promise_missing())))
            .collect();
    };
    let mut out = Vec::new();
    match full_run(&dir) {
        Err(e) => out.push(("6 full sweep".into(), verdict(false, e))),
        Ok((records, elapsed)) => {
            let recall = summarize(&records, Measure::Recall).unwrap();
            let med = |b: &str| recall.row(b).map_or(f64::NAN, |r| r.median);
            let (lsh, nnf) = (med("LSH-NB"), med("NNF-NB"));
            out.push((
                "6a recall".into(),
                verdict(lsh >= 0.85 && nnf <= 0.50, format!("LSH-NB median recall {lsh:.3} (>= 0.85), NNF-NB {nnf:.3} (<= 0.50)")),
            ));

            let ranks = rank_report(&records, Measure::F, 0.05, 0.2).unwrap();
            let mut ok = true;
            let mut parts = Vec::new();
            for l in ["NB", "LOG", "J48"] {
                for t in ["", "Tuned"] {
                    let (a, b) = (format!("LSH-{t}{l}"), format!("NNF-{t}{l}"));
                    let (ra, rb) = (ranks.rank_of(&a), ranks.rank_of(&b));
                    ok &= matches!((ra, rb), (Some(x), Some(y)) if x < y);
                    parts.push(format!("{a} {ra:?} vs {b} {rb:?}"));
                }
            }
            out.push(("6b rank groups".into(), verdict(ok, format!("{} groups; {}", ranks.groups.len(), parts.join(", ")))));

            let (ok, detail) = time_ordering(&records);
            out.push((
                "6c time ordering".into(),
                verdict(ok, format!("{detail}; sweep took {:.0}s", elapsed.as_secs_f64())),
            ));
            let (ok, detail) = jedit_low(&records);
            out.push(("6d jedit-4.3".into(), verdict(ok, detail)));
        }
    }

    let smoke_out = workspace_root().join("target/acceptance-smoke-promise");
    let start = Instant::now();
    let result = smoke_run(&dir, &smoke_out).and_then(|_| load_records(&smoke_out).map_err(|e| e.to_string()));
    let elapsed = start.elapsed();
    match result {
        Err(e) => out.push(("6 smoke profile".into(), verdict(false, e))),
        Ok(records) => {
            let (t_ok, t) = time_ordering(&records);
            let (j_ok, j) = jedit_low(&records);
            let budget = Duration::from_secs(300);
            out.push((
                "6 smoke profile".into(),
                verdict(t_ok && j_ok && elapsed < budget, format!("{t}; {j}; {}", within(elapsed, budget))),
            ));
        }
    }
    out
}

fn smoke_run(data_dir: &Path, out: &Path) -> Result<(), String> {
    let all = cpdp::data::load_dir(data_dir).map_err(|e| e.to_string())?;
    let datasets: Vec<Dataset> = SMOKE_DATASETS
        .iter()
        .map(|n| all.iter().find(|d| d.name == *n).cloned().ok_or(format!("{n} missing")))
        .collect::<Result<_, _>>()?;
    let config = RunConfig {
        benchmarks: BenchmarkId::select("*-NB").map_err(|e| e.to_string())?,
        reps: SMOKE_REPS,
        seed: SEED,
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        out: out.to_path_buf(),
    };
    run_experiment(&config, &datasets, Some(data_dir)).map_err(|e| e.to_string())?;
    Ok(())
}

// 7 ------------------------------------------------------------------------

fn determinism() -> (Outcome, Option<String>) {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let (data_dir, source) = match promise_dir() {
        Some(d) => (d, "PROMISE releases"),
        None => {
            let d = tmp.path().join("data");
            write_surrogates(&d, &SMOKE_DATASETS, &SynthParams::default(), SEED).unwrap();
            (d, "surrogate releases")
        }
    };
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    if let Err(e) = smoke_run(&data_dir, &a).and_then(|_| smoke_run(&data_dir, &b)) {
        return (verdict(false, e), None);
    }
    let bytes_a = std::fs::read(a.join("runs.csv")).unwrap();
    let bytes_b = std::fs::read(b.join("runs.csv")).unwrap();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(600);
    let rows = bytes_a.iter().filter(|&&c| c == b'\n').count().saturating_sub(1);
    let info = load_records(&a).ok().map(|r| {
        let (_, t) = time_ordering(&r);
        let (_, j) = jedit_low(&r);
        format!("smoke profile on {source}: {t}; {j}")
    });
    (
        verdict(
            bytes_a == bytes_b && rows > 0 && elapsed < budget,
            format!(
                "two smoke runs on {source}: {rows} rows, {} ; {}",
                if bytes_a == bytes_b { "byte-identical" } else { "DIFFERENT" },
                within(elapsed, budget)
            ),
        ),
        info,
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--quiet`; a name filter
    // other than "acceptance" skips the suite.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance".contains(f.as_str())) {
        return ExitCode::SUCCESS;
    }

    let mut results: Vec<(String, Outcome)> = Vec::new();
    let mut report = |name: &str, o: Outcome| {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((name.to_string(), o));
    };
    report("1 data fidelity", data_fidelity());
    report("2 oracle equivalence", oracle_equivalence());
    report("3 sign-agreement law", sign_agreement());
    report("4 GIS convergence", gis_convergence());
    report("5 Scott-Knott ESD sanity", scott_knott_sanity());
    for (name, o) in replication() {
        report(&name, o);
    }
    let (o, info) = determinism();
    report("7 determinism", o);
    if let Some(info) = info {
        println!("[INFO] {info}");
    }

    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| n.as_str()).collect();
    println!("\nacceptance: {} passed, {} failed", results.len() - failed.len(), failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
