//! PROMISE-style defect datasets: loading, leave-one-project-out pools and
//! min-max feature scaling.
//!
//! A data file is comma-separated text with one header row. Identifier
//! columns (`name`, `version`, `name.1`, ...) are recognised by prefix and
//! skipped; the remaining columns must be the metric columns of the active
//! [`Schema`] in order, followed by the bug-count column. A class is
//! defect-prone iff its bug count is greater than zero.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The 20 static code metrics of the Jureczko PROMISE releases, in file order.
pub const PROMISE_METRICS: [&str; 20] = [
    "wmc", "dit", "noc", "cbo", "rfc", "lcom", "ca", "ce", "npm", "lcom3", "loc", "dam", "moa",
    "mfa", "cam", "ic", "cbm", "amc", "max_cc", "avg_cc",
];

/// A release used in the comparison study with its published size and
/// defect count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReleaseInfo {
    pub name: &'static str,
    pub abbrev: &'static str,
    pub classes: usize,
    pub defective: usize,
    /// File stems under which the release is commonly distributed.
    pub file_stems: &'static [&'static str],
}

/// The thirteen releases, in the order the results tables list them.
pub const PROMISE_RELEASES: [ReleaseInfo; 13] = [
    ReleaseInfo { name: "ant-1.7", abbrev: "ANT", classes: 745, defective: 166, file_stems: &["ant-1.7"] },
    ReleaseInfo { name: "camel-1.6", abbrev: "CML", classes: 965, defective: 188, file_stems: &["camel-1.6"] },
    ReleaseInfo { name: "ivy-2.0", abbrev: "IVY", classes: 352, defective: 40, file_stems: &["ivy-2.0"] },
    ReleaseInfo { name: "jedit-4.3", abbrev: "jED", classes: 492, defective: 11, file_stems: &["jedit-4.3"] },
    ReleaseInfo { name: "log4j-1.2", abbrev: "L4J", classes: 205, defective: 189, file_stems: &["log4j-1.2"] },
    ReleaseInfo { name: "lucene-2.4", abbrev: "LUC", classes: 340, defective: 203, file_stems: &["lucene-2.4"] },
    ReleaseInfo { name: "poi-3.0", abbrev: "POI", classes: 442, defective: 281, file_stems: &["poi-3.0"] },
    ReleaseInfo { name: "prop-6.0", abbrev: "PR6", classes: 660, defective: 66, file_stems: &["prop-6.0", "prop-6"] },
    ReleaseInfo { name: "synapse-1.2", abbrev: "SYN", classes: 256, defective: 86, file_stems: &["synapse-1.2"] },
    ReleaseInfo { name: "tomcat-6.0", abbrev: "TOM", classes: 885, defective: 77, file_stems: &["tomcat-6.0", "tomcat"] },
    ReleaseInfo { name: "velocity-1.6", abbrev: "VEL", classes: 229, defective: 78, file_stems: &["velocity-1.6"] },
    ReleaseInfo { name: "xalan-2.7", abbrev: "XAL", classes: 885, defective: 411, file_stems: &["xalan-2.7"] },
    ReleaseInfo { name: "xerces-1.4", abbrev: "XER", classes: 588, defective: 437, file_stems: &["xerces-1.4"] },
];

/// Looks up a release by its canonical name or any of its file stems.
pub fn release_info(name: &str) -> Option<&'static ReleaseInfo> {
    PROMISE_RELEASES
        .iter()
        .find(|r| r.name.eq_ignore_ascii_case(name) || r.file_stems.iter().any(|s| s.eq_ignore_ascii_case(name)))
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: file not found")]
    MissingFile { path: PathBuf },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: header does not match schema: {reason}")]
    HeaderMismatch { path: PathBuf, reason: String },
    #[error("{path}: row {row}: expected {expected} fields, found {found}")]
    WrongArity { path: PathBuf, row: usize, expected: usize, found: usize },
    #[error("{path}: row {row}: column `{column}` is not numeric: {value:?}")]
    NonNumeric { path: PathBuf, row: usize, column: String, value: String },
    #[error("{path}: row {row}: column `{column}` is not finite")]
    NonFinite { path: PathBuf, row: usize, column: String },
    #[error("{path}: empty data section")]
    EmptyData { path: PathBuf },
    #[error("{path}: malformed csv at row {row}: {message}")]
    Csv { path: PathBuf, row: usize, message: String },
    #[error("invalid schema manifest {path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("unknown holdout dataset `{0}`")]
    UnknownHoldout(String),
    #[error("at least two datasets are required to build a pool, got {0}")]
    TooFewDatasets(usize),
    #[error("pool for holdout `{0}` contains a single class")]
    SingleClassPool(String),
    #[error("cannot fit a normalizer on an empty reference set")]
    EmptyReference,
}

/// Binary defect label; defect-prone is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Clean,
    Defective,
}

impl Label {
    pub fn is_defective(self) -> bool {
        matches!(self, Label::Defective)
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Clean => Label::Defective,
            Label::Defective => Label::Clean,
        }
    }

    pub fn from_bug_count(bugs: f64) -> Label {
        if bugs > 0.0 {
            Label::Defective
        } else {
            Label::Clean
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Clean => "clean",
            Label::Defective => "defective",
        })
    }
}

/// Where an instance came from: dataset name and zero-based data row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub dataset: Arc<str>,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub features: Vec<f64>,
    pub label: Label,
    pub origin: Origin,
}

impl Instance {
    pub fn arity(&self) -> usize {
        self.features.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub instances: Vec<Instance>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, instances: Vec<Instance>) -> Self {
        Self { name: name.into(), instances }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn defect_count(&self) -> usize {
        self.instances.iter().filter(|i| i.label.is_defective()).count()
    }

    /// Feature arity of the first instance, or 0 when empty.
    pub fn arity(&self) -> usize {
        self.instances.first().map_or(0, Instance::arity)
    }

    pub fn has_both_classes(&self) -> bool {
        has_both_classes(&self.instances)
    }

    pub fn labels(&self) -> Vec<Label> {
        self.instances.iter().map(|i| i.label).collect()
    }

    pub fn features(&self) -> Vec<Vec<f64>> {
        self.instances.iter().map(|i| i.features.clone()).collect()
    }
}

pub fn has_both_classes(instances: &[Instance]) -> bool {
    let mut seen = [false; 2];
    for inst in instances {
        seen[inst.label.is_defective() as usize] = true;
        if seen[0] && seen[1] {
            return true;
        }
    }
    false
}

/// Column roles for a data file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    /// Header names starting with any of these prefixes are identifier
    /// columns and are discarded.
    pub id_prefixes: Vec<String>,
    /// Metric column names, in file order.
    pub metrics: Vec<String>,
    /// Name of the bug-count column, which must follow the metrics.
    pub bug_column: String,
}

impl Default for Schema {
    fn default() -> Self {
        Self::promise()
    }
}

impl Schema {
    /// The 20-metric Jureczko layout: `name,version,name.1,wmc,...,avg_cc,bug`.
    pub fn promise() -> Self {
        Self {
            id_prefixes: vec!["name".into(), "version".into()],
            metrics: PROMISE_METRICS.iter().map(|s| s.to_string()).collect(),
            bug_column: "bug".into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.metrics.len()
    }

    /// Reads a TOML manifest with `id_prefixes`, `metrics` and `bug_column`.
    pub fn from_manifest(path: &Path) -> Result<Self, DataError> {
        let text = fs::read_to_string(path).map_err(|source| io_error(path, source))?;
        let schema: Schema = toml::from_str(&text)
            .map_err(|e| DataError::Schema { path: path.to_path_buf(), message: e.to_string() })?;
        if schema.metrics.is_empty() {
            return Err(DataError::Schema { path: path.to_path_buf(), message: "no metric columns".into() });
        }
        Ok(schema)
    }

    fn is_identifier(&self, column: &str) -> bool {
        let column = column.trim().to_ascii_lowercase();
        self.id_prefixes.iter().any(|p| column.starts_with(&p.to_ascii_lowercase()))
    }

    /// Maps header columns to (metric positions, bug position).
    fn resolve(&self, header: &csv::StringRecord, path: &Path) -> Result<(Vec<usize>, usize), DataError> {
        let mismatch = |reason: String| DataError::HeaderMismatch { path: path.to_path_buf(), reason };
        let data_columns: Vec<(usize, String)> = header
            .iter()
            .enumerate()
            .filter(|(_, name)| !self.is_identifier(name))
            .map(|(i, name)| (i, name.trim().to_ascii_lowercase()))
            .collect();
        let expected = self.metrics.len() + 1;
        if data_columns.len() != expected {
            return Err(mismatch(format!(
                "expected {} metric columns plus `{}`, found {} non-identifier columns",
                self.metrics.len(),
                self.bug_column,
                data_columns.len()
            )));
        }
        let wanted = self.metrics.iter().chain(std::iter::once(&self.bug_column));
        for ((_, found), want) in data_columns.iter().zip(wanted) {
            if !found.eq_ignore_ascii_case(want) {
                return Err(mismatch(format!("expected column `{want}`, found `{found}`")));
            }
        }
        let positions: Vec<usize> = data_columns.iter().map(|(i, _)| *i).collect();
        let bug = positions[self.metrics.len()];
        Ok((positions[..self.metrics.len()].to_vec(), bug))
    }
}

fn io_error(path: &Path, source: std::io::Error) -> DataError {
    if source.kind() == std::io::ErrorKind::NotFound {
        DataError::MissingFile { path: path.to_path_buf() }
    } else {
        DataError::Io { path: path.to_path_buf(), source }
    }
}

/// Loads one release. The dataset is named after the file stem.
pub fn load_dataset(path: &Path, schema: &Schema) -> Result<Dataset, DataError> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset").to_string();
    load_dataset_named(path, schema, &name)
}

/// Loads one release under an explicit dataset name.
pub fn load_dataset_named(path: &Path, schema: &Schema, name: &str) -> Result<Dataset, DataError> {
    let bytes = fs::read(path).map_err(|source| io_error(path, source))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let header = reader
        .headers()
        .map_err(|e| DataError::Csv { path: path.to_path_buf(), row: 0, message: e.to_string() })?
        .clone();
    let (metric_cols, bug_col) = schema.resolve(&header, path)?;
    let dataset_name: Arc<str> = Arc::from(name);

    let mut instances = Vec::new();
    for (row, record) in reader.records().enumerate() {
        // 1-based row numbers counted over data rows
        let row_no = row + 1;
        let record = record
            .map_err(|e| DataError::Csv { path: path.to_path_buf(), row: row_no, message: e.to_string() })?;
        if record.len() == 1 && record.get(0).is_some_and(str::is_empty) {
            continue;
        }
        if record.len() != header.len() {
            return Err(DataError::WrongArity {
                path: path.to_path_buf(),
                row: row_no,
                expected: header.len(),
                found: record.len(),
            });
        }
        let parse = |col: usize| -> Result<f64, DataError> {
            let cell = &record[col];
            let value: f64 = cell.parse().map_err(|_| DataError::NonNumeric {
                path: path.to_path_buf(),
                row: row_no,
                column: header[col].to_string(),
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(DataError::NonFinite { path: path.to_path_buf(), row: row_no, column: header[col].to_string() });
            }
            Ok(value)
        };
        let features = metric_cols.iter().map(|&c| parse(c)).collect::<Result<Vec<_>, _>>()?;
        let bugs = parse(bug_col)?;
        instances.push(Instance {
            features,
            label: Label::from_bug_count(bugs),
            origin: Origin { dataset: dataset_name.clone(), row: instances.len() },
        });
    }
    if instances.is_empty() {
        return Err(DataError::EmptyData { path: path.to_path_buf() });
    }
    Ok(Dataset::new(name, instances))
}

/// Writes a dataset in the layout [`load_dataset`] reads: a `name` identifier
/// column, the schema metrics and a 0/1 bug column.
pub fn write_dataset(dataset: &Dataset, schema: &Schema, path: &Path) -> Result<(), DataError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    let mut header = vec!["name".to_string()];
    header.extend(schema.metrics.iter().cloned());
    header.push(schema.bug_column.clone());
    writer.write_record(&header).map_err(|e| csv_io(path, e))?;
    for inst in &dataset.instances {
        let mut row = Vec::with_capacity(header.len());
        row.push(format!("{}:{}", inst.origin.dataset, inst.origin.row));
        row.extend(inst.features.iter().map(|v| v.to_string()));
        row.push(if inst.label.is_defective() { "1".into() } else { "0".into() });
        writer.write_record(&row).map_err(|e| csv_io(path, e))?;
    }
    writer.flush().map_err(|source| DataError::Io { path: path.to_path_buf(), source })
}

fn csv_io(path: &Path, e: csv::Error) -> DataError {
    DataError::Csv { path: path.to_path_buf(), row: 0, message: e.to_string() }
}

/// Loads every `*.csv` file in `dir`, sorted by file name. A `schema.toml`
/// in the directory overrides the default PROMISE layout.
pub fn load_dir(dir: &Path) -> Result<Vec<Dataset>, DataError> {
    let schema = dir_schema(dir)?;
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|source| io_error(dir, source))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_dataset(p, &schema)).collect()
}

/// The schema for a data directory: `schema.toml` if present, else PROMISE.
pub fn dir_schema(dir: &Path) -> Result<Schema, DataError> {
    let manifest = dir.join("schema.toml");
    if manifest.exists() {
        Schema::from_manifest(&manifest)
    } else {
        Ok(Schema::promise())
    }
}

/// Locates a release file in `dir` by trying each known stem.
pub fn find_release_file(dir: &Path, info: &ReleaseInfo) -> Option<PathBuf> {
    info.file_stems.iter().map(|stem| dir.join(format!("{stem}.csv"))).find(|p| p.is_file())
}

/// Loads the thirteen study releases from `dir`, naming each by its
/// canonical release name and keeping the table order.
pub fn load_promise_releases(dir: &Path) -> Result<Vec<Dataset>, DataError> {
    let schema = dir_schema(dir)?;
    PROMISE_RELEASES
        .iter()
        .map(|info| {
            let path = find_release_file(dir, info)
                .ok_or_else(|| DataError::MissingFile { path: dir.join(format!("{}.csv", info.name)) })?;
            load_dataset_named(&path, &schema, info.name)
        })
        .collect()
}

/// The training pool for one leave-one-project-out split.
#[derive(Debug, Clone)]
pub struct Pool {
    pub holdout: String,
    pub instances: Vec<Instance>,
}

impl Pool {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.instances.first().map_or(0, Instance::arity)
    }

    pub fn defect_count(&self) -> usize {
        self.instances.iter().filter(|i| i.label.is_defective()).count()
    }

    pub fn has_both_classes(&self) -> bool {
        has_both_classes(&self.instances)
    }

    /// Copies the instances at `indices` into a named dataset.
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> Dataset {
        Dataset::new(name, indices.iter().map(|&i| self.instances[i].clone()).collect())
    }

    pub fn as_dataset(&self, name: impl Into<String>) -> Dataset {
        Dataset::new(name, self.instances.clone())
    }
}

/// Concatenates every dataset except `holdout`, in dataset then row order.
pub fn build_pool(datasets: &[Dataset], holdout: &str) -> Result<Pool, DataError> {
    if datasets.len() < 2 {
        return Err(DataError::TooFewDatasets(datasets.len()));
    }
    if !datasets.iter().any(|d| d.name == holdout) {
        return Err(DataError::UnknownHoldout(holdout.to_string()));
    }
    let instances: Vec<Instance> = datasets
        .iter()
        .filter(|d| d.name != holdout)
        .flat_map(|d| d.instances.iter().cloned())
        .collect();
    if !has_both_classes(&instances) {
        return Err(DataError::SingleClassPool(holdout.to_string()));
    }
    Ok(Pool { holdout: holdout.to_string(), instances })
}

/// Per-feature min-max scaling fitted on a reference collection.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Normalizer {
    pub fn fit<'a, I>(reference: I) -> Result<Self, DataError>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = reference.into_iter();
        let first = iter.next().ok_or(DataError::EmptyReference)?;
        let mut min = first.to_vec();
        let mut max = first.to_vec();
        for row in iter {
            for (j, &v) in row.iter().enumerate() {
                if v < min[j] {
                    min[j] = v;
                }
                if v > max[j] {
                    max[j] = v;
                }
            }
        }
        Ok(Self { min, max })
    }

    pub fn fit_instances(reference: &[Instance]) -> Result<Self, DataError> {
        Self::fit(reference.iter().map(|i| i.features.as_slice()))
    }

    pub fn arity(&self) -> usize {
        self.min.len()
    }

    /// `(x - min) / (max - min)` per feature; constant features map to 0 and
    /// out-of-range values are not clamped.
    pub fn apply(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&x, (&lo, &hi))| if hi > lo { (x - lo) / (hi - lo) } else { 0.0 })
            .collect()
    }

    pub fn apply_instance(&self, instance: &Instance) -> Instance {
        Instance { features: self.apply(&instance.features), ..instance.clone() }
    }
}
