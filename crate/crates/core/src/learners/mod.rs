//! Base classifiers behind one train/predict contract.
//!
//! Three families are provided: naive Bayes ([`NaiveBayes`]), ridge logistic
//! regression ([`Logistic`]) and a C4.5-style decision tree
//! ([`DecisionTree`]). Each trained model fits its own min-max scaling on the
//! training rows and applies it to every instance it predicts. On equal
//! scores every model predicts [`Label::Clean`].

mod discretize;
mod logistic;
mod naive_bayes;
mod tree;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Dataset, Instance, Label, Normalizer};
use crate::eval::ConfusionMatrix;

pub use discretize::mdl_cut_points;
pub use logistic::Logistic;
pub use naive_bayes::NaiveBayes;
pub use tree::{DecisionTree, TreeOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnError {
    #[error("training data is empty")]
    Empty,
    #[error("training data contains a single class")]
    SingleClass,
    #[error("model expects {expected} features, instance has {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("training rows disagree on feature arity")]
    RaggedRows,
    #[error("invalid parameters for {kind}: {reason}")]
    InvalidParams { kind: LearnerKind, reason: String },
    #[error("unknown learner `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LearnerKind {
    NaiveBayes,
    Logistic,
    DecisionTree,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 3] = [LearnerKind::NaiveBayes, LearnerKind::Logistic, LearnerKind::DecisionTree];

    /// Short name used in benchmark identifiers.
    pub fn abbrev(self) -> &'static str {
        match self {
            LearnerKind::NaiveBayes => "NB",
            LearnerKind::Logistic => "LOG",
            LearnerKind::DecisionTree => "J48",
        }
    }

    pub fn from_abbrev(s: &str) -> Result<Self, LearnError> {
        match s {
            "NB" => Ok(LearnerKind::NaiveBayes),
            "LOG" => Ok(LearnerKind::Logistic),
            "J48" => Ok(LearnerKind::DecisionTree),
            other => Err(LearnError::UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LearnerKind::NaiveBayes => "naive_bayes",
            LearnerKind::Logistic => "logistic",
            LearnerKind::DecisionTree => "decision_tree",
        })
    }
}

const NB_DISCRETIZE: [bool; 2] = [false, true];
const LOG_RIDGE: [f64; 5] = [1e-8, 1e-4, 1e-2, 1.0, 10.0];
const TREE_MIN_LEAF: [usize; 4] = [2, 5, 10, 20];
const TREE_CONFIDENCE: [f64; 3] = [0.1, 0.25, 0.5];

/// A learner family together with one point of its hyper-parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LearnerSpec {
    /// `discretize` selects supervised (entropy/MDL) discretization into at
    /// most ten bins instead of Gaussian class-conditional densities.
    NaiveBayes { discretize: bool },
    Logistic { ridge: f64 },
    DecisionTree { min_leaf: usize, prune_confidence: f64 },
}

impl LearnerSpec {
    pub fn kind(&self) -> LearnerKind {
        match self {
            LearnerSpec::NaiveBayes { .. } => LearnerKind::NaiveBayes,
            LearnerSpec::Logistic { .. } => LearnerKind::Logistic,
            LearnerSpec::DecisionTree { .. } => LearnerKind::DecisionTree,
        }
    }

    /// The untuned configuration: the first point of the kind's grid.
    pub fn default_for(kind: LearnerKind) -> Self {
        grid(kind)[0]
    }

    pub fn params(&self) -> BTreeMap<&'static str, String> {
        let mut map = BTreeMap::new();
        match *self {
            LearnerSpec::NaiveBayes { discretize } => {
                map.insert("discretize", if discretize { "supervised-10-bin".into() } else { "off".into() });
            }
            LearnerSpec::Logistic { ridge } => {
                map.insert("ridge", format!("{ridge:e}"));
            }
            LearnerSpec::DecisionTree { min_leaf, prune_confidence } => {
                map.insert("min_leaf", min_leaf.to_string());
                map.insert("prune_confidence", prune_confidence.to_string());
            }
        }
        map
    }

    /// Checks the parameter values against the declared grid.
    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |reason: String| Err(LearnError::InvalidParams { kind: self.kind(), reason });
        match *self {
            LearnerSpec::NaiveBayes { .. } => Ok(()),
            LearnerSpec::Logistic { ridge } if !LOG_RIDGE.contains(&ridge) => bad(format!("ridge {ridge} not in grid")),
            LearnerSpec::DecisionTree { min_leaf, .. } if !TREE_MIN_LEAF.contains(&min_leaf) => {
                bad(format!("min_leaf {min_leaf} not in grid"))
            }
            LearnerSpec::DecisionTree { prune_confidence, .. } if !TREE_CONFIDENCE.contains(&prune_confidence) => {
                bad(format!("prune_confidence {prune_confidence} not in grid"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.kind())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

/// Every hyper-parameter combination for a learner family, in grid order.
pub fn grid(kind: LearnerKind) -> Vec<LearnerSpec> {
    match kind {
        LearnerKind::NaiveBayes => NB_DISCRETIZE.iter().map(|&discretize| LearnerSpec::NaiveBayes { discretize }).collect(),
        LearnerKind::Logistic => LOG_RIDGE.iter().map(|&ridge| LearnerSpec::Logistic { ridge }).collect(),
        LearnerKind::DecisionTree => TREE_MIN_LEAF
            .iter()
            .flat_map(|&min_leaf| {
                TREE_CONFIDENCE
                    .iter()
                    .map(move |&prune_confidence| LearnerSpec::DecisionTree { min_leaf, prune_confidence })
            })
            .collect(),
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    NaiveBayes(NaiveBayes),
    Logistic(Logistic),
    Tree(DecisionTree),
}

#[derive(Debug, Clone)]
pub struct TrainedModel {
    spec: LearnerSpec,
    arity: usize,
    scaler: Normalizer,
    fitted: Fitted,
}

impl TrainedModel {
    pub fn spec(&self) -> &LearnerSpec {
        &self.spec
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn predict(&self, features: &[f64]) -> Result<Label, LearnError> {
        if features.len() != self.arity {
            return Err(LearnError::ArityMismatch { expected: self.arity, found: features.len() });
        }
        Ok(self.predict_scaled(&self.scaler.apply(features)))
    }

    pub fn predict_instance(&self, instance: &Instance) -> Result<Label, LearnError> {
        self.predict(&instance.features)
    }

    fn predict_scaled(&self, x: &[f64]) -> Label {
        match &self.fitted {
            Fitted::NaiveBayes(m) => m.predict(x),
            Fitted::Logistic(m) => m.predict(x),
            Fitted::Tree(m) => m.predict(x),
        }
    }

    /// Tallies predictions against the instances' labels.
    pub fn evaluate<'a, I>(&self, instances: I) -> Result<ConfusionMatrix, LearnError>
    where
        I: IntoIterator<Item = &'a Instance>,
    {
        let mut cm = ConfusionMatrix::default();
        let mut buf = vec![0.0; self.arity];
        for inst in instances {
            if inst.features.len() != self.arity {
                return Err(LearnError::ArityMismatch { expected: self.arity, found: inst.features.len() });
            }
            for (j, slot) in buf.iter_mut().enumerate() {
                let (lo, hi) = (self.scaler.min[j], self.scaler.max[j]);
                *slot = if hi > lo { (inst.features[j] - lo) / (hi - lo) } else { 0.0 };
            }
            cm.record(self.predict_scaled(&buf), inst.label);
        }
        Ok(cm)
    }
}

pub fn train(spec: &LearnerSpec, data: &Dataset) -> Result<TrainedModel, LearnError> {
    let rows: Vec<&[f64]> = data.instances.iter().map(|i| i.features.as_slice()).collect();
    let labels = data.labels();
    train_rows(spec, &rows, &labels)
}

/// Trains on borrowed instances; avoids copying pool subsets.
pub fn train_refs(spec: &LearnerSpec, instances: &[&Instance]) -> Result<TrainedModel, LearnError> {
    let rows: Vec<&[f64]> = instances.iter().map(|i| i.features.as_slice()).collect();
    let labels: Vec<Label> = instances.iter().map(|i| i.label).collect();
    train_rows(spec, &rows, &labels)
}

pub fn train_rows(spec: &LearnerSpec, rows: &[&[f64]], labels: &[Label]) -> Result<TrainedModel, LearnError> {
    spec.validate()?;
    if rows.is_empty() {
        return Err(LearnError::Empty);
    }
    let arity = rows[0].len();
    if rows.iter().any(|r| r.len() != arity) || rows.len() != labels.len() {
        return Err(LearnError::RaggedRows);
    }
    let defective = labels.iter().filter(|l| l.is_defective()).count();
    if defective == 0 || defective == labels.len() {
        return Err(LearnError::SingleClass);
    }
    let scaler = Normalizer::fit(rows.iter().copied()).map_err(|_| LearnError::Empty)?;
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| scaler.apply(r)).collect();
    let fitted = match *spec {
        LearnerSpec::NaiveBayes { discretize } => Fitted::NaiveBayes(NaiveBayes::fit(&scaled, labels, discretize)),
        LearnerSpec::Logistic { ridge } => Fitted::Logistic(Logistic::fit(&scaled, labels, ridge)),
        LearnerSpec::DecisionTree { min_leaf, prune_confidence } => Fitted::Tree(DecisionTree::fit(
            &scaled,
            labels,
            TreeOptions { min_leaf, prune_confidence: Some(prune_confidence) },
        )),
    };
    Ok(TrainedModel { spec: *spec, arity, scaler, fitted })
}

/// Coefficient vector of a trained logistic model (intercept first).
pub fn logistic_coefficients(model: &TrainedModel) -> Option<&[f64]> {
    match &model.fitted {
        Fitted::Logistic(m) => Some(m.coefficients()),
        _ => None,
    }
}

/// Leaf count of a trained decision tree.
pub fn tree_leaf_count(model: &TrainedModel) -> Option<usize> {
    match &model.fitted {
        Fitted::Tree(t) => Some(t.leaf_count()),
        _ => None,
    }
}
