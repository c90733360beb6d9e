//! Confusion matrices and the scalar measures derived from them.
//!
//! Defect-prone is the positive class. Every ratio whose denominator is zero
//! is defined as 0 so that degenerate predictors still receive a fitness.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("predicted and actual label lists differ in length ({predicted} vs {actual})")]
    LengthMismatch { predicted: usize, actual: usize },
    #[error("cannot build a confusion matrix from empty label lists")]
    Empty,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: Label, actual: Label) {
        match (predicted, actual) {
            (Label::Defective, Label::Defective) => self.tp += 1,
            (Label::Defective, Label::Clean) => self.fp += 1,
            (Label::Clean, Label::Clean) => self.tn += 1,
            (Label::Clean, Label::Defective) => self.fn_ += 1,
        }
    }

    /// The same outcomes with the positive and negative classes exchanged.
    pub fn swapped(&self) -> Self {
        Self { tp: self.tn, fp: self.fn_, tn: self.tp, fn_: self.fp }
    }

    pub fn measures(&self) -> Measures {
        measures(self)
    }
}

pub fn confusion(predicted: &[Label], actual: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if predicted.len() != actual.len() {
        return Err(EvalError::LengthMismatch { predicted: predicted.len(), actual: actual.len() });
    }
    if predicted.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        cm.record(p, a);
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub f_measure: f64,
    pub g_mean: f64,
    /// F-measure x GMean, the objective for every tuning and search step.
    pub fitness: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn measures(cm: &ConfusionMatrix) -> Measures {
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let recall = ratio(cm.tp, cm.tp + cm.fn_);
    let specificity = ratio(cm.tn, cm.tn + cm.fp);
    let f_measure = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    let g_mean = (recall * specificity).sqrt();
    Measures { precision, recall, specificity, f_measure, g_mean, fitness: f_measure * g_mean }
}

/// Which scalar to read off a [`Measures`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    F,
    Precision,
    Recall,
    GMean,
    Fitness,
}

impl Measure {
    pub fn of(self, m: &Measures) -> f64 {
        match self {
            Measure::F => m.f_measure,
            Measure::Precision => m.precision,
            Measure::Recall => m.recall,
            Measure::GMean => m.g_mean,
            Measure::Fitness => m.fitness,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::F => "f",
            Measure::Precision => "precision",
            Measure::Recall => "recall",
            Measure::GMean => "gmean",
            Measure::Fitness => "fitness",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" | "f-measure" | "fmeasure" => Some(Measure::F),
            "precision" => Some(Measure::Precision),
            "recall" => Some(Measure::Recall),
            "gmean" | "g-mean" => Some(Measure::GMean),
            "fitness" => Some(Measure::Fitness),
            _ => None,
        }
    }
}
