//! Grid search over a learner's hyper-parameters, scored by mean validation
//! fitness.

use rayon::prelude::*;
use thiserror::Error;

use crate::data::{Dataset, Instance};
use crate::learners::{grid, LearnerKind, LearnerSpec};
use crate::validation::{training_fitness, ValidationSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TuningError {
    #[error("no validation sets supplied")]
    NoValidation,
    #[error("candidate grid is empty")]
    EmptyGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuningResult {
    pub best_spec: LearnerSpec,
    pub best_score: f64,
    /// Every candidate with its mean fitness, in grid order.
    pub scores: Vec<(LearnerSpec, f64)>,
    pub validation_count: usize,
}

/// Tunes over the full grid of `kind`.
pub fn grid_search(kind: LearnerKind, training: &Dataset, sets: &[ValidationSet]) -> Result<TuningResult, TuningError> {
    search_specs(&grid(kind), training, sets)
}

/// Trains one model per candidate and keeps the best mean fitness. Ties go
/// to the earlier candidate; a candidate that fails to train scores 0.
pub fn search_specs(
    candidates: &[LearnerSpec],
    training: &Dataset,
    sets: &[ValidationSet],
) -> Result<TuningResult, TuningError> {
    if sets.is_empty() {
        return Err(TuningError::NoValidation);
    }
    if candidates.is_empty() {
        return Err(TuningError::EmptyGrid);
    }
    let refs: Vec<&Instance> = training.instances.iter().collect();
    let scores: Vec<(LearnerSpec, f64)> =
        candidates.par_iter().map(|s| (s.clone(), training_fitness(s, &refs, sets))).collect();
    let (best_spec, best_score) = scores
        .iter()
        .fold(None::<&(LearnerSpec, f64)>, |best, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
        .cloned()
        .expect("non-empty");
    Ok(TuningResult { best_spec, best_score, scores, validation_count: sets.len() })
}
