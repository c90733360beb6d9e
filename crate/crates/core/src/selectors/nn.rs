//! Exact k-nearest-neighbour relevancy filtering.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use crate::data::{Dataset, Normalizer, Pool};
use crate::learners::LearnerSpec;
use crate::validation::{training_fitness, ValidationSet};

use super::SelectError;

/// Candidate values of k searched by [`tune_nn_k`].
pub const NN_K_RANGE: RangeInclusive<usize> = 1..=10;

/// Pool features scaled by a normalizer fitted on the pool itself.
#[derive(Debug, Clone)]
pub struct ScaledPool {
    pub normalizer: Normalizer,
    pub rows: Vec<Vec<f64>>,
}

impl ScaledPool {
    pub fn new(pool: &Pool) -> Self {
        let normalizer = Normalizer::fit_instances(&pool.instances).expect("non-empty pool");
        let rows = pool.instances.iter().map(|i| normalizer.apply(&i.features)).collect();
        Self { normalizer, rows }
    }

    pub fn scale_all(&self, features: &[Vec<f64>]) -> Vec<Vec<f64>> {
        features.iter().map(|f| self.normalizer.apply(f)).collect()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Indices of the `k` rows nearest to `query`; ties go to the lower index.
pub fn knn(rows: &[Vec<f64>], query: &[f64], k: usize, scratch: &mut Vec<(f64, usize)>) -> Vec<usize> {
    scratch.clear();
    scratch.extend(rows.iter().enumerate().map(|(i, r)| (squared_distance(r, query), i)));
    let k = k.min(scratch.len());
    if k == 0 {
        return Vec::new();
    }
    if k < scratch.len() {
        scratch.select_nth_unstable_by(k - 1, by_distance_then_index);
    }
    let head = &mut scratch[..k];
    head.sort_unstable_by(by_distance_then_index);
    head.iter().map(|&(_, i)| i).collect()
}

/// Deduplicated union of every query's `k` nearest rows, ascending.
pub fn knn_union(rows: &[Vec<f64>], queries: &[Vec<f64>], k: usize) -> Vec<usize> {
    let mut selected = vec![false; rows.len()];
    let mut scratch = Vec::with_capacity(rows.len());
    for q in queries {
        for i in knn(rows, q, k, &mut scratch) {
            selected[i] = true;
        }
    }
    selected.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
}

fn check_inputs(pool: &Pool, test_features: &[Vec<f64>], k: usize) -> Result<(), SelectError> {
    if k == 0 {
        return Err(SelectError::ZeroK);
    }
    if pool.is_empty() {
        return Err(SelectError::EmptyPool);
    }
    if test_features.is_empty() {
        return Err(SelectError::EmptyTest);
    }
    let d = pool.arity();
    if let Some(t) = test_features.iter().find(|t| t.len() != d) {
        return Err(SelectError::ArityMismatch(d, t.len()));
    }
    Ok(())
}

/// Pool indices selected by a k-NN filter around the test instances.
pub fn nn_filter_indices(pool: &Pool, test_features: &[Vec<f64>], k: usize) -> Result<Vec<usize>, SelectError> {
    check_inputs(pool, test_features, k)?;
    let scaled = ScaledPool::new(pool);
    Ok(knn_union(&scaled.rows, &scaled.scale_all(test_features), k))
}

/// The NN-Filter training set: the union of each test instance's `k`
/// Euclidean-nearest pool instances, in pool order.
pub fn nn_filter_select(pool: &Pool, test_features: &[Vec<f64>], k: usize) -> Result<Dataset, SelectError> {
    let indices = nn_filter_indices(pool, test_features, k)?;
    Ok(pool.subset(format!("nnf-k{k}"), &indices))
}

/// Picks k in 1..=10 by mean validation fitness of a model trained on each
/// k's selection. Every k recomputes its own filter. Ties go to the smaller k.
pub fn tune_nn_k(
    pool: &Pool,
    test_features: &[Vec<f64>],
    validation_sets: &[ValidationSet],
    spec: &LearnerSpec,
) -> Result<usize, SelectError> {
    if validation_sets.is_empty() {
        return Err(SelectError::NoValidation);
    }
    check_inputs(pool, test_features, 1)?;
    let mut best = (f64::NEG_INFINITY, *NN_K_RANGE.start());
    for k in NN_K_RANGE {
        let indices = nn_filter_indices(pool, test_features, k)?;
        let refs: Vec<_> = indices.iter().map(|&i| &pool.instances[i]).collect();
        let fitness = training_fitness(spec, &refs, validation_sets);
        if fitness > best.0 {
            best = (fitness, k);
        }
    }
    Ok(best.1)
}
