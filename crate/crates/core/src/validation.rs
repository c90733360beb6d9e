//! Validation material for fitness assignment: random multi-sets drawn from
//! the pool, and the nearest-neighbour set of the test instances.

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::data::{has_both_classes, Instance, Pool};
use crate::learners::{train_refs, LearnerSpec, TrainedModel};
use crate::selectors::nn::{knn_union, ScaledPool};

pub const MIN_RANDOM_SIZE: usize = 125;
pub const MAX_RANDOM_SIZE: usize = 250;
pub const DEFAULT_RANDOM_SETS: usize = 20;
const MAX_RETRIES: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("pool too small: {size} instances, need at least {MAX_RANDOM_SIZE}")]
    PoolTooSmall { size: usize },
    #[error("pool lacks one of the two classes")]
    SingleClassPool,
    #[error("could not draw a two-class validation set in {MAX_RETRIES} attempts")]
    ClassGuaranteeUnreachable,
    #[error("validation set count must be at least 1")]
    ZeroCount,
    #[error("test set is empty")]
    EmptyTest,
    #[error("pool is empty")]
    EmptyPool,
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Random,
    NearestNeighbors,
}

#[derive(Debug, Clone)]
pub struct ValidationSet {
    pub instances: Vec<Instance>,
    pub provenance: Provenance,
    /// Pool index of each instance.
    pub pool_indices: Vec<usize>,
}

impl ValidationSet {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// `count` sets of uniformly random size in [125, 250], each sampled without
/// replacement and redrawn until it holds both classes.
pub fn gen_random_validation<R: Rng + ?Sized>(
    pool: &Pool,
    count: usize,
    rng: &mut R,
) -> Result<Vec<ValidationSet>, ValidationError> {
    if count == 0 {
        return Err(ValidationError::ZeroCount);
    }
    if pool.len() < MAX_RANDOM_SIZE {
        return Err(ValidationError::PoolTooSmall { size: pool.len() });
    }
    if !pool.has_both_classes() {
        return Err(ValidationError::SingleClassPool);
    }
    (0..count)
        .map(|_| {
            for _ in 0..MAX_RETRIES {
                let size = rng.gen_range(MIN_RANDOM_SIZE..=MAX_RANDOM_SIZE);
                let mut indices = sample(rng, pool.len(), size).into_vec();
                indices.sort_unstable();
                let instances: Vec<Instance> = indices.iter().map(|&i| pool.instances[i].clone()).collect();
                if has_both_classes(&instances) {
                    return Ok(ValidationSet { instances, provenance: Provenance::Random, pool_indices: indices });
                }
            }
            Err(ValidationError::ClassGuaranteeUnreachable)
        })
        .collect()
}

/// Union of the `k` nearest pool instances of every test instance, by
/// Euclidean distance on pool-scaled features, ordered by pool index.
pub fn gen_nn_validation(pool: &Pool, test_features: &[Vec<f64>], k: usize) -> Result<ValidationSet, ValidationError> {
    if k == 0 {
        return Err(ValidationError::ZeroK);
    }
    if pool.is_empty() {
        return Err(ValidationError::EmptyPool);
    }
    if test_features.is_empty() {
        return Err(ValidationError::EmptyTest);
    }
    let scaled = ScaledPool::new(pool);
    let tests = scaled.scale_all(test_features);
    let indices = knn_union(&scaled.rows, &tests, k);
    Ok(ValidationSet {
        instances: indices.iter().map(|&i| pool.instances[i].clone()).collect(),
        provenance: Provenance::NearestNeighbors,
        pool_indices: indices,
    })
}

/// Mean fitness (F x GMean) of a model over the validation sets.
pub fn mean_fitness(model: &TrainedModel, sets: &[ValidationSet]) -> f64 {
    if sets.is_empty() {
        return 0.0;
    }
    let total: f64 = sets
        .iter()
        .map(|s| model.evaluate(&s.instances).map_or(0.0, |cm| cm.measures().fitness))
        .sum();
    total / sets.len() as f64
}

/// Trains on `training` and scores it on `sets`; a training failure (for
/// instance a single-class subset) scores 0.
pub fn training_fitness(spec: &LearnerSpec, training: &[&Instance], sets: &[ValidationSet]) -> f64 {
    match train_refs(spec, training) {
        Ok(model) => mean_fitness(&model, sets),
        Err(_) => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Label, Origin};
    use crate::rng::seeded;
    use std::sync::Arc;

    fn pool_of(points: Vec<(Vec<f64>, Label)>) -> Pool {
        let name: Arc<str> = Arc::from("p");
        Pool {
            holdout: "h".into(),
            instances: points
                .into_iter()
                .enumerate()
                .map(|(row, (features, label))| Instance { features, label, origin: Origin { dataset: name.clone(), row } })
                .collect(),
        }
    }

    fn big_pool(n: usize) -> Pool {
        pool_of(
            (0..n)
                .map(|i| (vec![i as f64, (i % 7) as f64], if i % 5 == 0 { Label::Defective } else { Label::Clean }))
                .collect(),
        )
    }

    #[test]
    fn default_random_sets() {
        let pool = big_pool(600);
        let mut rng = seeded(7);
        let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut rng).unwrap();
        assert_eq!(sets.len(), 20);
        for s in &sets {
            assert!((MIN_RANDOM_SIZE..=MAX_RANDOM_SIZE).contains(&s.len()));
            assert!(has_both_classes(&s.instances));
            let mut idx = s.pool_indices.clone();
            idx.dedup();
            assert_eq!(idx.len(), s.len(), "sampled without replacement");
            assert!(s.instances.iter().all(|i| &*i.origin.dataset != "h"));
        }
        let again = gen_random_validation(&pool, 20, &mut seeded(7)).unwrap();
        for (a, b) in sets.iter().zip(&again) {
            assert_eq!(a.pool_indices, b.pool_indices);
        }
    }

    #[test]
    fn random_error_paths() {
        let mut rng = seeded(1);
        assert_eq!(gen_random_validation(&big_pool(100), 20, &mut rng).unwrap_err(), ValidationError::PoolTooSmall { size: 100 });
        assert_eq!(gen_random_validation(&big_pool(300), 0, &mut rng).unwrap_err(), ValidationError::ZeroCount);
        // one defective instance in 300: a set of <=250 misses it often but not always
        let mut pts: Vec<(Vec<f64>, Label)> = (0..300).map(|i| (vec![i as f64], Label::Clean)).collect();
        let single = pool_of(pts.clone());
        assert_eq!(gen_random_validation(&single, 1, &mut rng).unwrap_err(), ValidationError::SingleClassPool);
        pts[0].1 = Label::Defective;
        let sets = gen_random_validation(&pool_of(pts), 5, &mut rng).unwrap();
        assert!(sets.iter().all(|s| s.pool_indices.contains(&0)));
    }

    #[test]
    fn nn_validation_examples() {
        use Label::*;
        let pool = pool_of(vec![
            (vec![1.0, 0.0], Clean),
            (vec![0.5, 0.5], Defective),
            (vec![5.0, 5.0], Clean),
        ]);
        // pool-scaled: (1/9,0), (0,0.1), (1,1); test scales to (-1/9,0)
        let s = gen_nn_validation(&pool, &[vec![0.0, 0.0]], 2).unwrap();
        assert_eq!(s.pool_indices, vec![0, 1]);
        let s = gen_nn_validation(&pool, &[vec![0.0, 0.0]], 1).unwrap();
        assert_eq!(s.pool_indices, vec![1]);
        let s = gen_nn_validation(&pool, &[vec![0.0, 0.0]], 10).unwrap();
        assert_eq!(s.pool_indices, vec![0, 1, 2]);
        assert_eq!(gen_nn_validation(&pool, &[], 1).unwrap_err(), ValidationError::EmptyTest);
        assert_eq!(gen_nn_validation(&pool, &[vec![0.0, 0.0]], 0).unwrap_err(), ValidationError::ZeroK);
    }
}
