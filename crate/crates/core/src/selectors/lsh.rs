//! Super-bit locality-sensitive hashing and best-bucket selection.
//!
//! A [`SuperBitHasher`] holds `L` batches of `N` Gaussian random vectors,
//! each batch orthonormalised, giving `K = L * N` projection signs per
//! instance. The fraction of agreeing sign bits between two signatures
//! estimates `1 - angle / pi`. Pools are split into `B` buckets by hashing
//! the signature, and the bucket whose model scores the best mean fitness on
//! the validation sets becomes the training data.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::{Dataset, Instance, Label, Normalizer, Pool};
use crate::learners::LearnerSpec;
use crate::rng::stable_hash_words;
use crate::validation::{training_fitness, ValidationSet};

use super::SelectError;

/// Buckets with fewer members than this are never evaluated.
pub const MIN_BUCKET_SIZE: usize = 25;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `v1 . v2 / (|v1| |v2|)`.
pub fn cosine(v1: &[f64], v2: &[f64]) -> Result<f64, SelectError> {
    if v1.len() != v2.len() {
        return Err(SelectError::ArityMismatch(v1.len(), v2.len()));
    }
    let (n1, n2) = (norm(v1), norm(v2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(SelectError::ZeroVector);
    }
    Ok((dot(v1, v2) / (n1 * n2)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone)]
pub struct SuperBitHasher {
    dim: usize,
    depth: usize,
    batches: usize,
    /// `batches * depth` unit vectors; consecutive runs of `depth` are
    /// mutually orthogonal.
    vectors: Vec<Vec<f64>>,
}

impl SuperBitHasher {
    /// Samples `batches` batches of `depth` Gaussian vectors in `dim`
    /// dimensions and orthonormalises each batch with Gram-Schmidt.
    pub fn build<R: Rng + ?Sized>(dim: usize, depth: usize, batches: usize, rng: &mut R) -> Result<Self, SelectError> {
        if depth == 0 || depth > dim {
            return Err(SelectError::BadDepth { depth, dim });
        }
        if batches == 0 {
            return Err(SelectError::ZeroBatches);
        }
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(depth * batches);
        for _ in 0..batches {
            let start = vectors.len();
            while vectors.len() - start < depth {
                let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                // two passes of modified Gram-Schmidt keep residual dot
                // products near machine precision
                for _ in 0..2 {
                    for u in &vectors[start..] {
                        let p = dot(&v, u);
                        v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
                    }
                }
                let n = norm(&v);
                if n < 1e-8 {
                    continue;
                }
                v.iter_mut().for_each(|x| *x /= n);
                vectors.push(v);
            }
        }
        Ok(Self { dim, depth, batches, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Super-bit depth `N`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of super-bits `L`.
    pub fn batches(&self) -> usize {
        self.batches
    }

    /// Signature length `K = L * N`.
    pub fn code_length(&self) -> usize {
        self.vectors.len()
    }

    pub fn batch(&self, b: usize) -> &[Vec<f64>] {
        &self.vectors[b * self.depth..(b + 1) * self.depth]
    }

    /// Largest |u.v| between distinct vectors of a batch and largest
    /// | |u| - 1 | over all vectors.
    pub fn orthonormality_error(&self) -> (f64, f64) {
        let mut max_dot: f64 = 0.0;
        let mut max_norm: f64 = 0.0;
        for b in 0..self.batches {
            let batch = self.batch(b);
            for (i, u) in batch.iter().enumerate() {
                max_norm = max_norm.max((norm(u) - 1.0).abs());
                for v in &batch[i + 1..] {
                    max_dot = max_dot.max(dot(u, v).abs());
                }
            }
        }
        (max_dot, max_norm)
    }

    /// Bit `i` is set iff `vectors[i] . features >= 0`.
    pub fn signature(&self, features: &[f64]) -> Result<Signature, SelectError> {
        if features.len() != self.dim {
            return Err(SelectError::ArityMismatch(self.dim, features.len()));
        }
        let mut sig = Signature::zeros(self.code_length());
        for (i, v) in self.vectors.iter().enumerate() {
            if dot(v, features) >= 0.0 {
                sig.set(i);
            }
        }
        Ok(sig)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    words: Vec<u64>,
    len: usize,
}

impl Signature {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if self.len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (self.len % 64)) - 1;
        }
        Self { words, len: self.len }
    }

    pub fn hamming(&self, other: &Signature) -> Result<usize, SelectError> {
        if self.len != other.len {
            return Err(SelectError::SignatureLength(self.len, other.len));
        }
        Ok(self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum())
    }

    /// Fraction of agreeing bits.
    pub fn agreement(&self, other: &Signature) -> Result<f64, SelectError> {
        Ok(1.0 - self.hamming(other)? as f64 / self.len as f64)
    }

    pub fn stable_hash(&self) -> u64 {
        stable_hash_words(&self.words)
    }
}

/// `pi * hamming / K`.
pub fn estimate_angle(a: &Signature, b: &Signature) -> Result<f64, SelectError> {
    Ok(std::f64::consts::PI * a.hamming(b)? as f64 / a.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub id: usize,
    pub members: Vec<usize>,
}

/// Assigns every point to bucket `hash(signature) mod B`. Returns all `B`
/// buckets, some possibly empty; members are in point order.
pub fn bucketize(points: &[Vec<f64>], hasher: &SuperBitHasher, bucket_count: usize) -> Result<Vec<Bucket>, SelectError> {
    if bucket_count < 2 {
        return Err(SelectError::TooFewBuckets(bucket_count));
    }
    let mut buckets: Vec<Bucket> = (0..bucket_count).map(|id| Bucket { id, members: Vec::new() }).collect();
    for (i, p) in points.iter().enumerate() {
        let id = (hasher.signature(p)?.stable_hash() % bucket_count as u64) as usize;
        buckets[id].members.push(i);
    }
    Ok(buckets)
}

/// Pool features min-max scaled on the pool and centred on the pool mean.
#[derive(Debug, Clone)]
pub struct LshSpace {
    pub normalizer: Normalizer,
    pub mean: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl LshSpace {
    pub fn new(pool: &Pool) -> Result<Self, SelectError> {
        let normalizer = Normalizer::fit_instances(&pool.instances).map_err(|_| SelectError::EmptyPool)?;
        let mut points: Vec<Vec<f64>> = pool.instances.iter().map(|i| normalizer.apply(&i.features)).collect();
        let d = normalizer.arity();
        let mut mean = vec![0.0; d];
        for p in &points {
            mean.iter_mut().zip(p).for_each(|(m, v)| *m += v);
        }
        mean.iter_mut().for_each(|m| *m /= points.len() as f64);
        for p in points.iter_mut() {
            p.iter_mut().zip(&mean).for_each(|(v, m)| *v -= m);
        }
        Ok(Self { normalizer, mean, points })
    }

    pub fn project(&self, features: &[f64]) -> Vec<f64> {
        let mut v = self.normalizer.apply(features);
        v.iter_mut().zip(&self.mean).for_each(|(x, m)| *x -= m);
        v
    }
}

/// One point of the LSH parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LshParams {
    /// Super-bit depth `N`.
    pub depth: usize,
    /// Number of super-bits `L`.
    pub batches: usize,
    /// Number of buckets `B`.
    pub buckets: usize,
}

impl LshParams {
    pub fn code_length(&self) -> usize {
        self.depth * self.batches
    }
}

/// Candidate depths, target code lengths and bucket counts. `L` is the
/// target code length divided by the depth, rounded up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LshGrid {
    pub depths: Vec<usize>,
    pub code_lengths: Vec<usize>,
    pub bucket_counts: Vec<usize>,
}

impl Default for LshGrid {
    fn default() -> Self {
        Self { depths: vec![4, 10, 20], code_lengths: vec![8, 16, 32], bucket_counts: vec![5, 10, 20] }
    }
}

impl LshGrid {
    pub fn single(depth: usize, batches: usize, buckets: usize) -> Self {
        Self { depths: vec![depth], code_lengths: vec![depth * batches], bucket_counts: vec![buckets] }
    }

    /// Distinct (N, L, B) triples applicable to `dim`-dimensional data, in
    /// grid order.
    pub fn points(&self, dim: usize) -> Vec<LshParams> {
        let mut out: Vec<LshParams> = Vec::new();
        for &depth in self.depths.iter().filter(|&&n| n >= 1 && n <= dim) {
            for &k in &self.code_lengths {
                let batches = k.div_ceil(depth).max(1);
                for &buckets in &self.bucket_counts {
                    let p = LshParams { depth, batches, buckets };
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct LshSelection {
    pub dataset: Dataset,
    /// Winning grid point; `None` on fallback.
    pub params: Option<LshParams>,
    pub bucket_id: Option<usize>,
    pub fitness: f64,
    /// Set when no grid point produced an eligible bucket and the whole pool
    /// was returned.
    pub fallback: bool,
    pub evaluated_buckets: usize,
}

fn eligible(bucket: &Bucket, pool: &Pool) -> bool {
    if bucket.members.len() < MIN_BUCKET_SIZE {
        return false;
    }
    let first = pool.instances[bucket.members[0]].label;
    bucket.members.iter().any(|&i| pool.instances[i].label != first)
}

/// Tunes (N, L, B) over `grid` and returns the best-fitness bucket. Ties go
/// to the larger bucket, then the lower bucket id, then the earlier grid
/// point.
pub fn lsh_select<R: Rng + ?Sized>(
    pool: &Pool,
    validation_sets: &[ValidationSet],
    spec: &LearnerSpec,
    grid: &LshGrid,
    rng: &mut R,
) -> Result<LshSelection, SelectError> {
    if validation_sets.is_empty() {
        return Err(SelectError::NoValidation);
    }
    if pool.is_empty() {
        return Err(SelectError::EmptyPool);
    }
    if !pool.has_both_classes() {
        return Err(SelectError::SingleClassPool);
    }
    let space = LshSpace::new(pool)?;
    let points = grid.points(pool.arity());
    if points.is_empty() {
        return Err(SelectError::EmptyGrid(pool.arity()));
    }

    // (fitness, size, id, params, members)
    let mut best: Option<(f64, usize, usize, LshParams, Vec<usize>)> = None;
    let mut evaluated = 0;
    for params in points {
        let hasher = SuperBitHasher::build(pool.arity(), params.depth, params.batches, rng)?;
        for bucket in bucketize(&space.points, &hasher, params.buckets)? {
            if !eligible(&bucket, pool) {
                continue;
            }
            evaluated += 1;
            let refs: Vec<&Instance> = bucket.members.iter().map(|&i| &pool.instances[i]).collect();
            let fitness = training_fitness(spec, &refs, validation_sets);
            let size = bucket.members.len();
            let better = match &best {
                None => true,
                Some((bf, bs, bid, _, _)) => {
                    fitness > *bf || (fitness == *bf && (size > *bs || (size == *bs && bucket.id < *bid)))
                }
            };
            if better {
                best = Some((fitness, size, bucket.id, params, bucket.members));
            }
        }
    }

    Ok(match best {
        Some((fitness, _, id, params, members)) => LshSelection {
            dataset: pool.subset(format!("lsh-n{}-l{}-b{}-#{id}", params.depth, params.batches, params.buckets), &members),
            params: Some(params),
            bucket_id: Some(id),
            fitness,
            fallback: false,
            evaluated_buckets: evaluated,
        },
        None => {
            let refs: Vec<&Instance> = pool.instances.iter().collect();
            LshSelection {
                dataset: pool.as_dataset("lsh-fallback-pool"),
                params: None,
                bucket_id: None,
                fitness: training_fitness(spec, &refs, validation_sets),
                fallback: true,
                evaluated_buckets: 0,
            }
        }
    })
}

/// Majority label of a selection; handy in diagnostics.
pub fn majority_label(dataset: &Dataset) -> Label {
    if dataset.defect_count() * 2 > dataset.len() {
        Label::Defective
    } else {
        Label::Clean
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn cosine_examples() {
        let v = [0.3, -2.0, 5.0];
        assert_abs_diff_eq!(cosine(&v, &v).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(cosine(&[1.0, 1.0], &[1.0, 0.0]).unwrap(), 0.70711, epsilon = 1e-5);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]).unwrap_err(), SelectError::ZeroVector);
        assert!(matches!(cosine(&[1.0], &[1.0, 0.0]), Err(SelectError::ArityMismatch(1, 2))));
    }

    #[test]
    fn hasher_shape_and_errors() {
        let h = SuperBitHasher::build(20, 10, 2, &mut seeded(3)).unwrap();
        assert_eq!(h.code_length(), 20);
        let (d, n) = h.orthonormality_error();
        assert!(d < 1e-9 && n < 1e-9, "{d} {n}");
        assert_eq!(
            SuperBitHasher::build(20, 21, 1, &mut seeded(3)).unwrap_err(),
            SelectError::BadDepth { depth: 21, dim: 20 }
        );
        assert_eq!(SuperBitHasher::build(20, 4, 0, &mut seeded(3)).unwrap_err(), SelectError::ZeroBatches);
        assert!(matches!(h.signature(&[1.0; 19]), Err(SelectError::ArityMismatch(20, 19))));
    }

    #[test]
    fn full_rank_plane_rotation() {
        let h = SuperBitHasher::build(2, 2, 1, &mut seeded(11)).unwrap();
        let basis = h.batch(0);
        for v in [[1.0, 0.3], [-0.2, 0.9], [-1.0, -1.0], [0.5, -2.0]] {
            let sig = h.signature(&v).unwrap();
            for (i, u) in basis.iter().enumerate() {
                assert_eq!(sig.get(i), u[0] * v[0] + u[1] * v[1] >= 0.0);
            }
        }
    }

    #[test]
    fn angle_estimates() {
        let a = Signature::from_bits(&[true, false, true, true]);
        assert_eq!(estimate_angle(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(estimate_angle(&a, &a.complement()).unwrap(), std::f64::consts::PI);
        let b = Signature::from_bits(&[true, false]);
        assert_eq!(estimate_angle(&a, &b).unwrap_err(), SelectError::SignatureLength(4, 2));
    }

    #[test]
    fn identical_points_share_a_bucket() {
        let h = SuperBitHasher::build(3, 3, 2, &mut seeded(5)).unwrap();
        let pts = vec![vec![0.2, -0.4, 0.9]; 30];
        for b in [2, 5, 17] {
            let buckets = bucketize(&pts, &h, b).unwrap();
            assert_eq!(buckets.iter().filter(|b| !b.members.is_empty()).count(), 1);
        }
        assert_eq!(bucketize(&pts, &h, 1).unwrap_err(), SelectError::TooFewBuckets(1));
    }

    #[test]
    fn grid_points_dedup_and_round_up() {
        let pts = LshGrid::default().points(20);
        assert!(pts.contains(&LshParams { depth: 4, batches: 2, buckets: 5 }));
        assert!(pts.contains(&LshParams { depth: 10, batches: 4, buckets: 20 }));
        assert!(pts.contains(&LshParams { depth: 20, batches: 1, buckets: 10 }));
        assert!(pts.contains(&LshParams { depth: 20, batches: 2, buckets: 10 }));
        // (4: L=2,4,8) + (10: L=1,2,4) + (20: L=1,2) = 8 distinct (N, L), x3 B
        assert_eq!(pts.len(), 24);
        assert!(LshGrid::default().points(3).is_empty());
        assert_eq!(LshGrid::default().points(4).len(), 9);
    }

    proptest! {
        #[test]
        fn signature_scale_invariance_and_antisymmetry(
            seed in 0u64..1000,
            v in prop::collection::vec(-10.0f64..10.0, 6),
            scale in 0.01f64..100.0,
        ) {
            prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
            let h = SuperBitHasher::build(6, 3, 4, &mut seeded(seed)).unwrap();
            let s = h.signature(&v).unwrap();
            let scaled: Vec<f64> = v.iter().map(|x| x * scale).collect();
            prop_assert_eq!(&s, &h.signature(&scaled).unwrap());
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let no_zero_dot = h.vectors.iter().all(|u| dot(u, &v) != 0.0);
            if no_zero_dot {
                prop_assert_eq!(h.signature(&neg).unwrap(), s.complement());
            }
        }

        #[test]
        fn bucketize_partitions(
            seed in 0u64..1000,
            n in 1usize..120,
            b in 2usize..25,
        ) {
            let mut rng = seeded(seed);
            let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let h = SuperBitHasher::build(5, 5, 2, &mut rng).unwrap();
            let buckets = bucketize(&pts, &h, b).unwrap();
            prop_assert_eq!(buckets.len(), b);
            let mut all: Vec<usize> = buckets.iter().flat_map(|b| b.members.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            for (i, bk) in buckets.iter().enumerate() {
                prop_assert_eq!(bk.id, i);
            }
        }
    }
}
