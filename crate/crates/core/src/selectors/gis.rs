//! Genetic instance selection.
//!
//! A chromosome is a duplicate-free list of pool indices plus a per-gene
//! label flip. Each generation draws parents by binary tournament, produces
//! a full population of offspring by two-point crossover and mutation, and
//! keeps the best `population_size` of parents and offspring together.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::data::{Dataset, Instance, Label, Pool};
use crate::learners::{train_rows, LearnerSpec};
use crate::validation::{gen_nn_validation, mean_fitness, ValidationSet};

use super::SelectError;

/// Smallest chromosome in variable-size mode.
pub const MIN_VARIABLE_LEN: usize = 100;
/// Smallest chromosome in fixed-size mode, applied when 1% of the pool is
/// fewer instances than this.
pub const MIN_FIXED_LEN: usize = 10;
/// Neighbourhood size for nearest-neighbour validation material.
pub const VALIDATION_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SizeMode {
    /// 1% of the pool.
    Fixed,
    /// Anywhere in [100, pool size].
    Variable,
}

impl SizeMode {
    pub fn abbrev(self) -> &'static str {
        match self {
            SizeMode::Fixed => "FX",
            SizeMode::Variable => "VR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValidationMode {
    /// 10-NN filtered set around the test features.
    NearestNeighbors,
    /// The shared random validation sets.
    MultipleRandom,
}

impl ValidationMode {
    pub fn abbrev(self) -> &'static str {
        match self {
            ValidationMode::NearestNeighbors => "VNN",
            ValidationMode::MultipleRandom => "VMUL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GisConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub size_mode: SizeMode,
    pub validation_mode: ValidationMode,
    /// Probability that an offspring is mutated at all.
    pub mutation_rate: f64,
    /// Per-gene replacement probability inside a mutated offspring.
    pub gene_replace_prob: f64,
    /// Per-gene label flip probability inside a mutated offspring.
    pub label_flip_prob: f64,
}

impl GisConfig {
    pub fn new(size_mode: SizeMode, validation_mode: ValidationMode) -> Self {
        Self {
            population_size: 40,
            max_generations: 20,
            size_mode,
            validation_mode,
            mutation_rate: 0.1,
            gene_replace_prob: 0.05,
            label_flip_prob: 0.02,
        }
    }

    pub fn validate(&self) -> Result<(), SelectError> {
        if self.population_size < 2 {
            return Err(SelectError::InvalidConfig(format!("population size {} < 2", self.population_size)));
        }
        for (name, p) in [
            ("mutation_rate", self.mutation_rate),
            ("gene_replace_prob", self.gene_replace_prob),
            ("label_flip_prob", self.label_flip_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SelectError::InvalidConfig(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GisConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.size_mode.abbrev(), self.validation_mode.abbrev())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    pub genes: Vec<usize>,
    /// `flipped[i]` overrides the pool label of `genes[i]`.
    pub flipped: Vec<bool>,
}

impl Chromosome {
    pub fn new(genes: Vec<usize>) -> Self {
        let flipped = vec![false; genes.len()];
        Self { genes, flipped }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn has_duplicates(&self) -> bool {
        let mut g = self.genes.clone();
        g.sort_unstable();
        g.windows(2).any(|w| w[0] == w[1])
    }

    fn label_of(&self, pool: &Pool, position: usize) -> Label {
        let label = pool.instances[self.genes[position]].label;
        if self.flipped[position] {
            label.flipped()
        } else {
            label
        }
    }

    /// The selected instances with flipped labels applied.
    pub fn materialize(&self, pool: &Pool, name: impl Into<String>) -> Dataset {
        let instances = (0..self.len())
            .map(|p| Instance { label: self.label_of(pool, p), ..pool.instances[self.genes[p]].clone() })
            .collect();
        Dataset::new(name, instances)
    }
}

/// Admissible chromosome lengths over a pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneSpace {
    pub pool_len: usize,
    pub min_len: usize,
    pub max_len: usize,
}

impl GeneSpace {
    pub fn for_pool(pool_len: usize, mode: SizeMode) -> Result<Self, SelectError> {
        match mode {
            SizeMode::Fixed => {
                let len = fixed_length(pool_len);
                if len < 2 {
                    return Err(SelectError::PoolTooSmall { pool: pool_len, needed: 2, mode: "FX" });
                }
                Ok(Self { pool_len, min_len: len, max_len: len })
            }
            SizeMode::Variable => {
                if pool_len < MIN_VARIABLE_LEN {
                    return Err(SelectError::PoolTooSmall { pool: pool_len, needed: MIN_VARIABLE_LEN, mode: "VR" });
                }
                Ok(Self { pool_len, min_len: MIN_VARIABLE_LEN, max_len: pool_len })
            }
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.min_len == self.max_len
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Chromosome {
        let len = rng.gen_range(self.min_len..=self.max_len);
        Chromosome::new(sample(rng, self.pool_len, len).into_vec())
    }

    pub fn admits(&self, c: &Chromosome) -> bool {
        (self.min_len..=self.max_len).contains(&c.len())
            && c.flipped.len() == c.len()
            && c.genes.iter().all(|&g| g < self.pool_len)
            && !c.has_duplicates()
    }
}

/// `round(0.01 * pool_len)`, at least [`MIN_FIXED_LEN`], at most the pool.
pub fn fixed_length(pool_len: usize) -> usize {
    ((pool_len as f64 * 0.01).round() as usize).max(MIN_FIXED_LEN).min(pool_len)
}

/// A uniformly random pool index not marked in `used`, or `None` when the
/// chromosome already holds the whole pool.
fn unused_index<R: Rng + ?Sized>(used: &[bool], used_count: usize, rng: &mut R) -> Option<usize> {
    let n = used.len();
    if used_count >= n {
        return None;
    }
    if used_count * 2 < n {
        loop {
            let i = rng.gen_range(0..n);
            if !used[i] {
                return Some(i);
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
    Some(free[rng.gen_range(0..free.len())])
}

/// Replaces repeated genes with random unused indices (flip reset), then
/// trims or pads to the admissible length range.
fn repair<R: Rng + ?Sized>(c: &mut Chromosome, space: &GeneSpace, rng: &mut R) {
    let mut used = vec![false; space.pool_len];
    let mut dupes = Vec::new();
    for (p, &g) in c.genes.iter().enumerate() {
        if used[g] {
            dupes.push(p);
        } else {
            used[g] = true;
        }
    }
    let mut count = c.len() - dupes.len();
    let mut drop = Vec::new();
    for p in dupes {
        match unused_index(&used, count, rng) {
            Some(g) => {
                used[g] = true;
                count += 1;
                c.genes[p] = g;
                c.flipped[p] = false;
            }
            None => drop.push(p),
        }
    }
    for p in drop.into_iter().rev() {
        c.genes.remove(p);
        c.flipped.remove(p);
    }
    c.genes.truncate(space.max_len);
    c.flipped.truncate(space.max_len);
    while c.len() < space.min_len {
        let Some(g) = unused_index(&used, count, rng) else { break };
        used[g] = true;
        count += 1;
        c.genes.push(g);
        c.flipped.push(false);
    }
}

fn splice(head: &Chromosome, middle: &Chromosome, (a1, b1): (usize, usize), (a2, b2): (usize, usize)) -> Chromosome {
    let mut genes = head.genes[..a1].to_vec();
    genes.extend_from_slice(&middle.genes[a2..b2]);
    genes.extend_from_slice(&head.genes[b1..]);
    let mut flipped = head.flipped[..a1].to_vec();
    flipped.extend_from_slice(&middle.flipped[a2..b2]);
    flipped.extend_from_slice(&head.flipped[b1..]);
    Chromosome { genes, flipped }
}

/// Swaps `parent1[cuts1.0..cuts1.1]` with `parent2[cuts2.0..cuts2.1]`, then
/// repairs both offspring.
pub fn crossover_at<R: Rng + ?Sized>(
    parent1: &Chromosome,
    parent2: &Chromosome,
    cuts1: (usize, usize),
    cuts2: (usize, usize),
    space: &GeneSpace,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let mut c1 = splice(parent1, parent2, cuts1, cuts2);
    let mut c2 = splice(parent2, parent1, cuts2, cuts1);
    repair(&mut c1, space, rng);
    repair(&mut c2, space, rng);
    (c1, c2)
}

fn random_cuts<R: Rng + ?Sized>(len: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(0..=len);
    let b = rng.gen_range(0..=len);
    (a.min(b), a.max(b))
}

/// Two-point crossover. In fixed-size spaces both parents share the cut
/// points so lengths are preserved; otherwise each parent gets its own.
pub fn two_point_crossover<R: Rng + ?Sized>(
    parent1: &Chromosome,
    parent2: &Chromosome,
    space: &GeneSpace,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let cuts1 = random_cuts(parent1.len(), rng);
    let cuts2 = if space.is_fixed() && parent1.len() == parent2.len() { cuts1 } else { random_cuts(parent2.len(), rng) };
    crossover_at(parent1, parent2, cuts1, cuts2, space, rng)
}

/// Per-gene replacement by unused indices and per-gene label flips.
pub fn mutate<R: Rng + ?Sized>(c: &mut Chromosome, space: &GeneSpace, replace_prob: f64, flip_prob: f64, rng: &mut R) {
    let mut used = vec![false; space.pool_len];
    c.genes.iter().for_each(|&g| used[g] = true);
    let count = c.len();
    for p in 0..c.len() {
        if rng.gen_bool(replace_prob) {
            if let Some(g) = unused_index(&used, count, rng) {
                used[c.genes[p]] = false;
                used[g] = true;
                c.genes[p] = g;
                c.flipped[p] = false;
            }
        }
        if rng.gen_bool(flip_prob) {
            c.flipped[p] = !c.flipped[p];
        }
    }
}

/// Mean validation fitness of a model trained on the chromosome; 0 when the
/// chromosome cannot be trained on (for instance a single class).
pub fn chromosome_fitness(c: &Chromosome, pool: &Pool, spec: &LearnerSpec, sets: &[ValidationSet]) -> f64 {
    let rows: Vec<&[f64]> = c.genes.iter().map(|&g| pool.instances[g].features.as_slice()).collect();
    let labels: Vec<Label> = (0..c.len()).map(|p| c.label_of(pool, p)).collect();
    match train_rows(spec, &rows, &labels) {
        Ok(model) => mean_fitness(&model, sets),
        Err(_) => 0.0,
    }
}

#[derive(Debug, Clone)]
pub struct GisOutcome {
    pub dataset: Dataset,
    pub chromosome: Chromosome,
    /// Best population fitness after initialisation and after each
    /// generation.
    pub best_fitness_per_generation: Vec<f64>,
    pub initial_best: f64,
    pub final_best: f64,
    /// Number of learner trainings performed.
    pub trainings: usize,
}

fn tournament<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> usize {
    let i = rng.gen_range(0..fitness.len());
    let j = rng.gen_range(0..fitness.len());
    if fitness[j] > fitness[i] || (fitness[j] == fitness[i] && j < i) {
        j
    } else {
        i
    }
}

fn evaluate(pop: &[Chromosome], pool: &Pool, spec: &LearnerSpec, sets: &[ValidationSet]) -> Vec<f64> {
    pop.par_iter().map(|c| chromosome_fitness(c, pool, spec, sets)).collect()
}

/// Runs the genetic search and returns the best chromosome found.
/// `random_sets` is only consulted in [`ValidationMode::MultipleRandom`].
pub fn gis_select<R: Rng + ?Sized>(
    pool: &Pool,
    config: &GisConfig,
    test_features: &[Vec<f64>],
    random_sets: &[ValidationSet],
    spec: &LearnerSpec,
    rng: &mut R,
) -> Result<GisOutcome, SelectError> {
    config.validate()?;
    if pool.is_empty() {
        return Err(SelectError::EmptyPool);
    }
    if !pool.has_both_classes() {
        return Err(SelectError::SingleClassPool);
    }
    let space = GeneSpace::for_pool(pool.len(), config.size_mode)?;
    let nn_set;
    let sets: &[ValidationSet] = match config.validation_mode {
        ValidationMode::NearestNeighbors => {
            nn_set = [gen_nn_validation(pool, test_features, VALIDATION_K)?];
            &nn_set
        }
        ValidationMode::MultipleRandom => {
            if random_sets.is_empty() {
                return Err(SelectError::NoValidation);
            }
            random_sets
        }
    };

    let n = config.population_size;
    let mut population: Vec<Chromosome> = (0..n).map(|_| space.random(rng)).collect();
    let mut fitness = evaluate(&population, pool, spec, sets);
    let mut trainings = n;
    let best_of = |f: &[f64]| f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut history = vec![best_of(&fitness)];

    for _ in 0..config.max_generations {
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let p1 = &population[tournament(&fitness, rng)];
            let p2 = &population[tournament(&fitness, rng)];
            let (c1, c2) = two_point_crossover(p1, p2, &space, rng);
            offspring.push(c1);
            if offspring.len() < n {
                offspring.push(c2);
            }
        }
        for c in offspring.iter_mut() {
            if rng.gen_bool(config.mutation_rate) {
                mutate(c, &space, config.gene_replace_prob, config.label_flip_prob, rng);
            }
        }
        let off_fitness = evaluate(&offspring, pool, spec, sets);
        trainings += n;

        let mut merged: Vec<(f64, Chromosome)> =
            fitness.into_iter().zip(population).chain(off_fitness.into_iter().zip(offspring)).collect();
        // stable: parents precede offspring on equal fitness
        merged.sort_by(|a, b| b.0.total_cmp(&a.0));
        merged.truncate(n);
        (fitness, population) = merged.into_iter().unzip();
        history.push(best_of(&fitness));
    }

    let best = population.swap_remove(0);
    Ok(GisOutcome {
        dataset: best.materialize(pool, format!("gis-{config}")),
        chromosome: best,
        initial_best: history[0],
        final_best: *history.last().unwrap_or(&history[0]),
        best_fitness_per_generation: history,
        trainings,
    })
}
