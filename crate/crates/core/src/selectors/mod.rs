//! The three instance-selection methods.
//!
//! All distance and angle computations run on pool-scaled features
//! (min-max fitted on the pool). The hashing space is additionally centred
//! on the pool mean, since raw code metrics are non-negative and would
//! otherwise sit in one orthant where every projection sign agrees.

pub mod gis;
pub mod lsh;
pub mod nn;

use thiserror::Error;

use crate::learners::LearnError;
use crate::validation::ValidationError;

pub use gis::{gis_select, two_point_crossover, Chromosome, GeneSpace, GisConfig, GisOutcome, SizeMode, ValidationMode};
pub use lsh::{
    bucketize, cosine, estimate_angle, lsh_select, Bucket, LshGrid, LshParams, LshSelection, LshSpace, Signature,
    SuperBitHasher,
};
pub use nn::{nn_filter_select, tune_nn_k, NN_K_RANGE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectError {
    #[error("vectors differ in arity ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("cosine is undefined for a zero vector")]
    ZeroVector,
    #[error("super-bit depth {depth} must be in 1..={dim}")]
    BadDepth { depth: usize, dim: usize },
    #[error("number of super-bits must be at least 1")]
    ZeroBatches,
    #[error("bucket count must be at least 2, got {0}")]
    TooFewBuckets(usize),
    #[error("signature lengths differ ({0} vs {1})")]
    SignatureLength(usize, usize),
    #[error("pool is empty")]
    EmptyPool,
    #[error("test set is empty")]
    EmptyTest,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("pool lacks one of the two classes")]
    SingleClassPool,
    #[error("no validation sets supplied")]
    NoValidation,
    #[error("no grid point is applicable to {0}-dimensional data")]
    EmptyGrid(usize),
    #[error("pool of {pool} instances is too small for {mode} chromosomes of at least {needed}")]
    PoolTooSmall { pool: usize, needed: usize, mode: &'static str },
    #[error("invalid GIS configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}
