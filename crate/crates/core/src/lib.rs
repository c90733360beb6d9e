//! Training-data instance selection for cross-project defect prediction.
//!
//! The crate compares three ways of picking training instances from a pool
//! of other projects' data before fitting a defect predictor:
//!
//! * **LSH** ([`selectors::lsh_select`]): super-bit random-projection
//!   hashing splits the pool into buckets; the bucket whose model scores the
//!   best mean fitness on random validation sets becomes the training data.
//! * **NN-Filter** ([`selectors::nn_filter_select`]): the union of the k
//!   Euclidean-nearest pool instances of every test instance, with k tuned
//!   over 1..=10.
//! * **GIS** ([`selectors::gis_select`]): a genetic search over instance
//!   subsets with label-flip mutation.
//!
//! Supporting modules hold the data loader ([`data`]), measures ([`eval`]),
//! base learners ([`learners`]), validation-set generation ([`validation`]),
//! hyper-parameter grid search ([`tuning`]), Scott-Knott ESD ranking
//! ([`stats`]) and the leave-one-project-out experiment runner ([`runner`]).

pub mod data;
pub mod eval;
pub mod learners;
pub mod rng;
pub mod runner;
pub mod selectors;
pub mod stats;
pub mod synth;
pub mod tuning;
pub mod validation;

pub use data::{build_pool, load_dataset, Dataset, Instance, Label, Normalizer, Pool, Schema};
pub use eval::{confusion, measures, ConfusionMatrix, Measure, Measures};
pub use learners::{grid, train, LearnerKind, LearnerSpec, TrainedModel};
pub use validation::ValidationSet;
