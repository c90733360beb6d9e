//! Super-bit hashing: angle estimates from signature agreement, then the
//! bucket partition of a pool and the bucket LSH would train on.
//!
//! ```text
//! cargo run --release --example lsh_buckets
//! ```

use std::f64::consts::PI;

use cpdp::data::build_pool;
use cpdp::learners::{LearnerKind, LearnerSpec};
use cpdp::rng::seeded;
use cpdp::selectors::{bucketize, cosine, estimate_angle, lsh_select, LshGrid, LshSpace, SuperBitHasher};
use cpdp::synth::{synth_release, SynthParams};
use cpdp::validation::{gen_random_validation, DEFAULT_RANDOM_SETS};
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(7);
    let hasher = SuperBitHasher::build(20, 10, 10, &mut rng)?;
    let a: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = a.iter().map(|x| x + rng.gen_range(-0.5..0.5)).collect();
    let true_angle = cosine(&a, &b)?.clamp(-1.0, 1.0).acos();
    let (sa, sb) = (hasher.signature(&a)?, hasher.signature(&b)?);
    println!(
        "true angle {:.3} rad, estimate from {} bits {:.3} rad (pi = {PI:.3})",
        true_angle,
        hasher.code_length(),
        estimate_angle(&sa, &sb)?
    );

    let datasets: Vec<_> =
        cpdp::data::PROMISE_RELEASES.iter().map(|r| synth_release(r, &SynthParams::default(), 1)).collect();
    let pool = build_pool(&datasets, "ant-1.7")?;
    let space = LshSpace::new(&pool)?;
    let hasher = SuperBitHasher::build(pool.arity(), 4, 2, &mut seeded(1))?;
    let buckets = bucketize(&space.points, &hasher, 10)?;
    println!("\npool of {} split by an 8-bit code into 10 buckets:", pool.len());
    for bucket in &buckets {
        let defective = bucket.members.iter().filter(|&&i| pool.instances[i].label.is_defective()).count();
        println!("  bucket {:>2}: {:>5} instances, {:>4} defective", bucket.id, bucket.members.len(), defective);
    }

    let spec = LearnerSpec::default_for(LearnerKind::NaiveBayes);
    let sets = gen_random_validation(&pool, DEFAULT_RANDOM_SETS, &mut seeded(2))?;
    let chosen = lsh_select(&pool, &sets, &spec, &LshGrid::default(), &mut seeded(3))?;
    println!(
        "\nselected {} instances at {:?}, bucket {:?}, fitness {:.3}, {} buckets evaluated",
        chosen.dataset.len(),
        chosen.params,
        chosen.bucket_id,
        chosen.fitness,
        chosen.evaluated_buckets
    );
    Ok(())
}
