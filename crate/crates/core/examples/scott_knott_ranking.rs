//! Scott-Knott ESD ranking of five synthetic treatments and the Cliff's
//! delta magnitudes between the resulting groups.
//!
//! ```text
//! cargo run --example scott_knott_ranking
//! ```

use cpdp::rng::seeded;
use cpdp::stats::{group_deltas, magnitude, scott_knott_esd, TreatmentSample};
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(3);
    let noise = Normal::new(0.0, 0.05)?;
    let treatments: Vec<TreatmentSample> = [("A", 0.60), ("B", 0.59), ("C", 0.45), ("D", 0.44), ("E", 0.20)]
        .iter()
        .map(|&(name, centre)| TreatmentSample::new(name, (0..13).map(|_| centre + noise.sample(&mut rng)).collect()))
        .collect();

    let groups = scott_knott_esd(&treatments, 0.05, 0.2)?;
    for g in &groups {
        println!("rank {}: {:?} (means {:.3}..{:.3})", g.rank, g.members, g.mean_range.0, g.mean_range.1);
    }
    let deltas = group_deltas(&groups, &treatments)?;
    for (i, row) in deltas.iter().enumerate() {
        for (j, &d) in row.iter().enumerate().filter(|&(j, _)| j > i) {
            println!("rank {} vs rank {}: delta {d:+.3} ({})", i + 1, j + 1, magnitude(d)?);
        }
    }
    Ok(())
}
