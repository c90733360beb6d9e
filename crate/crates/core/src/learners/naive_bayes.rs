use crate::data::Label;

use super::discretize::{bin_of, mdl_cut_points};

const VARIANCE_FLOOR: f64 = 1e-9;
const MAX_BINS: usize = 10;

#[derive(Debug, Clone)]
enum Densities {
    /// Per class, per feature (mean, 1 / variance), and per class the sum of
    /// the log normalising constants.
    Gaussian { stats: [Vec<(f64, f64)>; 2], log_norm: [f64; 2] },
    /// Per feature cut points and per class, per feature, per bin log-probabilities.
    Discrete { cuts: Vec<Vec<f64>>, log_probs: [Vec<Vec<f64>>; 2] },
}

#[derive(Debug, Clone)]
pub struct NaiveBayes {
    log_prior: [f64; 2],
    densities: Densities,
}

impl NaiveBayes {
    /// Expects scaled rows with both classes present.
    pub fn fit(rows: &[Vec<f64>], labels: &[Label], discretize: bool) -> Self {
        let d = rows[0].len();
        let mut counts = [0usize; 2];
        for l in labels {
            counts[l.is_defective() as usize] += 1;
        }
        let n = labels.len() as f64;
        let log_prior = [(counts[0] as f64 / n).ln(), (counts[1] as f64 / n).ln()];

        let densities = if discretize {
            let mut cuts = Vec::with_capacity(d);
            let mut log_probs: [Vec<Vec<f64>>; 2] = [Vec::with_capacity(d), Vec::with_capacity(d)];
            let mut column = vec![0.0; rows.len()];
            for j in 0..d {
                for (slot, row) in column.iter_mut().zip(rows) {
                    *slot = row[j];
                }
                let c = mdl_cut_points(&column, labels, MAX_BINS);
                let bins = c.len() + 1;
                let mut tally = [vec![0usize; bins], vec![0usize; bins]];
                for (&v, l) in column.iter().zip(labels) {
                    tally[l.is_defective() as usize][bin_of(&c, v)] += 1;
                }
                for class in 0..2 {
                    let denom = (counts[class] + bins) as f64;
                    log_probs[class].push(tally[class].iter().map(|&t| ((t + 1) as f64 / denom).ln()).collect());
                }
                cuts.push(c);
            }
            Densities::Discrete { cuts, log_probs }
        } else {
            let mut stats: [Vec<(f64, f64)>; 2] = [vec![(0.0, 0.0); d], vec![(0.0, 0.0); d]];
            for (row, l) in rows.iter().zip(labels) {
                let s = &mut stats[l.is_defective() as usize];
                for (j, &v) in row.iter().enumerate() {
                    s[j].0 += v;
                }
            }
            for class in 0..2 {
                for s in stats[class].iter_mut() {
                    s.0 /= counts[class] as f64;
                }
            }
            for (row, l) in rows.iter().zip(labels) {
                let s = &mut stats[l.is_defective() as usize];
                for (j, &v) in row.iter().enumerate() {
                    s[j].1 += (v - s[j].0).powi(2);
                }
            }
            for class in 0..2 {
                for s in stats[class].iter_mut() {
                    s.1 = (s.1 / counts[class] as f64).max(VARIANCE_FLOOR);
                }
            }
            let log_norm = [0, 1].map(|c| {
                stats[c].iter().map(|&(_, var)| -0.5 * (2.0 * std::f64::consts::PI * var).ln()).sum::<f64>()
            });
            for s in stats.iter_mut().flatten() {
                s.1 = 1.0 / s.1;
            }
            Densities::Gaussian { stats, log_norm }
        };
        Self { log_prior, densities }
    }

    /// Unnormalised log posterior for each class.
    pub fn log_scores(&self, x: &[f64]) -> [f64; 2] {
        let mut scores = self.log_prior;
        match &self.densities {
            Densities::Gaussian { stats, log_norm } => {
                for (class, score) in scores.iter_mut().enumerate() {
                    let quad: f64 = x.iter().zip(&stats[class]).map(|(&v, &(mean, inv_var))| (v - mean).powi(2) * inv_var).sum();
                    *score += log_norm[class] - 0.5 * quad;
                }
            }
            Densities::Discrete { cuts, log_probs } => {
                for (j, &v) in x.iter().enumerate() {
                    let b = bin_of(&cuts[j], v);
                    scores[0] += log_probs[0][j][b];
                    scores[1] += log_probs[1][j][b];
                }
            }
        }
        scores
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        let [clean, defective] = self.log_scores(x);
        if defective > clean {
            Label::Defective
        } else {
            Label::Clean
        }
    }
}
