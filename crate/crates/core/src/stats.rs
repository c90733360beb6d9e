//! Scott-Knott ranking with an effect-size gate, and Cliff's delta.

use std::fmt;

use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("no treatments supplied")]
    NoTreatments,
    #[error("treatment {0} has fewer than 2 values")]
    TooFewValues(String),
    #[error("treatment {0} has a non-finite value")]
    NonFinite(String),
    #[error("empty sample")]
    EmptySample,
    #[error("alpha must be in (0, 1], got {0}")]
    BadAlpha(f64),
    #[error("effect size {0} is outside [-1, 1]")]
    DeltaOutOfRange(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentSample {
    pub name: String,
    pub values: Vec<f64>,
}

impl TreatmentSample {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self { name: name.into(), values }
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankGroup {
    /// 1 is the best group.
    pub rank: usize,
    pub members: Vec<String>,
    pub mean_range: (f64, f64),
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sum_sq_dev(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Cohen's d with pooled standard deviation. Zero spread with different
/// means is infinitely large.
pub fn cohens_d(a: &[f64], b: &[f64]) -> f64 {
    let diff = (mean(a) - mean(b)).abs();
    let dof = (a.len() + b.len()).saturating_sub(2);
    let pooled = if dof == 0 { 0.0 } else { ((sum_sq_dev(a) + sum_sq_dev(b)) / dof as f64).sqrt() };
    if diff == 0.0 {
        0.0
    } else if pooled == 0.0 {
        f64::INFINITY
    } else {
        diff / pooled
    }
}

struct Partitioner<'a> {
    sorted: &'a [&'a TreatmentSample],
    means: Vec<f64>,
    /// Error variance of a treatment mean, `MSE / mean replication`.
    mean_error_var: f64,
    /// Residual degrees of freedom `N - k`.
    error_dof: f64,
    alpha: f64,
    negligible_d: f64,
}

impl Partitioner<'_> {
    /// Best split of `lo..hi` as (split point, between-group sum of squares).
    fn best_split(&self, lo: usize, hi: usize) -> (usize, f64) {
        let m = &self.means[lo..hi];
        let total: f64 = m.iter().sum();
        let grand = total / m.len() as f64;
        let mut best = (lo + 1, f64::NEG_INFINITY);
        let mut left = 0.0;
        for j in 1..m.len() {
            left += m[j - 1];
            let (k1, k2) = (j as f64, (m.len() - j) as f64);
            let (m1, m2) = (left / k1, (total - left) / k2);
            let b0 = k1 * (m1 - grand).powi(2) + k2 * (m2 - grand).powi(2);
            if b0 > best.1 {
                best = (lo + j, b0);
            }
        }
        best
    }

    fn significant(&self, lo: usize, hi: usize, b0: f64) -> bool {
        if b0 <= 0.0 {
            return false;
        }
        let m = &self.means[lo..hi];
        let k = m.len() as f64;
        let sigma2 = (sum_sq_dev(m) + self.error_dof * self.mean_error_var) / (k + self.error_dof);
        let pi = std::f64::consts::PI;
        let lambda = if sigma2 > 0.0 { pi / (2.0 * (pi - 2.0)) * b0 / sigma2 } else { f64::INFINITY };
        let critical = ChiSquared::new(k / (pi - 2.0)).expect("positive dof").inverse_cdf(1.0 - self.alpha);
        lambda > critical
    }

    fn pooled(&self, lo: usize, hi: usize) -> Vec<f64> {
        self.sorted[lo..hi].iter().flat_map(|t| t.values.iter().copied()).collect()
    }

    fn partition(&self, lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
        if hi - lo >= 2 && self.negligible_d.is_finite() {
            let (split, b0) = self.best_split(lo, hi);
            if self.significant(lo, hi, b0)
                && cohens_d(&self.pooled(lo, split), &self.pooled(split, hi)) >= self.negligible_d
            {
                self.partition(lo, split, out);
                self.partition(split, hi, out);
                return;
            }
        }
        out.push((lo, hi));
    }
}

/// Recursively splits the mean-sorted treatments where the split is both
/// significant (chi-square approximation to the Scott-Knott statistic at
/// `alpha`) and non-negligible (Cohen's d at least `negligible_d`). Groups
/// come back best-first. Equal means keep their input order.
pub fn scott_knott_esd(
    treatments: &[TreatmentSample],
    alpha: f64,
    negligible_d: f64,
) -> Result<Vec<RankGroup>, StatsError> {
    if treatments.is_empty() {
        return Err(StatsError::NoTreatments);
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(StatsError::BadAlpha(alpha));
    }
    for t in treatments {
        if t.values.len() < 2 {
            return Err(StatsError::TooFewValues(t.name.clone()));
        }
        if t.values.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite(t.name.clone()));
        }
    }
    let mut sorted: Vec<&TreatmentSample> = treatments.iter().collect();
    sorted.sort_by(|a, b| b.mean().total_cmp(&a.mean()));

    let n: usize = treatments.iter().map(|t| t.values.len()).sum();
    let k = treatments.len();
    let error_dof = (n - k) as f64;
    let sse: f64 = treatments.iter().map(|t| sum_sq_dev(&t.values)).sum();
    let mse = if error_dof > 0.0 { sse / error_dof } else { 0.0 };
    let mean_reps = n as f64 / k as f64;

    let p = Partitioner {
        means: sorted.iter().map(|t| t.mean()).collect(),
        sorted: &sorted,
        mean_error_var: mse / mean_reps,
        error_dof,
        alpha,
        negligible_d,
    };
    let mut ranges = Vec::new();
    p.partition(0, sorted.len(), &mut ranges);
    Ok(ranges
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| RankGroup {
            rank: i + 1,
            members: sorted[lo..hi].iter().map(|t| t.name.clone()).collect(),
            mean_range: (p.means[hi - 1], p.means[lo]),
        })
        .collect())
}

/// `(#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|)`.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut sorted = b.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut score: i64 = 0;
    for &x in a {
        let below = sorted.partition_point(|&y| y < x) as i64;
        let not_above = sorted.partition_point(|&y| y <= x) as i64;
        score += below - (sorted.len() as i64 - not_above);
    }
    Ok(score as f64 / (a.len() * b.len()) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Magnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Magnitude::Negligible => "negligible",
            Magnitude::Small => "small",
            Magnitude::Medium => "medium",
            Magnitude::Large => "large",
        })
    }
}

/// Romano et al. thresholds 0.147 / 0.33 / 0.474 on |d|.
pub fn magnitude(d: f64) -> Result<Magnitude, StatsError> {
    let a = d.abs();
    if !(a <= 1.0) {
        return Err(StatsError::DeltaOutOfRange(d));
    }
    Ok(if a < 0.147 {
        Magnitude::Negligible
    } else if a < 0.33 {
        Magnitude::Small
    } else if a < 0.474 {
        Magnitude::Medium
    } else {
        Magnitude::Large
    })
}

/// Cliff's delta between the pooled values of every pair of groups;
/// entry `[i][j]` compares group `i` against group `j`.
pub fn group_deltas(groups: &[RankGroup], treatments: &[TreatmentSample]) -> Result<Vec<Vec<f64>>, StatsError> {
    let pooled: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            treatments
                .iter()
                .filter(|t| g.members.contains(&t.name))
                .flat_map(|t| t.values.iter().copied())
                .collect()
        })
        .collect();
    pooled.iter().map(|a| pooled.iter().map(|b| cliffs_delta(a, b)).collect()).collect()
}
