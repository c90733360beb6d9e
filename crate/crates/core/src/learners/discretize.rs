//! Supervised entropy discretization with the Fayyad-Irani MDL stopping rule.

use crate::data::Label;

fn entropy(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn classes_present(counts: [usize; 2]) -> f64 {
    counts.iter().filter(|&&c| c > 0).count() as f64
}

/// Cut points for one feature, sorted ascending, at most `max_bins - 1`.
pub fn mdl_cut_points(values: &[f64], labels: &[Label], max_bins: usize) -> Vec<f64> {
    let mut pairs: Vec<(f64, usize)> = values.iter().zip(labels).map(|(&v, l)| (v, l.is_defective() as usize)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut cuts = Vec::new();
    split(&pairs, max_bins.saturating_sub(1), &mut cuts);
    cuts.sort_by(f64::total_cmp);
    cuts
}

fn split(pairs: &[(f64, usize)], budget: usize, cuts: &mut Vec<f64>) {
    if budget == 0 || cuts.len() >= budget || pairs.len() < 2 {
        return;
    }
    let mut total = [0usize; 2];
    for &(_, c) in pairs {
        total[c] += 1;
    }
    let n = pairs.len() as f64;
    let parent = entropy(total);
    if parent == 0.0 {
        return;
    }

    let mut left = [0usize; 2];
    let mut best: Option<(f64, usize, [usize; 2])> = None;
    for i in 0..pairs.len() - 1 {
        left[pairs[i].1] += 1;
        if pairs[i].0 == pairs[i + 1].0 {
            continue;
        }
        let right = [total[0] - left[0], total[1] - left[1]];
        let nl = (i + 1) as f64;
        let e = (nl * entropy(left) + (n - nl) * entropy(right)) / n;
        if best.map_or(true, |(b, _, _)| e < b) {
            best = Some((e, i, left));
        }
    }
    let Some((split_entropy, i, left)) = best else {
        return;
    };
    let right = [total[0] - left[0], total[1] - left[1]];
    let gain = parent - split_entropy;
    let k = classes_present(total);
    let delta = (3f64.powf(k) - 2.0).log2()
        - (k * parent - classes_present(left) * entropy(left) - classes_present(right) * entropy(right));
    if gain <= ((n - 1.0).log2() + delta) / n {
        return;
    }
    cuts.push((pairs[i].0 + pairs[i + 1].0) / 2.0);
    let (lo, hi) = pairs.split_at(i + 1);
    split(lo, budget, cuts);
    split(hi, budget, cuts);
}

/// Index of the bin `x` falls into given sorted cut points.
pub(crate) fn bin_of(cuts: &[f64], x: f64) -> usize {
    cuts.partition_point(|&c| c < x)
}
