//! Binary decision tree over continuous features: information-gain splits,
//! a minimum leaf size, and C4.5-style pessimistic subtree replacement.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::Label;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeOptions {
    /// Minimum number of training instances in each child of a split.
    pub min_leaf: usize,
    /// Confidence for the pessimistic error bound; `None` disables pruning.
    pub prune_confidence: Option<f64>,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { counts: [usize; 2] },
    Split { feature: usize, threshold: f64, counts: [usize; 2], left: Box<Node>, right: Box<Node> },
}

fn majority(counts: [usize; 2]) -> Label {
    if counts[1] > counts[0] {
        Label::Defective
    } else {
        Label::Clean
    }
}

#[derive(Debug, Clone)]
pub struct DecisionTree {
    root: Node,
}

impl DecisionTree {
    pub fn fit(rows: &[Vec<f64>], labels: &[Label], options: TreeOptions) -> Self {
        let y: Vec<usize> = labels.iter().map(|l| l.is_defective() as usize).collect();
        let d = rows.first().map_or(0, Vec::len);
        // one index list per feature, sorted by that feature; splits
        // partition every list stably so no node sorts again
        let by_feature: Vec<Vec<usize>> = (0..d)
            .map(|j| {
                let mut idx: Vec<usize> = (0..rows.len()).collect();
                idx.sort_by(|&a, &b| rows[a][j].total_cmp(&rows[b][j]));
                idx
            })
            .collect();
        let xlogx: Vec<f64> = (0..=rows.len()).map(|k| if k == 0 { 0.0 } else { k as f64 * (k as f64).ln() }).collect();
        let cols: Vec<Vec<f64>> = (0..d).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let builder = Builder { cols: &cols, y: &y, min_leaf: options.min_leaf.max(1), xlogx };
        let mut goes_left = vec![false; rows.len()];
        let mut root = builder.grow(by_feature, &mut goes_left);
        if let Some(cf) = options.prune_confidence {
            prune(&mut root, cf);
        }
        Self { root }
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { counts } => return majority(*counts),
                Node::Split { feature, threshold, left, right, .. } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        fn count(n: &Node) -> usize {
            match n {
                Node::Leaf { .. } => 1,
                Node::Split { left, right, .. } => count(left) + count(right),
            }
        }
        count(&self.root)
    }
}

struct Builder<'a> {
    /// Column-major copy of the training rows.
    cols: &'a [Vec<f64>],
    y: &'a [usize],
    min_leaf: usize,
    /// `k ln k` for every possible count.
    xlogx: Vec<f64>,
}

impl Builder<'_> {
    /// `n * entropy(counts)` in nats.
    fn weighted_entropy(&self, counts: [usize; 2]) -> f64 {
        self.xlogx[counts[0] + counts[1]] - self.xlogx[counts[0]] - self.xlogx[counts[1]]
    }

    fn grow(&self, by_feature: Vec<Vec<usize>>, goes_left: &mut [bool]) -> Node {
        let mut counts = [0usize; 2];
        let indices = by_feature.first().map_or(&[][..], Vec::as_slice);
        for &i in indices {
            counts[self.y[i]] += 1;
        }
        if counts[0] == 0 || counts[1] == 0 || indices.len() < 2 * self.min_leaf {
            return Node::Leaf { counts };
        }
        let Some((feature, threshold)) = self.best_split(&by_feature, counts) else {
            return Node::Leaf { counts };
        };
        for &i in indices {
            goes_left[i] = self.cols[feature][i] <= threshold;
        }
        let (left, right): (Vec<Vec<usize>>, Vec<Vec<usize>>) =
            by_feature.into_iter().map(|list| list.into_iter().partition(|&i| goes_left[i])).unzip();
        Node::Split {
            feature,
            threshold,
            counts,
            left: Box::new(self.grow(left, goes_left)),
            right: Box::new(self.grow(right, goes_left)),
        }
    }

    fn best_split(&self, by_feature: &[Vec<usize>], total: [usize; 2]) -> Option<(usize, f64)> {
        let n = by_feature[0].len();
        let parent = self.weighted_entropy(total);
        let to_bits = 1.0 / (n as f64 * std::f64::consts::LN_2);
        let mut best: Option<(f64, usize, f64)> = None;
        for (feature, sorted) in by_feature.iter().enumerate() {
            let column = &self.cols[feature];
            let value = |k: usize| column[sorted[k]];
            let mut left = [0usize; 2];
            for k in 0..n - 1 {
                left[self.y[sorted[k]]] += 1;
                let nl = k + 1;
                if nl < self.min_leaf {
                    continue;
                }
                if n - nl < self.min_leaf {
                    break;
                }
                let (here, next) = (value(k), value(k + 1));
                if here == next {
                    continue;
                }
                let right = [total[0] - left[0], total[1] - left[1]];
                let gain = (parent - self.weighted_entropy(left) - self.weighted_entropy(right)) * to_bits;
                if gain > 1e-12 && best.map_or(true, |(g, _, _)| gain > g) {
                    best = Some((gain, feature, (here + next) / 2.0));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

/// Upper confidence bound on extra errors at a leaf with `n` instances and
/// `e` observed errors, as in C4.5.
fn added_errors(n: f64, e: f64, cf: f64) -> f64 {
    if e < 1.0 {
        let base = n * (1.0 - cf.powf(1.0 / n));
        if e == 0.0 {
            return base;
        }
        return base + e * (added_errors(n, 1.0, cf) - base);
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let z = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(1.0 - cf);
    let f = (e + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt()) / (1.0 + z * z / n);
    r * n - e
}

fn leaf_estimate(counts: [usize; 2], cf: f64) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    let e = counts[0].min(counts[1]) as f64;
    e + added_errors(n, e, cf)
}

/// Bottom-up subtree replacement; returns the node's estimated error.
fn prune(node: &mut Node, cf: f64) -> f64 {
    match node {
        Node::Leaf { counts } => leaf_estimate(*counts, cf),
        Node::Split { counts, left, right, .. } => {
            let subtree = prune(left, cf) + prune(right, cf);
            let as_leaf = leaf_estimate(*counts, cf);
            if as_leaf <= subtree {
                *node = Node::Leaf { counts: *counts };
                as_leaf
            } else {
                subtree
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Clean as N, Defective as P};

    fn checker(n: usize) -> (Vec<Vec<f64>>, Vec<Label>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let a = ((i * 31) % 97) as f64 / 96.0;
            let b = ((i * 59) % 83) as f64 / 82.0;
            rows.push(vec![a, b]);
            labels.push(if (a > 0.5) ^ (b > 0.3) { P } else { N });
        }
        (rows, labels)
    }

    #[test]
    fn unpruned_tree_memorises_training_data() {
        let (rows, labels) = checker(150);
        let t = DecisionTree::fit(&rows, &labels, TreeOptions { min_leaf: 1, prune_confidence: None });
        for (r, l) in rows.iter().zip(&labels) {
            assert_eq!(t.predict(r), *l);
        }
    }

    #[test]
    fn larger_min_leaf_gives_fewer_leaves() {
        let (rows, mut labels) = checker(400);
        for i in (0..400).step_by(7) {
            labels[i] = labels[i].flipped();
        }
        let small = DecisionTree::fit(&rows, &labels, TreeOptions { min_leaf: 2, prune_confidence: Some(0.25) });
        let large = DecisionTree::fit(&rows, &labels, TreeOptions { min_leaf: 20, prune_confidence: Some(0.25) });
        assert!(large.leaf_count() <= small.leaf_count());
        let unpruned = DecisionTree::fit(&rows, &labels, TreeOptions { min_leaf: 2, prune_confidence: None });
        assert!(small.leaf_count() <= unpruned.leaf_count());
    }

    #[test]
    fn pruning_collapses_noise() {
        // labels independent of the feature: any split is overfitting
        let rows: Vec<Vec<f64>> = (0..60).map(|i| vec![i as f64]).collect();
        let labels: Vec<Label> = (0..60).map(|i| if (i * 7) % 5 == 0 { P } else { N }).collect();
        let t = DecisionTree::fit(&rows, &labels, TreeOptions { min_leaf: 2, prune_confidence: Some(0.1) });
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.predict(&[3.0]), N);
    }

    #[test]
    fn added_errors_reference_values() {
        // C4.5 at CF=0.25: 0 errors out of 6 gives an upper bound of 0.206 * 6
        let e = added_errors(6.0, 0.0, 0.25);
        assert!((e - 6.0 * (1.0 - 0.25f64.powf(1.0 / 6.0))).abs() < 1e-12);
        assert!((e - 1.2378).abs() < 1e-3, "{e}");
        assert!(added_errors(100.0, 10.0, 0.1) > added_errors(100.0, 10.0, 0.25));
        assert!(added_errors(100.0, 10.0, 0.25) > added_errors(100.0, 10.0, 0.5));
    }
}
