//! Ridge-penalised logistic regression fitted by iteratively reweighted
//! least squares.

use nalgebra::{DMatrix, DVector};

use crate::data::Label;

const MAX_ITERATIONS: usize = 100;
const TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Logistic {
    /// Intercept followed by one weight per feature.
    beta: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn linear(beta: &[f64], x: &[f64]) -> f64 {
    beta[0] + beta[1..].iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
}

/// Log-likelihood minus `ridge * |w|^2` (intercept unpenalised).
fn objective(beta: &[f64], rows: &[Vec<f64>], y: &[f64], ridge: f64) -> f64 {
    let ll: f64 = rows
        .iter()
        .zip(y)
        .map(|(x, &t)| {
            let z = linear(beta, x);
            t * z - softplus(z)
        })
        .sum();
    ll - ridge * beta[1..].iter().map(|b| b * b).sum::<f64>()
}

impl Logistic {
    pub fn fit(rows: &[Vec<f64>], labels: &[Label], ridge: f64) -> Self {
        let d = rows[0].len();
        let p = d + 1;
        let y: Vec<f64> = labels.iter().map(|l| l.is_defective() as u8 as f64).collect();
        let mut beta = vec![0.0; p];
        let mut current = objective(&beta, rows, &y, ridge);

        for _ in 0..MAX_ITERATIONS {
            let mut hessian = DMatrix::<f64>::zeros(p, p);
            let mut gradient = DVector::<f64>::zeros(p);
            let mut xi = vec![1.0; p];
            for (x, &t) in rows.iter().zip(&y) {
                xi[1..].copy_from_slice(x);
                let mu = sigmoid(linear(&beta, x));
                let w = mu * (1.0 - mu);
                let r = t - mu;
                for a in 0..p {
                    gradient[a] += xi[a] * r;
                    let wa = w * xi[a];
                    for b in a..p {
                        hessian[(a, b)] += wa * xi[b];
                    }
                }
            }
            for a in 0..p {
                for b in 0..a {
                    hessian[(a, b)] = hessian[(b, a)];
                }
            }
            for j in 1..p {
                hessian[(j, j)] += 2.0 * ridge;
                gradient[j] -= 2.0 * ridge * beta[j];
            }
            let Some(step) = solve(hessian, &gradient) else {
                break;
            };

            // Newton step with halving until the objective does not drop
            let mut scale = 1.0;
            let mut accepted = None;
            for _ in 0..30 {
                let candidate: Vec<f64> = beta.iter().zip(step.iter()).map(|(b, s)| b + scale * s).collect();
                let value = objective(&candidate, rows, &y, ridge);
                if value.is_finite() && value >= current {
                    accepted = Some((candidate, value));
                    break;
                }
                scale *= 0.5;
            }
            let Some((candidate, value)) = accepted else {
                break;
            };
            let change = (value - current).abs() / current.abs().max(1e-300);
            beta = candidate;
            current = value;
            if change < TOLERANCE {
                break;
            }
        }
        Self { beta }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.beta
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(linear(&self.beta, x))
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        // compare the probability so that a boundary within rounding of
        // zero counts as a tie, which goes to Clean
        if self.probability(x) > 0.5 {
            Label::Defective
        } else {
            Label::Clean
        }
    }
}

fn solve(hessian: DMatrix<f64>, gradient: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(chol) = hessian.clone().cholesky() {
        return Some(chol.solve(gradient));
    }
    let p = hessian.nrows();
    let jitter = 1e-10 * (1.0 + hessian.diagonal().amax());
    let damped = hessian + DMatrix::<f64>::identity(p, p) * jitter;
    damped.lu().solve(gradient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Clean as N, Defective as P};

    #[test]
    fn symmetric_two_points_boundary_at_zero() {
        let rows = vec![vec![-1.0], vec![1.0]];
        for ridge in [1e-4, 1e-2, 1.0, 10.0] {
            let m = Logistic::fit(&rows, &[P, N], ridge);
            let b = m.coefficients();
            assert!(b[0].abs() < 1e-9, "intercept {}", b[0]);
            assert!(b[1] < 0.0);
            assert!((m.probability(&[0.0]) - 0.5).abs() < 1e-9);
            assert_eq!(m.predict(&[-0.1]), P);
            assert_eq!(m.predict(&[0.1]), N);
            assert_eq!(m.predict(&[0.0]), N);
        }
    }

    #[test]
    fn ridge_shrinks_coefficients() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..200 {
            let a = ((i * 37) % 101) as f64 / 100.0;
            let b = ((i * 53) % 89) as f64 / 88.0;
            let noise = ((i * 17) % 13) as f64 / 13.0 - 0.5;
            rows.push(vec![a, b]);
            labels.push(if 2.0 * a - b + noise > 0.4 { P } else { N });
        }
        let norms: Vec<f64> = [1e-8, 1e-4, 1e-2, 1.0, 10.0]
            .iter()
            .map(|&r| Logistic::fit(&rows, &labels, r).coefficients()[1..].iter().map(|c| c * c).sum::<f64>().sqrt())
            .collect();
        for w in norms.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{norms:?}");
        }
    }

    #[test]
    fn separable_data_stays_finite() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 19.0]).collect();
        let labels: Vec<Label> = (0..20).map(|i| if i >= 10 { P } else { N }).collect();
        let m = Logistic::fit(&rows, &labels, 1e-8);
        assert!(m.coefficients().iter().all(|c| c.is_finite()));
        for (r, l) in rows.iter().zip(&labels) {
            assert_eq!(m.predict(r), *l);
        }
    }
}
