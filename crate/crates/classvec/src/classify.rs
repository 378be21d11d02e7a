//! L2-regularized binary logistic regression over sparse features, plus
//! evaluation helpers.
//!
//! The optimizer is deterministic full-batch gradient descent with
//! backtracking line search, so fits are bit-reproducible.

use crate::sparse::SparseVector;
use crate::{Error, Result};

/// A fitted linear classifier.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Numerically stable `ln(1 + e^z)`.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean log-loss plus `(l2/2)·‖w‖²`; the bias is unregularized.
pub fn lr_loss(rows: &[SparseVector], y: &[bool], weights: &[f64], bias: f64, l2: f64) -> f64 {
    let mut loss = 0.0;
    for (x, &label) in rows.iter().zip(y) {
        let z = x.dot(weights) + bias;
        // -log p(y|x) = softplus(z) - y·z
        loss += softplus(z) - if label { z } else { 0.0 };
    }
    loss / rows.len() as f64 + 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Gradient of [`lr_loss`] with respect to (weights, bias).
pub fn lr_gradient(
    rows: &[SparseVector],
    y: &[bool],
    weights: &[f64],
    bias: f64,
    l2: f64,
) -> (Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut grad = vec![0.0; weights.len()];
    let mut bias_grad = 0.0;
    for (x, &label) in rows.iter().zip(y) {
        let z = x.dot(weights) + bias;
        let residual = sigmoid(z) - if label { 1.0 } else { 0.0 };
        for (i, v) in x.iter() {
            grad[i] += residual * v / n;
        }
        bias_grad += residual / n;
    }
    for (g, w) in grad.iter_mut().zip(weights) {
        *g += l2 * w;
    }
    (grad, bias_grad)
}

/// Fit by full-batch gradient descent with backtracking line search. Stops
/// when the gradient ∞-norm drops below `tol` or after `max_iter` steps.
pub fn lr_fit(
    rows: &[SparseVector],
    y: &[bool],
    l2: f64,
    tol: f64,
    max_iter: usize,
) -> Result<LinearModel> {
    if rows.len() != y.len() {
        return Err(Error::LengthMismatch);
    }
    if y.iter().all(|&l| l) || y.iter().all(|&l| !l) {
        return Err(Error::SingleClassLabels);
    }
    let dim = rows.first().map(|r| r.dim).unwrap_or(0);
    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    let mut loss = lr_loss(rows, y, &weights, bias, l2);

    for _ in 0..max_iter {
        let (grad, bias_grad) = lr_gradient(rows, y, &weights, bias, l2);
        let inf_norm = grad
            .iter()
            .chain(std::iter::once(&bias_grad))
            .fold(0.0f64, |m, g| m.max(g.abs()));
        if inf_norm < tol {
            break;
        }
        let grad_sq: f64 =
            grad.iter().map(|g| g * g).sum::<f64>() + bias_grad * bias_grad;

        // backtracking line search along the steepest-descent direction
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial_w: Vec<f64> = weights
                .iter()
                .zip(&grad)
                .map(|(w, g)| w - step * g)
                .collect();
            let trial_b = bias - step * bias_grad;
            let trial_loss = lr_loss(rows, y, &trial_w, trial_b, l2);
            if trial_loss <= loss - 1e-4 * step * grad_sq {
                weights = trial_w;
                bias = trial_b;
                loss = trial_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(LinearModel { weights, bias, l2 })
}

/// Probability of the positive class and the thresholded label
/// (positive iff p >= 0.5).
pub fn lr_predict(model: &LinearModel, x: &SparseVector) -> Result<(f64, bool)> {
    if x.dim != model.weights.len() {
        return Err(Error::DimensionMismatch {
            model: model.weights.len(),
            input: x.dim,
        });
    }
    let p = sigmoid(x.dot(&model.weights) + model.bias);
    Ok((p, p >= 0.5))
}

/// Fraction of predictions matching the gold labels.
pub fn accuracy<T: PartialEq>(predictions: &[T], gold: &[T]) -> Result<f64> {
    if predictions.len() != gold.len() || predictions.is_empty() {
        return Err(Error::LengthMismatch);
    }
    let matches = predictions
        .iter()
        .zip(gold)
        .filter(|(p, g)| p == g)
        .count();
    Ok(matches as f64 / predictions.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(dim: usize, values: &[f64]) -> SparseVector {
        SparseVector::from_pairs(
            dim,
            values.iter().copied().enumerate().collect(),
        )
    }

    fn separable_1d() -> (Vec<SparseVector>, Vec<bool>) {
        let xs = [-2.0, -1.5, -1.0, 1.0, 1.5, 2.0];
        let rows = xs.iter().map(|&x| dense(1, &[x])).collect();
        let y = vec![false, false, false, true, true, true];
        (rows, y)
    }

    #[test]
    fn zero_iterations_gives_uniform_probabilities() {
        let (rows, y) = separable_1d();
        let model = lr_fit(&rows, &y, 0.01, 1e-6, 0).unwrap();
        for row in &rows {
            let (p, label) = lr_predict(&model, row).unwrap();
            assert_eq!(p, 0.5);
            assert!(label); // positive by the >= rule
        }
    }

    #[test]
    fn separable_data_reaches_full_training_accuracy() {
        let (rows, y) = separable_1d();
        let model = lr_fit(&rows, &y, 1e-6, 1e-8, 500).unwrap();
        let preds: Vec<bool> = rows
            .iter()
            .map(|x| lr_predict(&model, x).unwrap().1)
            .collect();
        assert_eq!(accuracy(&preds, &y).unwrap(), 1.0);
    }

    #[test]
    fn single_class_labels_rejected() {
        let rows = vec![dense(1, &[1.0]), dense(1, &[2.0])];
        assert!(matches!(
            lr_fit(&rows, &[true, true], 1.0, 1e-6, 10),
            Err(Error::SingleClassLabels)
        ));
    }

    #[test]
    fn loss_decreases_monotonically() {
        let (rows, y) = separable_1d();
        let mut losses = Vec::new();
        for iters in [0, 1, 2, 5, 10, 50] {
            let m = lr_fit(&rows, &y, 0.1, 0.0, iters).unwrap();
            losses.push(lr_loss(&rows, &y, &m.weights, m.bias, 0.1));
        }
        for pair in losses.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15, "{losses:?}");
        }
    }

    #[test]
    fn huge_l2_drives_weights_to_zero() {
        let (rows, y) = separable_1d();
        let model = lr_fit(&rows, &y, 1e9, 1e-12, 500).unwrap();
        assert!(model.weights.iter().all(|w| w.abs() < 1e-6));
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let rows = vec![
            dense(3, &[0.5, -1.0, 2.0]),
            dense(3, &[1.5, 0.3, -0.7]),
            dense(3, &[-0.2, 0.9, 0.1]),
        ];
        let y = vec![true, false, true];
        let weights = vec![0.3, -0.8, 0.45];
        let bias = 0.12;
        let l2 = 0.7;
        let (grad, bias_grad) = lr_gradient(&rows, &y, &weights, bias, l2);
        let h = 1e-6;
        for d in 0..3 {
            let mut wp = weights.clone();
            let mut wm = weights.clone();
            wp[d] += h;
            wm[d] -= h;
            let fd = (lr_loss(&rows, &y, &wp, bias, l2) - lr_loss(&rows, &y, &wm, bias, l2))
                / (2.0 * h);
            assert!(
                (grad[d] - fd).abs() / fd.abs().max(1.0) < 1e-6,
                "dim {d}: {} vs {}",
                grad[d],
                fd
            );
        }
        let fd_bias = (lr_loss(&rows, &y, &weights, bias + h, l2)
            - lr_loss(&rows, &y, &weights, bias - h, l2))
            / (2.0 * h);
        assert!((bias_grad - fd_bias).abs() < 1e-6);
    }

    #[test]
    fn predict_symmetry_and_monotonicity() {
        let model = LinearModel {
            weights: vec![0.8, -0.4],
            bias: 0.3,
            l2: 0.0,
        };
        let x = dense(2, &[1.0, 2.0]);
        let (p, _) = lr_predict(&model, &x).unwrap();
        let negated = LinearModel {
            weights: vec![-0.8, 0.4],
            bias: -0.3,
            l2: 0.0,
        };
        let (pn, _) = lr_predict(&negated, &x).unwrap();
        assert!((p + pn - 1.0).abs() < 1e-12);

        // increasing a positive-weight feature never decreases p
        let bigger = dense(2, &[2.0, 2.0]);
        assert!(lr_predict(&model, &bigger).unwrap().0 >= p);

        // dimension mismatch
        assert!(lr_predict(&model, &dense(3, &[1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn prediction_invariant_under_consistent_permutation() {
        let model = LinearModel {
            weights: vec![0.8, -0.4, 0.1],
            bias: 0.05,
            l2: 0.0,
        };
        let x = dense(3, &[1.0, 2.0, -0.5]);
        let permuted_model = LinearModel {
            weights: vec![0.1, 0.8, -0.4],
            bias: 0.05,
            l2: 0.0,
        };
        let permuted_x = dense(3, &[-0.5, 1.0, 2.0]);
        assert_eq!(
            lr_predict(&model, &x).unwrap(),
            lr_predict(&permuted_model, &permuted_x).unwrap()
        );
    }

    #[test]
    fn accuracy_counting() {
        assert_eq!(accuracy(&[1, 2, 3], &[1, 2, 3]).unwrap(), 1.0);
        assert_eq!(accuracy(&[1, 2], &[3, 4]).unwrap(), 0.0);
        assert_eq!(accuracy(&[1, 2, 3, 4], &[1, 2, 3, 9]).unwrap(), 0.75);
        assert!(accuracy(&[1], &[1, 2]).is_err());
        assert!(accuracy::<i32>(&[], &[]).is_err());
    }
}
