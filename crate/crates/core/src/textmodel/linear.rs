//! Multinomial logistic regression trained by full-batch gradient descent.
//!
//! The objective is mean cross-entropy plus an L2 penalty on the weights,
//! `L(W, b) = -(1/n) Σ ln p(y_i | x_i) + (λ/2) ‖W‖²`, which is convex, so
//! zero initialization reaches the unique optimum and training is fully
//! deterministic. Steps that would increase the loss are rejected and
//! retried with a halved rate, so the accepted-loss sequence never rises.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::ClassLabel;

use super::vocab::SparseVec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2: f64,
    pub max_epochs: usize,
    pub tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            l2: 1e-4,
            max_epochs: 500,
            tolerance: 1e-7,
        }
    }
}

/// Trained linear classifier over the fixed class set of `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LinearModel<L: ClassLabel> {
    /// Row-major classes × features.
    weights: Vec<f64>,
    bias: Vec<f64>,
    n_features: usize,
    /// Class names in training order; checked against `L::CLASSES` on load.
    classes: Vec<String>,
    config: TrainConfig,
    #[serde(skip)]
    _label: std::marker::PhantomData<L>,
}

/// Numerically stable softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

/// Index of the maximum, first-wins on exact ties.
pub fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

fn class_scores(
    weights: &[f64],
    bias: &[f64],
    n_features: usize,
    n_classes: usize,
    x: &SparseVec,
) -> Vec<f64> {
    let mut scores = bias.to_vec();
    for (j, v) in x.iter() {
        debug_assert!(j < n_features);
        for (c, score) in scores.iter_mut().enumerate().take(n_classes) {
            *score += weights[c * n_features + j] * v;
        }
    }
    scores
}

/// Regularized mean cross-entropy at the given parameters. Public so tests
/// can difference it against the analytic gradient.
pub fn regularized_loss(
    xs: &[SparseVec],
    ys: &[usize],
    weights: &[f64],
    bias: &[f64],
    n_features: usize,
    n_classes: usize,
    l2: f64,
) -> f64 {
    let n = xs.len() as f64;
    let mut loss = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let probs = softmax(&class_scores(weights, bias, n_features, n_classes, x));
        loss -= probs[y].max(f64::MIN_POSITIVE).ln();
    }
    loss / n + 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Analytic gradient of [`regularized_loss`]: `(∂/∂W, ∂/∂b)`.
pub fn loss_gradient(
    xs: &[SparseVec],
    ys: &[usize],
    weights: &[f64],
    bias: &[f64],
    n_features: usize,
    n_classes: usize,
    l2: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = xs.len() as f64;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = vec![0.0; bias.len()];
    for (x, &y) in xs.iter().zip(ys) {
        let probs = softmax(&class_scores(weights, bias, n_features, n_classes, x));
        for c in 0..n_classes {
            let coeff = (probs[c] - if c == y { 1.0 } else { 0.0 }) / n;
            grad_b[c] += coeff;
            for (j, v) in x.iter() {
                grad_w[c * n_features + j] += coeff * v;
            }
        }
    }
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g += l2 * w;
    }
    (grad_w, grad_b)
}

impl<L: ClassLabel> LinearModel<L> {
    /// Fits the model. `xs[i]` must be the feature vector of the item with
    /// label `ys[i]`. At least two distinct classes must be present.
    pub fn train(config: TrainConfig, xs: &[SparseVec], ys: &[L], n_features: usize) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::Validation(format!(
                "training needs matching non-empty inputs, got {} vectors and {} labels",
                xs.len(),
                ys.len()
            )));
        }
        let y_idx: Vec<usize> = ys.iter().map(|y| y.index()).collect();
        let mut present = vec![false; L::CLASSES.len()];
        for &y in &y_idx {
            present[y] = true;
        }
        if present.iter().filter(|p| **p).count() < 2 {
            return Err(Error::Validation(
                "training set contains a single class; need at least two".into(),
            ));
        }

        let n_classes = L::CLASSES.len();
        let mut weights = vec![0.0; n_classes * n_features];
        let mut bias = vec![0.0; n_classes];
        let mut loss = regularized_loss(xs, &y_idx, &weights, &bias, n_features, n_classes, config.l2);

        for epoch in 0..config.max_epochs {
            if !loss.is_finite() {
                return Err(Error::Diverged { epoch });
            }
            let (grad_w, grad_b) =
                loss_gradient(xs, &y_idx, &weights, &bias, n_features, n_classes, config.l2);

            // Backtracking line search, restarted every epoch: halve the
            // step until it does not increase the loss.
            let mut lr = config.learning_rate;
            let mut accepted = None;
            while lr > 1e-15 {
                let trial_w: Vec<f64> = weights
                    .iter()
                    .zip(&grad_w)
                    .map(|(w, g)| w - lr * g)
                    .collect();
                let trial_b: Vec<f64> =
                    bias.iter().zip(&grad_b).map(|(b, g)| b - lr * g).collect();
                let trial_loss =
                    regularized_loss(xs, &y_idx, &trial_w, &trial_b, n_features, n_classes, config.l2);
                if trial_loss.is_nan() {
                    return Err(Error::Diverged { epoch });
                }
                if trial_loss <= loss {
                    accepted = Some((trial_w, trial_b, trial_loss));
                    break;
                }
                lr *= 0.5;
            }
            let Some((new_w, new_b, new_loss)) = accepted else {
                break; // no descent step representable: converged
            };
            let decrease = loss - new_loss;
            weights = new_w;
            bias = new_b;
            loss = new_loss;
            if decrease < config.tolerance {
                break;
            }
        }

        Ok(LinearModel {
            weights,
            bias,
            n_features,
            classes: L::CLASSES.iter().map(|c| c.as_str().to_string()).collect(),
            config,
            _label: std::marker::PhantomData,
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// Softmax probabilities in `L::CLASSES` order.
    pub fn predict_probs(&self, x: &SparseVec) -> Vec<f64> {
        softmax(&class_scores(
            &self.weights,
            &self.bias,
            self.n_features,
            L::CLASSES.len(),
            x,
        ))
    }

    /// Argmax label with first-in-class-order tie-breaking.
    pub fn predict(&self, x: &SparseVec) -> (L, Vec<f64>) {
        let probs = self.predict_probs(x);
        (L::CLASSES[argmax_first(&probs)], probs)
    }

    /// Validates the persisted class list after deserialization.
    pub fn check_classes(&self) -> Result<()> {
        let expected: Vec<String> = L::CLASSES.iter().map(|c| c.as_str().to_string()).collect();
        if self.classes != expected {
            return Err(Error::Validation(format!(
                "model class order {:?} does not match expected {:?}",
                self.classes, expected
            )));
        }
        Ok(())
    }
}
