//! Negative-sampling loss for one (center, context) pair and its gradient.

use alloc::vec::Vec;

use crate::vector::dot;

pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

/// `-ln σ(x)` without overflow for large `|x|`.
pub fn neg_log_logistic(x: f64) -> f64 {
    if x > 0.0 {
        libm::log1p(libm::exp(-x))
    } else {
        -x + libm::log1p(libm::exp(x))
    }
}

/// Derivative of the pair loss with respect to one dot-product score.
#[inline]
pub fn score_gradient(score: f64, positive: bool) -> f64 {
    logistic(score) - if positive { 1.0 } else { 0.0 }
}

/// `-ln σ(u·v) - Σ ln σ(-u_neg·v)`, with `v` the center's input row and
/// `u` the output rows.
pub fn pair_loss(input: &[f64], positive: &[f64], negatives: &[&[f64]]) -> f64 {
    let pos = neg_log_logistic(dot(input, positive));
    let neg: f64 = negatives.iter().map(|n| neg_log_logistic(-dot(input, n))).sum();
    pos + neg
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub input: Vec<f64>,
    pub positive: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Analytic gradient of [`pair_loss`].
pub fn pair_gradient(input: &[f64], positive: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let mut grad_input = alloc::vec![0.0; input.len()];
    let mut output_grad = |row: &[f64], is_positive: bool| -> Vec<f64> {
        let g = score_gradient(dot(input, row), is_positive);
        for (gi, &u) in grad_input.iter_mut().zip(row) {
            *gi += g * u;
        }
        input.iter().map(|&v| g * v).collect()
    };
    let positive_grad = output_grad(positive, true);
    let negatives_grad = negatives.iter().map(|n| output_grad(n, false)).collect();
    PairGradient { input: grad_input, positive: positive_grad, negatives: negatives_grad }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_is_stable_at_extremes() {
        assert_eq!(logistic(1000.0), 1.0);
        assert_eq!(logistic(-1000.0), 0.0);
        assert!((neg_log_logistic(-1000.0) - 1000.0).abs() < 1e-9);
        assert!(neg_log_logistic(1000.0) >= 0.0);
        assert!((neg_log_logistic(0.0) - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn gradient_vanishes_for_confident_pairs() {
        let v = [10.0, 0.0];
        let g = pair_gradient(&v, &[10.0, 0.0], &[&[-10.0, 0.0]]);
        assert!(g.input.iter().all(|x| x.abs() < 1e-30));
    }
}
