//! A minimal differentiable stack with hand-written backward passes.
//!
//! Every layer keeps its parameters in [`Param`] buffers; `forward` returns the
//! values needed by `backward`, which accumulates into `Param::grad` and returns
//! the gradient with respect to the layer input.

mod check;
mod encoder;
mod layers;
mod train;

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::util::Rng;

pub use check::{
    gradient_check, AttentionProbe, BiGruProbe, Differentiable, EmbeddingProbe, GruCellProbe,
    LinearProbe, NgramProbe, SoftmaxCeProbe,
};
pub use encoder::{hash_token, Encoder, EncoderCache, EncoderKind, EncoderSpec, Sequence, SEP_TOKEN};
pub use layers::{
    AttentionCache, AttentionPool, BiGru, BiGruCache, Embedding, GruCache, GruCell, Linear,
    NgramAverage,
};
pub use train::{
    fit, train_neural, Example, LinearHead, Module, TextClassifier, TrainConfig, TrainReport,
};

/// A parameter tensor with its gradient and Adam moment buffers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "ParamRepr", into = "ParamRepr")]
pub struct Param {
    pub rows: usize,
    pub cols: usize,
    pub value: Vec<f64>,
    pub grad: Vec<f64>,
    m: Vec<f64>,
    v: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct ParamRepr {
    rows: usize,
    cols: usize,
    value: Vec<f64>,
}

impl From<ParamRepr> for Param {
    fn from(r: ParamRepr) -> Self {
        let n = r.value.len();
        Param {
            rows: r.rows,
            cols: r.cols,
            value: r.value,
            grad: vec![0.0; n],
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }
}

impl From<Param> for ParamRepr {
    fn from(p: Param) -> Self {
        ParamRepr {
            rows: p.rows,
            cols: p.cols,
            value: p.value,
        }
    }
}

impl Param {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Param::from(ParamRepr {
            rows,
            cols,
            value: vec![0.0; rows * cols],
        })
    }

    /// Uniform in ±sqrt(6 / (rows + cols)).
    pub fn glorot(rows: usize, cols: usize, rng: &mut Rng) -> Self {
        let a = libm::sqrt(6.0 / (rows + cols) as f64);
        let mut p = Param::zeros(rows, cols);
        p.value.iter_mut().for_each(|x| *x = rng.random_range(-a..a));
        p
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.value[r * self.cols..(r + 1) * self.cols]
    }

    pub fn zero_grad(&mut self) {
        self.grad.iter_mut().for_each(|g| *g = 0.0);
    }

    /// `W x` for a rows×cols matrix.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| crate::util::dot(self.row(r), x))
            .collect()
    }

    /// `Wᵀ y`.
    pub fn matvec_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (r, &yr) in y.iter().enumerate() {
            if yr != 0.0 {
                for (o, w) in out.iter_mut().zip(self.row(r)) {
                    *o += yr * w;
                }
            }
        }
        out
    }

    /// `grad += y xᵀ`.
    pub fn accumulate_outer(&mut self, y: &[f64], x: &[f64]) {
        for (r, &yr) in y.iter().enumerate() {
            if yr != 0.0 {
                let g = &mut self.grad[r * self.cols..(r + 1) * self.cols];
                for (gi, xi) in g.iter_mut().zip(x) {
                    *gi += yr * xi;
                }
            }
        }
    }

    pub fn accumulate(&mut self, g: &[f64]) {
        for (a, b) in self.grad.iter_mut().zip(g) {
            *a += b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.iter().all(|v| v.is_finite())
    }
}

/// Adam with bias correction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub t: u64,
}

impl Adam {
    pub fn new(lr: f64) -> Self {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
        }
    }

    /// Apply one update from the accumulated gradients, scaled by `scale`, then clear them.
    pub fn step(&mut self, params: &mut [&mut Param], scale: f64) {
        self.t += 1;
        let t = self.t as i32;
        let c1 = 1.0 - libm::pow(self.beta1, f64::from(t));
        let c2 = 1.0 - libm::pow(self.beta2, f64::from(t));
        for p in params.iter_mut() {
            let p = &mut **p;
            for i in 0..p.value.len() {
                let g = p.grad[i] * scale;
                if g == 0.0 && p.m[i] == 0.0 && p.v[i] == 0.0 {
                    continue;
                }
                p.m[i] = self.beta1 * p.m[i] + (1.0 - self.beta1) * g;
                p.v[i] = self.beta2 * p.v[i] + (1.0 - self.beta2) * g * g;
                let mh = p.m[i] / c1;
                let vh = p.v[i] / c2;
                p.value[i] -= self.lr * mh / (libm::sqrt(vh) + self.eps);
            }
            p.zero_grad();
        }
    }
}

/// Weighted cross-entropy of softmax(logits) against `target`, with the
/// gradient with respect to the logits.
pub fn softmax_cross_entropy(logits: &[f64], target: usize, weight: f64) -> (f64, Vec<f64>) {
    let p = crate::util::softmax(logits);
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + libm::log(logits.iter().map(|z| libm::exp(z - max)).sum::<f64>());
    let loss = weight * (lse - logits[target]);
    let grad = p
        .iter()
        .enumerate()
        .map(|(c, &pc)| weight * (pc - if c == target { 1.0 } else { 0.0 }))
        .collect();
    (loss, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::seeded;

    #[test]
    fn adam_moves_against_gradient() {
        let mut p = Param::zeros(1, 2);
        p.grad = vec![1.0, -2.0];
        let mut opt = Adam::new(0.1);
        opt.step(&mut [&mut p], 1.0);
        assert!((p.value[0] + 0.1).abs() < 1e-6);
        assert!((p.value[1] - 0.1).abs() < 1e-6);
        assert_eq!(p.grad, vec![0.0, 0.0]);
    }

    #[test]
    fn param_round_trip_drops_buffers() {
        let mut p = Param::glorot(2, 3, &mut seeded(1));
        p.grad[0] = 5.0;
        let repr: ParamRepr = p.clone().into();
        let back = Param::from(repr);
        assert_eq!(back.value, p.value);
        assert_eq!(back.grad, vec![0.0; 6]);
    }

    #[test]
    fn cross_entropy_gradient_sums_to_zero() {
        let (loss, g) = softmax_cross_entropy(&[1.0, 2.0, 0.5], 1, 1.0);
        assert!(loss > 0.0);
        assert!(g.iter().sum::<f64>().abs() < 1e-12);
    }
}
