use alloc::vec::Vec;

use rand::Rng as _;

use super::layers::{AttentionPool, BiGru, Embedding, GruCell, Linear, NgramAverage};
use super::{softmax_cross_entropy, Param};
use crate::util::{dot, Rng};

/// A scalar function of a flat coordinate vector with an analytic gradient.
pub trait Differentiable {
    fn coords(&mut self) -> Vec<f64>;
    fn set_coords(&mut self, c: &[f64]);
    fn loss(&self) -> f64;
    /// Analytic gradient in the same order as `coords`.
    fn gradient(&mut self) -> Vec<f64>;
}

/// Largest relative error between the analytic gradient and central
/// differences, `|a - n| / max(|a|, |n|, 1e-8)`.
pub fn gradient_check<D: Differentiable + ?Sized>(model: &mut D, eps: f64) -> f64 {
    let base = model.coords();
    model.set_coords(&base);
    let analytic = model.gradient();
    let mut worst: f64 = 0.0;
    let mut c = base.clone();
    for i in 0..base.len() {
        c[i] = base[i] + eps;
        model.set_coords(&c);
        let up = model.loss();
        c[i] = base[i] - eps;
        model.set_coords(&c);
        let down = model.loss();
        c[i] = base[i];
        let numeric = (up - down) / (2.0 * eps);
        let a = analytic[i];
        let denom = libm::fmax(libm::fmax(libm::fabs(a), libm::fabs(numeric)), 1e-8);
        worst = libm::fmax(worst, libm::fabs(a - numeric) / denom);
    }
    model.set_coords(&base);
    worst
}

pub(crate) fn flatten(params: &[&mut Param]) -> Vec<f64> {
    params.iter().flat_map(|p| p.value.iter().copied()).collect()
}

pub(crate) fn flatten_grads(params: &[&mut Param]) -> Vec<f64> {
    params.iter().flat_map(|p| p.grad.iter().copied()).collect()
}

/// Writes `c` into the parameters and returns the unused tail.
pub(crate) fn assign<'a>(params: &mut [&mut Param], mut c: &'a [f64]) -> &'a [f64] {
    for p in params.iter_mut() {
        let n = p.value.len();
        p.value.copy_from_slice(&c[..n]);
        c = &c[n..];
    }
    c
}

pub(crate) fn zero_grads(params: &mut [&mut Param]) {
    params.iter_mut().for_each(|p| p.zero_grad());
}

fn uniform(n: usize, rng: &mut Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn rows(n: usize, d: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| uniform(d, rng)).collect()
}

/// `loss = r · linear(x)`.
pub struct LinearProbe {
    pub layer: Linear,
    pub x: Vec<f64>,
    pub r: Vec<f64>,
}

impl LinearProbe {
    pub fn random(input: usize, output: usize, rng: &mut Rng) -> Self {
        LinearProbe {
            layer: Linear::new(input, output, rng),
            x: uniform(input, rng),
            r: uniform(output, rng),
        }
    }
}

impl Differentiable for LinearProbe {
    fn coords(&mut self) -> Vec<f64> {
        let mut c = self.x.clone();
        c.extend(flatten(&self.layer.params_mut()));
        c
    }
    fn set_coords(&mut self, c: &[f64]) {
        let n = self.x.len();
        self.x.copy_from_slice(&c[..n]);
        assign(&mut self.layer.params_mut(), &c[n..]);
    }
    fn loss(&self) -> f64 {
        dot(&self.r, &self.layer.forward(&self.x))
    }
    fn gradient(&mut self) -> Vec<f64> {
        zero_grads(&mut self.layer.params_mut());
        let mut g = self.layer.backward(&self.x.clone(), &self.r.clone());
        g.extend(flatten_grads(&self.layer.params_mut()));
        g
    }
}

/// `loss = Σ_t r_t · embedding(id_t)`.
pub struct EmbeddingProbe {
    pub layer: Embedding,
    pub ids: Vec<usize>,
    pub r: Vec<Vec<f64>>,
}

impl EmbeddingProbe {
    pub fn random(vocab: usize, dim: usize, len: usize, rng: &mut Rng) -> Self {
        EmbeddingProbe {
            layer: Embedding::new(vocab, dim, rng),
            ids: (0..len).map(|_| rng.random_range(0..vocab)).collect(),
            r: rows(len, dim, rng),
        }
    }
}

impl Differentiable for EmbeddingProbe {
    fn coords(&mut self) -> Vec<f64> {
        self.layer.table.value.clone()
    }
    fn set_coords(&mut self, c: &[f64]) {
        self.layer.table.value.copy_from_slice(c);
    }
    fn loss(&self) -> f64 {
        self.layer
            .forward(&self.ids)
            .iter()
            .zip(&self.r)
            .map(|(y, r)| dot(y, r))
            .sum()
    }
    fn gradient(&mut self) -> Vec<f64> {
        self.layer.table.zero_grad();
        self.layer.backward(&self.ids, &self.r);
        self.layer.table.grad.clone()
    }
}

/// `loss = r · ngram_average(tokens)`.
pub struct NgramProbe {
    pub layer: NgramAverage,
    pub ids: Vec<usize>,
    pub r: Vec<f64>,
}

impl NgramProbe {
    pub fn random(buckets: usize, dim: usize, len: usize, rng: &mut Rng) -> Self {
        let layer = NgramAverage::new(buckets, dim, 2, rng);
        let tokens: Vec<u64> = (0..len).map(|_| rng.random_range(0..50)).collect();
        let segments: Vec<u8> = (0..len).map(|i| u8::from(i >= len / 2)).collect();
        let ids = layer.bucket_ids(&tokens, &segments);
        NgramProbe {
            layer,
            ids,
            r: uniform(dim, rng),
        }
    }
}

impl Differentiable for NgramProbe {
    fn coords(&mut self) -> Vec<f64> {
        self.layer.table.value.clone()
    }
    fn set_coords(&mut self, c: &[f64]) {
        self.layer.table.value.copy_from_slice(c);
    }
    fn loss(&self) -> f64 {
        dot(&self.r, &self.layer.forward(&self.ids))
    }
    fn gradient(&mut self) -> Vec<f64> {
        self.layer.table.zero_grad();
        self.layer.backward(&self.ids, &self.r);
        self.layer.table.grad.clone()
    }
}

/// `loss = r · gru(x, h)`, differentiated in x, h and all weights.
pub struct GruCellProbe {
    pub cell: GruCell,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub r: Vec<f64>,
}

impl GruCellProbe {
    pub fn random(input: usize, hidden: usize, rng: &mut Rng) -> Self {
        let mut cell = GruCell::new(input, hidden, rng);
        for b in [&mut cell.bz, &mut cell.br, &mut cell.bn] {
            b.value = uniform(hidden, rng).iter().map(|v| 0.5 * v).collect();
        }
        GruCellProbe {
            cell,
            x: uniform(input, rng),
            h: uniform(hidden, rng).iter().map(|v| 0.9 * v).collect(),
            r: uniform(hidden, rng),
        }
    }
}

impl Differentiable for GruCellProbe {
    fn coords(&mut self) -> Vec<f64> {
        let mut c = self.x.clone();
        c.extend_from_slice(&self.h);
        c.extend(flatten(&self.cell.params_mut()));
        c
    }
    fn set_coords(&mut self, c: &[f64]) {
        let (nx, nh) = (self.x.len(), self.h.len());
        self.x.copy_from_slice(&c[..nx]);
        self.h.copy_from_slice(&c[nx..nx + nh]);
        assign(&mut self.cell.params_mut(), &c[nx + nh..]);
    }
    fn loss(&self) -> f64 {
        dot(&self.r, &self.cell.forward(&self.x, &self.h).0)
    }
    fn gradient(&mut self) -> Vec<f64> {
        zero_grads(&mut self.cell.params_mut());
        let (_, cache) = self.cell.forward(&self.x, &self.h);
        let (mut dx, dh) = self.cell.backward(&cache, &self.r.clone());
        dx.extend(dh);
        dx.extend(flatten_grads(&self.cell.params_mut()));
        dx
    }
}

/// `loss = Σ_t r_t · o_t + s · final_state` over a bidirectional GRU.
pub struct BiGruProbe {
    pub rnn: BiGru,
    pub xs: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub s: Vec<f64>,
}

impl BiGruProbe {
    pub fn random(input: usize, hidden: usize, len: usize, rng: &mut Rng) -> Self {
        BiGruProbe {
            rnn: BiGru::new(input, hidden, rng),
            xs: rows(len, input, rng),
            r: rows(len, 2 * hidden, rng),
            s: uniform(2 * hidden, rng),
        }
    }
}

impl Differentiable for BiGruProbe {
    fn coords(&mut self) -> Vec<f64> {
        let mut c: Vec<f64> = self.xs.concat();
        c.extend(flatten(&self.rnn.params_mut()));
        c
    }
    fn set_coords(&mut self, c: &[f64]) {
        let mut off = 0;
        for x in self.xs.iter_mut() {
            let n = x.len();
            x.copy_from_slice(&c[off..off + n]);
            off += n;
        }
        assign(&mut self.rnn.params_mut(), &c[off..]);
    }
    fn loss(&self) -> f64 {
        let (outs, last, _) = self.rnn.forward(&self.xs);
        outs.iter().zip(&self.r).map(|(o, r)| dot(o, r)).sum::<f64>() + dot(&last, &self.s)
    }
    fn gradient(&mut self) -> Vec<f64> {
        zero_grads(&mut self.rnn.params_mut());
        let (_, _, cache) = self.rnn.forward(&self.xs);
        let (r, s) = (self.r.clone(), self.s.clone());
        let mut g: Vec<f64> = self.rnn.backward(&cache, &r, &s).concat();
        g.extend(flatten_grads(&self.rnn.params_mut()));
        g
    }
}

/// `loss = r · attention_pool(values)`, differentiated in the values and the query.
pub struct AttentionProbe {
    pub pool: AttentionPool,
    pub values: Vec<Vec<f64>>,
    pub r: Vec<f64>,
}

impl AttentionProbe {
    pub fn random(dim: usize, len: usize, rng: &mut Rng) -> Self {
        AttentionProbe {
            pool: AttentionPool::new(dim, rng),
            values: rows(len, dim, rng),
            r: uniform(dim, rng),
        }
    }
}

impl Differentiable for AttentionProbe {
    fn coords(&mut self) -> Vec<f64> {
        let mut c = self.values.concat();
        c.extend_from_slice(&self.pool.query.value);
        c
    }
    fn set_coords(&mut self, c: &[f64]) {
        let mut off = 0;
        for v in self.values.iter_mut() {
            let n = v.len();
            v.copy_from_slice(&c[off..off + n]);
            off += n;
        }
        self.pool.query.value.copy_from_slice(&c[off..]);
    }
    fn loss(&self) -> f64 {
        dot(&self.r, &self.pool.forward(&self.values).0)
    }
    fn gradient(&mut self) -> Vec<f64> {
        self.pool.query.zero_grad();
        let (_, cache) = self.pool.forward(&self.values);
        let mut g = self.pool.backward(&cache, &self.r.clone()).concat();
        g.extend_from_slice(&self.pool.query.grad);
        g
    }
}

/// Weighted cross-entropy as a function of the logits.
pub struct SoftmaxCeProbe {
    pub logits: Vec<f64>,
    pub target: usize,
    pub weight: f64,
}

impl SoftmaxCeProbe {
    pub fn random(classes: usize, rng: &mut Rng) -> Self {
        SoftmaxCeProbe {
            logits: uniform(classes, rng).iter().map(|v| 2.0 * v).collect(),
            target: rng.random_range(0..classes),
            weight: rng.random_range(0.5..2.0),
        }
    }
}

impl Differentiable for SoftmaxCeProbe {
    fn coords(&mut self) -> Vec<f64> {
        self.logits.clone()
    }
    fn set_coords(&mut self, c: &[f64]) {
        self.logits.copy_from_slice(c);
    }
    fn loss(&self) -> f64 {
        softmax_cross_entropy(&self.logits, self.target, self.weight).0
    }
    fn gradient(&mut self) -> Vec<f64> {
        softmax_cross_entropy(&self.logits, self.target, self.weight).1
    }
}
