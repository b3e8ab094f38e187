use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{balanced_weights, Dataset, Standardizer};
use crate::error::LearnError;
use crate::util::{argmax, softmax};

/// Largest training set accepted; the kernel matrix is held densely.
pub const MAX_KERNEL_ROWS: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub gamma: f64,
    pub c: f64,
    pub class_weighted: bool,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            gamma: 0.1,
            c: 1.0,
            class_weighted: false,
            max_iter: 300,
            tol: 1e-7,
        }
    }
}

/// Kernel logistic regression: class scores are `b_k + Σ_j α_jk K(x_j, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub support: Vec<Vec<f64>>,
    /// `alpha[j][k]` for training row j and class k.
    pub alpha: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub scaler: Standardizer,
    pub config: KernelConfig,
}

fn rbf(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    libm::exp(-gamma * d2)
}

impl KernelModel {
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        let x = self.scaler.transform(row);
        let mut s = self.bias.clone();
        for (sv, a) in self.support.iter().zip(&self.alpha) {
            let kv = rbf(self.config.gamma, sv, &x);
            for (si, ai) in s.iter_mut().zip(a) {
                *si += ai * kv;
            }
        }
        s
    }

    pub fn predict_proba(&self, row: &[f64]) -> Vec<f64> {
        softmax(&self.scores(row))
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        argmax(&self.scores(row))
    }

    pub fn accuracy(&self, ds: &Dataset) -> f64 {
        if ds.is_empty() {
            return 0.0;
        }
        let hits = ds
            .rows
            .iter()
            .zip(&ds.labels)
            .filter(|(r, &l)| self.predict(r) == l)
            .count();
        hits as f64 / ds.len() as f64
    }
}

struct State {
    alpha: Vec<Vec<f64>>,
    bias: Vec<f64>,
    /// Cached `K α` per row and class.
    f: Vec<Vec<f64>>,
}

/// Objective (1/W) Σ w_i CE_i + (1/(2 C W)) Σ_k α_kᵀ K α_k, minimised along the
/// functional-gradient direction with backtracking.
pub fn train_rbf_kernel(ds: &Dataset, config: &KernelConfig) -> Result<KernelModel, LearnError> {
    if !(config.gamma > 0.0 && config.gamma.is_finite()) {
        return Err(LearnError::Parameter("gamma must be positive"));
    }
    if !(config.c > 0.0 && config.c.is_finite()) {
        return Err(LearnError::Parameter("C must be positive and finite"));
    }
    if ds.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    if ds.len() > MAX_KERNEL_ROWS {
        return Err(LearnError::Parameter("too many rows for a dense kernel matrix"));
    }
    if ds.class_counts().iter().filter(|&&c| c > 0).count() < 2 {
        return Err(LearnError::SingleClass);
    }
    let n = ds.len();
    let k = ds.n_classes;
    let mut w: Vec<f64> = (0..n).map(|i| ds.weight(i)).collect();
    let scaler = Standardizer::fit_weighted(&ds.rows, &w, ds.n_features());
    let x: Vec<Vec<f64>> = ds.rows.iter().map(|r| scaler.transform(r)).collect();
    if config.class_weighted {
        for (wi, b) in w.iter_mut().zip(balanced_weights(&ds.labels, k)) {
            *wi *= b;
        }
    }
    let total: f64 = w.iter().sum();
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rbf(config.gamma, &x[i], &x[j])).collect())
        .collect();
    let reg = 1.0 / (config.c * total);

    let objective = |s: &State| -> f64 {
        let mut loss = 0.0;
        for i in 0..n {
            if w[i] == 0.0 {
                continue;
            }
            let logits: Vec<f64> = (0..k).map(|c| s.f[i][c] + s.bias[c]).collect();
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + libm::log(logits.iter().map(|z| libm::exp(z - max)).sum::<f64>());
            loss += w[i] * (lse - logits[ds.labels[i]]);
        }
        let mut quad = 0.0;
        for i in 0..n {
            for c in 0..k {
                quad += s.alpha[i][c] * s.f[i][c];
            }
        }
        loss / total + 0.5 * reg * quad
    };

    let mut state = State {
        alpha: vec![vec![0.0; k]; n],
        bias: vec![0.0; k],
        f: vec![vec![0.0; k]; n],
    };
    let mut obj = objective(&state);
    let mut step = 1.0;
    for _ in 0..config.max_iter {
        // Direction in α: residual plus α/C, both per unit of total weight.
        let mut dir_a = vec![vec![0.0; k]; n];
        let mut dir_b = vec![0.0; k];
        for i in 0..n {
            let logits: Vec<f64> = (0..k).map(|c| state.f[i][c] + state.bias[c]).collect();
            let p = softmax(&logits);
            for c in 0..k {
                let r = w[i] * (p[c] - if ds.labels[i] == c { 1.0 } else { 0.0 }) / total;
                dir_a[i][c] = r + reg * state.alpha[i][c];
                dir_b[c] += r;
            }
        }
        let mut dir_f = vec![vec![0.0; k]; n];
        for i in 0..n {
            for (j, dj) in dir_a.iter().enumerate() {
                let g = gram[i][j];
                for c in 0..k {
                    dir_f[i][c] += g * dj[c];
                }
            }
        }
        // Directional derivative is -(dᵀ K d + |d_b|²) ≤ 0.
        let slope: f64 = (0..n)
            .map(|i| (0..k).map(|c| dir_a[i][c] * dir_f[i][c]).sum::<f64>())
            .sum::<f64>()
            + dir_b.iter().map(|v| v * v).sum::<f64>();
        if slope < config.tol * config.tol {
            break;
        }
        step *= 2.0;
        let mut accepted = None;
        while step > 1e-12 {
            let cand = State {
                alpha: (0..n)
                    .map(|i| (0..k).map(|c| state.alpha[i][c] - step * dir_a[i][c]).collect())
                    .collect(),
                bias: (0..k).map(|c| state.bias[c] - step * dir_b[c]).collect(),
                f: (0..n)
                    .map(|i| (0..k).map(|c| state.f[i][c] - step * dir_f[i][c]).collect())
                    .collect(),
            };
            let o = objective(&cand);
            if o <= obj - 0.25 * step * slope {
                accepted = Some((cand, o));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((s, o)) => {
                if !o.is_finite() {
                    return Err(LearnError::Diverged { epoch: 0, last: obj });
                }
                let gain = obj - o;
                state = s;
                obj = o;
                if gain < config.tol * libm::fmax(1.0, libm::fabs(obj)) * 1e-3 {
                    break;
                }
            }
            None => break,
        }
    }
    Ok(KernelModel {
        support: x,
        alpha: state.alpha,
        bias: state.bias,
        scaler,
        config: *config,
    })
}
