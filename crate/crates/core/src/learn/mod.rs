//! Trainable models: regularised logistic regression, an RBF-kernel
//! classifier, PCA and a small differentiable network stack.

mod kernel;
mod logistic;
pub mod nn;
mod pca;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::LearnError;
use crate::util::{seeded, shuffle};

pub use kernel::{train_rbf_kernel, KernelConfig, KernelModel};
pub use logistic::{
    default_c_grid, grid_search_cv, train_logistic, train_logistic_traced, GridCell, GridResult,
    GridSpec, LinearModel, LogisticConfig, Penalty,
};
pub use pca::{pca_project, Pca};

/// Dense feature rows with class labels `0..n_classes` and optional instance weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub weights: Option<Vec<f64>>,
    pub n_classes: usize,
}

impl Dataset {
    pub fn new(
        schema: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self, LearnError> {
        if rows.len() != labels.len() {
            return Err(LearnError::Shape {
                row: rows.len().min(labels.len()),
                expected: rows.len(),
                found: labels.len(),
            });
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != schema.len() {
                return Err(LearnError::Shape {
                    row: i,
                    expected: schema.len(),
                    found: r.len(),
                });
            }
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(LearnError::Label {
                label,
                classes: n_classes,
            });
        }
        Ok(Dataset {
            schema,
            rows,
            labels,
            weights: None,
            n_classes,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self, LearnError> {
        if weights.len() != self.rows.len() {
            return Err(LearnError::Parameter("one weight per row required"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(LearnError::Parameter("weights must be finite and non-negative"));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.schema.len()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.n_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            weights: self
                .weights
                .as_ref()
                .map(|w| idx.iter().map(|&i| w[i]).collect()),
            n_classes: self.n_classes,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Dataset {
        Dataset {
            schema: cols.iter().map(|&c| self.schema[c].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect(),
            labels: self.labels.clone(),
            weights: self.weights.clone(),
            n_classes: self.n_classes,
        }
    }
}

/// Per-feature mean and population standard deviation, fitted on training rows.
/// Constant features keep a standard deviation of 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>], dim: usize) -> Self {
        Self::fit_weighted(rows, &alloc::vec![1.0; rows.len()], dim)
    }

    /// Statistics with each row counted `weights[i]` times.
    pub fn fit_weighted(rows: &[Vec<f64>], weights: &[f64], dim: usize) -> Self {
        let total: f64 = weights.iter().sum();
        let n = if total > 0.0 { total } else { 1.0 };
        let mut mean = alloc::vec![0.0; dim];
        for (r, w) in rows.iter().zip(weights) {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += w * v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = alloc::vec![0.0; dim];
        for (r, w) in rows.iter().zip(weights) {
            for ((s, v), m) in var.iter_mut().zip(r).zip(&mean) {
                *s += w * (v - m) * (v - m);
            }
        }
        let std = var
            .into_iter()
            .map(|s| {
                let sd = libm::sqrt(s / n);
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, std }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }
}

/// Label-stratified folds of row indices: every class is shuffled with the
/// seed and dealt round-robin, continuing where the previous class stopped.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, LearnError> {
    if k < 2 {
        return Err(LearnError::Parameter("k must be at least 2"));
    }
    if labels.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    let classes: BTreeSet<usize> = labels.iter().copied().collect();
    let mut rng = seeded(seed);
    let mut folds = alloc::vec![Vec::new(); k];
    let mut next = 0;
    for c in classes {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        if idx.len() < k {
            return Err(LearnError::Stratification {
                class: c,
                count: idx.len(),
                needed: k,
            });
        }
        shuffle(&mut idx, &mut rng);
        for i in idx {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Training indices for fold `f`: everything not in it.
pub fn complement(folds: &[Vec<usize>], f: usize) -> Vec<usize> {
    let mut out: Vec<usize> = folds
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != f)
        .flat_map(|(_, v)| v.iter().copied())
        .collect();
    out.sort_unstable();
    out
}

/// Weights proportional to inverse class frequency, scaled to average 1.
pub fn balanced_weights(labels: &[usize], n_classes: usize) -> Vec<f64> {
    let mut counts = alloc::vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count() as f64;
    let n = labels.len() as f64;
    labels
        .iter()
        .map(|&l| n / (present * counts[l] as f64))
        .collect()
}
