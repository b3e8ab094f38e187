use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{balanced_weights, complement, stratified_kfold, Dataset, Standardizer};
use crate::error::LearnError;
use crate::util::{argmax, softmax};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    L1,
    L2,
}

impl Penalty {
    pub fn as_str(self) -> &'static str {
        match self {
            Penalty::L1 => "l1",
            Penalty::L2 => "l2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub penalty: Penalty,
    /// Inverse regularisation strength.
    pub c: f64,
    pub class_weighted: bool,
    pub max_iter: usize,
    /// Stop when the gradient-mapping norm drops below this.
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            penalty: Penalty::L2,
            c: 1.0,
            class_weighted: false,
            max_iter: 500,
            tol: 1e-6,
        }
    }
}

/// Multinomial logistic regression on standardised features.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub schema: Vec<String>,
    pub n_classes: usize,
    /// `weights[k][j]`: class k, standardised feature j.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub scaler: Standardizer,
    pub config: LogisticConfig,
}

impl LinearModel {
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        let x = self.scaler.transform(row);
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| b + crate::util::dot(w, &x))
            .collect()
    }

    pub fn predict_proba(&self, row: &[f64]) -> Vec<f64> {
        softmax(&self.scores(row))
    }

    /// Argmax of the affine scores, ties to the lowest class id.
    pub fn predict(&self, row: &[f64]) -> usize {
        argmax(&self.scores(row))
    }

    pub fn predict_all(&self, rows: &[Vec<f64>]) -> Vec<usize> {
        rows.iter().map(|r| self.predict(r)).collect()
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

    /// Importance of each feature on the standardised scale: for two classes
    /// the coefficient difference, otherwise the largest absolute coefficient.
    pub fn feature_importance(&self) -> Vec<f64> {
        let d = self.schema.len();
        (0..d)
            .map(|j| {
                if self.n_classes == 2 {
                    libm::fabs(self.weights[1][j] - self.weights[0][j])
                } else {
                    self.weights
                        .iter()
                        .map(|w| libm::fabs(w[j]))
                        .fold(0.0, f64::max)
                }
            })
            .collect()
    }
}

struct Problem<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    w: Vec<f64>,
    total: f64,
    k: usize,
    d: usize,
}

impl Problem<'_> {
    /// Mean weighted cross-entropy and its gradient; θ = [W row-major, b].
    fn value_grad(&self, theta: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let (k, d) = (self.k, self.d);
        let mut loss = 0.0;
        let mut g = grad;
        if let Some(g) = g.as_deref_mut() {
            g.iter_mut().for_each(|v| *v = 0.0);
        }
        let mut logits = vec![0.0; k];
        for ((x, &y), &w) in self.x.iter().zip(self.y).zip(&self.w) {
            if w == 0.0 {
                continue;
            }
            for c in 0..k {
                logits[c] = theta[k * d + c] + crate::util::dot(&theta[c * d..(c + 1) * d], x);
            }
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + libm::log(logits.iter().map(|z| libm::exp(z - max)).sum::<f64>());
            loss += w * (lse - logits[y]);
            if let Some(g) = g.as_deref_mut() {
                for c in 0..k {
                    let p = libm::exp(logits[c] - lse);
                    let r = w * (p - if c == y { 1.0 } else { 0.0 }) / self.total;
                    if r != 0.0 {
                        for (gj, xj) in g[c * d..(c + 1) * d].iter_mut().zip(x) {
                            *gj += r * xj;
                        }
                        g[k * d + c] += r;
                    }
                }
            }
        }
        loss /= self.total;
        loss
    }
}

fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| libm::fabs(*x)).sum()
}

/// Train by monotone accelerated proximal gradient with backtracking.
/// Returns the model and the objective after every iteration.
pub fn train_logistic_traced(
    ds: &Dataset,
    config: &LogisticConfig,
) -> Result<(LinearModel, Vec<f64>), LearnError> {
    if ds.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    if !(config.c > 0.0 && config.c.is_finite()) {
        return Err(LearnError::Parameter("C must be positive and finite"));
    }
    let present = ds.class_counts().iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(LearnError::SingleClass);
    }
    let scaler = Standardizer::fit(&ds.rows, ds.n_features());
    let x: Vec<Vec<f64>> = ds.rows.iter().map(|r| scaler.transform(r)).collect();
    let mut w: Vec<f64> = (0..ds.len()).map(|i| ds.weight(i)).collect();
    if config.class_weighted {
        for (wi, b) in w.iter_mut().zip(balanced_weights(&ds.labels, ds.n_classes)) {
            *wi *= b;
        }
    }
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return Err(LearnError::Parameter("total instance weight is zero"));
    }
    let (k, d) = (ds.n_classes, ds.n_features());
    let reg = 1.0 / (config.c * total);
    let prob = Problem {
        x: &x,
        y: &ds.labels,
        w,
        total,
        k,
        d,
    };
    // The penalty is handled in the proximal step, so the backtracked step size
    // depends only on the data term.
    let penalty = |theta: &[f64]| match config.penalty {
        Penalty::L1 => reg * l1_norm(&theta[..k * d]),
        Penalty::L2 => 0.5 * reg * theta[..k * d].iter().map(|v| v * v).sum::<f64>(),
    };
    let objective = |theta: &[f64]| prob.value_grad(theta, None) + penalty(theta);

    let n = k * d + k;
    let mut xk = vec![0.0; n];
    let mut fx = objective(&xk);
    let mut y = xk.clone();
    let mut t = 1.0;
    let mut lip = 1.0;
    let mut grad = vec![0.0; n];
    let mut trace = Vec::with_capacity(config.max_iter);
    for _ in 0..config.max_iter {
        let fy = prob.value_grad(&y, Some(&mut grad));
        let (z, step_norm) = loop {
            let mut z: Vec<f64> = y.iter().zip(&grad).map(|(a, g)| a - g / lip).collect();
            match config.penalty {
                Penalty::L1 => {
                    let thr = reg / lip;
                    for v in &mut z[..k * d] {
                        *v = libm::copysign(libm::fmax(libm::fabs(*v) - thr, 0.0), *v);
                    }
                }
                Penalty::L2 => {
                    let shrink = 1.0 / (1.0 + reg / lip);
                    z[..k * d].iter_mut().for_each(|v| *v *= shrink);
                }
            }
            let diff: Vec<f64> = z.iter().zip(&y).map(|(a, b)| a - b).collect();
            let quad = crate::util::dot(&grad, &diff) + 0.5 * lip * crate::util::dot(&diff, &diff);
            let fz = prob.value_grad(&z, None);
            if fz <= fy + quad + 1e-12 * libm::fabs(fy) || lip > 1e12 {
                let norm = lip * diff.iter().map(|v| libm::fabs(*v)).fold(0.0, f64::max);
                break (z, norm);
            }
            lip *= 2.0;
        };
        let fz = objective(&z);
        if !fz.is_finite() {
            return Err(LearnError::Diverged {
                epoch: trace.len(),
                last: fx,
            });
        }
        let prev = xk.clone();
        if fz <= fx {
            xk = z.clone();
            fx = fz;
        }
        trace.push(fx);
        let t_next = (1.0 + libm::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        y = (0..n)
            .map(|i| xk[i] + (t / t_next) * (z[i] - xk[i]) + ((t - 1.0) / t_next) * (xk[i] - prev[i]))
            .collect();
        t = t_next;
        if step_norm < config.tol {
            break;
        }
    }
    let weights = (0..k).map(|c| xk[c * d..(c + 1) * d].to_vec()).collect();
    let bias = xk[k * d..].to_vec();
    Ok((
        LinearModel {
            schema: ds.schema.clone(),
            n_classes: k,
            weights,
            bias,
            scaler,
            config: *config,
        },
        trace,
    ))
}

pub fn train_logistic(ds: &Dataset, config: &LogisticConfig) -> Result<LinearModel, LearnError> {
    train_logistic_traced(ds, config).map(|(m, _)| m)
}

/// Powers of ten from 1e-5 to 1e5.
pub fn default_c_grid() -> Vec<f64> {
    vec![1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5]
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub penalties: Vec<Penalty>,
    pub c_grid: Vec<f64>,
    pub inner_folds: usize,
    pub base: LogisticConfig,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            penalties: vec![Penalty::L1, Penalty::L2],
            c_grid: default_c_grid(),
            inner_folds: 3,
            base: LogisticConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridCell {
    pub penalty: Penalty,
    pub c: f64,
    pub mean_accuracy: f64,
    pub fits: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    pub best: LogisticConfig,
    pub cells: Vec<GridCell>,
    pub model: LinearModel,
}

/// Pick the configuration with the best mean inner-fold accuracy, then refit on
/// all of `ds`. Ties go to the smaller C, then to l2.
pub fn grid_search_cv(ds: &Dataset, spec: &GridSpec) -> Result<GridResult, LearnError> {
    if spec.penalties.is_empty() || spec.c_grid.is_empty() {
        return Err(LearnError::Parameter("empty grid"));
    }
    let folds = stratified_kfold(&ds.labels, spec.inner_folds, spec.seed)?;
    let splits: Vec<(Dataset, Dataset)> = (0..folds.len())
        .map(|f| (ds.subset(&complement(&folds, f)), ds.subset(&folds[f])))
        .collect();
    let mut cells = Vec::new();
    for &penalty in &spec.penalties {
        for &c in &spec.c_grid {
            let cfg = LogisticConfig {
                penalty,
                c,
                ..spec.base
            };
            let mut acc = 0.0;
            for (train, test) in &splits {
                acc += train_logistic(train, &cfg)?.accuracy(test);
            }
            cells.push(GridCell {
                penalty,
                c,
                mean_accuracy: acc / splits.len() as f64,
                fits: splits.len(),
            });
        }
    }
    let better = |a: &GridCell, b: &GridCell| {
        if libm::fabs(a.mean_accuracy - b.mean_accuracy) > 1e-12 {
            return a.mean_accuracy > b.mean_accuracy;
        }
        if a.c != b.c {
            return a.c < b.c;
        }
        a.penalty == Penalty::L2 && b.penalty == Penalty::L1
    };
    let mut best = &cells[0];
    for cell in &cells[1..] {
        if better(cell, best) {
            best = cell;
        }
    }
    let cfg = LogisticConfig {
        penalty: best.penalty,
        c: best.c,
        ..spec.base
    };
    let model = train_logistic(ds, &cfg)?;
    Ok(GridResult {
        best: cfg,
        cells,
        model,
    })
}
