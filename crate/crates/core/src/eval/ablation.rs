use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::metrics::{metrics, Averaging, MetricReport};
use super::split::stratified_folds;
use super::stats::t_test_two_sided;
use crate::error::EvalError;
use crate::learn::{complement, default_c_grid, grid_search_cv, train_logistic, Dataset, GridSpec, LogisticConfig, Penalty};
use crate::util::{mean, sample_std};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelChoice {
    /// One fixed logistic-regression configuration.
    Logistic(LogisticConfig),
    /// Penalty and C chosen by inner cross-validation on each training fold.
    LogisticGrid {
        c_grid: Vec<f64>,
        inner_folds: usize,
        class_weighted: bool,
    },
}

impl Default for ModelChoice {
    fn default() -> Self {
        ModelChoice::Logistic(LogisticConfig::default())
    }
}

impl ModelChoice {
    pub fn grid() -> Self {
        ModelChoice::LogisticGrid {
            c_grid: default_c_grid(),
            inner_folds: 3,
            class_weighted: false,
        }
    }

    fn predict_fold(&self, train: &Dataset, test: &Dataset, seed: u64) -> Result<Vec<usize>, EvalError> {
        let model = match self {
            ModelChoice::Logistic(cfg) => train_logistic(train, cfg)?,
            ModelChoice::LogisticGrid {
                c_grid,
                inner_folds,
                class_weighted,
            } => {
                let spec = GridSpec {
                    penalties: vec![Penalty::L1, Penalty::L2],
                    c_grid: c_grid.clone(),
                    inner_folds: *inner_folds,
                    base: LogisticConfig {
                        class_weighted: *class_weighted,
                        ..LogisticConfig::default()
                    },
                    seed,
                };
                grid_search_cv(train, &spec)?.model
            }
        };
        Ok(model.predict_all(&test.rows))
    }
}

/// Per-fold scores and out-of-fold predictions of one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub name: String,
    pub fold_accuracy: Vec<f64>,
    pub fold_f1: Vec<f64>,
    /// Prediction for every row, made by the model that did not see it.
    pub predictions: Vec<usize>,
    pub pooled: MetricReport,
}

fn outcome(
    name: &str,
    labels: &[usize],
    n_classes: usize,
    folds: &[Vec<usize>],
    mut predict: impl FnMut(usize, &[usize], &[usize]) -> Result<Vec<usize>, EvalError>,
) -> Result<CvOutcome, EvalError> {
    let mut predictions = vec![0; labels.len()];
    let mut fold_accuracy = Vec::with_capacity(folds.len());
    let mut fold_f1 = Vec::with_capacity(folds.len());
    for (f, test) in folds.iter().enumerate() {
        let train = complement(folds, f);
        let preds = predict(f, &train, test)?;
        let golds: Vec<usize> = test.iter().map(|&i| labels[i]).collect();
        let m = metrics(&preds, &golds, n_classes, Averaging::Macro)?;
        fold_accuracy.push(m.accuracy);
        fold_f1.push(m.f1);
        for (&i, p) in test.iter().zip(preds) {
            predictions[i] = p;
        }
    }
    let pooled = metrics(&predictions, labels, n_classes, Averaging::Macro)?;
    Ok(CvOutcome {
        name: String::from(name),
        fold_accuracy,
        fold_f1,
        predictions,
        pooled,
    })
}

/// Stratified k-fold evaluation of `model` on `ds`.
pub fn cross_validate(name: &str, ds: &Dataset, model: &ModelChoice, k: usize, seed: u64) -> Result<CvOutcome, EvalError> {
    let folds = stratified_folds(&ds.labels, k, seed)?;
    outcome(name, &ds.labels, ds.n_classes, &folds, |f, train, test| {
        model.predict_fold(&ds.subset(train), &ds.subset(test), seed.wrapping_add(f as u64))
    })
}

/// Predicts each fold's training majority (ties to the lowest class).
pub fn majority_row(labels: &[usize], n_classes: usize, k: usize, seed: u64) -> Result<CvOutcome, EvalError> {
    let folds = stratified_folds(labels, k, seed)?;
    outcome("majority", labels, n_classes, &folds, |_, train, test| {
        let mut counts = vec![0usize; n_classes];
        for &i in train {
            counts[labels[i]] += 1;
        }
        let best = (0..n_classes).fold(0, |b, c| if counts[c] > counts[b] { c } else { b });
        Ok(vec![best; test.len()])
    })
}

pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub name: String,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub f1_mean: f64,
    pub f1_std: f64,
    /// Two-sided t-test of fold accuracies against the baseline row.
    pub p_value: Option<f64>,
    pub stars: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub baseline: String,
    pub rows: Vec<AblationRow>,
}

impl AblationTable {
    /// The majority row comes first; other rows keep their order. Rows are
    /// compared against the row named `baseline` (the majority row by default).
    pub fn assemble(majority: &CvOutcome, rows: &[CvOutcome], baseline: Option<&str>) -> Result<Self, EvalError> {
        let all: Vec<&CvOutcome> = core::iter::once(majority).chain(rows).collect();
        let base_name = baseline.unwrap_or("majority");
        let base = all
            .iter()
            .find(|o| o.name == base_name)
            .ok_or_else(|| EvalError::UnknownGroup(String::from(base_name)))?;
        let rows = all
            .iter()
            .map(|o| {
                let p_value = if o.name == base.name {
                    None
                } else {
                    t_test_two_sided(&o.fold_accuracy, &base.fold_accuracy).ok().map(|(_, p)| p)
                };
                let spread = |v: &[f64]| if v.len() > 1 { sample_std(v) } else { 0.0 };
                AblationRow {
                    name: o.name.clone(),
                    accuracy_mean: mean(&o.fold_accuracy),
                    accuracy_std: spread(&o.fold_accuracy),
                    f1_mean: mean(&o.fold_f1),
                    f1_std: spread(&o.fold_f1),
                    p_value,
                    stars: String::from(p_value.map_or("", stars)),
                }
            })
            .collect();
        Ok(AblationTable {
            baseline: String::from(base_name),
            rows,
        })
    }
}
