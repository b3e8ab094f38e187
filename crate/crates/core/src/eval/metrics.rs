use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Unweighted mean over all classes.
    Macro,
    /// Mean weighted by gold-class support.
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub averaging: Averaging,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub per_class: Vec<ClassScores>,
    pub warnings: Vec<String>,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision, recall and F1 over classes `0..n_classes`, plus accuracy.
/// Undefined ratios count as 0. Under macro averaging a class missing from
/// `golds` still counts in the mean and a warning is recorded.
pub fn metrics(
    preds: &[usize],
    golds: &[usize],
    n_classes: usize,
    averaging: Averaging,
) -> Result<MetricReport, EvalError> {
    if preds.len() != golds.len() {
        return Err(EvalError::Length(preds.len(), golds.len()));
    }
    if golds.is_empty() || n_classes == 0 {
        return Err(EvalError::Empty);
    }
    let mut tp = vec![0usize; n_classes];
    let mut predicted = vec![0usize; n_classes];
    let mut support = vec![0usize; n_classes];
    for (&p, &g) in preds.iter().zip(golds) {
        if p >= n_classes || g >= n_classes {
            return Err(EvalError::Learn(crate::error::LearnError::Label {
                label: p.max(g),
                classes: n_classes,
            }));
        }
        predicted[p] += 1;
        support[g] += 1;
        if p == g {
            tp[g] += 1;
        }
    }
    let per_class: Vec<ClassScores> = (0..n_classes)
        .map(|c| {
            let precision = ratio(tp[c], predicted[c]);
            let recall = ratio(tp[c], support[c]);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassScores {
                precision,
                recall,
                f1,
                support: support[c],
            }
        })
        .collect();
    let mut warnings = Vec::new();
    let weights: Vec<f64> = match averaging {
        Averaging::Macro => {
            for (c, s) in support.iter().enumerate() {
                if *s == 0 {
                    warnings.push(format!("class {c} has no gold rows; it contributes 0 to the macro average"));
                }
            }
            vec![1.0 / n_classes as f64; n_classes]
        }
        Averaging::Weighted => support.iter().map(|&s| s as f64 / golds.len() as f64).collect(),
    };
    let avg = |f: fn(&ClassScores) -> f64| per_class.iter().zip(&weights).map(|(c, w)| w * f(c)).sum();
    Ok(MetricReport {
        averaging,
        precision: avg(|c| c.precision),
        recall: avg(|c| c.recall),
        f1: avg(|c| c.f1),
        accuracy: ratio(tp.iter().sum(), golds.len()),
        per_class,
        warnings,
    })
}
