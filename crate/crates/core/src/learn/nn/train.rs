use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::check::{assign, flatten};
use super::encoder::{Encoder, EncoderSpec, Sequence};
use super::layers::Linear;
use super::{softmax_cross_entropy, Adam, Param};
use crate::error::LearnError;
use crate::learn::balanced_weights;
use crate::util::{argmax, macro_f1, seeded, shuffle, softmax};

/// A classifier trainable by [`fit`].
pub trait Module {
    type Input;

    fn n_classes(&self) -> usize;
    fn logits(&self, x: &Self::Input) -> Vec<f64>;
    /// Forward and backward pass for one example; gradients are accumulated
    /// into the parameters and the weighted loss is returned.
    fn accumulate(&mut self, x: &Self::Input, label: usize, weight: f64) -> f64;
    fn params_mut(&mut self) -> Vec<&mut Param>;

    fn predict(&self, x: &Self::Input) -> usize {
        argmax(&self.logits(x))
    }

    fn predict_proba(&self, x: &Self::Input) -> Vec<f64> {
        softmax(&self.logits(x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example<I> {
    pub input: I,
    pub label: usize,
    pub weight: f64,
}

impl<I> Example<I> {
    pub fn new(input: I, label: usize) -> Self {
        Example {
            input,
            label,
            weight: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    /// Epochs without validation improvement before stopping; 0 disables.
    pub patience: usize,
    pub seed: u64,
    pub class_weighted: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            batch_size: 16,
            lr: 0.005,
            patience: 3,
            seed: 0,
            class_weighted: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epochs_run: usize,
    /// Epoch (1-based) whose parameters were kept.
    pub best_epoch: usize,
    pub best_val_f1: Option<f64>,
    /// Mean training loss per epoch.
    pub losses: Vec<f64>,
}

/// Mini-batch Adam on weighted cross-entropy. With a validation set, the
/// parameters from the epoch with the best macro-F1 are restored at the end.
pub fn fit<M: Module>(
    model: &mut M,
    train: &[Example<M::Input>],
    val: &[Example<M::Input>],
    cfg: &TrainConfig,
) -> Result<TrainReport, LearnError> {
    if train.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    if cfg.batch_size == 0 || !(cfg.lr > 0.0 && cfg.lr.is_finite()) {
        return Err(LearnError::Parameter("batch size and step size must be positive"));
    }
    let k = model.n_classes();
    if let Some(e) = train.iter().chain(val).find(|e| e.label >= k) {
        return Err(LearnError::Label {
            label: e.label,
            classes: k,
        });
    }
    let labels: Vec<usize> = train.iter().map(|e| e.label).collect();
    let class_w = if cfg.class_weighted {
        balanced_weights(&labels, k)
    } else {
        vec![1.0; train.len()]
    };
    let weights: Vec<f64> = train.iter().zip(&class_w).map(|(e, c)| e.weight * c).collect();

    let mut rng = seeded(cfg.seed);
    let mut opt = Adam::new(cfg.lr);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut report = TrainReport::default();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut stale = 0;
    let mut last = f64::NAN;
    for epoch in 1..=cfg.epochs {
        shuffle(&mut order, &mut rng);
        let mut total = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let mut mass = 0.0;
            for &i in batch {
                total += model.accumulate(&train[i].input, train[i].label, weights[i]);
                mass += weights[i];
            }
            if !total.is_finite() {
                return Err(LearnError::Diverged { epoch, last });
            }
            if mass > 0.0 {
                opt.step(&mut model.params_mut(), 1.0 / mass);
            }
        }
        if model.params_mut().iter().any(|p| !p.is_finite()) {
            return Err(LearnError::Diverged { epoch, last });
        }
        let mean_loss = total / weights.iter().sum::<f64>().max(1e-300);
        last = mean_loss;
        report.losses.push(mean_loss);
        report.epochs_run = epoch;
        if val.is_empty() {
            report.best_epoch = epoch;
            continue;
        }
        let preds: Vec<usize> = val.iter().map(|e| model.predict(&e.input)).collect();
        let golds: Vec<usize> = val.iter().map(|e| e.label).collect();
        let f1 = macro_f1(&preds, &golds, k);
        if best.as_ref().is_none_or(|(b, _)| f1 > *b) {
            best = Some((f1, flatten(&model.params_mut())));
            report.best_epoch = epoch;
            report.best_val_f1 = Some(f1);
            stale = 0;
        } else {
            stale += 1;
            if cfg.patience > 0 && stale >= cfg.patience {
                break;
            }
        }
    }
    if let Some((_, values)) = best {
        assign(&mut model.params_mut(), &values);
    }
    Ok(report)
}

/// A linear softmax classifier over dense inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearHead {
    pub layer: Linear,
}

impl LinearHead {
    pub fn new(input: usize, classes: usize, seed: u64) -> Self {
        LinearHead {
            layer: Linear::new(input, classes, &mut seeded(seed)),
        }
    }
}

impl Module for LinearHead {
    type Input = Vec<f64>;

    fn n_classes(&self) -> usize {
        self.layer.output_dim()
    }

    fn logits(&self, x: &Vec<f64>) -> Vec<f64> {
        self.layer.forward(x)
    }

    fn accumulate(&mut self, x: &Vec<f64>, label: usize, weight: f64) -> f64 {
        let (loss, dl) = softmax_cross_entropy(&self.layer.forward(x), label, weight);
        self.layer.backward(x, &dl);
        loss
    }

    fn params_mut(&mut self) -> Vec<&mut Param> {
        self.layer.params_mut()
    }
}

/// Encoder followed by a linear head.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextClassifier {
    pub spec: EncoderSpec,
    pub encoder: Encoder,
    pub head: Linear,
}

impl TextClassifier {
    pub fn new(spec: &EncoderSpec, classes: usize) -> Result<Self, LearnError> {
        if classes < 2 {
            return Err(LearnError::Parameter("need at least two classes"));
        }
        let encoder = Encoder::new(spec)?;
        let head = Linear::new(encoder.output_dim(), classes, &mut seeded(spec.seed ^ 0x4ead));
        Ok(TextClassifier {
            spec: spec.clone(),
            encoder,
            head,
        })
    }
}

impl Module for TextClassifier {
    type Input = Sequence;

    fn n_classes(&self) -> usize {
        self.head.output_dim()
    }

    fn logits(&self, x: &Sequence) -> Vec<f64> {
        self.head.forward(&self.encoder.encode(x))
    }

    fn accumulate(&mut self, x: &Sequence, label: usize, weight: f64) -> f64 {
        let (v, cache) = self.encoder.forward(x);
        let (loss, dl) = softmax_cross_entropy(&self.head.forward(&v), label, weight);
        let dv = self.head.backward(&v, &dl);
        self.encoder.backward(&cache, &dv);
        loss
    }

    fn params_mut(&mut self) -> Vec<&mut Param> {
        let mut p = self.encoder.params_mut();
        p.extend(self.head.params_mut());
        p
    }
}

/// Builds a [`TextClassifier`] from `spec` and fits it.
pub fn train_neural(
    spec: &EncoderSpec,
    classes: usize,
    train: &[Example<Sequence>],
    val: &[Example<Sequence>],
    cfg: &TrainConfig,
) -> Result<(TextClassifier, TrainReport), LearnError> {
    let mut model = TextClassifier::new(spec, classes)?;
    let report = fit(&mut model, train, val, cfg)?;
    Ok((model, report))
}
