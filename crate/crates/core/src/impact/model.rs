use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{build_flat_input, Composition, ImpactInput, ImpactModelSpec, LabeledClaim};
use crate::corpus::ArgumentTree;
use crate::error::ImpactError;
use crate::learn::nn::{
    fit, softmax_cross_entropy, AttentionCache, AttentionPool, BiGru, BiGruCache, Differentiable,
    Encoder, EncoderCache, Example, Linear, Module, Param, TrainConfig, TrainReport,
};
use crate::util::{seeded, softmax};

/// Encoder, optional context composer and a three-way linear head.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpactModel {
    pub spec: ImpactModelSpec,
    pub encoder: Encoder,
    pub attention: Option<AttentionPool>,
    pub rnn: Option<BiGru>,
    pub head: Linear,
}

enum Cache {
    Single(EncoderCache),
    Attn {
        target: EncoderCache,
        context: Vec<EncoderCache>,
        pool: AttentionCache,
    },
    Gru {
        target: EncoderCache,
        context: Vec<EncoderCache>,
        rnn: BiGruCache,
    },
}

impl ImpactModel {
    pub fn new(spec: &ImpactModelSpec) -> Result<Self, ImpactError> {
        spec.composition.validate()?;
        let encoder = Encoder::new(&spec.encoder)?;
        let d = encoder.output_dim();
        let seed = spec.encoder.seed;
        let mut rng = seeded(seed ^ 0xc0_47e7);
        let (attention, rnn, input) = match spec.composition {
            Composition::Attn(_) => (Some(AttentionPool::new(d, &mut rng)), None, 2 * d),
            Composition::GruCtx(_) => {
                if spec.context_hidden == 0 {
                    return Err(ImpactError::Spec("GRU context needs hidden units"));
                }
                let h = spec.context_hidden;
                (None, Some(BiGru::new(d, h, &mut rng)), 2 * h + d)
            }
            _ => (None, None, d),
        };
        // The head draws from its own stream so that compositions with the same
        // input width start from identical weights.
        let head = Linear::new(input, 3, &mut seeded(seed ^ 0x4ead));
        Ok(ImpactModel {
            spec: spec.clone(),
            encoder,
            attention,
            rnn,
            head,
        })
    }

    fn represent(&self, x: &ImpactInput) -> (Vec<f64>, Cache) {
        match self.spec.composition {
            Composition::ClaimOnly => {
                let (v, c) = self.encoder.forward(&x.target);
                (v, Cache::Single(c))
            }
            Composition::ClaimParent | Composition::Flat(_) => {
                let i = self.spec.composition.context_len();
                let flat = build_flat_input(&x.target, &x.context, i);
                let (v, c) = self.encoder.forward(&flat);
                (v, Cache::Single(c))
            }
            Composition::Attn(i) => {
                let (vr, target) = self.encoder.forward(&x.target);
                let (vcs, context) = self.encode_context(x, i);
                let pool = self.attention.as_ref().expect("attention composer");
                let (mut vd, pc) = pool.forward(&vcs);
                vd.extend(vr);
                (
                    vd,
                    Cache::Attn {
                        target,
                        context,
                        pool: pc,
                    },
                )
            }
            Composition::GruCtx(i) => {
                let (vr, target) = self.encoder.forward(&x.target);
                let (vcs, context) = self.encode_context(x, i);
                let rnn = self.rnn.as_ref().expect("gru composer");
                let (_, mut vd, rc) = rnn.forward(&vcs);
                vd.extend(vr);
                (
                    vd,
                    Cache::Gru {
                        target,
                        context,
                        rnn: rc,
                    },
                )
            }
        }
    }

    fn encode_context(&self, x: &ImpactInput, i: usize) -> (Vec<Vec<f64>>, Vec<EncoderCache>) {
        x.context[x.context.len().saturating_sub(i)..]
            .iter()
            .map(|s| self.encoder.forward(s))
            .unzip()
    }

    fn backprop(&mut self, cache: Cache, dv: &[f64]) {
        match cache {
            Cache::Single(c) => self.encoder.backward(&c, dv),
            Cache::Attn {
                target,
                context,
                pool,
            } => {
                let d = self.encoder.output_dim();
                let att = self.attention.as_mut().expect("attention composer");
                let dvcs = att.backward(&pool, &dv[..d]);
                self.encoder.backward(&target, &dv[d..]);
                for (c, g) in context.iter().zip(&dvcs) {
                    self.encoder.backward(c, g);
                }
            }
            Cache::Gru {
                target,
                context,
                rnn,
            } => {
                let rnn_mod = self.rnn.as_mut().expect("gru composer");
                let h2 = rnn_mod.output_dim();
                let zeros = vec![vec![0.0; h2]; context.len()];
                let dvcs = rnn_mod.backward(&rnn, &zeros, &dv[..h2]);
                self.encoder.backward(&target, &dv[h2..]);
                for (c, g) in context.iter().zip(&dvcs) {
                    self.encoder.backward(c, g);
                }
            }
        }
    }

    /// Class distribution for one claim of a tree.
    pub fn predict_claim(&self, tree: &ArgumentTree, claim_id: &str) -> Result<[f64; 3], ImpactError> {
        let x = ImpactInput::for_claim(tree, claim_id, self.spec.composition)?;
        let p = softmax(&self.logits(&x));
        Ok([p[0], p[1], p[2]])
    }
}

impl Module for ImpactModel {
    type Input = ImpactInput;

    fn n_classes(&self) -> usize {
        3
    }

    fn logits(&self, x: &ImpactInput) -> Vec<f64> {
        self.head.forward(&self.represent(x).0)
    }

    fn accumulate(&mut self, x: &ImpactInput, label: usize, weight: f64) -> f64 {
        let (v, cache) = self.represent(x);
        let (loss, dl) = softmax_cross_entropy(&self.head.forward(&v), label, weight);
        let dv = self.head.backward(&v, &dl);
        self.backprop(cache, &dv);
        loss
    }

    fn params_mut(&mut self) -> Vec<&mut Param> {
        let mut p = self.encoder.params_mut();
        if let Some(a) = self.attention.as_mut() {
            p.push(&mut a.query);
        }
        if let Some(r) = self.rnn.as_mut() {
            p.extend(r.params_mut());
        }
        p.extend(self.head.params_mut());
        p
    }
}

/// Training examples for labeled claims under a composition.
pub fn impact_examples(
    trees: &[ArgumentTree],
    claims: &[LabeledClaim],
    composition: Composition,
) -> Result<Vec<Example<ImpactInput>>, ImpactError> {
    claims
        .iter()
        .map(|c| {
            let tree = trees
                .get(c.tree)
                .ok_or(ImpactError::Spec("claim refers to a missing tree"))?;
            let x = ImpactInput::for_claim(tree, &c.claim_id, composition)?;
            Ok(Example::new(x, c.label.index()))
        })
        .collect()
}

/// Builds a model from `spec` and fits it with early stopping on `val`.
pub fn train_impact(
    spec: &ImpactModelSpec,
    train: &[Example<ImpactInput>],
    val: &[Example<ImpactInput>],
    cfg: &TrainConfig,
) -> Result<(ImpactModel, TrainReport), ImpactError> {
    for class in 0..3 {
        if !train.iter().any(|e| e.label == class) {
            return Err(ImpactError::MissingClass(class));
        }
    }
    let mut model = ImpactModel::new(spec)?;
    let report = fit(&mut model, train, val, cfg)?;
    Ok((model, report))
}

/// Cross-entropy of a whole impact model on one example, as a function of every parameter.
pub struct ImpactProbe {
    pub model: ImpactModel,
    pub example: Example<ImpactInput>,
}

impl Differentiable for ImpactProbe {
    fn coords(&mut self) -> Vec<f64> {
        self.model
            .params_mut()
            .iter()
            .flat_map(|p| p.value.iter().copied())
            .collect()
    }

    fn set_coords(&mut self, c: &[f64]) {
        let mut off = 0;
        for p in self.model.params_mut() {
            let n = p.value.len();
            p.value.copy_from_slice(&c[off..off + n]);
            off += n;
        }
    }

    fn loss(&self) -> f64 {
        let logits = self.model.logits(&self.example.input);
        softmax_cross_entropy(&logits, self.example.label, self.example.weight).0
    }

    fn gradient(&mut self) -> Vec<f64> {
        self.model.params_mut().into_iter().for_each(|p| p.zero_grad());
        let Example {
            input,
            label,
            weight,
        } = self.example.clone();
        self.model.accumulate(&input, label, weight);
        self.model
            .params_mut()
            .iter()
            .flat_map(|p| p.grad.iter().copied())
            .collect()
    }
}
