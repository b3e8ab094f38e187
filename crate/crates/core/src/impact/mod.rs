//! Argument-impact prediction over argument trees.
//!
//! A claim is classified from its own text plus, depending on the
//! [`Composition`], the chain of predecessor claims leading to it.

mod model;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::ArgumentTree;
use crate::error::{ImpactError, TextError};
use crate::labeling::{impact_label, ImpactLabel3, MIN_IMPACT_AGREEMENT, MIN_IMPACT_VOTES};
use crate::learn::nn::{AttentionPool, BiGru, Sequence};
use crate::textfeat::{fit_tfidf, tokenize, FeatureVector, TfidfConfig, TfidfModel};

pub use model::{impact_examples, train_impact, ImpactModel, ImpactProbe};

/// How a claim and its context are combined before classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Composition {
    ClaimOnly,
    ClaimParent,
    /// Up to `i` previous claims joined with the target into one sequence.
    Flat(usize),
    /// Attention-pooled encodings of up to `i` previous claims.
    Attn(usize),
    /// Bidirectional GRU over encodings of up to `i` previous claims.
    GruCtx(usize),
}

impl Composition {
    /// Number of previous claims consumed.
    pub fn context_len(self) -> usize {
        match self {
            Composition::ClaimOnly => 0,
            Composition::ClaimParent => 1,
            Composition::Flat(i) | Composition::Attn(i) | Composition::GruCtx(i) => i,
        }
    }

    pub fn validate(self) -> Result<(), ImpactError> {
        match self {
            Composition::Flat(0) | Composition::Attn(0) | Composition::GruCtx(0) => {
                Err(ImpactError::Spec("context length must be at least 1"))
            }
            _ => Ok(()),
        }
    }

    /// Parses `CLAIM_ONLY`, `CLAIM_PARENT`, `FLAT(i)`, `ATTN(i)` or `GRU_CTX(i)`, case-insensitively.
    pub fn parse(s: &str) -> Option<Self> {
        let u = s.trim().to_ascii_uppercase();
        match u.as_str() {
            "CLAIM_ONLY" => return Some(Composition::ClaimOnly),
            "CLAIM_PARENT" => return Some(Composition::ClaimParent),
            _ => {}
        }
        let open = u.find('(')?;
        let inner = u[open + 1..].strip_suffix(')')?;
        let i: usize = inner.trim().parse().ok()?;
        match &u[..open] {
            "FLAT" => Some(Composition::Flat(i)),
            "ATTN" => Some(Composition::Attn(i)),
            "GRU_CTX" => Some(Composition::GruCtx(i)),
            _ => None,
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Composition::ClaimOnly => f.write_str("CLAIM_ONLY"),
            Composition::ClaimParent => f.write_str("CLAIM_PARENT"),
            Composition::Flat(i) => write!(f, "FLAT({i})"),
            Composition::Attn(i) => write!(f, "ATTN({i})"),
            Composition::GruCtx(i) => write!(f, "GRU_CTX({i})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpactModelSpec {
    pub encoder: crate::learn::nn::EncoderSpec,
    pub composition: Composition,
    /// GRU units per direction for `GruCtx`.
    pub context_hidden: usize,
}

/// Word tokens of a claim, hashed, all in one segment.
pub fn claim_sequence(text: &str, segment: u8) -> Sequence {
    Sequence::from_tokens(&tokenize(text).tokens, segment)
}

/// The last `min(i, context.len())` context claims in discourse order followed by
/// the target, separated by the reserved token. Context tokens (and the separator
/// after them) get segment 1, target tokens segment 0.
pub fn build_flat_input(target: &Sequence, context: &[Sequence], i: usize) -> Sequence {
    let keep = &context[context.len().saturating_sub(i)..];
    let mut out = Sequence::default();
    for c in keep {
        let mut c = c.clone();
        c.segments.iter_mut().for_each(|s| *s = 1);
        out.extend(&c);
        out.push_sep(1);
    }
    let mut t = target.clone();
    t.segments.iter_mut().for_each(|s| *s = 0);
    out.extend(&t);
    out
}

/// Attention weights `α_c = softmax(V_c · V_l)` and `V_d = Σ α_c V_c`.
pub fn attention_context(
    context: &[Vec<f64>],
    query: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), ImpactError> {
    if context.is_empty() {
        return Err(ImpactError::EmptyContext);
    }
    if context.iter().any(|v| v.len() != query.len()) {
        return Err(ImpactError::Spec("context vectors must match the query width"));
    }
    let mut pool = AttentionPool {
        query: crate::learn::nn::Param::zeros(1, query.len()),
    };
    pool.query.value.copy_from_slice(query);
    let (vd, cache) = pool.forward(context);
    Ok((cache.alpha, vd))
}

/// Concatenated final forward and backward states of a bidirectional GRU run
/// over context vectors in discourse order.
pub fn gru_context(rnn: &BiGru, context: &[Vec<f64>]) -> Result<Vec<f64>, ImpactError> {
    if context.is_empty() {
        return Err(ImpactError::EmptyContext);
    }
    Ok(rnn.forward(context).1)
}

/// Structural and lexical features of a claim relative to its tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeFeatures {
    pub distance_from_thesis: usize,
    pub tfidf_cos_parent: f64,
    pub tfidf_cos_thesis: f64,
    pub parent_tally: [u32; 5],
    pub is_thesis: bool,
}

pub const TREE_FEATURE_NAMES: [&str; 9] = [
    "distance_from_thesis",
    "tfidf_cos_parent",
    "tfidf_cos_thesis",
    "parent_votes_no",
    "parent_votes_low",
    "parent_votes_medium",
    "parent_votes_high",
    "parent_votes_very_high",
    "is_thesis",
];

impl TreeFeatures {
    pub fn to_vector(&self) -> FeatureVector {
        let mut values = vec![
            self.distance_from_thesis as f64,
            self.tfidf_cos_parent,
            self.tfidf_cos_thesis,
        ];
        values.extend(self.parent_tally.iter().map(|&c| f64::from(c)));
        values.push(if self.is_thesis { 1.0 } else { 0.0 });
        FeatureVector {
            names: TREE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            values,
        }
    }
}

/// tf-idf fitted on every claim text of the given trees.
pub fn fit_claim_tfidf(trees: &[ArgumentTree]) -> Result<TfidfModel, TextError> {
    let docs: Vec<Vec<String>> = trees
        .iter()
        .flat_map(|t| t.nodes().iter().map(|n| tokenize(&n.text).tokens))
        .collect();
    fit_tfidf(&docs, TfidfConfig::default())
}

pub fn tree_features(
    tree: &ArgumentTree,
    claim_id: &str,
    tfidf: &TfidfModel,
) -> Result<TreeFeatures, ImpactError> {
    let node = tree.claim(claim_id)?;
    let Some(parent) = tree.parent(claim_id)? else {
        return Ok(TreeFeatures {
            distance_from_thesis: 0,
            tfidf_cos_parent: 0.0,
            tfidf_cos_thesis: 0.0,
            parent_tally: [0; 5],
            is_thesis: true,
        });
    };
    let v = tfidf.transform(&node.text);
    let cos = |text: &str| v.dot(&tfidf.transform(text)).clamp(0.0, 1.0);
    Ok(TreeFeatures {
        distance_from_thesis: tree.context_of(claim_id)?.len(),
        tfidf_cos_parent: cos(&parent.text),
        tfidf_cos_thesis: cos(&tree.thesis().text),
        parent_tally: parent.tally.0,
        is_thesis: false,
    })
}

/// A non-thesis claim whose tally passed the vote and agreement filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledClaim {
    pub tree: usize,
    pub claim_id: String,
    pub label: ImpactLabel3,
    pub context_length: usize,
}

/// Every labeled non-thesis claim, in tree order then node order.
pub fn labeled_claims(trees: &[ArgumentTree]) -> Vec<LabeledClaim> {
    let mut out = Vec::new();
    for (ti, t) in trees.iter().enumerate() {
        for n in t.nodes() {
            if n.parent.is_none() {
                continue;
            }
            if let Some(label) = impact_label(&n.tally, MIN_IMPACT_VOTES, MIN_IMPACT_AGREEMENT) {
                let context_length = t.depth(&n.claim_id).unwrap_or(0);
                out.push(LabeledClaim {
                    tree: ti,
                    claim_id: n.claim_id.clone(),
                    label,
                    context_length,
                });
            }
        }
    }
    out
}

/// Target sequence plus the previous claims it may attend to (oldest first,
/// already truncated to the composition's context length).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactInput {
    pub target: Sequence,
    pub context: Vec<Sequence>,
}

impl ImpactInput {
    pub fn for_claim(
        tree: &ArgumentTree,
        claim_id: &str,
        composition: Composition,
    ) -> Result<Self, ImpactError> {
        let node = tree.claim(claim_id)?;
        let ctx = tree.context_of(claim_id)?;
        let keep = composition.context_len().min(ctx.len());
        Ok(ImpactInput {
            target: claim_sequence(&node.text, 0),
            context: ctx[ctx.len() - keep..]
                .iter()
                .map(|c| claim_sequence(&c.text, 1))
                .collect(),
        })
    }
}

/// One line of a prediction table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub tree_id: String,
    pub claim_id: String,
    pub gold: ImpactLabel3,
    pub predicted: ImpactLabel3,
    pub scores: [f64; 3],
    pub context_length: usize,
}

impl PredictionRow {
    pub const HEADER: &'static str =
        "tree_id,claim_id,gold,predicted,score_not_impactful,score_medium_impact,score_impactful,context_length";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{}",
            self.tree_id,
            self.claim_id,
            self.gold.as_str(),
            self.predicted.as_str(),
            self.scores[0],
            self.scores[1],
            self.scores[2],
            self.context_length
        )
    }
}
