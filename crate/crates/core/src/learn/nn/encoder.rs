use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::layers::{AttentionCache, AttentionPool, BiGru, BiGruCache, Embedding, NgramAverage};
use super::Param;
use crate::error::LearnError;
use crate::util::{fnv1a, seeded};

/// Reserved token id separating claims in a flattened context.
pub const SEP_TOKEN: u64 = u64::MAX;

/// Hashed token ids with one segment id per token (0 = target, 1 = context).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub tokens: Vec<u64>,
    pub segments: Vec<u8>,
}

impl Sequence {
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S], segment: u8) -> Self {
        Sequence {
            tokens: tokens.iter().map(|t| hash_token(t.as_ref())).collect(),
            segments: vec![segment; tokens.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push_sep(&mut self, segment: u8) {
        self.tokens.push(SEP_TOKEN);
        self.segments.push(segment);
    }

    pub fn extend(&mut self, other: &Sequence) {
        self.tokens.extend_from_slice(&other.tokens);
        self.segments.extend_from_slice(&other.segments);
    }
}

pub fn hash_token(t: &str) -> u64 {
    let h = fnv1a(t.as_bytes(), 0);
    if h == SEP_TOKEN {
        h - 1
    } else {
        h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderKind {
    HashedNgramAverage,
    BigruAttention,
}

impl EncoderKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hashed_ngram_average" | "ngram" => Some(EncoderKind::HashedNgramAverage),
            "bigru_attention" | "bigru" => Some(EncoderKind::BigruAttention),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncoderSpec {
    pub kind: EncoderKind,
    /// Embedding width.
    pub dim: usize,
    /// GRU units per direction; unused by the averaging encoder.
    pub hidden: usize,
    pub buckets: usize,
    pub max_ngram: usize,
    pub seed: u64,
}

impl EncoderSpec {
    /// Averaged uni+bigram embeddings, 300 wide.
    pub fn ngram_default() -> Self {
        EncoderSpec {
            kind: EncoderKind::HashedNgramAverage,
            dim: 300,
            hidden: 0,
            buckets: 1 << 14,
            max_ngram: 2,
            seed: 0,
        }
    }

    /// Bidirectional GRU with 64 units over 100-wide embeddings.
    pub fn bigru_default() -> Self {
        EncoderSpec {
            kind: EncoderKind::BigruAttention,
            dim: 100,
            hidden: 64,
            buckets: 1 << 14,
            max_ngram: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if self.dim == 0 || self.buckets == 0 {
            return Err("encoder dim and buckets must be positive");
        }
        if self.kind == EncoderKind::BigruAttention && self.hidden == 0 {
            return Err("bigru encoder needs hidden units");
        }
        Ok(())
    }

    pub fn output_dim(&self) -> usize {
        match self.kind {
            EncoderKind::HashedNgramAverage => self.dim,
            EncoderKind::BigruAttention => 2 * self.hidden,
        }
    }
}

/// A trainable map from a token sequence to a fixed-width vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Encoder {
    Ngram(NgramAverage),
    Bigru {
        tokens: Embedding,
        segments: Embedding,
        rnn: BiGru,
        attention: AttentionPool,
    },
}

#[derive(Clone, Debug)]
pub enum EncoderCache {
    Ngram(Vec<usize>),
    Bigru {
        ids: Vec<usize>,
        segs: Vec<usize>,
        rnn: BiGruCache,
        attention: AttentionCache,
    },
}

impl Encoder {
    pub fn new(spec: &EncoderSpec) -> Result<Self, LearnError> {
        spec.validate().map_err(LearnError::Parameter)?;
        let mut rng = seeded(spec.seed);
        Ok(match spec.kind {
            EncoderKind::HashedNgramAverage => {
                Encoder::Ngram(NgramAverage::new(spec.buckets, spec.dim, spec.max_ngram, &mut rng))
            }
            EncoderKind::BigruAttention => {
                let tokens = Embedding::new(spec.buckets, spec.dim, &mut rng);
                let segments = Embedding::new(2, spec.dim, &mut rng);
                let rnn = BiGru::new(spec.dim, spec.hidden, &mut rng);
                let attention = AttentionPool::new(2 * spec.hidden, &mut rng);
                Encoder::Bigru {
                    tokens,
                    segments,
                    rnn,
                    attention,
                }
            }
        })
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Encoder::Ngram(n) => n.table.cols,
            Encoder::Bigru { rnn, .. } => rnn.output_dim(),
        }
    }

    /// Encodes a sequence; an empty sequence maps to the zero vector.
    pub fn forward(&self, seq: &Sequence) -> (Vec<f64>, EncoderCache) {
        match self {
            Encoder::Ngram(n) => {
                let ids = n.bucket_ids(&seq.tokens, &seq.segments);
                (n.forward(&ids), EncoderCache::Ngram(ids))
            }
            Encoder::Bigru {
                tokens,
                segments,
                rnn,
                attention,
            } => {
                let buckets = tokens.table.rows as u64;
                let ids: Vec<usize> = seq.tokens.iter().map(|t| (t % buckets) as usize).collect();
                let segs: Vec<usize> = seq.segments.iter().map(|&s| usize::from(s.min(1))).collect();
                let mut xs = tokens.forward(&ids);
                for (x, s) in xs.iter_mut().zip(segments.forward(&segs)) {
                    for (a, b) in x.iter_mut().zip(s) {
                        *a += b;
                    }
                }
                let (outs, _, rc) = rnn.forward(&xs);
                let (pooled, ac) = attention.forward(&outs);
                (
                    pooled,
                    EncoderCache::Bigru {
                        ids,
                        segs,
                        rnn: rc,
                        attention: ac,
                    },
                )
            }
        }
    }

    pub fn encode(&self, seq: &Sequence) -> Vec<f64> {
        self.forward(seq).0
    }

    pub fn backward(&mut self, cache: &EncoderCache, dy: &[f64]) {
        match (self, cache) {
            (Encoder::Ngram(n), EncoderCache::Ngram(ids)) => n.backward(ids, dy),
            (
                Encoder::Bigru {
                    tokens,
                    segments,
                    rnn,
                    attention,
                },
                EncoderCache::Bigru {
                    ids,
                    segs,
                    rnn: rc,
                    attention: ac,
                },
            ) => {
                let douts = attention.backward(ac, dy);
                let zero = vec![0.0; rnn.output_dim()];
                let dxs = rnn.backward(rc, &douts, &zero);
                tokens.backward(ids, &dxs);
                segments.backward(segs, &dxs);
            }
            _ => panic!("encoder cache does not match encoder kind"),
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut Param> {
        match self {
            Encoder::Ngram(n) => vec![&mut n.table],
            Encoder::Bigru {
                tokens,
                segments,
                rnn,
                attention,
            } => {
                let mut p = vec![&mut tokens.table, &mut segments.table];
                p.extend(rnn.params_mut());
                p.push(&mut attention.query);
                p
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: EncoderKind, max_ngram: usize) -> EncoderSpec {
        EncoderSpec {
            kind,
            dim: 6,
            hidden: 4,
            buckets: 997,
            max_ngram,
            seed: 11,
        }
    }

    #[test]
    fn empty_text_is_zero() {
        for kind in [EncoderKind::HashedNgramAverage, EncoderKind::BigruAttention] {
            let e = Encoder::new(&small(kind, 2)).unwrap();
            let v = e.encode(&Sequence::default());
            assert_eq!(v.len(), e.output_dim());
            assert!(v.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn permutation_changes_bigru_not_unigram_average() {
        let a = Sequence::from_tokens(&["alpha", "beta", "gamma"], 0);
        let b = Sequence::from_tokens(&["gamma", "alpha", "beta"], 0);
        let bag = Encoder::new(&small(EncoderKind::HashedNgramAverage, 1)).unwrap();
        let (va, vb) = (bag.encode(&a), bag.encode(&b));
        assert!(va.iter().zip(&vb).all(|(x, y)| (x - y).abs() < 1e-12));
        let rnn = Encoder::new(&small(EncoderKind::BigruAttention, 1)).unwrap();
        let (ra, rb) = (rnn.encode(&a), rnn.encode(&b));
        assert!(ra.iter().zip(&rb).any(|(x, y)| (x - y).abs() > 1e-9));
    }

    #[test]
    fn same_seed_same_vectors() {
        let s = Sequence::from_tokens(&["x", "y"], 0);
        let spec = small(EncoderKind::BigruAttention, 1);
        assert_eq!(
            Encoder::new(&spec).unwrap().encode(&s),
            Encoder::new(&spec).unwrap().encode(&s)
        );
    }
}
