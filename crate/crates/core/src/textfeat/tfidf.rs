use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tokenize::tokenize;
use crate::error::TextError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TfidfConfig {
    pub ngram_max: usize,
    pub max_features: usize,
}

impl Default for TfidfConfig {
    fn default() -> Self {
        TfidfConfig {
            ngram_max: 1,
            max_features: 10_000,
        }
    }
}

/// Sorted indices into a model vocabulary with their weights.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    pub dim: usize,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    acc += self.values[i] * other.values[j];
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim];
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }
}

/// All n-grams of order 1..=n_max, joined with single spaces.
pub fn ngrams(tokens: &[String], n_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for w in tokens.windows(n) {
            out.push(w.join(" "));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    config: TfidfConfig,
    vocabulary: Vec<String>,
    idf: Vec<f64>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl TfidfModel {
    pub fn config(&self) -> TfidfConfig {
        self.config
    }

    /// Frozen n-gram vocabulary, sorted lexicographically.
    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    /// Rebuild from stored parts, e.g. after deserialising.
    pub fn from_parts(
        config: TfidfConfig,
        vocabulary: Vec<String>,
        idf: Vec<f64>,
    ) -> Result<Self, TextError> {
        if vocabulary.len() != idf.len() {
            return Err(TextError::ModelParts {
                vocab: vocabulary.len(),
                idf: idf.len(),
            });
        }
        let index = vocabulary
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(TfidfModel {
            config,
            vocabulary,
            idf,
            index,
        })
    }

    fn ensure_index(&self) -> alloc::borrow::Cow<'_, BTreeMap<String, usize>> {
        if self.index.len() == self.vocabulary.len() {
            alloc::borrow::Cow::Borrowed(&self.index)
        } else {
            alloc::borrow::Cow::Owned(
                self.vocabulary
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i))
                    .collect(),
            )
        }
    }

    pub fn transform_tokens(&self, tokens: &[String]) -> SparseVector {
        let index = self.ensure_index();
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for g in ngrams(tokens, self.config.ngram_max) {
            if let Some(&i) = index.get(&g) {
                *tf.entry(i).or_insert(0.0) += 1.0;
            }
        }
        let mut indices = Vec::with_capacity(tf.len());
        let mut values = Vec::with_capacity(tf.len());
        for (i, c) in tf {
            indices.push(i);
            values.push(c * self.idf[i]);
        }
        let norm = libm::sqrt(values.iter().map(|v| v * v).sum::<f64>());
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        SparseVector {
            dim: self.vocabulary.len(),
            indices,
            values,
        }
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        self.transform_tokens(&tokenize(text).tokens)
    }
}

/// Fit idf weights on tokenised documents, keeping at most `max_features`
/// n-grams ranked by document frequency (ties lexicographic).
pub fn fit_tfidf(docs: &[Vec<String>], config: TfidfConfig) -> Result<TfidfModel, TextError> {
    if !(1..=3).contains(&config.ngram_max) {
        return Err(TextError::NgramOrder(config.ngram_max));
    }
    if docs.is_empty() {
        return Err(TextError::NoDocuments);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let grams: BTreeSet<String> = ngrams(doc, config.ngram_max).into_iter().collect();
        for g in grams {
            *df.entry(g).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = df.into_iter().collect();
    // BTreeMap order is lexicographic, so a stable sort keeps ties in that order.
    ranked.sort_by(|a, b| b.1.cmp(&a.1));
    ranked.truncate(config.max_features);
    ranked.sort_by(|a, b| a.0.cmp(&b.0));

    let n = docs.len() as f64;
    let (vocabulary, idf): (Vec<String>, Vec<f64>) = ranked
        .into_iter()
        .map(|(t, d)| (t, libm::log((1.0 + n) / (1.0 + d as f64)) + 1.0))
        .unzip();
    TfidfModel::from_parts(config, vocabulary, idf)
}

/// A tf-idf vectoriser that may not have been fitted yet.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tfidf {
    pub config: TfidfConfig,
    model: Option<TfidfModel>,
}

impl Tfidf {
    pub fn new(config: TfidfConfig) -> Self {
        Tfidf {
            config,
            model: None,
        }
    }

    pub fn fit(&mut self, docs: &[Vec<String>]) -> Result<&TfidfModel, TextError> {
        self.model = Some(fit_tfidf(docs, self.config)?);
        self.model.as_ref().ok_or(TextError::NotFitted)
    }

    pub fn model(&self) -> Result<&TfidfModel, TextError> {
        self.model.as_ref().ok_or(TextError::NotFitted)
    }

    pub fn transform(&self, text: &str) -> Result<SparseVector, TextError> {
        Ok(self.model()?.transform(text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn docs(texts: &[&str]) -> Vec<Vec<String>> {
        texts.iter().map(|t| tokenize(t).tokens).collect()
    }

    #[test]
    fn single_document_equal_weights() {
        let m = fit_tfidf(&docs(&["a b"]), TfidfConfig::default()).unwrap();
        let v = m.transform("a b");
        assert_eq!(v.indices, [0, 1]);
        for x in v.values {
            assert!((x - 1.0 / libm::sqrt(2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn unseen_terms_ignored() {
        let m = fit_tfidf(&docs(&["a b"]), TfidfConfig::default()).unwrap();
        assert_eq!(m.transform("a zzz"), m.transform("a"));
        assert!(m.transform("zzz").indices.is_empty());
    }

    #[test]
    fn idf_formula() {
        let m = fit_tfidf(&docs(&["a b", "a c", "a"]), TfidfConfig::default()).unwrap();
        assert_eq!(m.vocabulary(), ["a", "b", "c"]);
        assert!((m.idf()[0] - 1.0).abs() < 1e-12);
        assert!((m.idf()[1] - (libm::log(4.0 / 2.0) + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn cap_prefers_frequent_then_lexicographic() {
        let cfg = TfidfConfig {
            ngram_max: 2,
            max_features: 2,
        };
        let m = fit_tfidf(&docs(&["x y", "y z", "w y"]), cfg).unwrap();
        assert_eq!(m.vocabulary(), ["w", "y"]);
    }

    #[test]
    fn bigrams_and_errors() {
        let cfg = TfidfConfig {
            ngram_max: 2,
            ..TfidfConfig::default()
        };
        let m = fit_tfidf(&docs(&["a b c"]), cfg).unwrap();
        assert_eq!(m.vocabulary(), ["a", "a b", "b", "b c", "c"]);
        assert_eq!(fit_tfidf(&[], cfg), Err(TextError::NoDocuments));
        let bad = TfidfConfig {
            ngram_max: 4,
            ..cfg
        };
        assert_eq!(fit_tfidf(&docs(&["a"]), bad), Err(TextError::NgramOrder(4)));
        assert_eq!(Tfidf::new(cfg).transform("a"), Err(TextError::NotFitted));
        let mut t = Tfidf::new(cfg);
        t.fit(&docs(&["a"])).unwrap();
        assert_eq!(t.transform("a").unwrap().values, vec![1.0]);
    }

    proptest! {
        #[test]
        fn self_cosine_is_one(words in prop::collection::vec("[a-e]{1,2}", 1..20), n in 1usize..=3) {
            let doc = words.join(" ");
            let cfg = TfidfConfig { ngram_max: n, max_features: 10_000 };
            let m = fit_tfidf(&docs(&[&doc, "a b c"]), cfg).unwrap();
            let v = m.transform(&doc);
            prop_assert!((v.dot(&v) - 1.0).abs() < 1e-9);
            prop_assert!(v.values.iter().all(|x| x.is_finite() && *x > 0.0));
        }
    }
}
