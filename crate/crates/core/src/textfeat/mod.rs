//! Linguistic features over claims, debate sides and argument pairs.

mod features;
mod lexicon;
mod readability;
mod sidecar;
mod tfidf;
mod tokenize;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use features::{
    claim_or_side_features, debate_side_features, interplay_features, side_feature_names,
    side_text, INTERPLAY_NAMES,
};
pub use lexicon::{
    builtin_source, parse_entries, Article, Connotation, LexiconSet, PhraseSet, Subjectivity,
    ARGUMENT_STYLES, LEXICON_FILES,
};
pub use readability::{readability, syllables, Readability};
pub use sidecar::{annotate_sidecar, parse_sidecar, sidecar_feature_names, SidecarRow, NER_TAGS, POS_TAGS};
pub use tfidf::{fit_tfidf, ngrams, SparseVector, Tfidf, TfidfConfig, TfidfModel};
pub use tokenize::{count_sentences, tokenize, TokenStream};

/// Named dense feature values; `names[i]` labels `values[i]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.names.push(name.into());
        self.values.push(value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    pub fn append(&mut self, other: FeatureVector) {
        self.names.extend(other.names);
        self.values.extend(other.values);
    }

    /// Same values with every name rewritten to `prefix:name`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for n in &mut self.names {
            *n = format!("{prefix}:{n}");
        }
        self
    }
}
