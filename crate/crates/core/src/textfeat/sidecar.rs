use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::tokenize::TokenStream;
use super::FeatureVector;
use crate::error::TextError;

/// Universal part-of-speech tags; anything else is counted as `X`.
pub const POS_TAGS: [&str; 17] = [
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

/// Entity classes after stripping any `B-`/`I-` prefix; unknown classes count as `MISC`.
pub const NER_TAGS: [&str; 5] = ["PER", "ORG", "LOC", "MISC", "O"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidecarRow {
    pub token: String,
    pub pos: String,
    pub ner: Option<String>,
}

/// One `token<TAB>POS<TAB>NER?` line per token.
pub fn parse_sidecar(text: &str) -> Result<Vec<SidecarRow>, TextError> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let token = parts.next().unwrap_or_default();
        let pos = parts.next().ok_or(TextError::SidecarLine(n + 1))?;
        let ner = parts.next().filter(|s| !s.is_empty()).map(String::from);
        rows.push(SidecarRow {
            token: token.to_lowercase(),
            pos: pos.trim().to_uppercase(),
            ner,
        });
    }
    Ok(rows)
}

pub fn sidecar_feature_names() -> Vec<String> {
    let mut names: Vec<String> = POS_TAGS.iter().map(|t| format!("pos_{t}")).collect();
    names.extend(NER_TAGS.iter().map(|t| format!("ner_{t}")));
    names.push(String::from("sidecar_present"));
    names
}

fn ner_class(tag: &str) -> usize {
    let tag = tag.trim().to_uppercase();
    let bare = tag
        .strip_prefix("B-")
        .or_else(|| tag.strip_prefix("I-"))
        .unwrap_or(&tag);
    let mapped = match bare {
        "PERSON" => "PER",
        "GPE" | "LOCATION" => "LOC",
        "ORGANIZATION" => "ORG",
        "" => "O",
        other => other,
    };
    NER_TAGS
        .iter()
        .position(|t| *t == mapped)
        .unwrap_or(3)
}

/// Normalised POS and entity histograms over the stream's tokens. Without a
/// sidecar the block is all zeros and `sidecar_present` is 0.
pub fn annotate_sidecar(
    stream: &TokenStream,
    sidecar: Option<&[SidecarRow]>,
) -> Result<FeatureVector, TextError> {
    let names = sidecar_feature_names();
    let mut values = alloc::vec![0.0; names.len()];
    let Some(rows) = sidecar else {
        return Ok(FeatureVector { names, values });
    };
    if rows.len() != stream.len() {
        return Err(TextError::SidecarLength {
            sidecar: rows.len(),
            tokens: stream.len(),
        });
    }
    for (i, (row, tok)) in rows.iter().zip(&stream.tokens).enumerate() {
        if row.token != *tok {
            return Err(TextError::SidecarToken {
                position: i,
                expected: tok.clone(),
                found: row.token.clone(),
            });
        }
        let p = POS_TAGS
            .iter()
            .position(|t| *t == row.pos)
            .unwrap_or(POS_TAGS.len() - 1);
        values[p] += 1.0;
        values[POS_TAGS.len() + ner_class(row.ner.as_deref().unwrap_or("O"))] += 1.0;
    }
    if !rows.is_empty() {
        let n = rows.len() as f64;
        values[..POS_TAGS.len() + NER_TAGS.len()]
            .iter_mut()
            .for_each(|v| *v /= n);
    }
    *values.last_mut().expect("non-empty schema") = 1.0;
    Ok(FeatureVector { names, values })
}
