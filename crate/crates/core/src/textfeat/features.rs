use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::lexicon::{Article, Connotation, LexiconSet, Subjectivity, ARGUMENT_STYLES};
use super::tfidf::TfidfModel;
use super::tokenize::{tokenize, TokenStream};
use super::FeatureVector;
use crate::corpus::{Debate, Side};
use crate::error::TextError;

const BASE_NAMES: [&str; 33] = [
    "length",
    "opponent_refs",
    "politeness",
    "evidence",
    "sentiment",
    "positive_words",
    "negative_words",
    "subj_neg_strong",
    "subj_neg_weak",
    "subj_pos_strong",
    "subj_pos_weak",
    "swear",
    "conn_pos",
    "conn_neg",
    "conn_neutral",
    "pron_first",
    "pron_second",
    "pron_third",
    "modals",
    "articles_definite",
    "articles_indefinite",
    "hedges",
    "stopwords",
    "spelling_errors",
    "spelling_available",
    "links",
    "numbers",
    "exclamations",
    "questions",
    "quotes",
    "punctuation",
    "type_token_ratio",
    "argument_phrases",
];

/// Names produced by [`claim_or_side_features`], in order.
pub fn side_feature_names() -> Vec<String> {
    let mut names: Vec<String> = BASE_NAMES.iter().map(|s| String::from(*s)).collect();
    names.extend(ARGUMENT_STYLES.iter().map(|s| format!("arg_{s}")));
    names
}

fn is_number(token: &str) -> bool {
    token.chars().all(|c| c.is_numeric() || c == '.' || c == ',')
}

/// Lexicon and surface features of one token stream.
pub fn claim_or_side_features(stream: &TokenStream, lex: &LexiconSet) -> FeatureVector {
    let tokens = &stream.tokens;
    let n = tokens.len() as f64;

    let mut polarity_sum = 0.0;
    let mut polarity_hits = 0usize;
    let (mut positive, mut negative) = (0usize, 0usize);
    let mut subj = [0usize; 4];
    let mut conn = [0usize; 3];
    let mut pron = [0usize; 3];
    let mut arts = [0usize; 2];
    let mut stop = 0usize;
    let mut misspelled = 0usize;
    for t in tokens {
        let t = t.as_str();
        if let Some(&p) = lex.polarity.get(t) {
            polarity_sum += p;
            polarity_hits += 1;
            if p > 0.0 {
                positive += 1;
            } else if p < 0.0 {
                negative += 1;
            }
        }
        if let Some(s) = lex.subjectivity.get(t) {
            subj[match s {
                Subjectivity::NegStrong => 0,
                Subjectivity::NegWeak => 1,
                Subjectivity::PosStrong => 2,
                Subjectivity::PosWeak => 3,
            }] += 1;
        }
        if let Some(c) = lex.connotation.get(t) {
            conn[match c {
                Connotation::Positive => 0,
                Connotation::Negative => 1,
                Connotation::Neutral => 2,
            }] += 1;
        }
        if let Some(&p) = lex.pronouns.get(t) {
            pron[usize::from(p - 1)] += 1;
        }
        if let Some(a) = lex.articles.get(t) {
            arts[match a {
                Article::Definite => 0,
                Article::Indefinite => 1,
            }] += 1;
        }
        if lex.stopwords.contains(t) {
            stop += 1;
        }
        if let Some(dict) = &lex.dictionary {
            if !is_number(t) && !dict.contains(t) {
                misspelled += 1;
            }
        }
    }

    let mut styles = [0usize; ARGUMENT_STYLES.len()];
    let arg_matches = lex.argument_lexicon.matches(tokens);
    for (_, _, style) in &arg_matches {
        if let Some(i) = ARGUMENT_STYLES.iter().position(|s| s == style) {
            styles[i] += 1;
        }
    }
    let distinct = tokens.iter().collect::<BTreeSet<_>>().len();

    let c = |x: usize| x as f64;
    let mut values = Vec::with_capacity(BASE_NAMES.len() + styles.len());
    values.extend([
        n,
        c(lex.opponent_markers.count(tokens)),
        c(lex.politeness.count(tokens)),
        c(lex.evidence_markers.count(tokens)),
        if polarity_hits == 0 {
            0.0
        } else {
            polarity_sum / polarity_hits as f64
        },
        c(positive),
        c(negative),
        c(subj[0]),
        c(subj[1]),
        c(subj[2]),
        c(subj[3]),
        c(lex.swear.count(tokens)),
        c(conn[0]),
        c(conn[1]),
        c(conn[2]),
        c(pron[0]),
        c(pron[1]),
        c(pron[2]),
        c(lex.modal_verbs.count(tokens)),
        c(arts[0]),
        c(arts[1]),
        c(lex.hedges.count(tokens)),
        c(stop),
        c(misspelled),
        if lex.dictionary.is_some() { 1.0 } else { 0.0 },
        f64::from(stream.link_count),
        f64::from(stream.number_count),
        f64::from(stream.exclamation_count),
        f64::from(stream.question_count),
        f64::from(stream.quote_count),
        f64::from(stream.punctuation_total()),
        if tokens.is_empty() { 0.0 } else { distinct as f64 / n },
        c(arg_matches.len()),
    ]);
    values.extend(styles.iter().map(|&s| c(s)));
    FeatureVector {
        names: side_feature_names(),
        values,
    }
}

/// All utterances of one side, joined by single spaces.
pub fn side_text(debate: &Debate, side: Side) -> Result<String, TextError> {
    let parts: Vec<&str> = debate.utterances(side).collect();
    if parts.is_empty() {
        return Err(TextError::SilentSide {
            debate: debate.debate_id.clone(),
            side: side.as_str(),
        });
    }
    Ok(parts.join(" "))
}

/// Features of everything one side said across all rounds, optionally followed
/// by a dense tf-idf block named `tfidf:<ngram>`.
pub fn debate_side_features(
    debate: &Debate,
    side: Side,
    lex: &LexiconSet,
    tfidf: Option<&TfidfModel>,
) -> Result<FeatureVector, TextError> {
    let text = side_text(debate, side)?;
    let stream = tokenize(&text);
    let mut fv = claim_or_side_features(&stream, lex);
    if let Some(model) = tfidf {
        let sparse = model.transform_tokens(&stream.tokens);
        let mut dense = alloc::vec![0.0; model.vocabulary().len()];
        for (&i, &v) in sparse.indices.iter().zip(&sparse.values) {
            dense[i] = v;
        }
        fv.names
            .extend(model.vocabulary().iter().map(|t| format!("tfidf:{t}")));
        fv.values.extend(dense);
    }
    Ok(fv)
}

fn split_types<'a>(s: &'a TokenStream, lex: &LexiconSet) -> (BTreeSet<&'a str>, BTreeSet<&'a str>) {
    let mut content = BTreeSet::new();
    let mut stop = BTreeSet::new();
    for t in &s.tokens {
        if lex.stopwords.contains(t) {
            stop.insert(t.as_str());
        } else {
            content.insert(t.as_str());
        }
    }
    (content, stop)
}

pub const INTERPLAY_NAMES: [&str; 3] = ["shared_content", "shared_stopwords", "synonym_content"];

/// Word-type overlap between a debater's text `d` and the opponent's preceding text `o`.
pub fn interplay_features(d: &TokenStream, o: &TokenStream, lex: &LexiconSet) -> FeatureVector {
    let (dc, ds) = split_types(d, lex);
    let (oc, os) = split_types(o, lex);
    let shared_content = dc.intersection(&oc).count();
    let shared_stop = ds.intersection(&os).count();
    let synonym = dc
        .iter()
        .filter(|w| !oc.contains(*w) && oc.iter().any(|x| lex.are_synonyms(w, x)))
        .count();
    FeatureVector {
        names: INTERPLAY_NAMES.iter().map(|s| String::from(*s)).collect(),
        values: alloc::vec![shared_content as f64, shared_stop as f64, synonym as f64],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Round;
    use alloc::collections::BTreeMap;
    use alloc::vec;
    use proptest::prelude::*;

    fn stream(tokens: &[&str]) -> TokenStream {
        TokenStream {
            tokens: tokens.iter().map(|s| String::from(*s)).collect(),
            ..TokenStream::default()
        }
    }

    fn debate(pro: &[Option<&str>]) -> Debate {
        Debate {
            debate_id: "d".into(),
            topic: "t".into(),
            category: "c".into(),
            pro_user: "p".into(),
            con_user: "q".into(),
            rounds: pro
                .iter()
                .enumerate()
                .map(|(i, t)| Round {
                    index: i as u32 + 1,
                    pro_text: t.map(String::from),
                    con_text: Some("x".into()),
                })
                .collect(),
            ballots: vec![],
            timestamp: 0,
        }
    }

    #[test]
    fn type_token_ratio() {
        let f = claim_or_side_features(&stream(&["a", "a", "b"]), &LexiconSet::builtin());
        assert!((f.get("type_token_ratio").unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn politeness_hit() {
        let f = claim_or_side_features(&stream(&["thank", "you"]), &LexiconSet::builtin());
        assert_eq!(f.get("politeness"), Some(1.0));
        assert_eq!(f.get("pron_second"), Some(1.0));
    }

    #[test]
    fn empty_stream_is_zero() {
        let f = claim_or_side_features(&TokenStream::default(), &LexiconSet::builtin());
        assert_eq!(f.names, side_feature_names());
        assert!(f.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn spelling_uses_dictionary_when_present() {
        let mut lex = LexiconSet::builtin();
        lex.dictionary = Some(["the", "cat"].iter().map(|s| String::from(*s)).collect());
        let f = claim_or_side_features(&tokenize("The catt sat 42"), &lex);
        assert_eq!(f.get("spelling_errors"), Some(2.0));
        assert_eq!(f.get("spelling_available"), Some(1.0));
    }

    #[test]
    fn sentiment_is_mean_polarity() {
        let mut lex = LexiconSet::default();
        lex.polarity = BTreeMap::from([("good".into(), 0.5), ("bad".into(), -0.7)]);
        let f = claim_or_side_features(&stream(&["good", "bad", "other"]), &lex);
        assert!((f.get("sentiment").unwrap() + 0.1).abs() < 1e-12);
        assert_eq!(f.get("positive_words"), Some(1.0));
        assert_eq!(f.get("negative_words"), Some(1.0));
    }

    #[test]
    fn argument_styles_counted() {
        let lex = LexiconSet::builtin();
        let f = claim_or_side_features(&tokenize("It is clear that we must act."), &lex);
        assert!(f.get("arg_assessment").unwrap() >= 1.0);
    }

    #[test]
    fn interplay_examples() {
        let mut lex = LexiconSet::default();
        lex.stopwords.insert("the".into());
        let f = interplay_features(&tokenize("the cat sat"), &tokenize("the cat ran"), &lex);
        assert_eq!(f.values, [1.0, 1.0, 0.0]);

        let lex = LexiconSet::builtin();
        let a = tokenize("large dogs bark loudly");
        let f = interplay_features(&a, &a, &lex);
        assert_eq!(f.values, [4.0, 0.0, 0.0]);
        let f = interplay_features(&tokenize("large dogs"), &tokenize("big cats"), &lex);
        assert_eq!(f.values, [0.0, 0.0, 1.0]);
        let f = interplay_features(&tokenize("xq zz"), &tokenize("ww yy"), &lex);
        assert_eq!(f.values, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn side_concatenates_rounds() {
        let lex = LexiconSet::builtin();
        let two = debate_side_features(&debate(&[Some("a."), Some("b.")]), Side::Pro, &lex, None);
        let one = claim_or_side_features(&tokenize("a. b."), &lex);
        assert_eq!(two.unwrap(), one);
        let single = debate_side_features(&debate(&[Some("Hello there!")]), Side::Pro, &lex, None);
        assert_eq!(single.unwrap(), claim_or_side_features(&tokenize("Hello there!"), &lex));
        let silent = debate_side_features(&debate(&[None, None]), Side::Pro, &lex, None);
        assert!(matches!(silent, Err(TextError::SilentSide { .. })));
    }

    const ADDITIVE: [&str; 13] = [
        "length",
        "positive_words",
        "negative_words",
        "pron_first",
        "pron_second",
        "pron_third",
        "articles_definite",
        "stopwords",
        "links",
        "numbers",
        "exclamations",
        "questions",
        "punctuation",
    ];

    fn text_strategy() -> impl Strategy<Value = String> {
        let words = prop::sample::select(vec![
            "the", "a", "good", "bad", "i", "you", "they", "cat", "42", "3.5", "!", "?", ",",
            "http://x.y", "\u{201c}", "we", "must", "é",
        ]);
        prop::collection::vec(words, 0..30).prop_map(|w| w.join(" "))
    }

    proptest! {
        #[test]
        fn counts_add_over_concatenation(a in text_strategy(), b in text_strategy()) {
            let lex = LexiconSet::builtin();
            let fa = claim_or_side_features(&tokenize(&a), &lex);
            let fb = claim_or_side_features(&tokenize(&b), &lex);
            let joined = [a.as_str(), b.as_str()].join(" ");
            let fab = claim_or_side_features(&tokenize(&joined), &lex);
            for name in ADDITIVE {
                prop_assert_eq!(fab.get(name).unwrap(), fa.get(name).unwrap() + fb.get(name).unwrap());
            }
        }

        #[test]
        fn features_always_finite(s in "\\PC{0,80}") {
            let lex = LexiconSet::builtin();
            let t = tokenize(&s);
            let f = claim_or_side_features(&t, &lex);
            prop_assert!(f.values.iter().all(|v| v.is_finite()));
            prop_assert_eq!(f.names, side_feature_names());
            let o = interplay_features(&t, &tokenize("the cat"), &lex);
            prop_assert!(o.values.iter().all(|v| v.is_finite()));
        }

        #[test]
        fn shared_content_symmetric(a in text_strategy(), b in text_strategy()) {
            let lex = LexiconSet::builtin();
            let (ta, tb) = (tokenize(&a), tokenize(&b));
            let ab = interplay_features(&ta, &tb, &lex).values;
            let ba = interplay_features(&tb, &ta, &lex).values;
            prop_assert_eq!(ab[0], ba[0]);
            prop_assert_eq!(ab[1], ba[1]);
        }
    }
}
