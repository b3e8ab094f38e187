use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::TextError;
use crate::textfeat::tokenize::tokenize;

/// Parse `term<TAB>value` lines; blank lines and `#` comments are skipped.
pub fn parse_entries(text: &str) -> Result<Vec<(String, Option<String>)>, TextError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(2, '\t');
        let term = parts.next().unwrap_or("").trim().to_lowercase();
        if term.is_empty() {
            return Err(TextError::Lexicon {
                line: n + 1,
                reason: "empty term".into(),
            });
        }
        let value = parts
            .next()
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty());
        out.push((term, value));
    }
    Ok(out)
}

/// Multi-word lexicon matched greedily, longest phrase first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhraseSet {
    phrases: BTreeMap<Vec<String>, String>,
    max_len: usize,
}

impl PhraseSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, phrase: &str, value: impl Into<String>) {
        let tokens = tokenize(phrase).tokens;
        if tokens.is_empty() {
            return;
        }
        self.max_len = self.max_len.max(tokens.len());
        self.phrases.insert(tokens, value.into());
    }

    pub fn from_entries(entries: &[(String, Option<String>)]) -> Self {
        let mut set = PhraseSet::new();
        for (term, value) in entries {
            set.insert(term, value.clone().unwrap_or_default());
        }
        set
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.phrases.keys().any(|k| k.len() == 1 && k[0] == word)
    }

    /// Non-overlapping matches as (start, length, value).
    pub fn matches<'a>(&'a self, tokens: &[String]) -> Vec<(usize, usize, &'a str)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = self.max_len.min(tokens.len() - i);
            let hit = (1..=longest).rev().find_map(|len| {
                self.phrases
                    .get(&tokens[i..i + len])
                    .map(|v| (len, v.as_str()))
            });
            match hit {
                Some((len, value)) => {
                    out.push((i, len, value));
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }

    pub fn count(&self, tokens: &[String]) -> usize {
        self.matches(tokens).len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subjectivity {
    NegStrong,
    NegWeak,
    PosStrong,
    PosWeak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connotation {
    Positive,
    Negative,
    Neutral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Article {
    Definite,
    Indefinite,
}

/// Argumentation styles tagged in the argument lexicon, in schema order.
pub const ARGUMENT_STYLES: [&str; 14] = [
    "assessment",
    "authority",
    "conditioning",
    "contrasting",
    "emphasizing",
    "generalizing",
    "empathy",
    "inconsistency",
    "necessity",
    "possibility",
    "priority",
    "rhetorical_question",
    "desire",
    "difficulty",
];

/// Every word list the linguistic features consult. All lookups are lowercase.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LexiconSet {
    pub politeness: PhraseSet,
    pub swear: PhraseSet,
    pub hedges: PhraseSet,
    pub evidence_markers: PhraseSet,
    pub opponent_markers: PhraseSet,
    pub modal_verbs: PhraseSet,
    pub pronouns: BTreeMap<String, u8>,
    pub articles: BTreeMap<String, Article>,
    pub polarity: BTreeMap<String, f64>,
    pub subjectivity: BTreeMap<String, Subjectivity>,
    pub connotation: BTreeMap<String, Connotation>,
    pub argument_lexicon: PhraseSet,
    pub stopwords: BTreeSet<String>,
    pub dictionary: Option<BTreeSet<String>>,
    pub synonyms: BTreeMap<String, BTreeSet<String>>,
}

/// File names the loader asks for, in load order.
pub const LEXICON_FILES: [&str; 15] = [
    "politeness.txt",
    "swear.txt",
    "hedges.txt",
    "evidence.txt",
    "opponent.txt",
    "modals.txt",
    "pronouns.txt",
    "articles.txt",
    "polarity.txt",
    "subjectivity.txt",
    "connotation.txt",
    "argument.txt",
    "stopwords.txt",
    "dictionary.txt",
    "synonyms.txt",
];

/// The lexicons compiled into the crate.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "politeness.txt" => include_str!("../../lexicons/politeness.txt"),
        "swear.txt" => include_str!("../../lexicons/swear.txt"),
        "hedges.txt" => include_str!("../../lexicons/hedges.txt"),
        "evidence.txt" => include_str!("../../lexicons/evidence.txt"),
        "opponent.txt" => include_str!("../../lexicons/opponent.txt"),
        "modals.txt" => include_str!("../../lexicons/modals.txt"),
        "pronouns.txt" => include_str!("../../lexicons/pronouns.txt"),
        "articles.txt" => include_str!("../../lexicons/articles.txt"),
        "polarity.txt" => include_str!("../../lexicons/polarity.txt"),
        "subjectivity.txt" => include_str!("../../lexicons/subjectivity.txt"),
        "connotation.txt" => include_str!("../../lexicons/connotation.txt"),
        "argument.txt" => include_str!("../../lexicons/argument.txt"),
        "stopwords.txt" => include_str!("../../lexicons/stopwords.txt"),
        "synonyms.txt" => include_str!("../../lexicons/synonyms.txt"),
        _ => return None,
    })
}

fn bad(line: usize, reason: String) -> TextError {
    TextError::Lexicon { line, reason }
}

fn value_map<T>(
    entries: &[(String, Option<String>)],
    parse: impl Fn(&str) -> Option<T>,
) -> Result<BTreeMap<String, T>, TextError> {
    let mut out = BTreeMap::new();
    for (i, (term, value)) in entries.iter().enumerate() {
        let raw = value
            .as_deref()
            .ok_or_else(|| bad(i + 1, format!("`{term}` needs a value")))?;
        let v = parse(raw).ok_or_else(|| bad(i + 1, format!("bad value `{raw}` for `{term}`")))?;
        out.insert(term.clone(), v);
    }
    Ok(out)
}

impl LexiconSet {
    pub fn builtin() -> Self {
        Self::load(|name| builtin_source(name).map(String::from))
            .expect("built-in lexicons are well formed")
    }

    /// Build from a source that maps file names in [`LEXICON_FILES`] to contents;
    /// a missing file leaves that lexicon empty (the dictionary stays absent).
    pub fn load(mut source: impl FnMut(&str) -> Option<String>) -> Result<Self, TextError> {
        let mut get = |name: &str| -> Result<Option<Vec<(String, Option<String>)>>, TextError> {
            source(name).map(|t| parse_entries(&t)).transpose()
        };
        let phrases = |e: Option<Vec<_>>| e.map(|e| PhraseSet::from_entries(&e)).unwrap_or_default();
        let words = |e: Option<Vec<(String, Option<String>)>>| -> BTreeSet<String> {
            e.unwrap_or_default().into_iter().map(|(t, _)| t).collect()
        };

        let mut set = LexiconSet {
            politeness: phrases(get("politeness.txt")?),
            swear: phrases(get("swear.txt")?),
            hedges: phrases(get("hedges.txt")?),
            evidence_markers: phrases(get("evidence.txt")?),
            opponent_markers: phrases(get("opponent.txt")?),
            modal_verbs: phrases(get("modals.txt")?),
            argument_lexicon: phrases(get("argument.txt")?),
            ..LexiconSet::default()
        };
        if let Some(e) = get("pronouns.txt")? {
            set.pronouns = value_map(&e, |v| v.parse::<u8>().ok().filter(|p| (1..=3).contains(p)))?;
        }
        if let Some(e) = get("articles.txt")? {
            set.articles = value_map(&e, |v| match v {
                "definite" => Some(Article::Definite),
                "indefinite" => Some(Article::Indefinite),
                _ => None,
            })?;
        }
        if let Some(e) = get("polarity.txt")? {
            set.polarity = value_map(&e, |v| {
                v.parse::<f64>().ok().filter(|p| (-1.0..=1.0).contains(p))
            })?;
        }
        if let Some(e) = get("subjectivity.txt")? {
            set.subjectivity = value_map(&e, |v| match v {
                "neg_strong" => Some(Subjectivity::NegStrong),
                "neg_weak" => Some(Subjectivity::NegWeak),
                "pos_strong" => Some(Subjectivity::PosStrong),
                "pos_weak" => Some(Subjectivity::PosWeak),
                _ => None,
            })?;
        }
        if let Some(e) = get("connotation.txt")? {
            set.connotation = value_map(&e, |v| match v {
                "pos" => Some(Connotation::Positive),
                "neg" => Some(Connotation::Negative),
                "neutral" => Some(Connotation::Neutral),
                _ => None,
            })?;
        }
        set.stopwords = words(get("stopwords.txt")?);
        set.dictionary = get("dictionary.txt")?.map(|e| words(Some(e)));
        if let Some(e) = get("synonyms.txt")? {
            for (word, value) in e {
                let syns: BTreeSet<String> = value
                    .unwrap_or_default()
                    .split(',')
                    .map(|s| s.trim().to_lowercase())
                    .filter(|s| !s.is_empty())
                    .collect();
                set.synonyms.entry(word).or_default().extend(syns);
            }
        }
        Ok(set)
    }

    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        self.synonyms.get(a).is_some_and(|s| s.contains(b))
            || self.synonyms.get(b).is_some_and(|s| s.contains(a))
    }
}
