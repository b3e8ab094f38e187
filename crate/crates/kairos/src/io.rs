//! Corpus directories: `catalog.json`, `users.json`, `debates.json` and
//! `trees.json`, each optional. Parsing is strict about types and either
//! rejects or warns about fields it does not know.

use std::fs;
use std::path::Path;

use kairos_core::corpus::{ArgumentTree, Corpus, Debate, UserProfile};
use kairos_core::textfeat::{LexiconSet, LEXICON_FILES};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CATALOG_FILE: &str = "catalog.json";
pub const USERS_FILE: &str = "users.json";
pub const DEBATES_FILE: &str = "debates.json";
pub const TREES_FILE: &str = "trees.json";
pub const META_FILE: &str = "meta.json";

/// Fixed order used for both loading and hashing.
pub const CORPUS_FILES: [&str; 4] = [CATALOG_FILE, USERS_FILE, DEBATES_FILE, TREES_FILE];

pub const LEXICON_ENV: &str = "KAIROS_LEXICON_DIR";

/// Field layout of a record, used only to find unknown keys.
#[derive(Clone, Copy)]
enum Shape {
    Leaf,
    List(&'static Shape),
    Map(&'static Shape),
    Obj(&'static [(&'static str, Shape)]),
}

use Shape::{Leaf, List, Map, Obj};

const CHOICES: Shape = Obj(&[
    ("conduct", Leaf),
    ("spelling_grammar", Leaf),
    ("convincing_arguments", Leaf),
    ("reliable_sources", Leaf),
]);
const BALLOT: Shape = Obj(&[
    ("voter_id", Leaf),
    ("stance_before", Leaf),
    ("stance_after", Leaf),
    ("choices", CHOICES),
]);
const ROUND: Shape = Obj(&[("index", Leaf), ("pro_text", Leaf), ("con_text", Leaf)]);
const DEBATE: Shape = Obj(&[
    ("debate_id", Leaf),
    ("topic", Leaf),
    ("category", Leaf),
    ("pro_user", Leaf),
    ("con_user", Leaf),
    ("rounds", List(&ROUND)),
    ("ballots", List(&BALLOT)),
    ("timestamp", Leaf),
]);
const USER: Shape = Obj(&[
    ("user_id", Leaf),
    ("political_ideology", Leaf),
    ("religious_ideology", Leaf),
    ("gender", Leaf),
    ("ethnicity", Leaf),
    ("big_issue_stances", Map(&Leaf)),
    ("friends", List(&Leaf)),
    ("join_order", Leaf),
]);
const NODE: Shape = Obj(&[
    ("claim_id", Leaf),
    ("text", Leaf),
    ("parent", Leaf),
    ("edge_label", Leaf),
    ("tally", Leaf),
]);
const TREE: Shape = Obj(&[("tree_id", Leaf), ("nodes", List(&NODE))]);

fn unknown_fields(value: &Value, shape: Shape, path: &str, out: &mut Vec<String>) {
    match (shape, value) {
        (Obj(fields), Value::Object(map)) => {
            for (k, v) in map {
                let here = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match fields.iter().find(|(name, _)| name == k) {
                    Some((_, s)) => unknown_fields(v, *s, &here, out),
                    None => out.push(here),
                }
            }
        }
        (List(inner), Value::Array(items)) => {
            for (i, v) in items.iter().enumerate() {
                unknown_fields(v, *inner, &format!("{path}[{i}]"), out);
            }
        }
        (Map(inner), Value::Object(map)) => {
            for (k, v) in map {
                unknown_fields(v, *inner, &format!("{path}.{k}"), out);
            }
        }
        _ => {}
    }
}

fn parse_records<T: DeserializeOwned>(
    file: &str,
    bytes: &[u8],
    shape: Shape,
    strict: bool,
    warnings: &mut Vec<String>,
) -> Result<Vec<T>> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| Error::Schema {
        file: file.into(),
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let mut unknown = Vec::new();
    if let Value::Array(items) = &value {
        for (i, v) in items.iter().enumerate() {
            unknown_fields(v, shape, &format!("[{i}]"), &mut unknown);
        }
    }
    if let Some(first) = unknown.first() {
        if strict {
            return Err(Error::UnknownField {
                file: file.into(),
                path: first.clone(),
            });
        }
        warnings.extend(unknown.iter().map(|p| format!("{file}: ignored unknown field `{p}`")));
    }
    serde_path_to_error::deserialize(value).map_err(|e| Error::Schema {
        file: file.into(),
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn parse_debates(bytes: &[u8], strict: bool, warnings: &mut Vec<String>) -> Result<Vec<Debate>> {
    parse_records(DEBATES_FILE, bytes, DEBATE, strict, warnings)
}

pub fn parse_users(bytes: &[u8], strict: bool, warnings: &mut Vec<String>) -> Result<Vec<UserProfile>> {
    parse_records(USERS_FILE, bytes, USER, strict, warnings)
}

/// Trees are validated while parsing: missing parents, cycles and root
/// count all fail here.
pub fn parse_trees(bytes: &[u8], strict: bool, warnings: &mut Vec<String>) -> Result<Vec<ArgumentTree>> {
    parse_records(TREES_FILE, bytes, TREE, strict, warnings)
}

pub fn parse_catalog(bytes: &[u8]) -> Result<Vec<String>> {
    parse_records(CATALOG_FILE, bytes, Leaf, true, &mut Vec::new())
}

#[derive(Debug)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<String>,
    /// Hex SHA-256 over the files that were present.
    pub digest: String,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn load_corpus(dir: &Path, strict: bool) -> Result<LoadedCorpus> {
    if !dir.is_dir() {
        return Err(Error::MissingInput(dir.to_path_buf()));
    }
    let mut hasher = Sha256::new();
    let mut warnings = Vec::new();
    let mut raw: [Option<Vec<u8>>; 4] = Default::default();
    for (slot, name) in raw.iter_mut().zip(CORPUS_FILES) {
        let path = dir.join(name);
        if path.exists() {
            let bytes = read(&path)?;
            hasher.update(name.as_bytes());
            hasher.update([0]);
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(&bytes);
            *slot = Some(bytes);
        }
    }
    if raw.iter().all(Option::is_none) {
        return Err(Error::MissingInput(dir.join(DEBATES_FILE)));
    }
    let [catalog, users, debates, trees] = raw;
    let catalog = catalog.map(|b| parse_catalog(&b)).transpose()?.unwrap_or_default();
    let users = users.map(|b| parse_users(&b, strict, &mut warnings)).transpose()?.unwrap_or_default();
    let debates = debates
        .map(|b| parse_debates(&b, strict, &mut warnings))
        .transpose()?
        .unwrap_or_default();
    let trees = trees.map(|b| parse_trees(&b, strict, &mut warnings)).transpose()?.unwrap_or_default();
    let corpus = Corpus::new(debates, users, trees, catalog)?;
    Ok(LoadedCorpus {
        corpus,
        warnings,
        digest: hex(&hasher.finalize()),
    })
}

/// Pretty JSON with a trailing newline; the only form this crate writes.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("corpus records serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes all four corpus files, empty arrays included.
pub fn write_corpus(dir: &Path, corpus: &Corpus) -> Result<()> {
    write_file(&dir.join(CATALOG_FILE), canonical_json(corpus.catalog()))?;
    write_file(&dir.join(USERS_FILE), canonical_json(corpus.users()))?;
    write_file(&dir.join(DEBATES_FILE), canonical_json(corpus.debates()))?;
    write_file(&dir.join(TREES_FILE), canonical_json(corpus.trees()))
}

/// Lexicons from `dir`, else from the directory named by
/// `KAIROS_LEXICON_DIR`, else the built-in copies.
pub fn load_lexicons(dir: Option<&Path>) -> Result<LexiconSet> {
    let env = std::env::var_os(LEXICON_ENV).map(std::path::PathBuf::from);
    let Some(dir) = dir.map(Path::to_path_buf).or(env) else {
        return Ok(LexiconSet::builtin());
    };
    if !dir.is_dir() {
        return Err(Error::MissingInput(dir));
    }
    if !LEXICON_FILES.iter().any(|f| dir.join(f).exists()) {
        return Err(Error::Invalid(format!("{} holds none of the lexicon files", dir.display())));
    }
    Ok(LexiconSet::load(|name| fs::read_to_string(dir.join(name)).ok())?)
}
