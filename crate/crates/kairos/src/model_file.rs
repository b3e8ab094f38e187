//! Versioned JSON dumps of trained models.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::{canonical_json, write_file};

/// Bumped whenever a stored model layout changes.
pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<M> {
    schema_version: u32,
    kind: String,
    /// Input column names the model was trained on, in order.
    features: Vec<String>,
    model: M,
}

pub fn save_model<M: Serialize>(path: &Path, kind: &str, features: &[String], model: &M) -> Result<()> {
    let env = Envelope {
        schema_version: MODEL_SCHEMA_VERSION,
        kind: kind.to_string(),
        features: features.to_vec(),
        model,
    };
    write_file(path, canonical_json(&env))
}

/// The version and kind are checked before the parameters are decoded, so a
/// dump from another layout is refused instead of half-read.
pub fn load_model<M: DeserializeOwned>(path: &Path, kind: &str) -> Result<(Vec<String>, M)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let file = path.display().to_string();
    let value: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Schema {
        file: file.clone(),
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let found = value
        .get("schema_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Schema {
            file: file.clone(),
            path: "schema_version".into(),
            message: "missing or not an integer".into(),
        })?;
    if found != u64::from(MODEL_SCHEMA_VERSION) {
        return Err(Error::ModelVersion {
            found: u32::try_from(found).unwrap_or(u32::MAX),
            expected: MODEL_SCHEMA_VERSION,
        });
    }
    let found_kind = value.get("kind").and_then(Value::as_str).unwrap_or("");
    if found_kind != kind {
        return Err(Error::ModelKind {
            found: found_kind.into(),
            expected: kind.into(),
        });
    }
    let env: Envelope<M> = serde_path_to_error::deserialize(value).map_err(|e| Error::Schema {
        file,
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    Ok((env.features, env.model))
}
