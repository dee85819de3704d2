//! Versioned JSON cache of rational invariants.
//!
//! ```json
//! {"format_version": 1, "kind": "rational", "seed_assumptions": ["N_1^(0) = 1"], "values": ["1", "1", "12"]}
//! ```
//!
//! Values are decimal strings; they outgrow 64-bit integers by degree 8.

use std::fs;
use std::io;
use std::path::Path;

use gw_core::rational::parse_rational;
use gw_core::{InvariantKind, InvariantTable, Route};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;
pub const SEED_ASSUMPTION: &str = "N_1^(0) = 1";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path} is not a valid cache file: {reason}")]
    Corrupt { path: String, reason: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheFile {
    format_version: u32,
    kind: String,
    seed_assumptions: Vec<String>,
    values: Vec<String>,
}

/// `Ok(None)` when the file does not exist.
pub fn load(path: &Path) -> Result<Option<InvariantTable>, CacheError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(source) => {
            return Err(CacheError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    };
    let corrupt = |reason: String| CacheError::Corrupt {
        path: path.display().to_string(),
        reason,
    };
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(corrupt(format!("unsupported format_version {}", file.format_version)));
    }
    if file.kind != InvariantKind::Rational.as_str() {
        return Err(corrupt(format!("expected kind \"rational\", found {:?}", file.kind)));
    }
    if file.seed_assumptions != [SEED_ASSUMPTION] {
        return Err(corrupt(format!("unexpected seed assumptions {:?}", file.seed_assumptions)));
    }
    let values = file
        .values
        .iter()
        .map(|v| parse_rational(v, 0).map_err(|_| corrupt(format!("bad value {v:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    InvariantTable::new(InvariantKind::Rational, values, Route::Wdvv)
        .map(Some)
        .map_err(|e| corrupt(e.to_string()))
}

pub fn store(path: &Path, table: &InvariantTable) -> Result<(), CacheError> {
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        kind: table.kind().as_str().to_string(),
        seed_assumptions: vec![SEED_ASSUMPTION.to_string()],
        values: table.values().iter().map(|v| v.to_string()).collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("cache file serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| CacheError::Io {
        path: path.display().to_string(),
        source,
    })
}
