//! The shipped model corpus: `NAME.json` with a `NAME.expect.json` sidecar
//! recording how the model classifies.

use std::fs;
use std::path::{Path, PathBuf};

use convexqe_core::model::ModelDescriptor;
use serde::Deserialize;

use crate::format::{model_from_str, FormatError};

pub const FIXTURES_ENV: &str = "CONVEXQE_FIXTURES";

/// `$CONVEXQE_FIXTURES`, or the corpus next to this crate.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURES_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

/// A path as given, or else the fixture of that name.
pub fn resolve_model(arg: &str) -> PathBuf {
    let path = PathBuf::from(arg);
    if path.exists() {
        return path;
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    let name = Path::new(name).file_name().map(PathBuf::from).unwrap_or_default();
    fixture_dir().join(name).with_extension("json")
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
}

pub fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.into(), source })
}

pub fn load_model(arg: &str) -> Result<ModelDescriptor, LoadError> {
    let path = resolve_model(arg);
    model_from_str(&read(&path)?).map_err(|source| LoadError::Format { path, source })
}

/// The documented classification of a fixture.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub cut_kind: String,
    pub stabilizer_level: usize,
    pub uniquely_realizable: bool,
}

/// Every `NAME.json` in the corpus with its sidecar, sorted by name.
pub fn corpus() -> Result<Vec<(String, ModelDescriptor, Expectation)>, LoadError> {
    let dir = fixture_dir();
    let entries = fs::read_dir(&dir).map_err(|source| LoadError::Io { path: dir.clone(), source })?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter_map(|n| n.strip_suffix(".json").filter(|s| !s.ends_with(".expect")).map(String::from))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let model = load_model(&dir.join(format!("{name}.json")).to_string_lossy())?;
            let path = dir.join(format!("{name}.expect.json"));
            let expect = serde_json::from_str(&read(&path)?)
                .map_err(|e| LoadError::Format { path, source: FormatError::Json(e) })?;
            Ok((name, model, expect))
        })
        .collect()
}
