//! JSON files exchanged between stages, and the reports the commands write.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{Field, LinAlgError, Matrix, Scalar};
use crate::homsolver::Extraction;
use crate::rigidsys::{DivisibleHom, Integrality, QStep, Verdict};

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: String, source: serde_json::Error },
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

/// Writes next to the destination, then renames over it.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ArtifactError> {
    let io = |source| ArtifactError::Io { path: path.display().to_string(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    let mut f = fs::File::create(tmp).map_err(io)?;
    f.write_all(to_json_string(value).as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(tmp, path).map_err(io)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ArtifactError> {
    let text =
        fs::read_to_string(path).map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| ArtifactError::Json { path: path.display().to_string(), source })
}

/// Dense row-major matrix of `"num/den"` (or residue) strings.
pub type MatrixText = Vec<Vec<String>>;

pub fn matrix_to_text(m: &Matrix) -> MatrixText {
    m.to_artifact_rows()
}

pub fn matrix_from_text(field: Field, rows: &MatrixText) -> Result<Matrix, LinAlgError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| Scalar::parse_in(field, s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(field, rows)
}

/// `endo.json`: one endomorphism of the module with the given id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoFile {
    pub module: String,
    pub matrix: MatrixText,
}

/// `hombasis.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomBasisFile {
    pub source: String,
    pub target: String,
    pub matrices: Vec<MatrixText>,
}

/// Result of running extraction on a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractionOutcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extraction: Option<Extraction>,
    /// The recovered map passed the tree homomorphism checker.
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// `end-report.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EndReport {
    pub module: String,
    pub certified: bool,
    pub rank: usize,
    pub dim: usize,
    pub scalar_only: bool,
    pub constraints: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixText>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extraction: Option<ExtractionOutcome>,
}

/// `hom-report.json`. `expected` is filled in when both modules are
/// subset-indexed variants of one base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomReport {
    pub source: String,
    pub target: String,
    pub dim: usize,
    pub identity_generator: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibleCell {
    #[serde(rename = "U")]
    pub u: Vec<usize>,
    #[serde(rename = "V")]
    pub v: Vec<usize>,
    pub qstep: QStep,
    pub integrality: Option<Integrality>,
    pub result: DivisibleHom,
    pub expected: DivisibleHom,
    pub verdict: Verdict,
}

/// `divisible-report.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DivisibleReport {
    pub module: String,
    pub primes: Vec<(String, u64)>,
    pub cells: Vec<DivisibleCell>,
    pub all_pass: bool,
}
