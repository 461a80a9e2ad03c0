//! JSON matrix files: `{"dim": n, "rows": [[[re, im], ...], ...]}`.

use std::fs;
use std::path::Path;

use numrad::{Matrix, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixFile {
            dim: m.dim(),
            rows: m.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, CliError> {
        if self.rows.len() != self.dim {
            return Err(CliError::Dimension(format!(
                "declared dim {} but found {} rows",
                self.dim,
                self.rows.len()
            )));
        }
        if let Some((i, row)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != self.dim) {
            return Err(CliError::Dimension(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                self.dim
            )));
        }
        let data: Vec<C64> = self.rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
        Matrix::new(self.dim, data).map_err(|e| match e {
            numrad::Error::NonFinite { .. } => CliError::Parse(e.to_string()),
            other => CliError::Dimension(other.to_string()),
        })
    }

    /// Canonical single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix files always serialize")
    }
}

pub fn parse_matrix_str(text: &str) -> Result<Matrix, CliError> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.to_matrix()
}

pub fn parse_matrix(path: &Path) -> Result<Matrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_str(&text).map_err(|e| e.in_file(path))
}

pub fn serialize_matrix(m: &Matrix) -> String {
    MatrixFile::from_matrix(m).to_json()
}

/// SHA-256 of the canonical serialization, as lowercase hex.
pub fn digest(m: &Matrix) -> String {
    Sha256::digest(serialize_matrix(m).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
