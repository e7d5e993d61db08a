//! JSON operator files.
//!
//! ```json
//! {"schema_version": 1,
//!  "dims": {"dA": 2, "dB": 2},
//!  "entries": [[[1.0, 0.0], [0.0, 0.0], ...], ...],
//!  "metadata": {"label": "...", "provenance": "..."}}
//! ```
//!
//! Entries are `[re, im]` pairs in the A-major product basis. Numbers are
//! written as shortest round-trip decimals, so finite values survive a
//! save/load cycle bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spa_witness::{CMatrix, Dims, HermitianOperator};
use thiserror::Error;

pub const OPERATOR_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported schema_version {0} (expected {OPERATOR_SCHEMA_VERSION})")]
    Schema(u32),

    #[error("invalid dims: {0}")]
    Dims(spa_witness::Error),

    #[error("dimension mismatch at row {row}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("not Hermitian at row {row}, column {col}: |A[r][c] - conj(A[c][r])| = {asymmetry:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        asymmetry: f64,
    },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimsRecord {
    #[serde(rename = "dA")]
    pub d_a: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub schema_version: u32,
    pub dims: DimsRecord,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl OperatorFile {
    pub fn from_operator(op: &HermitianOperator, metadata: Option<Metadata>) -> Self {
        let d = op.dims();
        let m = op.matrix();
        let entries = (0..d.total())
            .map(|r| {
                (0..d.total())
                    .map(|s| [m[(r, s)].re, m[(r, s)].im])
                    .collect()
            })
            .collect();
        Self {
            schema_version: OPERATOR_SCHEMA_VERSION,
            dims: DimsRecord {
                d_a: d.a(),
                d_b: d.b(),
            },
            entries,
            metadata,
        }
    }

    /// Validates the record and builds the operator. Errors point at the
    /// first offending row (and column).
    pub fn to_operator(&self) -> Result<HermitianOperator, IoError> {
        if self.schema_version != OPERATOR_SCHEMA_VERSION {
            return Err(IoError::Schema(self.schema_version));
        }
        let dims = Dims::new(self.dims.d_a, self.dims.d_b).map_err(IoError::Dims)?;
        let n = dims.total();
        if self.entries.len() != n {
            return Err(IoError::DimensionMismatch {
                row: self.entries.len().min(n),
                expected: n,
                found: self.entries.len(),
            });
        }
        for (row, entries) in self.entries.iter().enumerate() {
            if entries.len() != n {
                return Err(IoError::DimensionMismatch {
                    row,
                    expected: n,
                    found: entries.len(),
                });
            }
            if let Some(col) = entries
                .iter()
                .position(|[re, im]| !re.is_finite() || !im.is_finite())
            {
                return Err(IoError::NonFinite { row, col });
            }
        }
        let m = CMatrix::from_fn(n, n, |r, s| {
            let [re, im] = self.entries[r][s];
            num_complex::Complex64::new(re, im)
        });
        HermitianOperator::new(m, dims).map_err(|e| match e {
            spa_witness::Error::NotHermitian {
                row,
                col,
                asymmetry,
            } => IoError::NotHermitian {
                row,
                col,
                asymmetry,
            },
            other => IoError::Dims(other),
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"schema_version\": {},\n", self.schema_version));
        out.push_str(&format!(
            "  \"dims\": {},\n",
            serde_json::to_string(&self.dims).expect("dims serialize")
        ));
        out.push_str("  \"entries\": [\n");
        for (k, row) in self.entries.iter().enumerate() {
            let sep = if k + 1 == self.entries.len() { "" } else { "," };
            out.push_str("    ");
            out.push_str(&serde_json::to_string(row).expect("finite entries serialize"));
            out.push_str(sep);
            out.push('\n');
        }
        out.push_str("  ]");
        if let Some(meta) = &self.metadata {
            out.push_str(",\n  \"metadata\": ");
            out.push_str(&serde_json::to_string(meta).expect("metadata serialize"));
        }
        out.push_str("\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

pub fn load_operator_file(path: &Path) -> Result<OperatorFile, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    OperatorFile::from_json(&text)
}

pub fn load_operator(path: &Path) -> Result<HermitianOperator, IoError> {
    load_operator_file(path)?.to_operator()
}

pub fn save_operator(
    op: &HermitianOperator,
    metadata: Option<Metadata>,
    path: &Path,
) -> Result<(), IoError> {
    let file = OperatorFile::from_operator(op, metadata);
    for (row, entries) in file.entries.iter().enumerate() {
        if let Some(col) = entries
            .iter()
            .position(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(IoError::NonFinite { row, col });
        }
    }
    fs::write(path, file.to_json()).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}
