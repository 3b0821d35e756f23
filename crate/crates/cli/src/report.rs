//! Error type and the JSON shapes printed by the CLI.

use std::fmt;

use deodhar::hecke::LaurentPoly;
use deodhar::mask::Mask;
use deodhar::perm::Classification;
use deodhar::Permutation;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum CliError {
    /// Rejected input or a failed precondition in the library.
    Domain(deodhar::Error),
    /// Bad flag combination; exit code 2.
    Usage(String),
    /// The two KL methods disagreed.
    Mismatch(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.kind(),
            CliError::Usage(_) => "Usage",
            CliError::Mismatch(_) => "Mismatch",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.to_string() }
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Mismatch(m) => f.write_str(m),
        }
    }
}

impl From<deodhar::Error> for CliError {
    fn from(e: deodhar::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub w: Permutation,
    pub length: usize,
    pub reduced_word: Vec<usize>,
    pub support: Vec<usize>,
    pub support_connected: bool,
    #[serde(flatten)]
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeapReport {
    pub rank: usize,
    pub letters: Vec<usize>,
    pub entries: Vec<deodhar::heap::HeapEntry>,
    pub covers: Vec<(usize, usize)>,
    pub normal_form: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mask: Option<Mask>,
    pub strings: deodhar::heap::StringDiagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesReport {
    pub w: Permutation,
    pub classes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlValue {
    pub w: Permutation,
    pub x: Permutation,
    pub method: String,
    pub p: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbasisTerm {
    pub x: Permutation,
    pub coeff: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbasisReport {
    pub w: Permutation,
    pub terms: Vec<CbasisTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskRecord {
    pub mask: Mask,
    pub product: Permutation,
    pub d: usize,
    pub zero_defects: usize,
    pub plain_zeros: usize,
    pub defect_positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasksReport {
    pub w: Permutation,
    pub word: Vec<usize>,
    pub filter: String,
    pub masks: Vec<MaskRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    pub p: Permutation,
    pub class: deodhar::ideals::PatternClass,
    pub ideal: bool,
    /// Rank-(r+1) class members containing `p` as a pattern but not as a heap.
    pub failures: Vec<Permutation>,
    pub upper_set: Vec<Permutation>,
}
