//! On-disk JSON formats: the algebra description consumed by every command
//! and the report emitted by them.
//!
//! Unlisted bracket pairs are zero. Coefficients are integers (reduced mod p
//! in positive characteristic) or strings `"a/b"` for exact fractions.

use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    /// 0 (rationals) or an odd prime.
    pub characteristic: u64,
    #[serde(default)]
    pub restricted: bool,
    #[serde(default)]
    pub even_basis: Vec<String>,
    #[serde(default)]
    pub odd_basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_map: Vec<PMapEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<Term>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PMapEntry {
    pub of: String,
    pub value: Vec<Term>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub c: CoeffRepr,
    pub b: String,
}

/// Integer or `"a/b"` string.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum CoeffRepr {
    Int(i64),
    Frac(String),
}

impl CoeffRepr {
    pub fn one() -> Self {
        CoeffRepr::Int(1)
    }
}

impl AlgebraFile {
    /// Stable digest of the canonical JSON encoding (FNV-1a, 64 bit), echoed
    /// in reports so that a report can be matched to its input.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("algebra file serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in canonical.as_bytes() {
            h ^= *byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Report envelope shared by all CLI commands. Sections are filled in by the
/// command that produced the report; absent sections are omitted from JSON.
#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct ReportFile {
    pub command: String,
    pub input_digest: String,
    pub characteristic: u64,
    pub restricted: bool,
    pub dim_even: usize,
    pub dim_odd: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheckSection>,
    /// Wall-clock milliseconds; excluded from determinism guarantees.
    pub timing_ms: u64,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct ValidationSection {
    pub valid: bool,
    pub violations: Vec<String>,
    pub budget_exceeded: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct AnalysisSection {
    pub lower_central_dims: Vec<usize>,
    pub nilpotent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotency_class: Option<usize>,
    pub derived_dim: usize,
    pub center_dim: usize,
    pub even_derived_dim: usize,
    pub odd_square_dim: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct VerdictSection {
    /// Which structural criterion applied: "char0", "ordinary" or "restricted".
    pub setting: String,
    pub engel: bool,
    pub certainty: String,
    pub conditions: Vec<ConditionLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_certificate: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct ConditionLine {
    pub name: String,
    pub holds: bool,
    pub certainty: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct OracleSection {
    pub tier: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engel_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub budget_spent: u64,
}

/// A re-verifiable Engel witness: parseable PBW expressions with
/// `[a, b, ..., b]` (n copies) nonzero.
#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct WitnessLine {
    pub a: String,
    pub b: String,
    pub n: usize,
    pub value: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct CrossCheckSection {
    pub agreement: String,
    pub instances: usize,
    pub disagreements: usize,
    pub inconclusive: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lemma_failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub details: Vec<String>,
}
