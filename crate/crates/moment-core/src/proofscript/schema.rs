use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::ContextKind;
use crate::symkernel::VarId;

pub const SCHEMA_VERSION: u32 = 1;

/// A theorem replay script: an ordered sequence of named checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Script {
    pub schema: u32,
    pub name: String,
    pub checks: Vec<CheckSpec>,
}

/// One verification step.
///
/// `inputs` maps names to DSL expressions (or to procedure parameters for
/// the reserved keys `dir`, `var`, `mode`, `support` and `at:<var>`);
/// `expected` maps names to the expressions the computation is compared
/// against. Non-reserved inputs and all expected entries are exported as
/// `<id>_<name>` bindings for later checks; the principal computed value is
/// exported as `<id>`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: String,
    pub context: String,
    pub procedure: Procedure,
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub expected: BTreeMap<String, String>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Procedure {
    #[serde(rename = "derive_and_compare")]
    DeriveAndCompare,
    #[serde(rename = "substitute_and_compare")]
    SubstituteAndCompare,
    #[serde(rename = "solve2x2_and_compare")]
    Solve2x2AndCompare,
    #[serde(rename = "collect_and_compare")]
    CollectAndCompare,
    #[serde(rename = "equate_two_expressions")]
    EquateTwoExpressions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Error,
    Skipped,
}

/// Outcome of one check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub status: CheckStatus,
    /// DSL text of the non-zero difference when failing; empty on pass.
    pub residual: String,
    pub elapsed_ms: u64,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("i/o error reading script: {0}")]
    Io(#[from] std::io::Error),

    #[error("script is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),

    #[error("no shipped script for theorem `{0}`")]
    UnknownTheorem(String),

    #[error("script validation failed: {0}")]
    Validation(String),
}

/// Reserved input keys that hold procedure parameters, not expressions.
pub(crate) fn is_reserved_input(key: &str) -> bool {
    matches!(key, "dir" | "var" | "mode" | "support" | "expr")
        || key.starts_with("at:")
}

impl Script {
    /// Structural validation: schema version, known contexts and
    /// procedures, unique well-formed ids, binding names that cannot shadow
    /// the variable universe.
    pub fn validate(&self) -> Result<(), ScriptError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ScriptError::SchemaVersion(self.schema));
        }
        let mut seen = std::collections::BTreeSet::new();
        for check in &self.checks {
            let id = check.id.as_str();
            if id.is_empty()
                || !id
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
                || !id.chars().next().unwrap().is_ascii_alphabetic()
            {
                return Err(ScriptError::Validation(format!(
                    "check id `{id}` is not a valid identifier"
                )));
            }
            if VarId::from_name(id).is_some() {
                return Err(ScriptError::Validation(format!(
                    "check id `{id}` shadows a variable name"
                )));
            }
            if !seen.insert(id.to_string()) {
                return Err(ScriptError::Validation(format!("duplicate check id `{id}`")));
            }
            if ContextKind::from_name(&check.context).is_none() {
                return Err(ScriptError::Validation(format!(
                    "check `{id}` uses unknown context `{}`",
                    check.context
                )));
            }
            for key in check.inputs.keys() {
                if !is_reserved_input(key) && VarId::from_name(key).is_some() {
                    return Err(ScriptError::Validation(format!(
                        "check `{id}` input `{key}` shadows a variable name"
                    )));
                }
            }
            for key in check.expected.keys() {
                if check.inputs.contains_key(key) {
                    return Err(ScriptError::Validation(format!(
                        "check `{id}` declares `{key}` both as input and expected"
                    )));
                }
            }
        }
        Ok(())
    }
}
