//! Check records shared by the verification routines and the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn pass(id: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(id: impl Into<String>, witness: Value) -> Self {
        CheckResult {
            id: id.into(),
            passed: false,
            witness: Some(witness),
        }
    }

    pub fn from_outcome(id: impl Into<String>, passed: bool, witness: Option<Value>) -> Self {
        CheckResult {
            id: id.into(),
            passed,
            witness: if passed { None } else { witness.or(Some(Value::Null)) },
        }
    }
}

/// Outcome of one suite at one `(p, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub p: u32,
    pub n: usize,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub witnesses: Vec<Value>,
    pub checks: Vec<CheckResult>,
    /// Values computed and recorded rather than asserted.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub observations: BTreeMap<String, Value>,
}

impl SuiteResult {
    pub fn new(suite: &str, p: u32, n: usize, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by_key(|a| natural_key(&a.id));
        let passed = checks.iter().filter(|c| c.passed).count();
        let witnesses = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                serde_json::json!({
                    "check_id": c.id,
                    "witness": c.witness.clone().unwrap_or(Value::Null),
                })
            })
            .collect();
        SuiteResult {
            suite: suite.to_string(),
            p,
            n,
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
            witnesses,
            checks,
            observations: BTreeMap::new(),
        }
    }

    pub fn observe(mut self, key: &str, value: Value) -> Self {
        self.observations.insert(key.to_string(), value);
        self
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Orders ids like `pair-2` before `pair-10`.
fn natural_key(id: &str) -> Vec<(String, u64)> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut digits = String::new();
    for ch in id.chars() {
        if ch.is_ascii_digit() {
            digits.push(ch);
        } else {
            if !digits.is_empty() {
                out.push((std::mem::take(&mut text), digits.parse().unwrap_or(u64::MAX)));
                digits.clear();
            }
            text.push(ch);
        }
    }
    out.push((text, digits.parse().unwrap_or(0)));
    out
}
