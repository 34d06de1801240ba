use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// One verification record. Runtimes are logged, not stored, so reports
/// stay byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub name: String,
    pub suite: String,
    /// Result anchor, or "plumbing".
    pub anchor: String,
    pub inputs: BTreeMap<String, Value>,
    pub measured: BTreeMap<String, f64>,
    pub fitted: BTreeMap<String, f64>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl TestRecord {
    pub fn new(name: &str, suite: &str, anchor: &str) -> Self {
        TestRecord {
            name: name.into(),
            suite: suite.into(),
            anchor: anchor.into(),
            inputs: BTreeMap::new(),
            measured: BTreeMap::new(),
            fitted: BTreeMap::new(),
            passed: false,
            message: None,
        }
    }

    pub fn input(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(k.into(), v.into());
        self
    }

    pub fn measure(&mut self, k: &str, v: f64) {
        self.measured.insert(k.into(), v);
    }

    pub fn fit(&mut self, k: &str, v: f64) {
        self.fitted.insert(k.into(), v);
    }

    pub fn verdict(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    pub fn failed(name: &str, suite: &str, anchor: &str, message: String) -> Self {
        TestRecord {
            message: Some(message),
            ..TestRecord::new(name, suite, anchor)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub epsilon: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: Option<u64>,
    pub records: Vec<TestRecord>,
    pub series: BTreeMap<String, Vec<SeriesRow>>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// CSV with columns `epsilon,value[,fit]`, 12 significant digits.
    pub fn export_series(&self, name: &str) -> Result<String> {
        if self.series.is_empty() {
            return Err(Error::UnknownSeries {
                name: name.into(),
                available: "no series".into(),
            });
        }
        let rows = self.series.get(name).ok_or_else(|| Error::UnknownSeries {
            name: name.into(),
            available: self.series.keys().cloned().collect::<Vec<_>>().join(", "),
        })?;
        let with_fit = rows.iter().any(|r| r.fit.is_some());
        let mut out = String::from(if with_fit {
            "epsilon,value,fit\n"
        } else {
            "epsilon,value\n"
        });
        for r in rows {
            out.push_str(&format!("{:.11e},{:.11e}", r.epsilon, r.value));
            if with_fit {
                out.push_str(&format!(",{:.11e}", r.fit.unwrap_or(f64::NAN)));
            }
            out.push('\n');
        }
        Ok(out)
    }
}
