//! Machine-readable run reports.
//!
//! Big integers are carried as decimal strings, reals as shortest
//! round-trip decimals and complex numbers as `{"re", "im"}` objects.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;
use serde_json::{json, Value};

/// A named comparison of an observed value against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub observed: Value,
    pub tolerance: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, observed: impl Serialize, tolerance: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            observed: to_value(observed),
            tolerance: tolerance.into(),
        }
    }

    /// `|observed - expected| <= tol`.
    pub fn abs(name: impl Into<String>, observed: f64, expected: f64, tol: f64) -> Self {
        Check::new(
            name,
            (observed - expected).abs() <= tol,
            json!({ "value": observed, "expected": expected }),
            format!("|value - expected| <= {tol:e}"),
        )
    }

    /// `observed <= bound`.
    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Check::new(name, observed <= bound, observed, format!("<= {bound:e}"))
    }

    /// `lo <= observed <= hi`.
    pub fn within(name: impl Into<String>, observed: f64, lo: f64, hi: f64) -> Self {
        Check::new(name, (lo..=hi).contains(&observed), observed, format!("in [{lo}, {hi}]"))
    }

    /// Exact equality of displayable values, compared as strings.
    pub fn exact(name: impl Into<String>, observed: impl Display, expected: impl Display) -> Self {
        let (o, e) = (observed.to_string(), expected.to_string());
        Check::new(name, o == e, json!({ "value": o, "expected": e }), "exact")
    }
}

/// Result of one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    /// Seconds since the Unix epoch; omitted in deterministic mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            parameters: BTreeMap::new(),
            results: Value::Null,
            checks: Vec::new(),
            timestamp: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn results(mut self, value: impl Serialize) -> Self {
        self.results = to_value(value);
        self
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn stamp(&mut self) {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Results as a table: one row per element when `results` is an array
    /// of objects, `key,value` rows otherwise; checks follow in their own
    /// table after a blank line.
    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut out);
            match &self.results {
                Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
                    let header: Vec<&String> = rows[0].as_object().expect("checked").keys().collect();
                    w.write_record(&header).expect("in-memory write");
                    for row in rows {
                        let obj = row.as_object().expect("checked");
                        w.write_record(header.iter().map(|k| cell(obj.get(*k).unwrap_or(&Value::Null))))
                            .expect("in-memory write");
                    }
                }
                Value::Object(map) => {
                    w.write_record(["key", "value"]).expect("in-memory write");
                    for (k, v) in map {
                        w.write_record([k.clone(), cell(v)]).expect("in-memory write");
                    }
                }
                other => {
                    w.write_record(["value"]).expect("in-memory write");
                    w.write_record([cell(other)]).expect("in-memory write");
                }
            }
            w.flush().expect("in-memory write");
        }
        if !self.checks.is_empty() {
            out.push(b'\n');
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["check", "pass", "observed", "tolerance"]).expect("in-memory write");
            for c in &self.checks {
                w.write_record([c.name.clone(), c.pass.to_string(), cell(&c.observed), c.tolerance.clone()])
                    .expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        String::from_utf8(out).expect("csv output is UTF-8")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `{"re": .., "im": ..}`.
pub fn complex(z: num_complex::Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}
