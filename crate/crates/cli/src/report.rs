//! Uniform output shape for every subcommand, rendered as text or JSON.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Keys keep insertion order, so a rendered report parses back to the same text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub violations: Vec<Value>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            params: Map::new(),
            rows: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn row<K: Into<String>>(&mut self, cells: impl IntoIterator<Item = (K, Value)>) {
        self.rows.push(cells.into_iter().map(|(k, v)| (k.into(), v)).collect());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON")
    }

    /// Header line, an aligned table of the rows, and a violation summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
        out.push_str(&format!("# {} {}\n", self.command, params.join(" ")));
        if let Some(first) = self.rows.first() {
            let keys: Vec<&String> = first.keys().collect();
            let table: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| keys.iter().map(|k| r.get(*k).map(cell).unwrap_or_default()).collect())
                .collect();
            let widths: Vec<usize> = keys
                .iter()
                .enumerate()
                .map(|(i, k)| table.iter().map(|r| r[i].len()).chain([k.len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(keys.iter().map(|k| k.as_str()).collect()));
            for r in &table {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
            }
        }
        if self.violations.is_empty() {
            out.push_str("violations: none\n");
        } else {
            let vs: Vec<String> = self.violations.iter().map(cell).collect();
            out.push_str(&format!("violations ({}): {}\n", vs.len(), vs.join(", ")));
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// Decimal string, the JSON encoding for every exact number.
pub fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}
