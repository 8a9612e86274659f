//! The single report document every subcommand emits, and its two renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use topos_core::Verdict;

/// Bumped whenever a field is renamed or its meaning changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub kind: &'static str,
    pub payload: Value,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(kind: &'static str, payload: Value, verdicts: Vec<Verdict>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            kind,
            payload,
            verdicts,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn machine(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports are plain JSON values");
        out.push('\n');
        out
    }

    pub fn human(&self) -> String {
        let mut out = format!("{} report\n", self.kind);
        render_value(&mut out, &self.payload, 1);
        if !self.verdicts.is_empty() {
            out.push_str("checks:\n");
            for v in &self.verdicts {
                let _ = writeln!(out, "  {v}");
            }
        }
        let failed = self.verdicts.iter().filter(|v| !v.passed).count();
        let _ = writeln!(out, "{} checks, {failed} failed", self.verdicts.len());
        out
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| is_scalar(x) || inline_row(x)) => {
            let parts: Vec<String> = items.iter().map(|x| inline(x).unwrap_or_default()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

// short arrays of scalars nested one level deep still fit on a line
fn inline_row(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.len() <= 4 && items.iter().all(is_scalar))
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        // first nested line shares the bullet
                        let mut nested = String::new();
                        render_value(&mut nested, x, depth + 1);
                        let inner = "  ".repeat(depth + 1);
                        out.push_str(&format!("{pad}- {}", &nested[inner.len().min(nested.len())..]));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other).unwrap_or_default());
        }
    }
}
