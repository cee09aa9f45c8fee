//! The report every command prints.
//!
//! Keys are kept in `serde_json::Map`, which is ordered by key, so the JSON
//! text is byte-stable for identical inputs once timings are left out.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdicts: Map<String, Value>,
    pub artifacts: Vec<String>,
    pub timings: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: &[String]) -> Report {
        Report { command: command.to_string(), inputs: inputs.to_vec(), ..Report::default() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> String {
        // Round-trip through `Value` so nested keys are sorted too.
        let value = serde_json::to_value(self).expect("report is plain data");
        serde_json::to_string_pretty(&value).expect("report is plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.verdicts {
            match v {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        for a in &self.artifacts {
            out.push_str(&format!("wrote: {a}\n"));
        }
        for (k, v) in &self.timings {
            out.push_str(&format!("time {k}: {v} ms\n"));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_keys_come_out_sorted() {
        let mut r = Report::new("classify", &["a.fol".into()]);
        r.set("zeta", 1);
        r.set("alpha", "x");
        let json = r.to_json();
        assert!(json.find("\"alpha\"").unwrap() < json.find("\"zeta\"").unwrap());
        assert!(json.find("\"artifacts\"").unwrap() < json.find("\"command\"").unwrap());
    }

    #[test]
    fn text_form_lists_verdicts() {
        let mut r = Report::new("decide", &[]);
        r.set("verdict", "Unsat");
        assert_eq!(r.to_text(), "command: decide\nverdict: Unsat\n");
    }
}
