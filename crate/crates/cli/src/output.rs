//! CSV and JSON writers. Floats use Rust's shortest round-trip formatting so
//! files are byte-identical across runs and parse back to the same value.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub struct Csv {
    buf: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self {
            buf,
            width: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.width);
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn nums(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| num(*v)).collect();
        self.row(&cells);
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize without failure")
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    // `Value` keeps objects in a BTreeMap, so keys come out sorted
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// The JSON document written by every command.
pub fn document(command: &str, parameters: Value, tolerances: Value, result: Value) -> Value {
    json!({
        "tool": { "name": "resp-dde", "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "parameters": parameters,
        "tolerances": tolerances,
        "result": result,
    })
}

pub fn write_json(path: &Path, doc: &Value) -> CliResult<()> {
    write_file(path, &canonical_json(doc))
}

/// Line-per-item human summary helper.
pub fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 29.184188505295378, -3.95051e-4, 1e-300, 25.0] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["a", "b"]);
        c.nums(&[1.5, -2.0]);
        assert_eq!(c.into_string(), "a,b\n1.5,-2\n");
    }

    #[test]
    fn canonical_json_is_stable_under_reparse() {
        let doc = document(
            "x",
            json!({"beta": 0.8, "alpha": 0.5}),
            json!({}),
            json!([1.0, 2.5e-7, -0.018625317792008017]),
        );
        let text = canonical_json(&doc);
        let again: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(canonical_json(&again), text);
    }
}
