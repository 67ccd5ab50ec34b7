//! Canonical reports.
//!
//! JSON objects are emitted with sorted keys (`serde_json`'s default map is a
//! `BTreeMap`), rationals as `"p/q"` strings, and no timestamps, so identical
//! inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use waug_core::algebra::BoundCheck;
use waug_core::enclosure::Decision;
use waug_core::idealkit::Decomposition;
use waug_core::{Enclosure, FinElement, Scalar};

use crate::io::{encode_element, rat};

pub const SCHEMA_VERSION: u32 = 1;

/// A CSV body: header plus rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub operation: &'static str,
    pub inputs: BTreeMap<String, Value>,
    pub params: Map<String, Value>,
    pub result: Value,
    pub certified: bool,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(operation: &'static str) -> Self {
        Report {
            operation,
            inputs: BTreeMap::new(),
            params: Map::new(),
            result: Value::Null,
            certified: false,
            table: None,
        }
    }

    pub fn input(&mut self, role: &str, path: &std::path::Path, bytes: &[u8]) {
        let entry = json!({ "path": path.display().to_string(), "sha256": sha256_hex(bytes) });
        match self.inputs.get_mut(role) {
            Some(Value::Array(list)) => list.push(entry),
            Some(prev) => *prev = Value::Array(vec![prev.take(), entry]),
            None => {
                self.inputs.insert(role.to_string(), entry);
            }
        }
    }

    pub fn param(&mut self, key: &str, v: Value) {
        self.params.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "certified": self.certified,
            "inputs": self.inputs,
            "operation": self.operation,
            "params": self.params,
            "result": self.result,
            "schema": SCHEMA_VERSION,
            "tool": "waug",
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports are plain JSON values");
        s.push('\n');
        s
    }

    /// The subcommand's documented table, or `path,value` rows flattened from
    /// the JSON report.
    pub fn render_csv(&self) -> String {
        let table = match &self.table {
            Some(t) => t.clone(),
            None => {
                let mut rows = Vec::new();
                flatten("", &self.to_json(), &mut rows);
                Table { header: vec!["path", "value"], rows: rows.into_iter().map(|(k, v)| vec![k, v]).collect() }
            }
        };
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&table.header).expect("in-memory write");
        for r in &table.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of UTF-8 fields")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        write!(s, "{b:02x}").expect("writing to a String");
    }
    s
}

pub fn enclosure(e: &Enclosure) -> Value {
    json!({ "lo": rat(&e.lo), "hi": rat(&e.hi) })
}

pub fn scalar(c: &Scalar) -> Value {
    json!({ "re": rat(&c.re), "im": rat(&c.im) })
}

pub fn decision(d: Decision) -> Value {
    Value::String(
        match d {
            Decision::Holds => "holds",
            Decision::Fails => "fails",
            Decision::Undecided => "undecided",
        }
        .to_string(),
    )
}

pub fn bound_check(b: &BoundCheck) -> Value {
    json!({
        "certified": b.decision.holds(),
        "decision": decision(b.decision),
        "lhs": enclosure(&b.lhs),
        "rhs": enclosure(&b.rhs),
    })
}

pub fn element(f: &FinElement) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(u, c)| json!({ "elem": encode_element(u), "re": rat(&c.re), "im": rat(&c.im) }))
        .collect();
    json!({ "terms": terms })
}

pub fn decomposition(d: &Decomposition) -> Value {
    json!({
        "coefficients": d.coefficients.iter().map(element).collect::<Vec<_>>(),
        "generators": d.generators.iter().map(element).collect::<Vec<_>>(),
        "input": element(&d.input),
        "reconvolves": true,
    })
}
