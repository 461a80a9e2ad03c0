//! Machine-readable run reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use numrad::states::State;
use numrad::{Matrix, Settings, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::matrix_file::digest;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub path: String,
    pub dim: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub label: String,
    /// Unit vector for a pure state, flattened row-major density otherwise.
    pub kind: &'static str,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub decision_tol: f64,
    pub witness_tol: f64,
    pub flat_tol: f64,
    pub grid: usize,
    pub orth_grid: usize,
}

impl From<&Settings> for Tolerances {
    fn from(s: &Settings) -> Self {
        Tolerances {
            decision_tol: s.decision_tol,
            witness_tol: s.witness_tol,
            flat_tol: s.flat_tol,
            grid: s.grid,
            orth_grid: s.orth_grid,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: BTreeMap<String, Value>,
    pub witnesses: Vec<WitnessRecord>,
    pub margins: BTreeMap<String, f64>,
    pub tolerances: Tolerances,
    pub seed: u64,
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

impl RunReport {
    pub fn new(command: String, settings: &Settings, seed: u64) -> Self {
        RunReport {
            command,
            inputs: Vec::new(),
            results: BTreeMap::new(),
            witnesses: Vec::new(),
            margins: BTreeMap::new(),
            tolerances: settings.into(),
            seed,
        }
    }

    pub fn input(&mut self, name: &str, path: &str, m: &Matrix) {
        self.inputs.push(InputDigest {
            name: name.to_string(),
            path: path.to_string(),
            dim: m.dim(),
            sha256: digest(m),
        });
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn set_complex(&mut self, key: &str, z: C64) {
        self.results.insert(key.to_string(), complex(z));
    }

    pub fn margin(&mut self, key: &str, value: f64) {
        self.margins.insert(key.to_string(), value);
    }

    pub fn witness(&mut self, label: &str, state: &State) {
        let (kind, entries) = match state {
            State::Pure(x) => ("pure", x.iter().map(|z| [z.re, z.im]).collect()),
            State::Density(rho) => ("density", rho.as_slice().iter().map(|z| [z.re, z.im]).collect()),
        };
        self.witnesses.push(WitnessRecord {
            label: label.to_string(),
            kind,
            entries,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for i in &self.inputs {
            let _ = writeln!(
                out,
                "input {}: {} ({}x{}, sha256 {})",
                i.name, i.path, i.dim, i.dim, i.sha256
            );
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k}: {}", render(v));
        }
        for (k, v) in &self.margins {
            let _ = writeln!(out, "margin {k}: {v:e}");
        }
        for w in &self.witnesses {
            let entries: Vec<String> = w.entries.iter().map(|&[re, im]| format_complex(re, im)).collect();
            let _ = writeln!(out, "witness {} ({}): [{}]", w.label, w.kind, entries.join(", "));
        }
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "tolerances: decision {:e}, witness {:e}, flat {:e}, grid {}, orth grid {}",
            t.decision_tol, t.witness_tol, t.flat_tol, t.grid, t.orth_grid
        );
        let _ = writeln!(out, "seed: {}", self.seed);
        out
    }
}

fn format_complex(re: f64, im: f64) -> String {
    if im < 0.0 || (im == 0.0 && im.is_sign_negative()) {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_f64) => {
            format_complex(items[0].as_f64().unwrap_or(0.0), items[1].as_f64().unwrap_or(0.0))
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(render).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    }
}
