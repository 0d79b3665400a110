//! JSON reports and CSV sweeps.

use std::io::Write;
use std::path::Path;

use dipole_phase::constants::CONSTANT_SET;
use serde_json::{json, Map, Value};

pub const CSV_HEADER: &str = "sweep_value,phi_g,p_200,p_210,error_estimate";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub sweep_value: f64,
    pub phi_g: f64,
    pub p_200: f64,
    pub p_210: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Map<String, Value>,
    pub errors: Vec<Value>,
    pub evaluations: u64,
    pub rows: Vec<CsvRow>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.into(),
            inputs,
            results: Map::new(),
            errors: Vec::new(),
            evaluations: 0,
            rows: Vec::new(),
        }
    }

    pub fn scalar(
        &mut self,
        name: &str,
        value: f64,
        error_estimate: f64,
        unit: &str,
        method: &str,
    ) {
        self.results.insert(
            name.into(),
            json!({"value": value, "error_estimate": error_estimate, "unit": unit, "method": method}),
        );
    }

    pub fn series(&mut self, name: &str, values: &[f64], errors: &[f64], unit: &str, method: &str) {
        self.results.insert(
            name.into(),
            json!({"value": values, "error_estimate": errors, "unit": unit, "method": method}),
        );
    }

    pub fn error(&mut self, kind: &str, message: impl Into<String>, partial: Option<(f64, f64)>) {
        let mut e = json!({"kind": kind, "message": message.into()});
        if let Some((value, err)) = partial {
            e["partial"] = json!({"value": value, "error_estimate": err});
        }
        self.errors.push(e);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": Value::Object(self.results.clone()),
            "errors": self.errors,
            "meta": {
                "constant_set": CONSTANT_SET,
                "version": env!("CARGO_PKG_VERSION"),
                "evaluations": self.evaluations,
                "threads": rayon::current_num_threads(),
            },
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{:?},{:?},{:?},{:?},{:?}\n",
                r.sweep_value, r.phi_g, r.p_200, r.p_210, r.error_estimate
            ));
        }
        s
    }
}

/// Pretty JSON with a trailing newline; parsing and re-rendering it gives the
/// same bytes.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialise");
    s.push('\n');
    s
}

pub fn write_output(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
