//! Report envelope and serialization helpers shared by every subcommand.

use quarkcap_core::rational::format_rat;
use quarkcap_core::PolyWeights;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "quarkcap/1";

/// Envelope around one command's results payload. The payload is fully
/// determined by the command line and the seed; the duration is reported
/// only on request so that repeated runs stay byte-identical.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
    pub results: Value,
}

impl RunReport {
    pub fn new(command: String, seed: u64, results: Value) -> Self {
        RunReport {
            schema: SCHEMA,
            command,
            seed,
            duration_ms: None,
            results,
        }
    }

    pub fn to_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Capacity in bits with the fixed six decimal places used in all reports.
pub fn cap6(bits: f64) -> String {
    format!("{bits:.6}")
}

/// Capacity of an exact count, formatted.
pub fn count_capacity(count: u64) -> String {
    cap6((count as f64).log2())
}

/// A polynomial certificate as JSON: exact rational coefficients keyed by
/// their variable lists (1-based), bias separate.
pub fn poly_json(w: &PolyWeights) -> Value {
    use num_traits::Zero;
    let terms: Vec<Value> = w
        .coeffs()
        .filter(|(vars, coeff)| !vars.is_empty() && !coeff.is_zero())
        .map(|(vars, coeff)| {
            json!({
                "vars": vars,
                "coeff": format_rat(coeff),
            })
        })
        .collect();
    json!({
        "n": w.n(),
        "degree": w.degree_bound(),
        "bias": format_rat(&w.bias()),
        "terms": terms,
    })
}

/// Escapes one CSV cell (quotes when a comma, quote, or newline appears).
fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Renders a header plus rows as CSV text.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
