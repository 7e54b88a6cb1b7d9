//! Named scalar results with provenance metadata, serialised as CSV or JSON.

use serde::{Deserialize, Serialize};

/// How a value was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    MonteCarlo { seed: u64, samples: u64 },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::ClosedForm => f.write_str("closed-form"),
            Provenance::MonteCarlo { seed, samples } => {
                write!(f, "monte-carlo(seed={seed},samples={samples})")
            }
        }
    }
}

/// Formatting class of a scalar: probabilities print with 8 decimals,
/// currency with 4, everything else with 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueKind {
    Probability,
    Currency,
    Real,
    Flag,
}

pub fn format_value(value: f64, kind: ValueKind) -> String {
    match kind {
        ValueKind::Probability => format!("{value:.8}"),
        ValueKind::Currency => format!("{value:.4}"),
        ValueKind::Real => format!("{value:.6}"),
        ValueKind::Flag => format!("{}", if value != 0.0 { 1 } else { 0 }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportCell {
    Num { value: f64, kind: ValueKind },
    Text { text: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportValue {
    pub name: String,
    #[serde(flatten)]
    pub cell: ReportCell,
}

/// A set of named results from one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub command: String,
    pub values: Vec<ReportValue>,
    pub provenance: Provenance,
}

impl EvaluationReport {
    pub fn new(command: &str, provenance: Provenance) -> Self {
        EvaluationReport { command: command.to_string(), values: Vec::new(), provenance }
    }

    pub fn push_num(&mut self, name: &str, value: f64, kind: ValueKind) {
        self.values.push(ReportValue { name: name.to_string(), cell: ReportCell::Num { value, kind } });
    }

    pub fn push_text(&mut self, name: &str, text: &str) {
        self.values.push(ReportValue { name: name.to_string(), cell: ReportCell::Text { text: text.to_string() } });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value,provenance\n");
        for v in &self.values {
            let rendered = match &v.cell {
                ReportCell::Num { value, kind } => format_value(*value, *kind),
                ReportCell::Text { text } => text.clone(),
            };
            out.push_str(&format!("{},{},{}\n", v.name, rendered, self.provenance));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut root = serde_json::to_value(self).expect("report serialises");
        let meta = serde_json::json!({ "version": env!("CARGO_PKG_VERSION") });
        root.as_object_mut().expect("object").insert("metadata".to_string(), meta);
        root
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting_conventions() {
        let mut r = EvaluationReport::new("demo", Provenance::ClosedForm);
        r.push_num("P1", 0.58, ValueKind::Probability);
        r.push_num("E_L1", 0.005, ValueKind::Currency);
        r.push_text("label", "LS");
        let csv = r.to_csv();
        assert!(csv.contains("P1,0.58000000,closed-form"));
        assert!(csv.contains("E_L1,0.0050,closed-form"));
        assert!(csv.contains("label,LS,closed-form"));
    }

    #[test]
    fn json_carries_metadata_and_round_trips() {
        let mut r = EvaluationReport::new("demo", Provenance::MonteCarlo { seed: 42, samples: 100_000 });
        r.push_num("p_shortfall", 0.272, ValueKind::Probability);
        let json = r.to_json();
        assert_eq!(json["provenance"]["seed"], 42);
        assert_eq!(json["provenance"]["samples"], 100_000);
        assert!(json["metadata"]["version"].is_string());
        let back: EvaluationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
