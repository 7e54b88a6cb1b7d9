//! Reproduction of the ten reference tables, with per-cell provenance and
//! operation tracing.
//!
//! Each table id pins its own canonical parameter set (fund parameters,
//! contribution step, horizon); only the Monte Carlo tables (5 and 6) read
//! the sample count and seed from the run configuration.

use paygfund::continuous_withdrawal::credibility_prob;
use paygfund::credit_variant_b::{simulate_variant_b, CreditSchedule};
use paygfund::lump_sum::{
    barrier_expected_debt, barrier_expected_retained, barrier_payback_prob, expected_fund_after_forced_payback,
    expected_net_gain_vs_extra_investment, expected_pc_gain, expected_state_loss, full_payback_prob, BarrierPolicy,
    DeficitStep,
};
use paygfund::strategy_compare::{lump_sum_default_prob, recommend_strategy};
use paygfund::FundParams;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::report::{format_value, Provenance, ValueKind};

/// One table cell: a typed value plus the library operation that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    #[serde(flatten)]
    pub content: CellContent,
    /// Fully qualified name of the producing library operation.
    pub op: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellContent {
    Num { value: f64, kind: ValueKind },
    Label { label: String },
}

impl Cell {
    fn prob(value: f64, op: &str) -> Self {
        Cell { content: CellContent::Num { value, kind: ValueKind::Probability }, op: op.to_string() }
    }

    fn currency(value: f64, op: &str) -> Self {
        Cell { content: CellContent::Num { value, kind: ValueKind::Currency }, op: op.to_string() }
    }

    fn label(label: &str, op: &str) -> Self {
        Cell { content: CellContent::Label { label: label.to_string() }, op: op.to_string() }
    }

    pub fn render(&self) -> String {
        match &self.content {
            CellContent::Num { value, kind } => format_value(*value, *kind),
            CellContent::Label { label } => label.clone(),
        }
    }

    pub fn numeric(&self) -> Option<f64> {
        match &self.content {
            CellContent::Num { value, .. } => Some(*value),
            CellContent::Label { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub cells: Vec<Cell>,
    pub provenance: Provenance,
}

/// A fully evaluated reference table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableArtifact {
    pub id: u8,
    pub title: String,
    /// Name of the row-label column followed by one header per data column.
    pub col_headers: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl TableArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = self.col_headers.join(",");
        out.push_str(",provenance\n");
        for row in &self.rows {
            out.push_str(&row.label);
            for cell in &row.cells {
                out.push(',');
                out.push_str(&cell.render());
            }
            out.push_str(&format!(",{}\n", row.provenance));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut root = serde_json::to_value(self).expect("table serialises");
        let meta = match self.mc_provenance() {
            Some((seed, samples)) => serde_json::json!({
                "version": env!("CARGO_PKG_VERSION"),
                "seed": seed,
                "samples": samples,
            }),
            None => serde_json::json!({ "version": env!("CARGO_PKG_VERSION") }),
        };
        root.as_object_mut().expect("object").insert("metadata".to_string(), meta);
        root
    }

    fn mc_provenance(&self) -> Option<(u64, u64)> {
        self.rows.iter().find_map(|r| match r.provenance {
            Provenance::MonteCarlo { seed, samples } => Some((seed, samples)),
            Provenance::ClosedForm => None,
        })
    }
}

fn standard_fund() -> FundParams {
    FundParams::new(0.04, 0.2).expect("canonical parameters")
}

fn diversified_fund() -> FundParams {
    FundParams::new(0.04, 0.1).expect("canonical parameters")
}

fn canonical_step() -> DeficitStep {
    DeficitStep::new(1.0, 1.1).expect("canonical step")
}

fn fmt_num(x: f64) -> String {
    // shortest faithful decimal for labels/headers
    let s = format!("{x}");
    s
}

type CellResult = Result<TableArtifact, paygfund::Error>;

/// Key quantities of the payback-first scheme as functions of alpha.
fn table_1() -> CellResult {
    let fund = standard_fund();
    let step = canonical_step();
    let alphas = [1.0, 1.05, 1.1, 1.15, 1.25, 2.0, 3.0];
    let mut rows = Vec::new();
    let specs: [(&str, fn(&FundParams, f64, &DeficitStep) -> paygfund::Result<f64>, ValueKind, &str); 5] = [
        ("P1", |f, a, _| full_payback_prob(f, a), ValueKind::Probability, "lump_sum::full_payback_prob"),
        ("E_L1", expected_state_loss, ValueKind::Currency, "lump_sum::expected_state_loss"),
        ("E_G1", expected_pc_gain, ValueKind::Currency, "lump_sum::expected_pc_gain"),
        ("E_B1", expected_fund_after_forced_payback, ValueKind::Currency, "lump_sum::expected_fund_after_forced_payback"),
        ("E_GA1", expected_net_gain_vs_extra_investment, ValueKind::Currency, "lump_sum::expected_net_gain_vs_extra_investment"),
    ];
    for (label, f, kind, op) in specs {
        let mut cells = Vec::new();
        for &alpha in &alphas {
            let value = f(&fund, alpha, &step)?;
            cells.push(Cell { content: CellContent::Num { value, kind }, op: op.to_string() });
        }
        rows.push(TableRow { label: label.to_string(), cells, provenance: Provenance::ClosedForm });
    }
    Ok(TableArtifact {
        id: 1,
        title: "Payback-first key quantities vs alpha (mu=0.04, sigma=0.2, C0=1, C1=1.1)".to_string(),
        col_headers: std::iter::once("quantity".to_string()).chain(alphas.iter().map(|a| fmt_num(*a))).collect(),
        rows,
    })
}

/// Same quantities for the better diversified fund.
fn table_2() -> CellResult {
    let fund = diversified_fund();
    let step = canonical_step();
    let alphas = [1.0, 1.05, 1.1, 1.15, 1.2, 1.25];
    let mut rows = Vec::new();
    let specs: [(&str, fn(&FundParams, f64, &DeficitStep) -> paygfund::Result<f64>, ValueKind, &str); 3] = [
        ("P1", |f, a, _| full_payback_prob(f, a), ValueKind::Probability, "lump_sum::full_payback_prob"),
        ("E_L1", expected_state_loss, ValueKind::Currency, "lump_sum::expected_state_loss"),
        ("E_G1", expected_pc_gain, ValueKind::Currency, "lump_sum::expected_pc_gain"),
    ];
    for (label, f, kind, op) in specs {
        let mut cells = Vec::new();
        for &alpha in &alphas {
            let value = f(&fund, alpha, &step)?;
            cells.push(Cell { content: CellContent::Num { value, kind }, op: op.to_string() });
        }
        rows.push(TableRow { label: label.to_string(), cells, provenance: Provenance::ClosedForm });
    }
    Ok(TableArtifact {
        id: 2,
        title: "Payback-first key quantities vs alpha (mu=0.04, sigma=0.1)".to_string(),
        col_headers: std::iter::once("quantity".to_string()).chain(alphas.iter().map(|a| fmt_num(*a))).collect(),
        rows,
    })
}

/// Probability of full debt repayment as a function of alpha and b.
fn table_3() -> CellResult {
    let fund = standard_fund();
    let barriers = [0.02, 0.0, -0.5, -0.75, -0.9, -0.95, -1.0];
    let alphas = [0.8, 0.9, 1.0, 1.25, 2.0, 10.0];
    let mut rows = Vec::new();
    for &b in &barriers {
        let mut cells = Vec::new();
        for &alpha in &alphas {
            let policy = BarrierPolicy::new(alpha, b)?;
            cells.push(Cell::prob(barrier_payback_prob(&fund, &policy)?, "lump_sum::barrier_payback_prob"));
        }
        rows.push(TableRow { label: fmt_num(b), cells, provenance: Provenance::ClosedForm });
    }
    Ok(TableArtifact {
        id: 3,
        title: "Full repayment probability vs alpha and b (mu=0.04, sigma=0.2)".to_string(),
        col_headers: std::iter::once("b".to_string()).chain(alphas.iter().map(|a| fmt_num(*a))).collect(),
        rows,
    })
}

/// Expected payment to the state and expected retained fund value.
fn table_4() -> CellResult {
    let fund = standard_fund();
    let step = canonical_step();
    let pairs = [(10.0, 0.030), (10.0, 0.005), (10.0, -0.070), (20.0, 0.153), (20.0, 0.100), (20.0, 0.009)];
    let mut debt_cells = Vec::new();
    let mut retained_cells = Vec::new();
    for &(alpha, b) in &pairs {
        let policy = BarrierPolicy::new(alpha, b)?;
        debt_cells.push(Cell::currency(
            barrier_expected_debt(&fund, &policy, &step)?,
            "lump_sum::barrier_expected_debt",
        ));
        retained_cells.push(Cell::currency(
            barrier_expected_retained(&fund, &policy, &step)?,
            "lump_sum::barrier_expected_retained",
        ));
    }
    Ok(TableArtifact {
        id: 4,
        title: "Expected debt payment and retained value vs (alpha, b)".to_string(),
        col_headers: std::iter::once("quantity".to_string())
            .chain(pairs.iter().map(|(a, b)| format!("a{}_b{}", fmt_num(*a), fmt_num(*b))))
            .collect(),
        rows: vec![
            TableRow { label: "E_D1".to_string(), cells: debt_cells, provenance: Provenance::ClosedForm },
            TableRow { label: "E_R1".to_string(), cells: retained_cells, provenance: Provenance::ClosedForm },
        ],
    })
}

fn variant_b_table(id: u8, fund: FundParams, config: &RunConfig) -> CellResult {
    let schedule = CreditSchedule::constant(1.0, 1.1, 10)?;
    let alphas = [1.0, 1.05, 1.1, 1.15, 1.2, 1.25];
    let provenance = Provenance::MonteCarlo { seed: config.seed, samples: config.samples };
    let mut p_cells = Vec::new();
    let mut es_cells = Vec::new();
    let mut ef_cells = Vec::new();
    for &alpha in &alphas {
        let r = simulate_variant_b(&schedule, alpha, &fund, config.samples, config.seed)?;
        p_cells.push(Cell::prob(r.p_shortfall, "credit_variant_b::simulate_variant_b"));
        es_cells.push(Cell::currency(r.e_shortfall, "credit_variant_b::simulate_variant_b"));
        ef_cells.push(Cell::currency(r.e_final_net_fund, "credit_variant_b::simulate_variant_b"));
    }
    Ok(TableArtifact {
        id,
        title: format!(
            "Granted credit shortfall statistics vs alpha (mu=0.04, sigma={}, T=10)",
            fund.sigma()
        ),
        col_headers: std::iter::once("quantity".to_string()).chain(alphas.iter().map(|a| fmt_num(*a))).collect(),
        rows: vec![
            TableRow { label: "P_shortfall".to_string(), cells: p_cells, provenance: provenance.clone() },
            TableRow { label: "E_shortfall".to_string(), cells: es_cells, provenance: provenance.clone() },
            TableRow { label: "E_final_net_fund".to_string(), cells: ef_cells, provenance },
        ],
    })
}

fn credibility_table(id: u8, t: f64) -> CellResult {
    let fund = standard_fund();
    let barriers = [-0.2, -0.1, -0.05, 0.0, 0.05];
    let alphas = [1.0, 2.0, 3.0, 4.0, 5.0];
    let mut rows = Vec::new();
    for &b in &barriers {
        let mut cells = Vec::new();
        for &alpha in &alphas {
            cells.push(Cell::prob(
                credibility_prob(&fund, b, alpha, t)?,
                "continuous_withdrawal::credibility_prob",
            ));
        }
        rows.push(TableRow { label: fmt_num(b), cells, provenance: Provenance::ClosedForm });
    }
    Ok(TableArtifact {
        id,
        title: format!("Debt-account credibility probabilities over {t} year(s)"),
        col_headers: std::iter::once("b".to_string()).chain(alphas.iter().map(|a| fmt_num(*a))).collect(),
        rows,
    })
}

const STRATEGY_HORIZONS: [f64; 8] = [1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0, 40.0];

/// Optimal strategy per (t, alpha) cell at p = 0.5.
fn table_9() -> CellResult {
    let fund = standard_fund();
    let mut rows = Vec::new();
    for &t in &STRATEGY_HORIZONS {
        let mut cells = Vec::new();
        for alpha in 1..=10 {
            let d = recommend_strategy(t, alpha as f64, 0.5, &fund)?;
            cells.push(Cell::label(&d.label.to_string(), "strategy_compare::recommend_strategy"));
        }
        rows.push(TableRow { label: fmt_num(t), cells, provenance: Provenance::ClosedForm });
    }
    Ok(TableArtifact {
        id: 9,
        title: "Optimal strategy per horizon and liquidity cap (p=0.5)".to_string(),
        col_headers: std::iter::once("t".to_string()).chain((1..=10).map(|a| a.to_string())).collect(),
        rows,
    })
}

/// State default probability for the lump-sum route.
fn table_10() -> CellResult {
    let fund = standard_fund();
    let mut rows = Vec::new();
    for &t in &STRATEGY_HORIZONS {
        let mut cells = Vec::new();
        for alpha in 1..=10 {
            cells.push(Cell::prob(
                lump_sum_default_prob(t, alpha as f64, &fund)?,
                "strategy_compare::lump_sum_default_prob",
            ));
        }
        rows.push(TableRow { label: fmt_num(t), cells, provenance: Provenance::ClosedForm });
    }
    Ok(TableArtifact {
        id: 10,
        title: "Lump-sum default probability per horizon and multiplier".to_string(),
        col_headers: std::iter::once("t".to_string()).chain((1..=10).map(|a| a.to_string())).collect(),
        rows,
    })
}

/// Evaluate one of the ten reference tables.
pub fn run_table(id: u8, config: &RunConfig) -> CellResult {
    match id {
        1 => table_1(),
        2 => table_2(),
        3 => table_3(),
        4 => table_4(),
        5 => variant_b_table(5, standard_fund(), config),
        6 => variant_b_table(6, diversified_fund(), config),
        7 => credibility_table(7, 1.0),
        8 => credibility_table(8, 10.0),
        9 => table_9(),
        10 => table_10(),
        other => Err(paygfund::Error::Domain(format!("no table with id {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, Cli};
    use clap::Parser;

    fn config() -> RunConfig {
        resolve(Cli::try_parse_from(["paygfund", "table", "1"]).unwrap()).unwrap()
    }

    #[test]
    fn table_1_shape_and_first_cells() {
        let t = table_1().unwrap();
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.rows[0].cells.len(), 7);
        let p1 = t.rows[0].cells[0].numeric().unwrap();
        assert!((p1 - 0.58).abs() < 5e-3);
        let csv = t.to_csv();
        assert!(csv.starts_with("quantity,1,1.05,1.1,1.15,1.25,2,3,provenance\n"));
        assert!(csv.contains("P1,0.57925971"));
    }

    #[test]
    fn table_7_reference_cell() {
        let t = credibility_table(7, 1.0).unwrap();
        // cell (b=0, alpha=3)
        let v = t.rows[3].cells[2].numeric().unwrap();
        assert!((v - 0.13156264).abs() < 1e-7);
    }

    #[test]
    fn table_9_shape() {
        let t = table_9().unwrap();
        assert_eq!(t.rows.len(), 8);
        assert!(t.rows.iter().all(|r| r.cells.len() == 10));
        // row t=20 is lump-sum across the board
        let row = &t.rows[6];
        assert_eq!(row.label, "20");
        assert!(row.cells.iter().all(|c| c.render() == "LS"));
    }

    #[test]
    fn json_round_trips() {
        let cfg = config();
        let t = run_table(5, &RunConfig { samples: 2000, ..cfg }).unwrap();
        let json = t.to_json();
        assert_eq!(json["metadata"]["samples"], 2000);
        assert_eq!(json["metadata"]["seed"], 42);
        let back: TableArtifact = serde_json::from_value(json).unwrap();
        assert_eq!(back, t);
        assert!(run_table(11, &config()).is_err());
    }
}
