//! The case-study verdict table: built-in (model, property) pairs with
//! their expected verdicts.

use std::thread;

use serde::Serialize;
use thiserror::Error;

use crate::automata::{replay_violates, verify, AutomataError, Budget, Counterexample, Outcome, VerifyReport};
use crate::discretize::{discretize_formula, DiscretizeError};
use crate::formula::{Dialect, Formula};
use crate::parse::{parse_formula_with_signals, ParseError};
use crate::system::{builtin_source, parse_model, ModelError, TransitionSystem};
use crate::translate::{Encoding, LtlpError};

/// Verdict a table row is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Expected {
    Satisfied,
    Violated,
}

/// One (model, property) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    /// Built-in model name, see [`crate::system::BUILTIN_NAMES`].
    pub model: &'static str,
    pub property: &'static str,
    pub dialect: Dialect,
    pub formula: &'static str,
    pub expected: Expected,
}

const fn entry(
    model: &'static str,
    property: &'static str,
    dialect: Dialect,
    formula: &'static str,
    expected: Expected,
) -> TableEntry {
    TableEntry {
        model,
        property,
        dialect,
        formula,
        expected,
    }
}

use Dialect::{Sstl, Stl};
use Expected::{Satisfied, Violated};

pub const PHI_AV: &str = "G (A_EGM >= 80 -> F[0.180,0.240] (V_EGM >= 80))";
pub const PHI_VV: &str = "G (V_EGM >= 80 -> F[0.6,1.00] (V_EGM > 80))";
pub const PHI_LIVENESS_A: &str = "F (A_EGM > 80)";
pub const PHI_LIVENESS_V: &str = "F (V_EGM > 80)";

/// The fifteen case-study properties.
pub const CASE_STUDIES: [TableEntry; 15] = [
    entry("traffic_light", "mutex", Sstl, "G !(NS_green = 1 && EW_green = 1)", Satisfied),
    entry("traffic_light", "NS_safe", Sstl, "G (NS_green = 1 -> EW_red = 1)", Satisfied),
    entry("traffic_light", "EW_safe", Sstl, "G (EW_green = 1 -> NS_red = 1)", Satisfied),
    entry("traffic_light", "fairness", Sstl, "G F (NS_green = 1)", Violated),
    entry("traffic_light", "liveness_NS", Sstl, "F (NS_green = 1)", Satisfied),
    entry("traffic_light", "response", Sstl, "G (NS_green = 1 -> F (NS_yellow = 1))", Satisfied),
    entry("traffic_light", "bounded", Sstl, "G (NS_green = 1 -> F[3,5] (NS_yellow = 1))", Satisfied),
    entry("pedestrian_crossing", "no_conflict", Sstl, "G !(cars_green = 1 && walk_signal = 1)", Satisfied),
    entry("pedestrian_crossing", "queue_bounded", Sstl, "G (waiting_peds <= 5 && waiting_peds >= 0)", Satisfied),
    entry("pedestrian_crossing", "threshold_walk", Sstl, "G (waiting_peds >= 2 -> F (walk_signal = 1))", Violated),
    entry(
        "pedestrian_crossing",
        "bounded_wait",
        Sstl,
        "G ((cars_green = 1 && waiting_peds >= 2) -> F[2,5] (walk_signal = 1))",
        Violated,
    ),
    entry("heart_abstract:healthy", "AV", Stl, PHI_AV, Satisfied),
    entry("heart_abstract:healthy", "VV", Stl, PHI_VV, Satisfied),
    entry("heart_abstract:healthy", "liveness_A", Stl, PHI_LIVENESS_A, Satisfied),
    entry("heart_abstract:healthy", "liveness_V", Stl, PHI_LIVENESS_V, Satisfied),
];

/// Heart properties on the three conduction-block variants.
pub const DISEASE_VARIANTS: [TableEntry; 12] = [
    entry("heart_abstract:av_block", "AV", Stl, PHI_AV, Violated),
    entry("heart_abstract:av_block", "VV", Stl, PHI_VV, Satisfied),
    entry("heart_abstract:av_block", "liveness_A", Stl, PHI_LIVENESS_A, Satisfied),
    entry("heart_abstract:av_block", "liveness_V", Stl, PHI_LIVENESS_V, Satisfied),
    entry("heart_abstract:lbb_block", "AV", Stl, PHI_AV, Violated),
    entry("heart_abstract:lbb_block", "VV", Stl, PHI_VV, Satisfied),
    entry("heart_abstract:lbb_block", "liveness_A", Stl, PHI_LIVENESS_A, Satisfied),
    entry("heart_abstract:lbb_block", "liveness_V", Stl, PHI_LIVENESS_V, Satisfied),
    entry("heart_abstract:rbb_block", "AV", Stl, PHI_AV, Violated),
    entry("heart_abstract:rbb_block", "VV", Stl, PHI_VV, Satisfied),
    entry("heart_abstract:rbb_block", "liveness_A", Stl, PHI_LIVENESS_A, Satisfied),
    entry("heart_abstract:rbb_block", "liveness_V", Stl, PHI_LIVENESS_V, Satisfied),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("unknown built-in model `{0}`")]
    UnknownModel(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("counterexample replay failed: {0}")]
    Replay(#[from] LtlpError),
}

/// Result of checking one entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub entry: TableEntry,
    pub report: VerifyReport,
    /// Whether the counterexample, replayed on the property, violates it.
    pub replay_ok: Option<bool>,
}

impl TableRow {
    /// Whether the verdict matches the expectation and any counterexample
    /// replays as a violation.
    pub fn matches(&self) -> bool {
        let verdict_ok = matches!(
            (&self.report.outcome, self.entry.expected),
            (Outcome::Satisfied, Expected::Satisfied) | (Outcome::Violated(_), Expected::Violated)
        );
        verdict_ok && self.replay_ok != Some(false)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.report.outcome {
            Outcome::Violated(cex) => Some(cex),
            _ => None,
        }
    }
}

/// Loads a built-in model by name.
pub fn builtin_model(name: &str) -> Result<TransitionSystem, TableError> {
    let src = builtin_source(name).ok_or_else(|| TableError::UnknownModel(name.to_string()))?;
    Ok(parse_model(&src)?)
}

/// The entry's property as an SSTL formula over the model's ticks.
pub fn entry_formula(e: &TableEntry, sys: &TransitionSystem) -> Result<Formula, TableError> {
    let signals: Vec<String> = sys.variables().iter().map(|v| v.name.clone()).collect();
    let phi = parse_formula_with_signals(e.formula, e.dialect, &signals)?;
    Ok(match e.dialect {
        Dialect::Stl => discretize_formula(&phi, sys.dt())?,
        _ => phi,
    })
}

/// Checks one entry.
pub fn run_entry(e: &TableEntry, encoding: Encoding, budget: Budget) -> Result<TableRow, TableError> {
    let sys = builtin_model(e.model)?;
    let phi = entry_formula(e, &sys)?;
    let report = verify(&sys, &phi, encoding, budget)?;
    let replay_ok = match &report.outcome {
        Outcome::Violated(cex) => Some(replay_violates(&report.property, cex)?),
        _ => None,
    };
    Ok(TableRow {
        entry: *e,
        report,
        replay_ok,
    })
}

/// Checks all entries, one thread per entry. Rows come back in input order.
pub fn run_table(entries: &[TableEntry], encoding: Encoding, budget: Budget) -> Vec<Result<TableRow, TableError>> {
    thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| s.spawn(move || run_entry(e, encoding, budget)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_resolves() {
        for e in CASE_STUDIES.iter().chain(&DISEASE_VARIANTS) {
            let sys = builtin_model(e.model).unwrap();
            entry_formula(e, &sys).unwrap();
        }
        assert!(matches!(builtin_model("missing"), Err(TableError::UnknownModel(_))));
    }

    #[test]
    fn rows_come_back_in_order() {
        let rows = run_table(&CASE_STUDIES[..4], Encoding::Impl, Budget::default());
        for (row, e) in rows.iter().zip(&CASE_STUDIES) {
            let row = row.as_ref().unwrap();
            assert_eq!(row.entry, *e);
            assert!(row.matches(), "{}", e.property);
        }
        assert_eq!(rows[3].as_ref().unwrap().replay_ok, Some(true));
    }
}
