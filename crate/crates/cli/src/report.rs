//! Machine-readable run reports.

use serde::Serialize;
use sstl::automata::{Counterexample, Limit, Outcome};
use sstl::Verdict;

/// Flags and paths a run was invoked with.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dialect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tick: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ticks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Outcome of one command. Wall time is deliberately absent so that the
/// JSON is byte-stable across runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: Inputs,
    /// Overall verdict.
    pub verdict: String,
    /// Per-tick verdicts of `check` without `--tick`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<Verdict>>,
    /// The checked LTL_P property, or the translation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obligation_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub automaton_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_explored: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<Limit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_path: Option<String>,
}

impl RunReport {
    pub fn new(command: &'static str, inputs: Inputs, verdict: impl Into<String>) -> Self {
        Self {
            command,
            inputs,
            verdict: verdict.into(),
            verdicts: None,
            property: None,
            obligation_bound: None,
            automaton_states: None,
            states_explored: None,
            limit: None,
            counterexample: None,
            counterexample_path: None,
        }
    }
}

/// One row of the verdict table.
#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub model: String,
    pub property: String,
    pub formula: String,
    pub expected: String,
    pub verdict: String,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_replays: Option<bool>,
    pub automaton_states: usize,
    pub states_explored: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

pub fn outcome_exit(outcome: &Outcome) -> i32 {
    match outcome {
        Outcome::Satisfied => EXIT_OK,
        Outcome::Violated(_) => EXIT_NEGATIVE,
        Outcome::ResourceLimit(_) => EXIT_LIMIT,
    }
}

/// 0 when every verdict is True, 1 otherwise.
pub fn verdicts_exit(verdicts: &[Verdict]) -> i32 {
    if verdicts.iter().all(|v| *v == Verdict::True) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}
