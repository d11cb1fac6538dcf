//! Explicit-state model checking of LTL_P properties.
//!
//! The pipeline is: translate the SSTL property, negate it, build a Büchi
//! automaton for the negation, and search the product with the system for
//! a reachable accepting cycle. A cycle is a counterexample; none means the
//! property holds on every run.

mod buchi;
mod search;

pub use buchi::{
    ltl_to_buchi, ltl_to_buchi_bounded, BuchiAutomaton, BuchiState, BuchiTransition, Literal,
    DEFAULT_MAX_AUTOMATON_STATES,
};
pub use search::{
    accepts, find_accepting_cycle, Budget, Counterexample, LassoSpace, Limit, SearchOutcome,
    SearchResult, StateSpace, Step, DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES,
};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{DialectError, Formula, ObligationId, PredicateError};
use crate::translate::{eval_ltlp, translate_with, Encoding, Env, LtlpError};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error("property atom does not resolve against the model: {0}")]
    Predicate(#[from] PredicateError),
    #[error("obligation {0} is used outside its binder")]
    UnboundObligation(ObligationId),
    #[error("property automaton exceeds {states} states")]
    AutomatonTooLarge { states: usize },
    #[error("model fault: {0}")]
    Model(String),
    #[error("search stopped by the {0}")]
    Limit(Limit),
}

/// Syntactic negation.
pub fn negate(psi: &Formula) -> Formula {
    Formula::not(psi.clone())
}

/// Verdict of a model-checking run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Satisfied,
    Violated(Counterexample),
    ResourceLimit(Limit),
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Satisfied => "Satisfied",
            Outcome::Violated(_) => "Violated",
            Outcome::ResourceLimit(_) => "ResourceLimit",
        }
    }
}

/// Outcome plus search statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub outcome: Outcome,
    /// The checked LTL_P property.
    pub property: Formula,
    pub automaton_states: usize,
    pub states_explored: usize,
}

/// Serializable summary of a [`VerifyReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub verdict: String,
    pub property: String,
    pub automaton_states: usize,
    pub states_explored: usize,
    pub limit: Option<Limit>,
}

impl VerifyReport {
    pub fn summary(&self) -> VerifySummary {
        VerifySummary {
            verdict: self.outcome.name().to_string(),
            property: self.property.to_string(),
            automaton_states: self.automaton_states,
            states_explored: self.states_explored,
            limit: match &self.outcome {
                Outcome::ResourceLimit(l) => Some(*l),
                _ => None,
            },
        }
    }
}

/// Checks an SSTL property on every run of `sys`.
pub fn verify<S: StateSpace>(
    sys: &S,
    phi: &Formula,
    encoding: Encoding,
    budget: Budget,
) -> Result<VerifyReport, AutomataError> {
    let psi = translate_with(phi, encoding)?;
    verify_ltlp(sys, &psi, budget)
}

/// Checks an LTL_P property on every run of `sys`.
pub fn verify_ltlp<S: StateSpace>(
    sys: &S,
    psi: &Formula,
    budget: Budget,
) -> Result<VerifyReport, AutomataError> {
    let aut = ltl_to_buchi_bounded(&negate(psi), budget.max_states)?;
    let search = find_accepting_cycle(sys, &aut, budget)?;
    let outcome = match search.result {
        SearchResult::Empty => Outcome::Satisfied,
        SearchResult::Cycle(cex) => Outcome::Violated(cex),
        SearchResult::ResourceLimit(l) => Outcome::ResourceLimit(l),
    };
    Ok(VerifyReport {
        outcome,
        property: psi.clone(),
        automaton_states: aut.state_count(),
        states_explored: search.states_explored,
    })
}

/// Whether `cex`, read as an infinite word, violates `psi`.
pub fn replay_violates(psi: &Formula, cex: &Counterexample) -> Result<bool, LtlpError> {
    Ok(eval_ltlp(psi, &cex.to_lasso(), 0, &Env::new())? == Verdict::False)
}

#[cfg(test)]
mod tests;
