//! Synchronous signal temporal logic: parsing, discretization, monitoring,
//! translation to LTL with predicates, and explicit-state model checking.

pub mod automata;
pub mod discretize;
pub mod formula;
pub mod monitor;
pub mod parse;
pub mod system;
pub mod table;
mod print;
pub mod time;
pub mod translate;
pub mod trace;
pub mod verdict;

pub use discretize::discretize_formula;
pub use formula::{
    Dialect, Formula, GuardAtom, GuardKind, LinearPredicate, ObligationId, Relation, Window,
};
pub use monitor::{eval_all, eval_at, stl_oracle};
pub use parse::{parse_formula, parse_formula_with_signals};
pub use time::{check_sih, discretize_time, quantize, Real, RealInterval, TickInterval, Upper};
pub use trace::{load_trace, DiscreteTrace};
pub use verdict::Verdict;
