//! Finite-state, tick-driven system models.
//!
//! A model declares integer variables with finite domains and one or more
//! processes. Every tick each process fires one of its enabled transitions
//! (chosen nondeterministically); all processes read the valuation from the
//! start of the tick and their updates are applied together. A process with
//! nothing enabled keeps its variables unchanged.

mod models;
mod parse;

pub use models::{builtin_source, heart_abstract, pedestrian_crossing, traffic_light, HeartConfig, BUILTIN_NAMES};
pub use parse::{parse_model, ModelError, ModelErrorKind};

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automata::StateSpace;
use crate::time::Real;
use crate::trace::DiscreteTrace;

/// Integer expression over model variables; comparisons yield 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(i64),
    Var(usize),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic overflow")]
    Overflow,
}

impl Expr {
    pub fn eval(&self, vals: &[i64]) -> Result<i64, EvalError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => vals[*i],
            Expr::Neg(a) => a.eval(vals)?.checked_neg().ok_or(EvalError::Overflow)?,
            Expr::Not(a) => i64::from(a.eval(vals)? == 0),
            Expr::Bin(op, a, b) => {
                let x = a.eval(vals)?;
                // Short-circuit the logical operators.
                match op {
                    BinOp::And if x == 0 => return Ok(0),
                    BinOp::Or if x != 0 => return Ok(1),
                    _ => {}
                }
                let y = b.eval(vals)?;
                match op {
                    BinOp::Add => x.checked_add(y).ok_or(EvalError::Overflow)?,
                    BinOp::Sub => x.checked_sub(y).ok_or(EvalError::Overflow)?,
                    BinOp::Mul => x.checked_mul(y).ok_or(EvalError::Overflow)?,
                    BinOp::Div => {
                        if y == 0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        x.checked_div(y).ok_or(EvalError::Overflow)?
                    }
                    BinOp::Rem => {
                        if y == 0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        x.checked_rem(y).ok_or(EvalError::Overflow)?
                    }
                    BinOp::Eq => i64::from(x == y),
                    BinOp::Ne => i64::from(x != y),
                    BinOp::Lt => i64::from(x < y),
                    BinOp::Le => i64::from(x <= y),
                    BinOp::Gt => i64::from(x > y),
                    BinOp::Ge => i64::from(x >= y),
                    BinOp::And | BinOp::Or => i64::from(y != 0),
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
    pub init: i64,
}

/// Simultaneous assignments.
pub type Updates = Vec<(usize, Expr)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub guard: Expr,
    /// Alternatives; exactly one is taken when the transition fires.
    pub choices: Vec<Updates>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("transition `{transition}` sets `{variable}` to {value}, outside [{lo}..{hi}]")]
    Domain {
        transition: String,
        variable: String,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("transition `{transition}`: {source}")]
    Eval {
        transition: String,
        #[source]
        source: EvalError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("more than {0} reachable states")]
    TooManyStates(usize),
    #[error("a simulation needs at least one tick")]
    NoTicks,
}

/// A state: variable values, followed by the tick count when the model has
/// a tick limit.
pub type State = Box<[i64]>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    name: String,
    dt: Real,
    variables: Vec<Variable>,
    names: Vec<String>,
    processes: Vec<Process>,
    tick_limit: Option<u64>,
}

impl TransitionSystem {
    pub fn new(
        name: impl Into<String>,
        dt: Real,
        variables: Vec<Variable>,
        processes: Vec<Process>,
        tick_limit: Option<u64>,
    ) -> Self {
        let names = variables.iter().map(|v| v.name.clone()).collect();
        Self {
            name: name.into(),
            dt,
            variables,
            names,
            processes,
            tick_limit,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dt(&self) -> Real {
        self.dt
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn processes(&self) -> &[Process] {
        &self.processes
    }

    pub fn tick_limit(&self) -> Option<u64> {
        self.tick_limit
    }

    pub fn initial_state(&self) -> State {
        let mut s: Vec<i64> = self.variables.iter().map(|v| v.init).collect();
        if self.tick_limit.is_some() {
            s.push(0);
        }
        s.into_boxed_slice()
    }

    /// Update sets each process may apply from `s`, in declaration order.
    /// An empty list means the process idles.
    fn options(&self, s: &[i64], p: &Process) -> Result<Vec<(usize, usize)>, StepError> {
        let mut out = Vec::new();
        for (ti, t) in p.transitions.iter().enumerate() {
            let enabled = t.guard.eval(s).map_err(|source| StepError::Eval {
                transition: t.name.clone(),
                source,
            })?;
            if enabled != 0 {
                out.extend((0..t.choices.len()).map(|ci| (ti, ci)));
            }
        }
        Ok(out)
    }

    fn apply(&self, s: &[i64], next: &mut [i64], t: &Transition, updates: &Updates) -> Result<(), StepError> {
        for (var, e) in updates {
            let value = e.eval(s).map_err(|source| StepError::Eval {
                transition: t.name.clone(),
                source,
            })?;
            let v = &self.variables[*var];
            if value < v.lo || value > v.hi {
                return Err(StepError::Domain {
                    transition: t.name.clone(),
                    variable: v.name.clone(),
                    value,
                    lo: v.lo,
                    hi: v.hi,
                });
            }
            next[*var] = value;
        }
        Ok(())
    }

    fn frozen(&self, s: &[i64]) -> bool {
        matches!(self.tick_limit, Some(limit) if s[self.variables.len()] as u64 >= limit)
    }

    /// All successors of `s` in a fixed order: processes in declaration
    /// order, transitions and choices in declaration order within each.
    pub fn successors(&self, s: &[i64]) -> Result<Vec<State>, StepError> {
        let n = self.variables.len();
        if self.frozen(s) {
            return Ok(vec![s.into()]);
        }
        let mut base = s.to_vec();
        if self.tick_limit.is_some() {
            base[n] += 1;
        }
        let mut partial: Vec<Vec<i64>> = vec![base];
        for p in &self.processes {
            let opts = self.options(&s[..n], p)?;
            if opts.is_empty() {
                continue;
            }
            let mut grown = Vec::with_capacity(partial.len() * opts.len());
            for acc in &partial {
                for (ti, ci) in &opts {
                    let t = &p.transitions[*ti];
                    let mut next = acc.clone();
                    self.apply(&s[..n], &mut next[..n], t, &t.choices[*ci])?;
                    grown.push(next);
                }
            }
            partial = grown;
        }
        let mut seen = HashSet::new();
        Ok(partial
            .into_iter()
            .filter(|v| seen.insert(v.clone()))
            .map(Vec::into_boxed_slice)
            .collect())
    }

    /// One random successor, picking uniformly per process among enabled
    /// transitions and then among their choices.
    fn random_step(&self, s: &[i64], rng: &mut impl Rng) -> Result<State, StepError> {
        let n = self.variables.len();
        if self.frozen(s) {
            return Ok(s.into());
        }
        let mut next = s.to_vec();
        if self.tick_limit.is_some() {
            next[n] += 1;
        }
        for p in &self.processes {
            let mut enabled = Vec::new();
            for (ti, t) in p.transitions.iter().enumerate() {
                let g = t.guard.eval(&s[..n]).map_err(|source| StepError::Eval {
                    transition: t.name.clone(),
                    source,
                })?;
                if g != 0 {
                    enabled.push(ti);
                }
            }
            if enabled.is_empty() {
                continue;
            }
            let t = &p.transitions[enabled[rng.random_range(0..enabled.len())]];
            let c = &t.choices[rng.random_range(0..t.choices.len())];
            self.apply(&s[..n], &mut next[..n], t, c)?;
        }
        Ok(next.into_boxed_slice())
    }

    /// Breadth-first check that every reachable state keeps all variables in
    /// their domains. Returns the number of reachable states.
    pub fn check_domains(&self, max_states: usize) -> Result<usize, SystemError> {
        let init = self.initial_state();
        let mut seen: HashSet<State> = HashSet::from([init.clone()]);
        let mut queue = VecDeque::from([init]);
        while let Some(s) = queue.pop_front() {
            for t in self.successors(&s)? {
                if seen.insert(t.clone()) {
                    if seen.len() > max_states {
                        return Err(SystemError::TooManyStates(max_states));
                    }
                    queue.push_back(t);
                }
            }
        }
        Ok(seen.len())
    }
}

impl StateSpace for TransitionSystem {
    type State = State;

    fn signals(&self) -> &[String] {
        &self.names
    }

    fn value_factor(&self) -> i64 {
        1
    }

    fn initial_states(&self) -> Vec<State> {
        vec![self.initial_state()]
    }

    fn valuation<'a>(&'a self, s: &'a State) -> &'a [i64] {
        &s[..self.variables.len()]
    }

    fn successors(&self, s: &State) -> Result<Vec<State>, String> {
        TransitionSystem::successors(self, s).map_err(|e| e.to_string())
    }
}

/// Runs `sys` for `ticks` positions (the first is the initial valuation),
/// resolving nondeterminism with a generator seeded by `seed`.
pub fn simulate(sys: &TransitionSystem, ticks: usize, seed: u64) -> Result<DiscreteTrace, SystemError> {
    if ticks == 0 {
        return Err(SystemError::NoTicks);
    }
    let n = sys.variables.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = sys.initial_state();
    let mut rows = Vec::with_capacity(ticks);
    rows.push(s[..n].to_vec());
    for _ in 1..ticks {
        s = sys.random_step(&s, &mut rng)?;
        rows.push(s[..n].to_vec());
    }
    Ok(DiscreteTrace::new(sys.dt, sys.names.clone(), rows, 1).expect("rows match the declared variables"))
}

impl fmt::Display for TransitionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} (dt = {})", self.name, crate::time::format_real(&self.dt))?;
        for v in &self.variables {
            writeln!(f, "  var {} in [{}..{}] init {}", v.name, v.lo, v.hi, v.init)?;
        }
        for p in &self.processes {
            let names: Vec<&str> = p.transitions.iter().map(|t| t.name.as_str()).collect();
            writeln!(f, "  process {}: {}", p.name, names.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
