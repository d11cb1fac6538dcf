//! Product exploration and accepting-cycle detection.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use super::buchi::BuchiAutomaton;
use super::AutomataError;
use crate::formula::CompiledPredicate;
use crate::translate::{Lasso, Word};

/// Default cap on stored product states.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;
/// Default cap on search depth.
pub const DEFAULT_MAX_DEPTH: usize = 200_000;

/// A finite-state system whose runs are infinite valuation sequences.
pub trait StateSpace {
    type State: Clone + Eq + Hash;

    /// Names of the valuation columns.
    fn signals(&self) -> &[String];

    /// Scale of the valuation values (1 for plain integers).
    fn value_factor(&self) -> i64;

    fn initial_states(&self) -> Vec<Self::State>;

    fn valuation<'a>(&'a self, s: &'a Self::State) -> &'a [i64];

    /// Successors in a fixed order. Must be non-empty. An error describes
    /// a modelling fault such as a variable leaving its domain.
    fn successors(&self, s: &Self::State) -> Result<Vec<Self::State>, String>;
}

/// A lasso word seen as a single-run system over positions.
pub struct LassoSpace<'a> {
    lasso: &'a Lasso,
}

impl<'a> LassoSpace<'a> {
    pub fn new(lasso: &'a Lasso) -> Self {
        Self { lasso }
    }
}

impl StateSpace for LassoSpace<'_> {
    type State = u64;

    fn signals(&self) -> &[String] {
        self.lasso.signals()
    }

    fn value_factor(&self) -> i64 {
        self.lasso.factor()
    }

    fn initial_states(&self) -> Vec<u64> {
        vec![0]
    }

    fn valuation<'a>(&'a self, s: &'a u64) -> &'a [i64] {
        self.lasso.at(*s)
    }

    fn successors(&self, s: &u64) -> Result<Vec<u64>, String> {
        Ok(vec![self.lasso.canonical(s + 1)])
    }
}

/// Search budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_states: DEFAULT_MAX_STATES,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

/// Which budget ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Limit {
    States,
    Depth,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::States => "state budget",
            Limit::Depth => "depth budget",
        })
    }
}

/// One position of a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub tick: u64,
    pub values: Vec<i64>,
    pub automaton_state: usize,
}

/// Lasso-shaped run `prefix · cycle^ω` accepted by the product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub signals: Vec<String>,
    pub value_factor: i64,
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
}

impl Counterexample {
    /// The system valuations as an infinite word.
    pub fn to_lasso(&self) -> Lasso {
        let rows = |steps: &[Step]| steps.iter().map(|s| s.values.clone()).collect();
        Lasso::new(
            self.signals.clone(),
            self.value_factor,
            rows(&self.prefix),
            rows(&self.cycle),
        )
        .expect("cycle is non-empty and rows match the signals")
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, s: &Step| {
            let vals: Vec<String> = self
                .signals
                .iter()
                .zip(&s.values)
                .map(|(n, v)| format!("{n}={v}"))
                .collect();
            writeln!(f, "  tick {:>6}  {}  [automaton {}]", s.tick, vals.join(" "), s.automaton_state)
        };
        writeln!(f, "prefix ({} steps):", self.prefix.len())?;
        for s in &self.prefix {
            line(f, s)?;
        }
        writeln!(f, "cycle ({} steps, repeats forever):", self.cycle.len())?;
        for s in &self.cycle {
            line(f, s)?;
        }
        Ok(())
    }
}

/// Result of an emptiness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Empty,
    Cycle(Counterexample),
    ResourceLimit(Limit),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub states_explored: usize,
}

struct Product<'a, S: StateSpace> {
    sys: &'a S,
    aut: &'a BuchiAutomaton,
    atoms: Vec<CompiledPredicate>,
    states: Vec<(S::State, usize)>,
    ids: HashMap<(S::State, usize), u32>,
}

impl<'a, S: StateSpace> Product<'a, S> {
    fn intern(&mut self, s: S::State, q: usize) -> (u32, bool) {
        let key = (s, q);
        if let Some(id) = self.ids.get(&key) {
            return (*id, false);
        }
        let id = self.states.len() as u32;
        self.states.push(key.clone());
        self.ids.insert(key, id);
        (id, true)
    }

    fn successors(&mut self, id: u32) -> Result<Vec<u32>, AutomataError> {
        let (s, q) = self.states[id as usize].clone();
        let vals = self.sys.valuation(&s);
        let enabled: Vec<usize> = self.aut.states()[q]
            .transitions
            .iter()
            .filter(|t| t.label.iter().all(|l| self.atoms[l.atom].holds(vals) == l.positive))
            .map(|t| t.target)
            .collect();
        if enabled.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for s2 in self.sys.successors(&s).map_err(AutomataError::Model)? {
            for q2 in &enabled {
                out.push(self.intern(s2.clone(), *q2).0);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Color {
    White,
    Cyan,
    Blue,
}

/// Nested depth-first search for a reachable accepting cycle in the
/// product of `sys` and `aut`.
pub fn find_accepting_cycle<S: StateSpace>(
    sys: &S,
    aut: &BuchiAutomaton,
    budget: Budget,
) -> Result<SearchOutcome, AutomataError> {
    let atoms = aut
        .atoms()
        .iter()
        .map(|a| a.compile(sys.signals(), sys.value_factor()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut prod = Product {
        sys,
        aut,
        atoms,
        states: Vec::new(),
        ids: HashMap::new(),
    };
    let mut color: Vec<Color> = Vec::new();
    let mut red: Vec<bool> = Vec::new();
    // Position of each cyan state on the blue stack.
    let mut stack_pos: HashMap<u32, usize> = HashMap::new();

    let limit = |result: Limit, n: usize| SearchOutcome {
        result: SearchResult::ResourceLimit(result),
        states_explored: n,
    };

    for s0 in sys.initial_states() {
        let (root, _) = prod.intern(s0, aut.initial());
        if prod.states.len() > budget.max_states {
            return Ok(limit(Limit::States, prod.states.len()));
        }
        color.resize(prod.states.len(), Color::White);
        red.resize(prod.states.len(), false);
        if color[root as usize] != Color::White {
            continue;
        }
        // Blue search: (state, successors, next index).
        let mut blue: Vec<(u32, Vec<u32>, usize)> = Vec::new();
        let succ = prod.successors(root)?;
        color.resize(prod.states.len(), Color::White);
        red.resize(prod.states.len(), false);
        color[root as usize] = Color::Cyan;
        stack_pos.insert(root, 0);
        blue.push((root, succ, 0));
        while let Some(frame) = blue.last_mut() {
            if frame.2 < frame.1.len() {
                let t = frame.1[frame.2];
                frame.2 += 1;
                if color[t as usize] != Color::White {
                    continue;
                }
                if blue.len() >= budget.max_depth {
                    return Ok(limit(Limit::Depth, prod.states.len()));
                }
                let succ = prod.successors(t)?;
                if prod.states.len() > budget.max_states {
                    return Ok(limit(Limit::States, prod.states.len()));
                }
                color.resize(prod.states.len(), Color::White);
                red.resize(prod.states.len(), false);
                color[t as usize] = Color::Cyan;
                stack_pos.insert(t, blue.len());
                blue.push((t, succ, 0));
                continue;
            }
            let (s, _, _) = blue.last().cloned().expect("non-empty");
            if aut.is_accepting(prod.states[s as usize].1) {
                // Red search from the seed for any state on the blue stack.
                let mut reds: Vec<(u32, Vec<u32>, usize)> = Vec::new();
                red[s as usize] = true;
                let succ = prod.successors(s)?;
                reds.push((s, succ, 0));
                while let Some(frame) = reds.last_mut() {
                    if frame.2 >= frame.1.len() {
                        reds.pop();
                        continue;
                    }
                    let t = frame.1[frame.2];
                    frame.2 += 1;
                    if color[t as usize] == Color::Cyan {
                        let start = stack_pos[&t];
                        let mut cycle_ids: Vec<u32> = blue[start..].iter().map(|f| f.0).collect();
                        cycle_ids.extend(reds.iter().skip(1).map(|f| f.0));
                        let prefix_ids: Vec<u32> = blue[..start].iter().map(|f| f.0).collect();
                        let cex = build_counterexample(&prod, &prefix_ids, &cycle_ids);
                        return Ok(SearchOutcome {
                            result: SearchResult::Cycle(cex),
                            states_explored: prod.states.len(),
                        });
                    }
                    if red[t as usize] {
                        continue;
                    }
                    if blue.len() + reds.len() >= budget.max_depth {
                        return Ok(limit(Limit::Depth, prod.states.len()));
                    }
                    red[t as usize] = true;
                    let succ = prod.successors(t)?;
                    if prod.states.len() > budget.max_states {
                        return Ok(limit(Limit::States, prod.states.len()));
                    }
                    color.resize(prod.states.len(), Color::White);
                    red.resize(prod.states.len(), false);
                    reds.push((t, succ, 0));
                }
            }
            color[s as usize] = Color::Blue;
            stack_pos.remove(&s);
            blue.pop();
        }
    }
    Ok(SearchOutcome {
        result: SearchResult::Empty,
        states_explored: prod.states.len(),
    })
}

fn build_counterexample<S: StateSpace>(prod: &Product<'_, S>, prefix: &[u32], cycle: &[u32]) -> Counterexample {
    let step = |tick: usize, id: u32| {
        let (s, q) = &prod.states[id as usize];
        Step {
            tick: tick as u64,
            values: prod.sys.valuation(s).to_vec(),
            automaton_state: *q,
        }
    };
    Counterexample {
        signals: prod.sys.signals().to_vec(),
        value_factor: prod.sys.value_factor(),
        prefix: prefix.iter().enumerate().map(|(i, id)| step(i, *id)).collect(),
        cycle: cycle
            .iter()
            .enumerate()
            .map(|(i, id)| step(prefix.len() + i, *id))
            .collect(),
    }
}

/// Whether the automaton accepts the lasso word.
pub fn accepts(aut: &BuchiAutomaton, lasso: &Lasso) -> Result<bool, AutomataError> {
    let out = find_accepting_cycle(&LassoSpace::new(lasso), aut, Budget::default())?;
    match out.result {
        SearchResult::Empty => Ok(false),
        SearchResult::Cycle(_) => Ok(true),
        SearchResult::ResourceLimit(l) => Err(AutomataError::Limit(l)),
    }
}
