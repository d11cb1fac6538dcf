//! Direct LTL_P semantics with obligation bindings.
//!
//! A binder `@k` on `U`/`F`/`G` sets `j₀(k)` to the position where the
//! operator is evaluated; guard atoms read `j − j₀(k)`. Once that offset
//! passes the largest bound mentioned for `k` the guard can no longer change,
//! so offsets are clamped there. Together with a word's notion of
//! interchangeable positions (everything past the end of a finite trace,
//! congruent positions of a lasso) this keeps evaluation finite.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::ObligationRegistry;
use crate::formula::{CompiledPredicate, Dialect, DialectError, Formula, GuardAtom, ObligationId, PredicateError};
use crate::trace::DiscreteTrace;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtlpError {
    #[error("guard for obligation {0} evaluated outside its binder")]
    UnboundObligation(ObligationId),
    #[error("position {position} is outside the word (length {len})")]
    OutOfRange { position: u64, len: u64 },
    #[error("a lasso needs a non-empty cycle")]
    EmptyCycle,
    #[error("lasso rows must have one value per signal")]
    Dimension,
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

/// Entry positions of bound obligations.
pub type Env = BTreeMap<ObligationId, u64>;

/// A sequence of valuations, possibly infinite.
pub trait Word {
    fn signals(&self) -> &[String];

    fn factor(&self) -> i64;

    /// Representative of position `p`. Positions with the same
    /// representative have the same valuation and the same future.
    fn canonical(&self, p: u64) -> u64;

    /// Valuation at a representative, `None` when unknown.
    fn valuation(&self, c: u64) -> Option<&[i64]>;

    /// Number of positions that may be queried as start positions.
    fn span(&self) -> u64;
}

impl Word for DiscreteTrace {
    fn signals(&self) -> &[String] {
        DiscreteTrace::signals(self)
    }

    fn factor(&self) -> i64 {
        DiscreteTrace::factor(self)
    }

    fn canonical(&self, p: u64) -> u64 {
        p.min(self.len() as u64)
    }

    fn valuation(&self, c: u64) -> Option<&[i64]> {
        (c < self.len() as u64).then(|| self.row(c as usize))
    }

    fn span(&self) -> u64 {
        self.len() as u64
    }
}

/// Infinite word `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    signals: Vec<String>,
    factor: i64,
    prefix: Vec<Vec<i64>>,
    cycle: Vec<Vec<i64>>,
}

impl Lasso {
    pub fn new(
        signals: Vec<String>,
        factor: i64,
        prefix: Vec<Vec<i64>>,
        cycle: Vec<Vec<i64>>,
    ) -> Result<Self, LtlpError> {
        if cycle.is_empty() {
            return Err(LtlpError::EmptyCycle);
        }
        if prefix.iter().chain(&cycle).any(|r| r.len() != signals.len()) {
            return Err(LtlpError::Dimension);
        }
        Ok(Self {
            signals,
            factor,
            prefix,
            cycle,
        })
    }

    pub fn prefix(&self) -> &[Vec<i64>] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Vec<i64>] {
        &self.cycle
    }

    /// Valuation at any position of the unrolled word.
    pub fn at(&self, p: u64) -> &[i64] {
        let c = self.canonical(p) as usize;
        if c < self.prefix.len() {
            &self.prefix[c]
        } else {
            &self.cycle[c - self.prefix.len()]
        }
    }
}

impl Word for Lasso {
    fn signals(&self) -> &[String] {
        &self.signals
    }

    fn factor(&self) -> i64 {
        self.factor
    }

    fn canonical(&self, p: u64) -> u64 {
        let n = self.prefix.len() as u64;
        if p < n {
            p
        } else {
            n + (p - n) % self.cycle.len() as u64
        }
    }

    fn valuation(&self, c: u64) -> Option<&[i64]> {
        Some(self.at(c))
    }

    fn span(&self) -> u64 {
        (self.prefix.len() + self.cycle.len()) as u64
    }
}

#[derive(Debug, Clone)]
enum Node {
    True,
    Atom(CompiledPredicate),
    Guard(GuardAtom),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    Until(usize, usize, Option<ObligationId>),
    Eventually(usize, Option<ObligationId>),
    Always(usize, Option<ObligationId>),
}

/// Reusable evaluator for one formula over one word.
pub struct LtlpEvaluator<'w, W: Word> {
    word: &'w W,
    nodes: Vec<Node>,
    root: usize,
    /// Unbound obligations per node, sorted.
    free: Vec<Vec<ObligationId>>,
    /// Offset past which each obligation's guards are constant.
    saturation: HashMap<ObligationId, u64>,
    memo: HashMap<(usize, u64, Vec<u64>), Verdict>,
    bindings: BTreeSet<(ObligationId, u64)>,
    registry: ObligationRegistry,
}

const UNBOUND: u64 = u64::MAX;

impl<'w, W: Word> LtlpEvaluator<'w, W> {
    pub fn new(psi: &Formula, word: &'w W) -> Result<Self, LtlpError> {
        psi.check_dialect(Dialect::Ltlp)?;
        let mut ev = LtlpEvaluator {
            word,
            nodes: Vec::new(),
            root: 0,
            free: Vec::new(),
            saturation: HashMap::new(),
            memo: HashMap::new(),
            bindings: BTreeSet::new(),
            registry: ObligationRegistry::from_formula(psi),
        };
        ev.root = ev.compile(psi)?;
        Ok(ev)
    }

    fn push(&mut self, node: Node, free: BTreeSet<ObligationId>) -> usize {
        self.nodes.push(node);
        self.free.push(free.into_iter().collect());
        self.nodes.len() - 1
    }

    fn compile(&mut self, f: &Formula) -> Result<usize, LtlpError> {
        let free_of = |ev: &Self, ids: &[usize], bind: Option<ObligationId>| {
            let mut s: BTreeSet<ObligationId> = ids.iter().flat_map(|i| ev.free[*i].iter().copied()).collect();
            if let Some(k) = bind {
                s.remove(&k);
            }
            s
        };
        Ok(match f {
            Formula::True => self.push(Node::True, BTreeSet::new()),
            Formula::Atom(p) => {
                let c = p.compile(self.word.signals(), self.word.factor())?;
                self.push(Node::Atom(c), BTreeSet::new())
            }
            Formula::Guard(g) => {
                let sat = self.saturation.entry(g.obligation).or_insert(0);
                *sat = (*sat).max(g.horizon() + 1);
                self.push(Node::Guard(*g), BTreeSet::from([g.obligation]))
            }
            Formula::Not(a) => {
                let a = self.compile(a)?;
                let fr = free_of(self, &[a], None);
                self.push(Node::Not(a), fr)
            }
            Formula::Next(a) => {
                let a = self.compile(a)?;
                let fr = free_of(self, &[a], None);
                self.push(Node::Next(a), fr)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                let fr = free_of(self, &[a, b], None);
                let node = match f {
                    Formula::And(..) => Node::And(a, b),
                    Formula::Or(..) => Node::Or(a, b),
                    _ => Node::Implies(a, b),
                };
                self.push(node, fr)
            }
            Formula::Until { lhs, rhs, bind, .. } => {
                let (a, b) = (self.compile(lhs)?, self.compile(rhs)?);
                let fr = free_of(self, &[a, b], *bind);
                self.push(Node::Until(a, b, *bind), fr)
            }
            Formula::Eventually { body, bind, .. } => {
                let a = self.compile(body)?;
                let fr = free_of(self, &[a], *bind);
                self.push(Node::Eventually(a, *bind), fr)
            }
            Formula::Always { body, bind, .. } => {
                let a = self.compile(body)?;
                let fr = free_of(self, &[a], *bind);
                self.push(Node::Always(a, *bind), fr)
            }
        })
    }

    /// Verdict at position `j` under the given bindings.
    pub fn eval(&mut self, j: u64, env: &Env) -> Result<Verdict, LtlpError> {
        if j >= self.word.span() {
            return Err(LtlpError::OutOfRange {
                position: j,
                len: self.word.span(),
            });
        }
        self.eval_node(self.root, j, env)
    }

    /// Obligation instances `(k, j₀)` created so far.
    pub fn bindings(&self) -> &BTreeSet<(ObligationId, u64)> {
        &self.bindings
    }

    pub fn registry(&self) -> &ObligationRegistry {
        &self.registry
    }

    /// Distinct obligation instances whose finite window `[j₀+a, j₀+b]`
    /// contains `j`.
    pub fn live_obligations(&self, j: u64) -> usize {
        self.bindings
            .iter()
            .filter(|(k, j0)| {
                j >= *j0
                    && self
                        .registry
                        .get(*k)
                        .is_some_and(|w| w.hi.is_some() && w.contains_offset(j - j0))
            })
            .count()
    }

    fn offsets(&self, ids: &[ObligationId], p: u64, env: &Env) -> Vec<u64> {
        ids.iter()
            .map(|k| match env.get(k) {
                Some(j0) => (p.saturating_sub(*j0)).min(self.saturation.get(k).copied().unwrap_or(0)),
                None => UNBOUND,
            })
            .collect()
    }

    fn eval_node(&mut self, id: usize, p: u64, env: &Env) -> Result<Verdict, LtlpError> {
        let key = (id, self.word.canonical(p), self.offsets(&self.free[id], p, env));
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let v = match self.nodes[id].clone() {
            Node::True => Verdict::True,
            Node::Atom(c) => match self.word.valuation(self.word.canonical(p)) {
                Some(row) => Verdict::from_bool(c.holds(row)),
                None => Verdict::Inconclusive,
            },
            Node::Guard(g) => {
                let j0 = *env
                    .get(&g.obligation)
                    .ok_or(LtlpError::UnboundObligation(g.obligation))?;
                Verdict::from_bool(g.holds_at_offset(p - j0))
            }
            Node::Not(a) => !self.eval_node(a, p, env)?,
            Node::And(a, b) => self.eval_node(a, p, env)? & self.eval_node(b, p, env)?,
            Node::Or(a, b) => self.eval_node(a, p, env)? | self.eval_node(b, p, env)?,
            Node::Implies(a, b) => self.eval_node(a, p, env)?.implies(self.eval_node(b, p, env)?),
            Node::Next(a) => self.eval_node(a, p + 1, env)?,
            Node::Until(a, b, bind) => self.scan(id, p, env, bind, Scan::Until(a, b))?,
            Node::Eventually(a, bind) => self.scan(id, p, env, bind, Scan::Eventually(a))?,
            Node::Always(a, bind) => self.scan(id, p, env, bind, Scan::Always(a))?,
        };
        self.memo.insert(key, v);
        Ok(v)
    }

    /// Walks positions from `p` until the verdict is settled or the
    /// (position class, clamped offsets) state repeats.
    fn scan(
        &mut self,
        id: usize,
        p: u64,
        env: &Env,
        bind: Option<ObligationId>,
        op: Scan,
    ) -> Result<Verdict, LtlpError> {
        let mut inner = env.clone();
        if let Some(k) = bind {
            inner.insert(k, p);
            self.bindings.insert((k, p));
        }
        let mut watched: Vec<ObligationId> = self.free[id].clone();
        if let Some(k) = bind {
            watched.push(k);
        }
        let mut seen = HashSet::new();
        let (mut acc, mut prefix) = match op {
            Scan::Always(_) => (Verdict::True, Verdict::True),
            _ => (Verdict::False, Verdict::True),
        };
        let mut q = p;
        loop {
            let state = (self.word.canonical(q), self.offsets(&watched, q, &inner));
            if !seen.insert(state) {
                break;
            }
            match op {
                Scan::Until(a, b) => {
                    acc = acc | (prefix & self.eval_node(b, q, &inner)?);
                    if acc == Verdict::True {
                        break;
                    }
                    prefix = prefix & self.eval_node(a, q, &inner)?;
                    if prefix == Verdict::False {
                        break;
                    }
                }
                Scan::Eventually(a) => {
                    acc = acc | self.eval_node(a, q, &inner)?;
                    if acc == Verdict::True {
                        break;
                    }
                }
                Scan::Always(a) => {
                    acc = acc & self.eval_node(a, q, &inner)?;
                    if acc == Verdict::False {
                        break;
                    }
                }
            }
            q += 1;
        }
        Ok(acc)
    }
}

#[derive(Clone, Copy)]
enum Scan {
    Until(usize, usize),
    Eventually(usize),
    Always(usize),
}

/// Verdict of `psi` at position `j` of `word` under bindings `env`.
pub fn eval_ltlp<W: Word>(psi: &Formula, word: &W, j: u64, env: &Env) -> Result<Verdict, LtlpError> {
    LtlpEvaluator::new(psi, word)?.eval(j, env)
}

/// Number of obligation instances live at `j` after evaluating `psi` at
/// every start position of `word`.
pub fn live_obligation_count<W: Word>(psi: &Formula, word: &W, j: u64) -> Result<usize, LtlpError> {
    let mut ev = LtlpEvaluator::new(psi, word)?;
    for p in 0..word.span() {
        ev.eval(p, &Env::new())?;
    }
    Ok(ev.live_obligations(j))
}
