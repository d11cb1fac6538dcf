//! Tableau construction from LTL_P to Büchi automata.
//!
//! The formula is put in negation normal form and expanded into a
//! generalized Büchi automaton whose states are sets of formula instances.
//! An instance pairs a subformula with the offsets `j − j₀` of the
//! obligations it can see; offsets advance by one per step and saturate
//! once no guard can change any more, so the instance space is finite.
//! Binders reset their obligation's offset to 0 when entered, which gives
//! every activation of a bounded operator its own copy of `j₀`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::AutomataError;
use crate::formula::{Dialect, Formula, GuardAtom, LinearPredicate, ObligationId};

/// Default cap on automaton states during construction.
pub const DEFAULT_MAX_AUTOMATON_STATES: usize = 1_000_000;

/// Possibly negated atom in a transition label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub atom: usize,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuchiTransition {
    /// Conjunction of literals; empty means `true`.
    pub label: Vec<Literal>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuchiState {
    pub accepting: bool,
    pub transitions: Vec<BuchiTransition>,
    /// Pending formula instances, for diagnostics.
    pub description: String,
}

/// State-based Büchi automaton with a single initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    atoms: Vec<LinearPredicate>,
    states: Vec<BuchiState>,
    initial: usize,
}

impl BuchiAutomaton {
    pub fn atoms(&self) -> &[LinearPredicate] {
        &self.atoms
    }

    pub fn states(&self) -> &[BuchiState] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.transitions.len()).sum()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.states[q].accepting
    }
}

impl fmt::Display for BuchiAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.atoms.iter().enumerate() {
            writeln!(f, "atom a{i}: {atom}")?;
        }
        for (q, s) in self.states.iter().enumerate() {
            let init = if q == self.initial { " initial" } else { "" };
            let acc = if s.accepting { " accepting" } else { "" };
            writeln!(f, "state {q}{init}{acc}: {}", s.description)?;
            for t in &s.transitions {
                let label = if t.label.is_empty() {
                    "true".to_string()
                } else {
                    t.label
                        .iter()
                        .map(|l| format!("{}a{}", if l.positive { "" } else { "!" }, l.atom))
                        .collect::<Vec<_>>()
                        .join(" && ")
                };
                writeln!(f, "  {label} -> {}", t.target)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    Guard(GuardAtom, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize, Option<ObligationId>),
    Release(usize, usize, Option<ObligationId>),
}

/// Subformula instance: node plus offsets of the obligations in its scope.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Inst {
    node: usize,
    offsets: Box<[u64]>,
}

struct Tableau {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    atoms: Vec<LinearPredicate>,
    /// Sorted obligations visible inside each node (free ones plus its binder).
    scope: Vec<Vec<ObligationId>>,
    /// Free obligations of each node.
    free: Vec<BTreeSet<ObligationId>>,
    saturation: BTreeMap<ObligationId, u64>,
}

/// One way to satisfy a set of instances for one step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Branch {
    lits: BTreeSet<Literal>,
    next: BTreeSet<Inst>,
    /// Until nodes whose saturated instance was postponed on this step.
    postponed: BTreeSet<usize>,
}

impl Tableau {
    fn new() -> Self {
        Self {
            nodes: Vec::new(),
            index: HashMap::new(),
            atoms: Vec::new(),
            scope: Vec::new(),
            free: Vec::new(),
            saturation: BTreeMap::new(),
        }
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let (free, scope) = match &node {
            Node::True | Node::False | Node::Lit(..) => (BTreeSet::new(), Vec::new()),
            Node::Guard(g, _) => {
                let sat = self.saturation.entry(g.obligation).or_insert(0);
                *sat = (*sat).max(g.horizon() + 1);
                (BTreeSet::from([g.obligation]), vec![g.obligation])
            }
            Node::Next(a) => (self.free[*a].clone(), self.free[*a].iter().copied().collect()),
            Node::And(a, b) | Node::Or(a, b) => {
                let s: BTreeSet<_> = self.free[*a].union(&self.free[*b]).copied().collect();
                (s.clone(), s.into_iter().collect())
            }
            Node::Until(a, b, bind) | Node::Release(a, b, bind) => {
                let mut inner: BTreeSet<_> = self.free[*a].union(&self.free[*b]).copied().collect();
                let mut free = inner.clone();
                if let Some(k) = bind {
                    free.remove(k);
                    inner.insert(*k);
                    self.saturation.entry(*k).or_insert(0);
                }
                (free, inner.into_iter().collect())
            }
        };
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.free.push(free);
        self.scope.push(scope);
        self.index.insert(node, id);
        id
    }

    fn atom(&mut self, p: &LinearPredicate) -> usize {
        match self.atoms.iter().position(|a| a == p) {
            Some(i) => i,
            None => {
                self.atoms.push(p.clone());
                self.atoms.len() - 1
            }
        }
    }

    /// Negation normal form of `f` (negated when `positive` is false).
    fn nnf(&mut self, f: &Formula, positive: bool) -> usize {
        let node = match f {
            Formula::True => {
                if positive {
                    Node::True
                } else {
                    Node::False
                }
            }
            Formula::Atom(p) => Node::Lit(self.atom(p), positive),
            Formula::Guard(g) => Node::Guard(*g, positive),
            Formula::Not(a) => return self.nnf(a, !positive),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (x, y) = (self.nnf(a, positive), self.nnf(b, positive));
                if matches!(f, Formula::And(..)) == positive {
                    Node::And(x, y)
                } else {
                    Node::Or(x, y)
                }
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.nnf(a, !positive), self.nnf(b, positive));
                if positive {
                    Node::Or(x, y)
                } else {
                    Node::And(x, y)
                }
            }
            Formula::Next(a) => Node::Next(self.nnf(a, positive)),
            Formula::Until { lhs, rhs, bind, .. } => {
                let (x, y) = (self.nnf(lhs, positive), self.nnf(rhs, positive));
                if positive {
                    Node::Until(x, y, *bind)
                } else {
                    Node::Release(x, y, *bind)
                }
            }
            Formula::Eventually { body, bind, .. } => {
                let y = self.nnf(body, positive);
                if positive {
                    let t = self.intern(Node::True);
                    Node::Until(t, y, *bind)
                } else {
                    let ff = self.intern(Node::False);
                    Node::Release(ff, y, *bind)
                }
            }
            Formula::Always { body, bind, .. } => {
                let y = self.nnf(body, positive);
                if positive {
                    let ff = self.intern(Node::False);
                    Node::Release(ff, y, *bind)
                } else {
                    let t = self.intern(Node::True);
                    Node::Until(t, y, *bind)
                }
            }
        };
        self.intern(node)
    }

    fn bind_of(&self, node: usize) -> Option<ObligationId> {
        match self.nodes[node] {
            Node::Until(_, _, b) | Node::Release(_, _, b) => b,
            _ => None,
        }
    }

    /// Instance of `child` entered from `parent`: a binder starts its own
    /// obligation at offset 0, everything else inherits.
    fn enter(&self, parent: &Inst, child: usize) -> Inst {
        let pscope = &self.scope[parent.node];
        let bind = self.bind_of(child);
        let offsets = self.scope[child]
            .iter()
            .map(|k| {
                if Some(*k) == bind {
                    0
                } else {
                    let i = pscope.binary_search(k).expect("child scope is inside parent scope");
                    parent.offsets[i]
                }
            })
            .collect();
        Inst { node: child, offsets }
    }

    /// Same instance one step later.
    fn advance(&self, inst: &Inst) -> Inst {
        self.shifted(inst, None)
    }

    /// Offsets advanced by one step, except for `fresh`, which was just bound.
    fn shifted(&self, inst: &Inst, fresh: Option<ObligationId>) -> Inst {
        let offsets = self.scope[inst.node]
            .iter()
            .zip(inst.offsets.iter())
            .map(|(k, o)| {
                if Some(*k) == fresh {
                    *o
                } else {
                    (o + 1).min(self.saturation[k])
                }
            })
            .collect();
        Inst { node: inst.node, offsets }
    }

    /// Continuation of a temporal node: keeps its own binding.
    fn step_child(&self, inst: &Inst, child: usize) -> Inst {
        self.enter(inst, child)
    }

    fn saturated(&self, inst: &Inst) -> bool {
        self.scope[inst.node]
            .iter()
            .zip(inst.offsets.iter())
            .all(|(k, o)| *o == self.saturation[k])
    }

    fn guard_value(&self, inst: &Inst, g: &GuardAtom) -> bool {
        let i = self.scope[inst.node]
            .binary_search(&g.obligation)
            .expect("guard obligation is in scope");
        g.holds_at_offset(inst.offsets[i])
    }

    fn expand(&self, set: &[Inst]) -> Vec<Branch> {
        let mut out = BTreeSet::new();
        let start = Branch {
            lits: BTreeSet::new(),
            next: BTreeSet::new(),
            postponed: BTreeSet::new(),
        };
        self.expand_rec(set.to_vec(), BTreeSet::new(), start, &mut out);
        out.into_iter().collect()
    }

    fn expand_rec(
        &self,
        mut todo: Vec<Inst>,
        mut done: BTreeSet<Inst>,
        mut branch: Branch,
        out: &mut BTreeSet<Branch>,
    ) {
        while let Some(inst) = todo.pop() {
            if !done.insert(inst.clone()) {
                continue;
            }
            match &self.nodes[inst.node] {
                Node::True => {}
                Node::False => return,
                Node::Lit(a, pos) => {
                    let lit = Literal { atom: *a, positive: *pos };
                    let opposite = Literal { atom: *a, positive: !*pos };
                    if branch.lits.contains(&opposite) {
                        return;
                    }
                    branch.lits.insert(lit);
                }
                Node::Guard(g, pos) => {
                    if self.guard_value(&inst, g) != *pos {
                        return;
                    }
                }
                Node::And(a, b) => {
                    todo.push(self.enter(&inst, *a));
                    todo.push(self.enter(&inst, *b));
                }
                Node::Or(a, b) => {
                    let mut alt = todo.clone();
                    alt.push(self.enter(&inst, *b));
                    self.expand_rec(alt, done.clone(), branch.clone(), out);
                    todo.push(self.enter(&inst, *a));
                }
                Node::Next(a) => {
                    // A binder under X captures the next position.
                    let child = self.shifted(&self.enter(&inst, *a), self.bind_of(*a));
                    if self.nodes[child.node] != Node::True {
                        branch.next.insert(child);
                    }
                }
                Node::Until(l, r, _) => {
                    // φ U ψ ≡ ψ ∨ (φ ∧ X(φ U ψ))
                    let mut alt = todo.clone();
                    alt.push(self.step_child(&inst, *l));
                    let mut later = branch.clone();
                    later.next.insert(self.advance(&inst));
                    if self.saturated(&inst) {
                        later.postponed.insert(inst.node);
                    }
                    self.expand_rec(alt, done.clone(), later, out);
                    todo.push(self.step_child(&inst, *r));
                }
                Node::Release(l, r, _) => {
                    // φ R ψ ≡ ψ ∧ (φ ∨ X(φ R ψ))
                    let mut alt = todo.clone();
                    alt.push(self.step_child(&inst, *r));
                    let mut later = branch.clone();
                    later.next.insert(self.advance(&inst));
                    self.expand_rec(alt, done.clone(), later, out);
                    todo.push(self.step_child(&inst, *r));
                    todo.push(self.step_child(&inst, *l));
                }
            }
        }
        out.insert(branch);
    }

    fn describe(&self, set: &[Inst]) -> String {
        if set.is_empty() {
            return "{}".to_string();
        }
        let parts: Vec<String> = set
            .iter()
            .map(|i| {
                let offs: Vec<String> = self.scope[i.node]
                    .iter()
                    .zip(i.offsets.iter())
                    .map(|(k, o)| format!("@{k}+{o}"))
                    .collect();
                format!("n{}{}", i.node, offs.join(""))
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Büchi automaton accepting exactly the infinite words satisfying `psi`.
pub fn ltl_to_buchi(psi: &Formula) -> Result<BuchiAutomaton, AutomataError> {
    ltl_to_buchi_bounded(psi, DEFAULT_MAX_AUTOMATON_STATES)
}

type SetBranch = (Vec<Literal>, usize, BTreeSet<usize>);

/// As [`ltl_to_buchi`], giving up once more than `max_states` states exist.
pub fn ltl_to_buchi_bounded(psi: &Formula, max_states: usize) -> Result<BuchiAutomaton, AutomataError> {
    psi.check_dialect(Dialect::Ltlp)?;
    let mut tab = Tableau::new();
    let root = tab.nnf(psi, true);
    if let Some(k) = tab.free[root].iter().next() {
        return Err(AutomataError::UnboundObligation(*k));
    }
    let root_inst = Inst {
        node: root,
        offsets: vec![0; tab.scope[root].len()].into_boxed_slice(),
    };

    // Acceptance sets: one per Until node.
    let untils: Vec<usize> = (0..tab.nodes.len())
        .filter(|n| matches!(tab.nodes[*n], Node::Until(..)))
        .collect();
    let levels = untils.len();

    // Generalized automaton over instance sets, explored breadth-first.
    let mut sets: Vec<Vec<Inst>> = Vec::new();
    let mut set_ids: HashMap<Vec<Inst>, usize> = HashMap::new();
    // Per set: (label, successor set, satisfied acceptance sets).
    let mut set_branches: Vec<Vec<SetBranch>> = Vec::new();
    let init_set = if tab.nodes[root] == Node::True { vec![] } else { vec![root_inst] };
    set_ids.insert(init_set.clone(), 0);
    sets.push(init_set);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let mut edges = Vec::new();
        for b in tab.expand(&sets[id]) {
            let next: Vec<Inst> = b.next.into_iter().collect();
            let target = match set_ids.get(&next) {
                Some(t) => *t,
                None => {
                    let t = sets.len();
                    if t >= max_states {
                        return Err(AutomataError::AutomatonTooLarge { states: t });
                    }
                    set_ids.insert(next.clone(), t);
                    sets.push(next);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((b.lits.into_iter().collect(), target, b.postponed));
        }
        if set_branches.len() <= id {
            set_branches.resize_with(id + 1, Vec::new);
        }
        set_branches[id] = edges;
    }

    // Degeneralize: level i waits for acceptance set i; level `levels`
    // marks a completed round and is the accepting copy.
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states: Vec<BuchiState> = Vec::new();
    let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
    ids.insert((0, 0), 0);
    pending.push_back((0, 0));
    let mut order = vec![(0usize, 0usize)];
    while let Some((set, level)) = pending.pop_front() {
        let start = if level == levels { 0 } else { level };
        let mut transitions = Vec::new();
        for (label, target, postponed) in &set_branches[set] {
            let mut l = start;
            while l < levels && !postponed.contains(&untils[l]) {
                l += 1;
            }
            let key = (*target, l);
            let t = match ids.get(&key) {
                Some(t) => *t,
                None => {
                    let t = order.len();
                    if t >= max_states {
                        return Err(AutomataError::AutomatonTooLarge { states: t });
                    }
                    ids.insert(key, t);
                    order.push(key);
                    pending.push_back(key);
                    t
                }
            };
            let tr = BuchiTransition {
                label: label.clone(),
                target: t,
            };
            if !transitions.contains(&tr) {
                transitions.push(tr);
            }
        }
        let id = ids[&(set, level)];
        if states.len() <= id {
            states.resize_with(id + 1, || BuchiState {
                accepting: false,
                transitions: Vec::new(),
                description: String::new(),
            });
        }
        states[id] = BuchiState {
            accepting: level == levels,
            transitions,
            description: format!("{} level {level}", tab.describe(&sets[set])),
        };
    }
    Ok(BuchiAutomaton {
        atoms: tab.atoms,
        states,
        initial: 0,
    })
}
