//! Offline SSTL monitoring over finite discrete traces.
//!
//! Positions at or beyond the end of the trace are unknown: every atom there
//! is `Inconclusive`, and all such positions are interchangeable, so a
//! formula has one "tail" value past the end. Evaluation is Kleene
//! three-valued, which makes every conclusive verdict hold for all
//! continuations of the trace.

mod oracle;

pub use oracle::stl_oracle;

use thiserror::Error;

use crate::formula::{CompiledPredicate, Dialect, DialectError, Formula, PredicateError};
use crate::time::{Tick, Upper};
use crate::trace::DiscreteTrace;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonitorError {
    #[error("tick {tick} is outside the trace (length {len})")]
    OutOfRange { tick: u64, len: usize },
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

/// Formula with atoms bound to trace columns.
#[derive(Debug, Clone)]
enum Node {
    True,
    Atom(CompiledPredicate),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Until(Box<Node>, Box<Node>, Tick, Upper<Tick>),
    Eventually(Box<Node>, Tick, Upper<Tick>),
    Always(Box<Node>, Tick, Upper<Tick>),
}

fn compile(phi: &Formula, w: &DiscreteTrace) -> Result<Node, MonitorError> {
    phi.check_dialect(Dialect::Sstl)?;
    compile_node(phi, w)
}

fn compile_node(phi: &Formula, w: &DiscreteTrace) -> Result<Node, MonitorError> {
    let rec = |f: &Formula| compile_node(f, w).map(Box::new);
    let window = |win: &crate::formula::Window| win.ticks().expect("SSTL windows are in ticks");
    Ok(match phi {
        Formula::True => Node::True,
        Formula::Atom(p) => Node::Atom(p.compile(w.signals(), w.factor())?),
        Formula::Not(a) => Node::Not(rec(a)?),
        Formula::And(a, b) => Node::And(rec(a)?, rec(b)?),
        Formula::Or(a, b) => Node::Or(rec(a)?, rec(b)?),
        Formula::Implies(a, b) => Node::Implies(rec(a)?, rec(b)?),
        Formula::Until {
            lhs, rhs, window: win, ..
        } => {
            let (lo, hi) = window(win);
            Node::Until(rec(lhs)?, rec(rhs)?, lo, hi)
        }
        Formula::Eventually { body, window: win, .. } => {
            let (lo, hi) = window(win);
            Node::Eventually(rec(body)?, lo, hi)
        }
        Formula::Always { body, window: win, .. } => {
            let (lo, hi) = window(win);
            Node::Always(rec(body)?, lo, hi)
        }
        Formula::Guard(_) | Formula::Next(_) => unreachable!("rejected by the dialect check"),
    })
}

fn check_tick(w: &DiscreteTrace, t: u64) -> Result<(), MonitorError> {
    if t as usize >= w.len() || t > usize::MAX as u64 {
        return Err(MonitorError::OutOfRange { tick: t, len: w.len() });
    }
    Ok(())
}

/// Verdict of `phi` at tick `t`, by direct recursion on the semantics.
///
/// This is the reference evaluator: no sharing, no closed forms beyond the
/// observation that positions past the end are interchangeable.
pub fn eval_at(phi: &Formula, w: &DiscreteTrace, t: u64) -> Result<Verdict, MonitorError> {
    let node = compile(phi, w)?;
    check_tick(w, t)?;
    Ok(naive(&node, w, t))
}

fn naive(node: &Node, w: &DiscreteTrace, p: u64) -> Verdict {
    let len = w.len() as u64;
    match node {
        Node::True => Verdict::True,
        Node::Atom(c) => {
            if p < len {
                Verdict::from_bool(c.holds(w.row(p as usize)))
            } else {
                Verdict::Inconclusive
            }
        }
        Node::Not(a) => !naive(a, w, p),
        Node::And(a, b) => naive(a, w, p) & naive(b, w, p),
        Node::Or(a, b) => naive(a, w, p) | naive(b, w, p),
        Node::Implies(a, b) => naive(a, w, p).implies(naive(b, w, p)),
        Node::Until(l, r, lo, hi) => {
            // Witnesses past max(p+lo, len) only add φ1 conjuncts to the one at
            // that position, so they cannot raise the disjunction.
            let first = p + lo;
            let last = last_candidate(p, *lo, *hi, len);
            let mut acc = Verdict::False;
            for t1 in first..=last {
                let mut term = naive(r, w, t1);
                for t2 in p..t1 {
                    term = term & naive(l, w, t2);
                }
                acc = acc | term;
            }
            acc
        }
        Node::Eventually(b, lo, hi) => {
            let last = last_candidate(p, *lo, *hi, len);
            (p + lo..=last).fold(Verdict::False, |acc, t| acc | naive(b, w, t))
        }
        Node::Always(b, lo, hi) => {
            let last = last_candidate(p, *lo, *hi, len);
            (p + lo..=last).fold(Verdict::True, |acc, t| acc & naive(b, w, t))
        }
    }
}

fn last_candidate(p: u64, lo: Tick, hi: Upper<Tick>, len: u64) -> u64 {
    match hi {
        Upper::Finite(h) => p + h,
        Upper::Unbounded => (p + lo).max(len),
    }
}

/// Verdicts of `phi` at every tick, computed bottom-up with one array per
/// subformula.
pub fn eval_all(phi: &Formula, w: &DiscreteTrace) -> Result<Vec<Verdict>, MonitorError> {
    let node = compile(phi, w)?;
    let mut values = table(&node, w);
    values.truncate(w.len());
    Ok(values)
}

/// Values at positions `0..len`, plus the tail value at index `len`.
fn table(node: &Node, w: &DiscreteTrace) -> Vec<Verdict> {
    let len = w.len();
    match node {
        Node::True => vec![Verdict::True; len + 1],
        Node::Atom(c) => {
            let mut v: Vec<Verdict> = (0..len).map(|k| Verdict::from_bool(c.holds(w.row(k)))).collect();
            v.push(Verdict::Inconclusive);
            v
        }
        Node::Not(a) => table(a, w).into_iter().map(|v| !v).collect(),
        Node::And(a, b) => zip(table(a, w), table(b, w), |x, y| x & y),
        Node::Or(a, b) => zip(table(a, w), table(b, w), |x, y| x | y),
        Node::Implies(a, b) => zip(table(a, w), table(b, w), Verdict::implies),
        Node::Until(l, r, lo, hi) => until_table(&table(l, w), &table(r, w), *lo, *hi),
        Node::Eventually(b, lo, hi) => {
            let body = table(b, w);
            until_table(&vec![Verdict::True; len + 1], &body, *lo, *hi)
        }
        Node::Always(b, lo, hi) => {
            let body: Vec<Verdict> = table(b, w).into_iter().map(|v| !v).collect();
            until_table(&vec![Verdict::True; len + 1], &body, *lo, *hi)
                .into_iter()
                .map(|v| !v)
                .collect()
        }
    }
}

fn zip(a: Vec<Verdict>, b: Vec<Verdict>, f: impl Fn(Verdict, Verdict) -> Verdict) -> Vec<Verdict> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Position-indexed lookup that maps everything past the end to the tail.
fn at(v: &[Verdict], p: u64) -> Verdict {
    let tail = v.len() - 1;
    v[(p.min(tail as u64)) as usize]
}

fn until_table(l: &[Verdict], r: &[Verdict], lo: Tick, hi: Upper<Tick>) -> Vec<Verdict> {
    let len = l.len() - 1;
    let (tail_l, tail_r) = (l[len], r[len]);
    let mut out = Vec::with_capacity(len + 1);
    match hi {
        Upper::Unbounded => {
            // u0[p] = r[p] ∨ (l[p] ∧ u0[p+1]); past the end it is the tail of r.
            let mut u0 = vec![tail_r; len + 1];
            for p in (0..len).rev() {
                u0[p] = r[p] | (l[p] & u0[p + 1]);
            }
            // U[lo,∞) at p = (∧ l over [p, p+lo)) ∧ u0[p+lo].
            let prefix = PrefixAnd::new(l);
            for p in 0..len as u64 {
                out.push(prefix.all(p, p + lo) & at(&u0, p + lo));
            }
            out.push(if lo == 0 { tail_r } else { tail_l & tail_r });
        }
        Upper::Finite(hi) => {
            for p in 0..len as u64 {
                let mut acc = Verdict::False;
                let mut pre = Verdict::True;
                let mut t = p;
                // Scan witnesses in order, keeping ∧ of l over [p, t).
                loop {
                    if t >= p + lo {
                        acc = acc | (pre & at(r, t));
                    }
                    if acc == Verdict::True || t >= p + hi {
                        break;
                    }
                    pre = pre & at(l, t);
                    if pre == Verdict::False {
                        break;
                    }
                    // Past the end every further witness repeats the last one.
                    if t >= len as u64 && t >= p + lo {
                        break;
                    }
                    t += 1;
                }
                out.push(acc);
            }
            out.push(if lo == 0 { tail_r } else { tail_l & tail_r });
        }
    }
    out
}

/// O(1) range conjunction over a verdict array, by counting.
struct PrefixAnd {
    falses: Vec<u64>,
    unknowns: Vec<u64>,
    tail: Verdict,
    len: u64,
}

impl PrefixAnd {
    fn new(v: &[Verdict]) -> Self {
        let len = v.len() - 1;
        let mut falses = vec![0u64; len + 1];
        let mut unknowns = vec![0u64; len + 1];
        for i in 0..len {
            falses[i + 1] = falses[i] + u64::from(v[i] == Verdict::False);
            unknowns[i + 1] = unknowns[i] + u64::from(v[i] == Verdict::Inconclusive);
        }
        Self {
            falses,
            unknowns,
            tail: v[len],
            len: len as u64,
        }
    }

    /// ∧ over positions `[from, to)`.
    fn all(&self, from: u64, to: u64) -> Verdict {
        if from >= to {
            return Verdict::True;
        }
        let a = from.min(self.len) as usize;
        let b = to.min(self.len) as usize;
        let mut v = if self.falses[b] > self.falses[a] {
            Verdict::False
        } else if self.unknowns[b] > self.unknowns[a] {
            Verdict::Inconclusive
        } else {
            Verdict::True
        };
        if to > self.len {
            v = v & self.tail;
        }
        v
    }
}
