//! Dense-time STL semantics over the piecewise-constant extension of a trace.
//!
//! Tick `k` holds its sample on `[k·dt, (k+1)·dt)`; from `L·dt` on nothing is
//! known. Every subformula's satisfaction over real time is kept as a step
//! function with exact rational breakpoints: a value at each breakpoint and a
//! value on each open gap after it. A bounded operator shifts breakpoints by
//! its interval ends, so the result of `U[a,b]` only changes at `x`, `x−a` or
//! `x−b` for breakpoints `x` of its operands.

use num_traits::{Signed, Zero};

use super::MonitorError;
use crate::formula::{CompiledPredicate, Dialect, Formula, Window};
use crate::time::{discretize_time, Real, Upper};
use crate::trace::DiscreteTrace;
use crate::verdict::Verdict;

/// Step function on `[0, ∞)`.
#[derive(Debug, Clone)]
struct Steps {
    /// Strictly increasing, first element is 0.
    points: Vec<Real>,
    at: Vec<Verdict>,
    /// Value on `(points[i], points[i+1])`, the last one on `(points[n-1], ∞)`.
    after: Vec<Verdict>,
}

impl Steps {
    fn constant(v: Verdict) -> Self {
        Steps {
            points: vec![Real::zero()],
            at: vec![v],
            after: vec![v],
        }
    }

    fn value(&self, x: Real) -> Verdict {
        match self.points.binary_search(&x) {
            Ok(i) => self.at[i],
            Err(i) => self.after[i - 1],
        }
    }

    fn tail(&self) -> Verdict {
        *self.after.last().expect("non-empty")
    }

    /// Rebuilds a step function from a sampling closure over given breakpoints.
    fn sample(mut points: Vec<Real>, f: impl Fn(Real) -> Verdict) -> Self {
        points.sort();
        points.dedup();
        let n = points.len();
        let mut at = Vec::with_capacity(n);
        let mut after = Vec::with_capacity(n);
        for i in 0..n {
            at.push(f(points[i]));
            let probe = if i + 1 < n {
                (points[i] + points[i + 1]) / Real::from_integer(2)
            } else {
                points[i] + Real::from_integer(1)
            };
            after.push(f(probe));
        }
        Steps { points, at, after }.simplified()
    }

    /// Drops breakpoints that do not change anything.
    fn simplified(self) -> Self {
        let mut out = Steps {
            points: vec![self.points[0]],
            at: vec![self.at[0]],
            after: vec![self.after[0]],
        };
        for i in 1..self.points.len() {
            let prev = *out.after.last().unwrap();
            if self.at[i] == prev && self.after[i] == prev {
                continue;
            }
            out.points.push(self.points[i]);
            out.at.push(self.at[i]);
            out.after.push(self.after[i]);
        }
        out
    }

    fn map(&self, f: impl Fn(Verdict) -> Verdict) -> Self {
        Steps {
            points: self.points.clone(),
            at: self.at.iter().map(|v| f(*v)).collect(),
            after: self.after.iter().map(|v| f(*v)).collect(),
        }
    }

    fn combine(&self, other: &Steps, f: impl Fn(Verdict, Verdict) -> Verdict) -> Self {
        let mut points = self.points.clone();
        points.extend(other.points.iter().copied());
        Steps::sample(points, |x| f(self.value(x), other.value(x)))
    }
}

fn atom_steps(c: &CompiledPredicate, w: &DiscreteTrace) -> Steps {
    let dt = w.dt();
    let len = w.len();
    let mut points = Vec::with_capacity(len + 1);
    let mut at = Vec::with_capacity(len + 1);
    for k in 0..len {
        points.push(dt * Real::from_integer(k as i64));
        at.push(Verdict::from_bool(c.holds(w.row(k))));
    }
    let mut after = at.clone();
    points.push(dt * Real::from_integer(len as i64));
    at.push(Verdict::Inconclusive);
    after.push(Verdict::Inconclusive);
    Steps { points, at, after }.simplified()
}

/// `φ1 U[a,b] φ2` evaluated at a single time `s`.
fn until_at(l: &Steps, r: &Steps, breaks: &[Real], a: Real, b: Upper<Real>, s: Real) -> Verdict {
    let start = s + a;
    // Event points inside [s, s+b], always including s, s+a and s+b.
    let mut events = vec![s, start];
    if let Upper::Finite(b) = b {
        events.push(s + b);
    }
    let end = b.finite().map(|b| s + b);
    let lo_idx = breaks.partition_point(|x| *x <= s);
    for x in &breaks[lo_idx..] {
        if end.is_some_and(|e| *x >= e) {
            break;
        }
        events.push(*x);
    }
    events.sort();
    events.dedup();

    let mut acc = Verdict::False;
    // ∧ of φ1 over [s, current event).
    let mut prefix = Verdict::True;
    for (i, &e) in events.iter().enumerate() {
        if e >= start {
            acc = acc | (r.value(e) & prefix);
        }
        prefix = prefix & l.value(e);
        let is_last = i + 1 == events.len();
        if is_last && end.is_some() {
            break;
        }
        // Open gap after e: a witness inside it needs φ1 on [s, e] and on the
        // part of the gap before the witness.
        let (gap_l, gap_r) = if is_last {
            (l.tail(), r.tail())
        } else {
            let mid = (e + events[i + 1]) / Real::from_integer(2);
            (l.value(mid), r.value(mid))
        };
        if e >= start {
            acc = acc | (gap_r & prefix & gap_l);
        }
        prefix = prefix & gap_l;
        if acc == Verdict::True || prefix == Verdict::False {
            break;
        }
    }
    acc
}

fn until_steps(l: &Steps, r: &Steps, a: Real, b: Upper<Real>) -> Steps {
    let mut breaks: Vec<Real> = l.points.iter().chain(r.points.iter()).copied().collect();
    breaks.sort();
    breaks.dedup();
    let mut candidates = vec![Real::zero()];
    for x in &breaks {
        for shifted in [Some(*x), Some(*x - a), b.finite().map(|b| *x - b)].into_iter().flatten() {
            if !shifted.is_negative() {
                candidates.push(shifted);
            }
        }
    }
    Steps::sample(candidates, |s| until_at(l, r, &breaks, a, b, s))
}

fn steps(phi: &Formula, w: &DiscreteTrace) -> Result<Steps, MonitorError> {
    let window = |win: &Window| -> (Real, Upper<Real>) {
        match win {
            Window::Untimed => (Real::zero(), Upper::Unbounded),
            Window::Real(iv) => (iv.lo(), iv.hi()),
            Window::Tick(_) => unreachable!("rejected by the dialect check"),
        }
    };
    Ok(match phi {
        Formula::True => Steps::constant(Verdict::True),
        Formula::Atom(p) => atom_steps(&p.compile(w.signals(), w.factor())?, w),
        Formula::Not(a) => steps(a, w)?.map(|v| !v),
        Formula::And(a, b) => steps(a, w)?.combine(&steps(b, w)?, |x, y| x & y),
        Formula::Or(a, b) => steps(a, w)?.combine(&steps(b, w)?, |x, y| x | y),
        Formula::Implies(a, b) => steps(a, w)?.combine(&steps(b, w)?, Verdict::implies),
        Formula::Until {
            lhs, rhs, window: win, ..
        } => {
            let (a, b) = window(win);
            until_steps(&steps(lhs, w)?, &steps(rhs, w)?, a, b)
        }
        Formula::Eventually { body, window: win, .. } => {
            let (a, b) = window(win);
            until_steps(&Steps::constant(Verdict::True), &steps(body, w)?, a, b)
        }
        Formula::Always { body, window: win, .. } => {
            let (a, b) = window(win);
            let neg = steps(body, w)?.map(|v| !v);
            until_steps(&Steps::constant(Verdict::True), &neg, a, b).map(|v| !v)
        }
        Formula::Guard(_) | Formula::Next(_) => unreachable!("rejected by the dialect check"),
    })
}

/// Dense-time STL verdict of `phi` at real time `t` (seconds), treating the
/// trace as piecewise constant between ticks.
pub fn stl_oracle(phi: &Formula, w: &DiscreteTrace, t: Real) -> Result<Verdict, MonitorError> {
    phi.check_dialect(Dialect::Stl)?;
    let tick = discretize_time(t, w.dt()).map_err(|_| MonitorError::OutOfRange {
        tick: u64::MAX,
        len: w.len(),
    })?;
    if tick as usize >= w.len() {
        return Err(MonitorError::OutOfRange { tick, len: w.len() });
    }
    Ok(steps(phi, w)?.value(t))
}
