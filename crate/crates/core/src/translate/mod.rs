//! SSTL to LTL_P translation.
//!
//! Bounded operators become untimed operators that capture an entry
//! position `j₀` (the binder `@k`) and read it back through guard atoms
//! over the current position `j`. Two encodings are provided:
//!
//! * [`translate`] uses the two-sided `within[a,b]` guard.
//! * [`translate_impl`] uses one-sided guards `j ≤ j₀+b` / `j ≥ j₀+a`, which
//!   map onto simple countdown checks in the model checker.

mod ltlp;

pub use ltlp::{eval_ltlp, live_obligation_count, Env, Lasso, LtlpError, LtlpEvaluator, Word};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::formula::{Dialect, DialectError, Formula, GuardKind, ObligationId, Window};
use crate::time::{Tick, Upper};

/// Which bounded-operator encoding to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum Encoding {
    Conceptual,
    #[default]
    Impl,
}

/// Translates with the given encoding.
pub fn translate_with(phi: &Formula, encoding: Encoding) -> Result<Formula, DialectError> {
    match encoding {
        Encoding::Conceptual => translate(phi),
        Encoding::Impl => translate_impl(phi),
    }
}

/// `within[a,b]` encoding.
pub fn translate(phi: &Formula) -> Result<Formula, DialectError> {
    phi.check_dialect(Dialect::Sstl)?;
    let mut next = 1;
    Ok(Translator {
        next: &mut next,
        encoding: Encoding::Conceptual,
    }
    .go(phi))
}

/// One-sided guard encoding.
pub fn translate_impl(phi: &Formula) -> Result<Formula, DialectError> {
    phi.check_dialect(Dialect::Sstl)?;
    let mut next = 1;
    Ok(Translator {
        next: &mut next,
        encoding: Encoding::Impl,
    }
    .go(phi))
}

struct Translator<'a> {
    next: &'a mut u32,
    encoding: Encoding,
}

/// Bounds of a timed window, or `None` when it is `[0,∞)`.
fn timed(window: &Window) -> Option<(Tick, Upper<Tick>)> {
    let (lo, hi) = window.ticks().expect("SSTL windows are in ticks");
    if lo == 0 && hi == Upper::Unbounded {
        None
    } else {
        Some((lo, hi))
    }
}

impl Translator<'_> {
    fn fresh(&mut self) -> ObligationId {
        let k = ObligationId(*self.next);
        *self.next += 1;
        k
    }

    fn go(&mut self, phi: &Formula) -> Formula {
        match phi {
            Formula::True | Formula::Atom(_) | Formula::Guard(_) => phi.clone(),
            Formula::Not(a) => Formula::not(self.go(a)),
            Formula::Next(a) => Formula::next(self.go(a)),
            Formula::And(a, b) => Formula::and(self.go(a), self.go(b)),
            Formula::Or(a, b) => Formula::or(self.go(a), self.go(b)),
            Formula::Implies(a, b) => Formula::implies(self.go(a), self.go(b)),
            Formula::Until { lhs, rhs, window, .. } => match timed(window) {
                None => Formula::until(self.go(lhs), self.go(rhs), Window::Untimed),
                Some((lo, hi)) => {
                    let k = self.fresh();
                    let (l, r) = (self.go(lhs), self.go(rhs));
                    self.bounded_until(k, l, r, lo, hi)
                }
            },
            Formula::Eventually { body, window, .. } => match timed(window) {
                None => Formula::eventually(self.go(body), Window::Untimed),
                Some((lo, hi)) => {
                    let k = self.fresh();
                    let body = self.go(body);
                    match self.encoding {
                        Encoding::Conceptual => Formula::Eventually {
                            body: Box::new(Formula::and(body, window_guard(k, lo, hi))),
                            window: Window::Untimed,
                            bind: Some(k),
                        },
                        Encoding::Impl => self.bounded_until(k, Formula::True, body, lo, hi),
                    }
                }
            },
            Formula::Always { body, window, .. } => match timed(window) {
                None => Formula::always(self.go(body), Window::Untimed),
                Some((lo, hi)) => {
                    let k = self.fresh();
                    let body = self.go(body);
                    match self.encoding {
                        Encoding::Conceptual => Formula::Always {
                            body: Box::new(Formula::implies(window_guard(k, lo, hi), body)),
                            window: Window::Untimed,
                            bind: Some(k),
                        },
                        Encoding::Impl => Formula::not(self.bounded_until(
                            k,
                            Formula::True,
                            Formula::not(body),
                            lo,
                            hi,
                        )),
                    }
                }
            },
        }
    }

    fn bounded_until(
        &mut self,
        k: ObligationId,
        lhs: Formula,
        rhs: Formula,
        lo: Tick,
        hi: Upper<Tick>,
    ) -> Formula {
        let (lhs, rhs) = match self.encoding {
            Encoding::Conceptual => (lhs, Formula::and(rhs, window_guard(k, lo, hi))),
            Encoding::Impl => match hi {
                Upper::Finite(b) => {
                    let upper = Formula::guard(GuardKind::UpperOnly(b), k);
                    // The upper guard is repeated on the right: with it only on
                    // the left, a witness at j₀+b+1 would still be accepted.
                    (
                        Formula::and(lhs, upper.clone()),
                        Formula::and(
                            Formula::and(rhs, Formula::guard(GuardKind::LowerOnly(lo), k)),
                            upper,
                        ),
                    )
                }
                Upper::Unbounded => (lhs, Formula::and(rhs, Formula::guard(GuardKind::LowerOnly(lo), k))),
            },
        };
        Formula::Until {
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            window: Window::Untimed,
            bind: Some(k),
        }
    }
}

fn window_guard(k: ObligationId, lo: Tick, hi: Upper<Tick>) -> Formula {
    match hi {
        Upper::Finite(hi) => Formula::guard(GuardKind::Within { lo, hi }, k),
        Upper::Unbounded => Formula::guard(GuardKind::LowerOnly(lo), k),
    }
}

/// Window of one obligation as read back from its guards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObligationWindow {
    pub lo: Tick,
    pub hi: Option<Tick>,
}

impl ObligationWindow {
    /// `b − a + 1`, or `None` when unbounded.
    pub fn width(&self) -> Option<u64> {
        self.hi.map(|hi| hi - self.lo + 1)
    }

    pub fn contains_offset(&self, offset: u64) -> bool {
        offset >= self.lo && self.hi.is_none_or(|hi| offset <= hi)
    }
}

/// Per-obligation windows of a translated formula and the static bound `W`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ObligationRegistry {
    windows: BTreeMap<ObligationId, ObligationWindow>,
}

impl ObligationRegistry {
    pub fn from_formula(psi: &Formula) -> Self {
        let mut windows: BTreeMap<ObligationId, ObligationWindow> = BTreeMap::new();
        psi.visit(&mut |node| {
            let bind = match node {
                Formula::Until { bind, .. }
                | Formula::Eventually { bind, .. }
                | Formula::Always { bind, .. } => *bind,
                _ => None,
            };
            if let Some(k) = bind {
                windows.entry(k).or_insert(ObligationWindow { lo: 0, hi: None });
            }
        });
        psi.visit(&mut |node| {
            if let Formula::Guard(g) = node {
                let w = windows
                    .entry(g.obligation)
                    .or_insert(ObligationWindow { lo: 0, hi: None });
                let (lo, hi) = match g.kind {
                    GuardKind::Within { lo, hi } => (Some(lo), Some(hi)),
                    GuardKind::LowerOnly(lo) => (Some(lo), None),
                    GuardKind::UpperOnly(hi) => (None, Some(hi)),
                };
                if let Some(lo) = lo {
                    w.lo = w.lo.max(lo);
                }
                if let Some(hi) = hi {
                    w.hi = Some(w.hi.map_or(hi, |h| h.min(hi)));
                }
            }
        });
        Self { windows }
    }

    pub fn windows(&self) -> &BTreeMap<ObligationId, ObligationWindow> {
        &self.windows
    }

    pub fn get(&self, k: ObligationId) -> Option<ObligationWindow> {
        self.windows.get(&k).copied()
    }

    /// `W = Σ w_β` over obligations with a finite window. An obligation
    /// without an upper bound never expires, so it is tracked by a
    /// saturating counter instead and does not count towards `W`.
    pub fn bound(&self) -> u64 {
        self.windows.values().filter_map(|w| w.width()).sum()
    }
}

#[cfg(test)]
mod tests;
