//! Shared formula AST for the STL, SSTL and LTL_P dialects.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::{RealInterval, Tick, TickInterval, Upper, DEFAULT_QUANTIZATION};

/// Comparison operator of a linear predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `Σ cᵢ·xᵢ ⋈ b` with coefficients and bound stored scaled by `factor`.
///
/// A real coefficient `c` is stored as `round(c·factor)`, the bound likewise.
/// Against a valuation whose values are scaled by `Fv` the predicate reads
/// `Σ cᵢ·vᵢ ⋈ b·Fv`, which is exact in integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearPredicate {
    terms: Vec<(String, i64)>,
    bound: i64,
    relation: Relation,
    factor: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("a predicate needs at least one signal term")]
    NoTerms,
    #[error("predicate factor must be positive, got {0}")]
    BadFactor(i64),
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
}

impl LinearPredicate {
    pub fn new(
        terms: Vec<(String, i64)>,
        relation: Relation,
        bound: i64,
        factor: i64,
    ) -> Result<Self, PredicateError> {
        if terms.is_empty() {
            return Err(PredicateError::NoTerms);
        }
        if factor <= 0 {
            return Err(PredicateError::BadFactor(factor));
        }
        Ok(Self {
            terms,
            bound,
            relation,
            factor,
        })
    }

    /// `signal ⋈ threshold` with integer threshold, unit coefficient.
    pub fn simple(signal: &str, relation: Relation, threshold: i64) -> Self {
        Self {
            terms: vec![(signal.to_string(), DEFAULT_QUANTIZATION)],
            bound: threshold * DEFAULT_QUANTIZATION,
            relation,
            factor: DEFAULT_QUANTIZATION,
        }
    }

    pub fn terms(&self) -> &[(String, i64)] {
        &self.terms
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn factor(&self) -> i64 {
        self.factor
    }

    pub fn signals(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|(s, _)| s.as_str())
    }

    /// Binds signal names to column indices for fast repeated evaluation.
    pub fn compile(
        &self,
        columns: &[String],
        value_factor: i64,
    ) -> Result<CompiledPredicate, PredicateError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (name, coeff) in &self.terms {
            let idx = columns
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| PredicateError::UnknownSignal(name.clone()))?;
            terms.push((idx, i128::from(*coeff)));
        }
        Ok(CompiledPredicate {
            terms,
            rhs: i128::from(self.bound) * i128::from(value_factor),
            relation: self.relation,
        })
    }
}

/// A predicate resolved against a fixed column layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledPredicate {
    terms: Vec<(usize, i128)>,
    rhs: i128,
    relation: Relation,
}

impl CompiledPredicate {
    pub fn holds(&self, values: &[i64]) -> bool {
        let lhs: i128 = self
            .terms
            .iter()
            .map(|&(i, c)| c * i128::from(values[i]))
            .sum();
        self.relation.holds(lhs, self.rhs)
    }
}

/// Identifier of one bounded-operator occurrence in a translated formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObligationId(pub u32);

impl fmt::Display for ObligationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which side(s) of the window `j₀+a ≤ j ≤ j₀+b` a guard constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuardKind {
    Within { lo: Tick, hi: Tick },
    LowerOnly(Tick),
    UpperOnly(Tick),
}

/// Atom over the position `j` relative to an obligation's entry `j₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GuardAtom {
    pub kind: GuardKind,
    pub obligation: ObligationId,
}

impl GuardAtom {
    /// Truth value given the offset `j − j₀ ≥ 0`.
    pub fn holds_at_offset(&self, offset: u64) -> bool {
        match self.kind {
            GuardKind::Within { lo, hi } => lo <= offset && offset <= hi,
            GuardKind::LowerOnly(lo) => offset >= lo,
            GuardKind::UpperOnly(hi) => offset <= hi,
        }
    }

    /// Largest offset at which the guard's value can still change.
    pub fn horizon(&self) -> u64 {
        match self.kind {
            GuardKind::Within { hi, .. } | GuardKind::UpperOnly(hi) => hi,
            GuardKind::LowerOnly(lo) => lo,
        }
    }
}

/// Time window attached to a temporal operator. `Untimed` is `[0,∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    Untimed,
    Real(RealInterval),
    Tick(TickInterval),
}

impl Window {
    pub fn is_untimed(&self) -> bool {
        matches!(self, Window::Untimed)
    }

    /// Tick bounds, treating `Untimed` as `[0,∞)`.
    pub fn ticks(&self) -> Option<(Tick, Upper<Tick>)> {
        match self {
            Window::Untimed => Some((0, Upper::Unbounded)),
            Window::Tick(iv) => Some((iv.lo(), iv.hi())),
            Window::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(LinearPredicate),
    Guard(GuardAtom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until {
        lhs: Box<Formula>,
        rhs: Box<Formula>,
        window: Window,
        bind: Option<ObligationId>,
    },
    Eventually {
        body: Box<Formula>,
        window: Window,
        bind: Option<ObligationId>,
    },
    Always {
        body: Box<Formula>,
        window: Window,
        bind: Option<ObligationId>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dialect {
    Stl,
    Sstl,
    Ltlp,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Stl => "STL",
            Dialect::Sstl => "SSTL",
            Dialect::Ltlp => "LTL_P",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialectError {
    #[error("{dialect} formulas cannot contain {what}")]
    Forbidden { dialect: Dialect, what: &'static str },
}

impl Formula {
    pub fn atom(pred: LinearPredicate) -> Self {
        Formula::Atom(pred)
    }

    pub fn guard(kind: GuardKind, obligation: ObligationId) -> Self {
        Formula::Guard(GuardAtom { kind, obligation })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(lhs: Formula, rhs: Formula, window: Window) -> Self {
        Formula::Until {
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            window,
            bind: None,
        }
    }

    pub fn eventually(body: Formula, window: Window) -> Self {
        Formula::Eventually {
            body: Box::new(body),
            window,
            bind: None,
        }
    }

    pub fn always(body: Formula, window: Window) -> Self {
        Formula::Always {
            body: Box::new(body),
            window,
            bind: None,
        }
    }

    /// `false`, spelled as `!true`.
    pub fn falsity() -> Self {
        Formula::not(Formula::True)
    }

    /// Direct children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::Atom(_) | Formula::Guard(_) => vec![],
            Formula::Not(f) | Formula::Next(f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Until { lhs, rhs, .. } => vec![lhs, rhs],
            Formula::Eventually { body, .. } | Formula::Always { body, .. } => vec![body],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Operator tag used when comparing AST shapes.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Formula::True => "true",
            Formula::Atom(_) => "atom",
            Formula::Guard(_) => "guard",
            Formula::Not(_) => "not",
            Formula::And(..) => "and",
            Formula::Or(..) => "or",
            Formula::Implies(..) => "implies",
            Formula::Next(_) => "next",
            Formula::Until { .. } => "until",
            Formula::Eventually { .. } => "eventually",
            Formula::Always { .. } => "always",
        }
    }

    /// Pre-order listing of operator tags.
    pub fn shape(&self) -> Vec<&'static str> {
        let mut out = vec![self.kind_name()];
        for c in self.children() {
            out.extend(c.shape());
        }
        out
    }

    /// Signal names referenced by atoms, in first-occurrence order.
    pub fn signals(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                for s in p.signals() {
                    if !out.iter().any(|o| o == s) {
                        out.push(s.to_string());
                    }
                }
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    fn window(&self) -> Option<&Window> {
        match self {
            Formula::Until { window, .. }
            | Formula::Eventually { window, .. }
            | Formula::Always { window, .. } => Some(window),
            _ => None,
        }
    }

    fn bind(&self) -> Option<ObligationId> {
        match self {
            Formula::Until { bind, .. }
            | Formula::Eventually { bind, .. }
            | Formula::Always { bind, .. } => *bind,
            _ => None,
        }
    }

    /// Checks the per-dialect restrictions on intervals, guards and `X`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<(), DialectError> {
        let forbid = |what| Err(DialectError::Forbidden { dialect, what });
        let mut result = Ok(());
        self.visit(&mut |node| {
            if result.is_err() {
                return;
            }
            result = match (dialect, node) {
                (Dialect::Ltlp, _) if matches!(node.window(), Some(Window::Real(_) | Window::Tick(_))) => {
                    forbid("interval-bounded operators")
                }
                (Dialect::Stl | Dialect::Sstl, Formula::Next(_)) => forbid("the next operator"),
                (Dialect::Stl | Dialect::Sstl, Formula::Guard(_)) => forbid("obligation guards"),
                (Dialect::Stl | Dialect::Sstl, _) if node.bind().is_some() => {
                    forbid("obligation binders")
                }
                (Dialect::Stl, _) if matches!(node.window(), Some(Window::Tick(_))) => {
                    forbid("tick intervals")
                }
                (Dialect::Sstl, _) if matches!(node.window(), Some(Window::Real(_))) => {
                    forbid("real-time intervals")
                }
                _ => Ok(()),
            };
        });
        result
    }
}
