//! Concrete syntax printer. Output parses back to the same AST.

use std::fmt;

use crate::formula::{Formula, GuardAtom, GuardKind, LinearPredicate, ObligationId, Window};
use crate::time::{format_real, Real};

impl fmt::Display for LinearPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = self.factor();
        for (i, (name, coeff)) in self.terms().iter().enumerate() {
            let negative = *coeff < 0;
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = Real::new(coeff.unsigned_abs() as i64, factor);
            if magnitude == Real::from_integer(1) {
                f.write_str(name)?;
            } else {
                write!(f, "{}*{}", format_real(&magnitude), name)?;
            }
        }
        write!(
            f,
            " {} {}",
            self.relation().symbol(),
            format_real(&Real::new(self.bound(), factor))
        )
    }
}

impl fmt::Display for GuardAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.obligation;
        match self.kind {
            GuardKind::Within { lo, hi } => write!(f, "within[{lo},{hi}]@{k}"),
            GuardKind::LowerOnly(lo) => write!(f, "j>=j0@{k}+{lo}"),
            GuardKind::UpperOnly(hi) => write!(f, "j<=j0@{k}+{hi}"),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Untimed => Ok(()),
            Window::Real(iv) => write!(f, "{iv}"),
            Window::Tick(iv) => write!(f, "{iv}"),
        }
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(
        f,
        Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Until { .. }
    )
}

struct Operand<'a> {
    inner: &'a Formula,
    wrap_atoms: bool,
}

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = is_binary(self.inner) || (self.wrap_atoms && matches!(self.inner, Formula::Atom(_)));
        if wrap {
            write!(f, "({})", self.inner)
        } else {
            write!(f, "{}", self.inner)
        }
    }
}

fn operand(inner: &Formula, wrap_atoms: bool) -> Operand<'_> {
    Operand { inner, wrap_atoms }
}

fn binder(bind: &Option<ObligationId>) -> String {
    bind.map(|k| format!("@{k}")).unwrap_or_default()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Guard(g) => write!(f, "{g}"),
            Formula::Not(a) => write!(f, "!{}", operand(a, true)),
            Formula::And(a, b) => write!(f, "{} && {}", operand(a, false), operand(b, false)),
            Formula::Or(a, b) => write!(f, "{} || {}", operand(a, false), operand(b, false)),
            Formula::Implies(a, b) => {
                write!(f, "{} -> {}", operand(a, false), operand(b, false))
            }
            Formula::Next(a) => write!(f, "X {}", operand(a, true)),
            Formula::Until {
                lhs,
                rhs,
                window,
                bind,
            } => write!(
                f,
                "{} U{}{} {}",
                operand(lhs, true),
                window,
                binder(bind),
                operand(rhs, true)
            ),
            Formula::Eventually { body, window, bind } => {
                write!(f, "F{}{} {}", window, binder(bind), operand(body, true))
            }
            Formula::Always { body, window, bind } => {
                write!(f, "G{}{} {}", window, binder(bind), operand(body, true))
            }
        }
    }
}
