//! Projection of STL formulas onto the tick grid.

use thiserror::Error;

use crate::formula::{Dialect, DialectError, Formula, Window};
use crate::time::{discretize_interval, Real, TimeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscretizeError {
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error(transparent)]
    Time(#[from] TimeError),
}

/// Replaces every real window `[a,b]` by `[⌊a/dt⌋, ⌊b/dt⌋]`, leaving the
/// rest of the tree untouched.
pub fn discretize_formula(phi: &Formula, dt: Real) -> Result<Formula, DiscretizeError> {
    phi.check_dialect(Dialect::Stl)?;
    map_windows(phi, &|w| match w {
        Window::Real(iv) => Ok(Window::Tick(discretize_interval(iv, dt)?)),
        other => Ok(*other),
    })
}

fn map_windows(
    phi: &Formula,
    f: &impl Fn(&Window) -> Result<Window, DiscretizeError>,
) -> Result<Formula, DiscretizeError> {
    let rec = |x: &Formula| map_windows(x, f).map(Box::new);
    Ok(match phi {
        Formula::True | Formula::Atom(_) | Formula::Guard(_) => phi.clone(),
        Formula::Not(a) => Formula::Not(rec(a)?),
        Formula::Next(a) => Formula::Next(rec(a)?),
        Formula::And(a, b) => Formula::And(rec(a)?, rec(b)?),
        Formula::Or(a, b) => Formula::Or(rec(a)?, rec(b)?),
        Formula::Implies(a, b) => Formula::Implies(rec(a)?, rec(b)?),
        Formula::Until {
            lhs,
            rhs,
            window,
            bind,
        } => Formula::Until {
            lhs: rec(lhs)?,
            rhs: rec(rhs)?,
            window: f(window)?,
            bind: *bind,
        },
        Formula::Eventually { body, window, bind } => Formula::Eventually {
            body: rec(body)?,
            window: f(window)?,
            bind: *bind,
        },
        Formula::Always { body, window, bind } => Formula::Always {
            body: rec(body)?,
            window: f(window)?,
            bind: *bind,
        },
    })
}
