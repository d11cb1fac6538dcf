//! Three-valued verdicts for finite traces.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use serde::{Deserialize, Serialize};

/// Kleene truth value. `Inconclusive` means the observed prefix admits
/// both a satisfying and a violating continuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_conclusive(self) -> bool {
        self != Verdict::Inconclusive
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Inconclusive => None,
        }
    }

    pub fn implies(self, other: Verdict) -> Verdict {
        !self | other
    }
}

impl Not for Verdict {
    type Output = Verdict;

    fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Inconclusive => Verdict::Inconclusive,
        }
    }
}

impl BitAnd for Verdict {
    type Output = Verdict;

    fn bitand(self, rhs: Verdict) -> Verdict {
        match (self, rhs) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Inconclusive,
        }
    }
}

impl BitOr for Verdict {
    type Output = Verdict;

    fn bitor(self, rhs: Verdict) -> Verdict {
        !(!self & !rhs)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Verdict; 3] = [Verdict::True, Verdict::False, Verdict::Inconclusive];

    #[test]
    fn kleene_tables() {
        assert_eq!(Verdict::True & Verdict::Inconclusive, Verdict::Inconclusive);
        assert_eq!(Verdict::False & Verdict::Inconclusive, Verdict::False);
        assert_eq!(Verdict::True | Verdict::Inconclusive, Verdict::True);
        assert_eq!(Verdict::False | Verdict::Inconclusive, Verdict::Inconclusive);
        assert_eq!(Verdict::False.implies(Verdict::Inconclusive), Verdict::True);
    }

    #[test]
    fn agrees_with_booleans_and_de_morgan() {
        for a in ALL {
            for b in ALL {
                if let (Some(x), Some(y)) = (a.as_bool(), b.as_bool()) {
                    assert_eq!((a & b).as_bool(), Some(x && y));
                    assert_eq!((a | b).as_bool(), Some(x || y));
                }
                assert_eq!(!(a & b), !a | !b);
                assert_eq!(a & b, b & a);
            }
        }
    }
}
