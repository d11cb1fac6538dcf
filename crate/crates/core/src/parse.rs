//! Hand-written lexer and recursive-descent parser for formulas.
//!
//! Precedence, tightest first: `!`/`G`/`F`/`X` prefixes, `U` (right
//! associative), `&&`, `||`, `->` (right associative).

use thiserror::Error;

use crate::formula::{
    Dialect, Formula, GuardKind, LinearPredicate, ObligationId, PredicateError, Relation, Window,
};
use crate::time::{
    parse_real, quantize, NumberError, QuantizeError, Real, RealInterval, TickInterval, TimeError,
    Upper, DEFAULT_QUANTIZATION,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("interval upper bound {hi} is below lower bound {lo}")]
    EmptyInterval { lo: String, hi: String },
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
    #[error(transparent)]
    Time(#[from] TimeError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Plus,
    Minus,
    At,
    Rel(Relation),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Eof => "end of input".to_string(),
            Tok::Rel(r) => format!("`{}`", r.symbol()),
            other => format!("`{}`", match other {
                Tok::Not => "!",
                Tok::And => "&&",
                Tok::Or => "||",
                Tok::Arrow => "->",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::Comma => ",",
                Tok::Star => "*",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::At => "@",
                _ => unreachable!(),
            }),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = (line, column);
        let next = chars.get(i + 1).copied();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() || (c == '.' && next.is_some_and(|n| n.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '-' || chars[k] == '+') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            (Tok::Number(chars[i..j].iter().collect()), j - i)
        } else {
            match (c, next) {
                ('&', Some('&')) => (Tok::And, 2),
                ('|', Some('|')) => (Tok::Or, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Rel(Relation::Le), 2),
                ('>', Some('=')) => (Tok::Rel(Relation::Ge), 2),
                ('=', Some('=')) => (Tok::Rel(Relation::Eq), 2),
                ('<', _) => (Tok::Rel(Relation::Lt), 1),
                ('>', _) => (Tok::Rel(Relation::Gt), 1),
                ('=', _) => (Tok::Rel(Relation::Eq), 1),
                ('!', _) => (Tok::Not, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                ('*', _) => (Tok::Star, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('@', _) => (Tok::At, 1),
                _ => {
                    return Err(ParseError {
                        line,
                        column,
                        kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: start.0,
            column: start.1,
        });
        i += len;
        column += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

const RESERVED: &[&str] = &["true", "false", "G", "F", "X", "U", "inf"];

/// Formula parser configured with a dialect and optional signal declaration.
#[derive(Debug, Clone)]
pub struct FormulaParser<'s> {
    dialect: Dialect,
    signals: Option<&'s [String]>,
    factor: i64,
}

impl<'s> FormulaParser<'s> {
    pub fn new(dialect: Dialect) -> Self {
        Self {
            dialect,
            signals: None,
            factor: DEFAULT_QUANTIZATION,
        }
    }

    /// Rejects atoms over signals not in `signals`.
    pub fn with_signals(mut self, signals: &'s [String]) -> Self {
        self.signals = Some(signals);
        self
    }

    /// Scale for predicate coefficients and bounds.
    pub fn with_factor(mut self, factor: i64) -> Self {
        self.factor = factor;
        self
    }

    pub fn parse(&self, text: &str) -> Result<Formula, ParseError> {
        let tokens = lex(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            cfg: self,
        };
        let f = p.implies()?;
        p.expect(Tok::Eof, "end of input")?;
        Ok(f)
    }
}

/// Parses `text` in `dialect` without a signal declaration.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula, ParseError> {
    FormulaParser::new(dialect).parse(text)
}

/// Parses `text` and checks every atom against `signals`.
pub fn parse_formula_with_signals(
    text: &str,
    dialect: Dialect,
    signals: &[String],
) -> Result<Formula, ParseError> {
    FormulaParser::new(dialect).with_signals(signals).parse(text)
}

struct Parser<'a, 's> {
    tokens: Vec<Spanned>,
    pos: usize,
    cfg: &'a FormulaParser<'s>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let idx = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, idx: usize, kind: ParseErrorKind) -> ParseError {
        let s = &self.tokens[idx];
        ParseError {
            line: s.line,
            column: s.column,
            kind,
        }
    }

    fn syntax(&self, msg: String) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax(msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}, found {}", self.peek().describe())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.is_keyword("U") {
            self.advance();
            let window = self.window()?;
            let bind = self.binder()?;
            let rhs = self.until()?;
            return Ok(Formula::Until {
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                window,
                bind,
            });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(kw) if kw == "G" || kw == "F" => {
                self.advance();
                let window = self.window()?;
                let bind = self.binder()?;
                let body = Box::new(self.unary()?);
                Ok(if kw == "G" {
                    Formula::Always { body, window, bind }
                } else {
                    Formula::Eventually { body, window, bind }
                })
            }
            Tok::Ident(kw) if kw == "X" => {
                if self.cfg.dialect != Dialect::Ltlp {
                    return Err(self.syntax(format!(
                        "the next operator is only available in LTL_P, not {}",
                        self.cfg.dialect
                    )));
                }
                self.advance();
                Ok(Formula::next(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let f = self.implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "true" => {
                self.advance();
                Ok(Formula::True)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.advance();
                Ok(Formula::falsity())
            }
            Tok::Ident(kw) if self.cfg.dialect == Dialect::Ltlp && kw == "within" => self.within(),
            Tok::Ident(kw)
                if self.cfg.dialect == Dialect::Ltlp
                    && kw == "j"
                    && matches!(self.peek_at(1), Tok::Rel(Relation::Ge | Relation::Le))
                    && matches!(self.peek_at(2), Tok::Ident(s) if s == "j0") =>
            {
                self.split_guard()
            }
            Tok::Ident(_) | Tok::Number(_) | Tok::Minus => self.atom(),
            other => Err(self.syntax(format!("expected a formula, found {}", other.describe()))),
        }
    }

    fn window(&mut self) -> Result<Window, ParseError> {
        if *self.peek() != Tok::LBracket {
            return Ok(Window::Untimed);
        }
        let open = self.pos;
        if self.cfg.dialect == Dialect::Ltlp {
            return Err(self.syntax("LTL_P operators take no interval".to_string()));
        }
        self.advance();
        let lo = self.bound_number(false)?;
        self.expect(Tok::Comma, "`,`")?;
        let hi = self.bound_number(true)?;
        self.expect(Tok::RBracket, "`]`")?;
        let empty = |lo: String, hi: String| ParseErrorKind::EmptyInterval { lo, hi };
        match self.cfg.dialect {
            Dialect::Stl => {
                let lo_v = parse_real(&lo.unwrap_or_default())
                    .map_err(|e| self.error_at(open, e.into()))?;
                let hi_v = match &hi {
                    Some(h) => Upper::Finite(
                        parse_real(h).map_err(|e| self.error_at(open, e.into()))?,
                    ),
                    None => Upper::Unbounded,
                };
                if let Upper::Finite(h) = hi_v {
                    if h < lo_v {
                        return Err(self.error_at(open, empty(
                            crate::time::format_real(&lo_v),
                            crate::time::format_real(&h),
                        )));
                    }
                }
                RealInterval::new(lo_v, hi_v)
                    .map(Window::Real)
                    .map_err(|e| self.error_at(open, e.into()))
            }
            Dialect::Sstl => {
                let int = |s: &str, p: &Self| -> Result<u64, ParseError> {
                    s.parse::<u64>().map_err(|_| {
                        p.error_at(
                            open,
                            ParseErrorKind::Syntax(format!(
                                "SSTL interval bounds are non-negative tick counts, got `{s}`"
                            )),
                        )
                    })
                };
                let lo_v = int(&lo.unwrap_or_default(), self)?;
                let hi_v = match &hi {
                    Some(h) => Upper::Finite(int(h, self)?),
                    None => Upper::Unbounded,
                };
                if let Upper::Finite(h) = hi_v {
                    if h < lo_v {
                        return Err(self.error_at(open, empty(lo_v.to_string(), h.to_string())));
                    }
                }
                TickInterval::new(lo_v, hi_v)
                    .map(Window::Tick)
                    .map_err(|e| self.error_at(open, e.into()))
            }
            Dialect::Ltlp => unreachable!(),
        }
    }

    /// Interval bound literal; `None` stands for `inf` (upper bound only).
    fn bound_number(&mut self, allow_inf: bool) -> Result<Option<String>, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.advance();
                Ok(Some(n))
            }
            Tok::Ident(s) if s == "inf" && allow_inf => {
                self.advance();
                Ok(None)
            }
            other => Err(self.syntax(format!(
                "expected an interval bound, found {}",
                other.describe()
            ))),
        }
    }

    fn binder(&mut self) -> Result<Option<ObligationId>, ParseError> {
        if *self.peek() != Tok::At {
            return Ok(None);
        }
        if self.cfg.dialect != Dialect::Ltlp {
            return Err(self.syntax("obligation binders are only available in LTL_P".to_string()));
        }
        self.advance();
        Ok(Some(self.obligation_number()?))
    }

    fn obligation_number(&mut self) -> Result<ObligationId, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                let id = n
                    .parse::<u32>()
                    .map_err(|_| self.syntax(format!("bad obligation id `{n}`")))?;
                self.advance();
                Ok(ObligationId(id))
            }
            other => Err(self.syntax(format!(
                "expected an obligation id, found {}",
                other.describe()
            ))),
        }
    }

    fn tick_number(&mut self) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                let v = n
                    .parse::<u64>()
                    .map_err(|_| self.syntax(format!("expected a tick count, found `{n}`")))?;
                self.advance();
                Ok(v)
            }
            other => Err(self.syntax(format!("expected a tick count, found {}", other.describe()))),
        }
    }

    fn within(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        self.advance();
        self.expect(Tok::LBracket, "`[`")?;
        let lo = self.tick_number()?;
        self.expect(Tok::Comma, "`,`")?;
        let hi = self.tick_number()?;
        self.expect(Tok::RBracket, "`]`")?;
        if hi < lo {
            return Err(self.error_at(
                start,
                ParseErrorKind::EmptyInterval {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                },
            ));
        }
        self.expect(Tok::At, "`@`")?;
        let k = self.obligation_number()?;
        Ok(Formula::guard(GuardKind::Within { lo, hi }, k))
    }

    fn split_guard(&mut self) -> Result<Formula, ParseError> {
        self.advance();
        let Tok::Rel(rel) = self.advance() else {
            unreachable!()
        };
        self.advance(); // j0
        self.expect(Tok::At, "`@`")?;
        let k = self.obligation_number()?;
        let offset = if *self.peek() == Tok::Plus {
            self.advance();
            self.tick_number()?
        } else {
            0
        };
        let kind = if rel == Relation::Ge {
            GuardKind::LowerOnly(offset)
        } else {
            GuardKind::UpperOnly(offset)
        };
        Ok(Formula::guard(kind, k))
    }

    fn signed_number(&mut self) -> Result<Real, ParseError> {
        let negative = if *self.peek() == Tok::Minus {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Number(n) => {
                let v = parse_real(&n).map_err(|e| self.error_at(self.pos, e.into()))?;
                self.advance();
                Ok(if negative { -v } else { v })
            }
            other => Err(self.syntax(format!("expected a number, found {}", other.describe()))),
        }
    }

    fn scale(&self, idx: usize, v: Real) -> Result<i64, ParseError> {
        quantize(v, self.cfg.factor).map_err(|e| self.error_at(idx, e.into()))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let mut terms: Vec<(String, i64)> = Vec::new();
        let mut first = true;
        loop {
            let mut negative = false;
            if first {
                if *self.peek() == Tok::Minus {
                    self.advance();
                    negative = true;
                }
            } else {
                match self.peek() {
                    Tok::Plus => {
                        self.advance();
                    }
                    Tok::Minus => {
                        self.advance();
                        negative = true;
                    }
                    _ => break,
                }
            }
            first = false;
            let term_start = self.pos;
            let coeff = match self.peek().clone() {
                Tok::Number(n) => {
                    let v = parse_real(&n).map_err(|e| self.error_at(self.pos, e.into()))?;
                    self.advance();
                    self.expect(Tok::Star, "`*` between coefficient and signal")?;
                    v
                }
                _ => Real::from_integer(1),
            };
            let name_idx = self.pos;
            let name = match self.peek().clone() {
                Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                    self.advance();
                    s
                }
                other => {
                    return Err(self.syntax(format!(
                        "expected a signal name, found {}",
                        other.describe()
                    )))
                }
            };
            if let Some(signals) = self.cfg.signals {
                if !signals.contains(&name) {
                    return Err(self.error_at(name_idx, ParseErrorKind::UnknownSignal(name)));
                }
            }
            let coeff = if negative { -coeff } else { coeff };
            let scaled = self.scale(term_start, coeff)?;
            terms.push((name, scaled));
        }
        let Tok::Rel(relation) = self.peek().clone() else {
            return Err(self.syntax(format!(
                "expected a comparison operator, found {}",
                self.peek().describe()
            )));
        };
        self.advance();
        let bound_idx = self.pos;
        let bound = self.signed_number()?;
        let bound = self.scale(bound_idx, bound)?;
        LinearPredicate::new(terms, relation, bound, self.cfg.factor)
            .map(Formula::Atom)
            .map_err(|e| match e {
                PredicateError::UnknownSignal(s) => {
                    self.error_at(bound_idx, ParseErrorKind::UnknownSignal(s))
                }
                other => self.error_at(bound_idx, ParseErrorKind::Syntax(other.to_string())),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::GuardAtom;

    fn sstl(s: &str) -> Formula {
        parse_formula(s, Dialect::Sstl).unwrap()
    }

    #[test]
    fn parses_heart_property() {
        let f = parse_formula("G (A_EGM > 80 -> F[0.180,0.240] (V_EGM > 80))", Dialect::Stl).unwrap();
        let Formula::Always { body, window, .. } = &f else {
            panic!("expected always, got {f:?}")
        };
        assert!(window.is_untimed());
        let Formula::Implies(lhs, rhs) = body.as_ref() else {
            panic!()
        };
        assert_eq!(**lhs, Formula::Atom(LinearPredicate::simple("A_EGM", Relation::Gt, 80)));
        let Formula::Eventually { window, body, .. } = rhs.as_ref() else {
            panic!()
        };
        let Window::Real(iv) = window else { panic!() };
        assert_eq!(iv.lo(), Real::new(18, 100));
        assert_eq!(iv.hi(), Upper::Finite(Real::new(24, 100)));
        assert_eq!(**body, Formula::Atom(LinearPredicate::simple("V_EGM", Relation::Gt, 80)));
    }

    #[test]
    fn parses_true_and_false() {
        assert_eq!(sstl("true"), Formula::True);
        assert_eq!(sstl("false"), Formula::not(Formula::True));
    }

    #[test]
    fn parses_bounded_until_in_ticks() {
        let f = sstl("(x1 >= 0) U[5,10] (x2 >= 0)");
        let Formula::Until { lhs, rhs, window, bind } = f else {
            panic!()
        };
        assert_eq!(window, Window::Tick(TickInterval::bounded(5, 10).unwrap()));
        assert_eq!(bind, None);
        assert_eq!(*lhs, Formula::Atom(LinearPredicate::simple("x1", Relation::Ge, 0)));
        assert_eq!(*rhs, Formula::Atom(LinearPredicate::simple("x2", Relation::Ge, 0)));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = sstl("a > 0 && b > 0 || c > 0 -> d > 0 -> e > 0");
        assert_eq!(f.shape(), vec!["implies", "or", "and", "atom", "atom", "atom", "implies", "atom", "atom"]);
        let u = sstl("a > 0 U b > 0 U c > 0");
        assert_eq!(u.shape(), vec!["until", "atom", "until", "atom", "atom"]);
        let n = sstl("!G a > 0 && b > 0");
        assert_eq!(n.shape(), vec!["and", "not", "always", "atom", "atom"]);
        let g = sstl("G a > 0 U b > 0");
        assert_eq!(g.shape(), vec!["until", "always", "atom", "atom"]);
    }

    #[test]
    fn linear_predicates() {
        let f = sstl("2*y1 - y2 >= 10");
        let Formula::Atom(p) = f else { panic!() };
        assert_eq!(p.terms(), &[("y1".to_string(), 2000), ("y2".to_string(), -1000)]);
        assert_eq!(p.bound(), 10_000);
        let f = sstl("-x < -0.5");
        let Formula::Atom(p) = f else { panic!() };
        assert_eq!(p.terms(), &[("x".to_string(), -1000)]);
        assert_eq!(p.bound(), -500);
        assert_eq!(p.relation(), Relation::Lt);
        let Formula::Atom(p) = sstl("x == 1") else { panic!() };
        assert_eq!(p.relation(), Relation::Eq);
    }

    #[test]
    fn ltlp_guards_and_binders() {
        let f = parse_formula(
            "(x1 >= 0 && j<=j0@1+10) U@1 (x2 >= 0 && j>=j0@1+5 && within[5,10]@1)",
            Dialect::Ltlp,
        )
        .unwrap();
        let Formula::Until { bind, rhs, .. } = &f else { panic!() };
        assert_eq!(*bind, Some(ObligationId(1)));
        let mut guards = Vec::new();
        f.visit(&mut |n| {
            if let Formula::Guard(g) = n {
                guards.push(*g);
            }
        });
        assert_eq!(
            guards,
            vec![
                GuardAtom { kind: GuardKind::UpperOnly(10), obligation: ObligationId(1) },
                GuardAtom { kind: GuardKind::LowerOnly(5), obligation: ObligationId(1) },
                GuardAtom { kind: GuardKind::Within { lo: 5, hi: 10 }, obligation: ObligationId(1) },
            ]
        );
        assert_eq!(rhs.shape(), vec!["and", "and", "atom", "guard", "guard"]);
        assert!(parse_formula("X x > 0", Dialect::Ltlp).is_ok());
    }

    #[test]
    fn dialect_restrictions() {
        assert!(parse_formula("F[1,2] x > 0", Dialect::Ltlp).is_err());
        assert!(parse_formula("X x > 0", Dialect::Sstl).is_err());
        assert!(parse_formula("F@1 x > 0", Dialect::Sstl).is_err());
        assert!(parse_formula("F[0.5,1] x > 0", Dialect::Sstl).is_err());
        assert!(parse_formula("F[0.5,1] x > 0", Dialect::Stl).is_ok());
        assert!(parse_formula("F[1,inf] x > 0", Dialect::Sstl).is_ok());
    }

    #[test]
    fn reports_errors_with_positions() {
        let e = parse_formula("G (x > 0", Dialect::Sstl).unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));

        let e = parse_formula("true &&\n  F[10,5] x > 0", Dialect::Sstl).unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
        assert!(matches!(e.kind, ParseErrorKind::EmptyInterval { .. }));

        let signals = vec!["A".to_string()];
        let e = parse_formula_with_signals("A > 0 && B > 0", Dialect::Sstl, &signals).unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        assert_eq!(e.kind, ParseErrorKind::UnknownSignal("B".into()));

        assert!(parse_formula("x >", Dialect::Sstl).is_err());
        assert!(parse_formula("x # 1", Dialect::Sstl).is_err());
        assert!(parse_formula("G > 1", Dialect::Sstl).is_err());
    }

    #[test]
    fn printing_round_trips_examples() {
        for (text, d) in [
            ("G (A_EGM > 80 -> F[0.18,0.24] (V_EGM > 80))", Dialect::Stl),
            ("(x1 >= 0) U[5,10] (x2 >= 0)", Dialect::Sstl),
            ("G[0,20] ((x1 >= 0) U (x2 >= 0))", Dialect::Sstl),
            ("2*y1 - y2 >= 10", Dialect::Sstl),
            ("!(a > 0) || F[2,inf] (b <= -1.5)", Dialect::Sstl),
            ("G@1 (within[0,20]@1 -> X j>=j0@1+3)", Dialect::Ltlp),
        ] {
            let f = parse_formula(text, d).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse_formula(&f.to_string(), d).unwrap(), f);
        }
    }
}
