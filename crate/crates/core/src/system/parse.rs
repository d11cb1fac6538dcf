//! Text format for transition systems.
//!
//! ```text
//! model traffic_light;
//! dt 1;
//! ticks 100;                       // optional, otherwise unbounded
//! var phase in [0..3] init 0;
//! process controller {
//!   trans hold: guard timer < 3 -> { timer := timer + 1 };
//!   trans pick: guard timer = 3 -> choose { { phase := 1 } | { timer := 0 } };
//! }
//! ```
//!
//! Transitions outside a `process` block belong to an implicit process
//! `main`. Comments start with `//` or `#`.

use std::collections::HashMap;

use thiserror::Error;

use super::{BinOp, Expr, Process, Transition, TransitionSystem, Updates, Variable};
use crate::time::{parse_real, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ModelError {
    pub line: usize,
    pub column: usize,
    pub kind: ModelErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("empty domain [{lo}..{hi}] for `{name}`")]
    EmptyDomain { name: String, lo: i64, hi: i64 },
    #[error("initial value {init} of `{name}` is outside [{lo}..{hi}]")]
    InitOutOfDomain { name: String, lo: i64, hi: i64, init: i64 },
    #[error("`{variable}` is written by both process `{first}` and process `{second}`")]
    SharedVariable {
        variable: String,
        first: String,
        second: String,
    },
    #[error("`{0}` is assigned twice in one update block")]
    DoubleAssignment(String),
    #[error("the model declares no variables")]
    NoVariables,
    #[error("tick length must be positive")]
    BadDt,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Decimal(String),
    Sym(&'static str),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Decimal(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

/// Longer symbols first so that prefixes do not shadow them.
const SYMBOLS: [&str; 28] = [
    ":=", "->", "..", "&&", "||", "==", "!=", "<=", ">=", ";", ":", ",", "{", "}", "[", "]", "(", ")", "|",
    "!", "=", "<", ">", "+", "-", "*", "/", "%",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ModelError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, msg: String| ModelError {
        line,
        column,
        kind: ModelErrorKind::Syntax(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), line, start_col));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let decimal = chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
            if decimal {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if decimal {
                Tok::Decimal(s)
            } else {
                Tok::Int(s.parse().map_err(|_| err(line, start_col, format!("integer `{s}` is too large")))?)
            };
            out.push((tok, line, start_col));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let sym = SYMBOLS
            .iter()
            .find(|s| rest.starts_with(**s))
            .ok_or_else(|| err(line, col, format!("unexpected character `{c}`")))?;
        i += sym.len();
        col += sym.len();
        out.push((Tok::Sym(sym), line, start_col));
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    vars: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error(&self, kind: ModelErrorKind) -> ModelError {
        let (_, line, column) = self.toks[self.pos];
        ModelError { line, column, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ModelError {
        self.error(ModelErrorKind::Syntax(msg.into()))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ModelError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{sym}`, found {}", self.peek().describe())))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), ModelError> {
        if self.keyword(word) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{word}`, found {}", self.peek().describe())))
        }
    }

    fn ident(&mut self) -> Result<String, ModelError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.syntax(format!("expected a name, found {}", t.describe()))),
        }
    }

    fn int(&mut self) -> Result<i64, ModelError> {
        let neg = self.eat("-");
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            t => Err(self.syntax(format!("expected an integer, found {}", t.describe()))),
        }
    }

    fn var_ref(&mut self) -> Result<usize, ModelError> {
        let at = self.pos;
        let name = self.ident()?;
        self.vars.get(&name).copied().ok_or_else(|| {
            self.pos = at;
            self.error(ModelErrorKind::UnknownVariable(name))
        })
    }

    fn expr(&mut self) -> Result<Expr, ModelError> {
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> Result<Expr, ModelError> {
        const LEVELS: [&[(&str, BinOp)]; 4] = [
            &[("||", BinOp::Or)],
            &[("&&", BinOp::And)],
            &[
                ("==", BinOp::Eq),
                ("=", BinOp::Eq),
                ("!=", BinOp::Ne),
                ("<=", BinOp::Le),
                (">=", BinOp::Ge),
                ("<", BinOp::Lt),
                (">", BinOp::Gt),
            ],
            &[("+", BinOp::Add), ("-", BinOp::Sub)],
        ];
        if level == LEVELS.len() {
            return self.product();
        }
        let mut lhs = self.binary(level + 1)?;
        'outer: loop {
            for (sym, op) in LEVELS[level] {
                if self.eat(sym) {
                    let rhs = self.binary(level + 1)?;
                    lhs = Expr::Bin(*op, Box::new(lhs), Box::new(rhs));
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn product(&mut self) -> Result<Expr, ModelError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else if self.eat("%") {
                BinOp::Rem
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ModelError> {
        if self.eat("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Const(n))
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Expr::Const(1))
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Expr::Const(0))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.var_ref()?)),
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            t => Err(self.syntax(format!("expected an expression, found {}", t.describe()))),
        }
    }

    fn block(&mut self) -> Result<Updates, ModelError> {
        self.expect("{")?;
        let mut updates: Updates = Vec::new();
        if !self.eat("}") {
            loop {
                let at = self.pos;
                let var = self.var_ref()?;
                if updates.iter().any(|(v, _)| *v == var) {
                    self.pos = at;
                    let name = self.ident()?;
                    self.pos = at;
                    return Err(self.error(ModelErrorKind::DoubleAssignment(name)));
                }
                self.expect(":=")?;
                updates.push((var, self.expr()?));
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(updates)
    }

    fn transition(&mut self) -> Result<Transition, ModelError> {
        let name = self.ident()?;
        self.expect(":")?;
        self.expect_keyword("guard")?;
        let guard = self.expr()?;
        self.expect("->")?;
        let choices = if self.keyword("choose") {
            self.expect("{")?;
            let mut alts = vec![self.block()?];
            while self.eat("|") {
                alts.push(self.block()?);
            }
            self.expect("}")?;
            alts
        } else {
            self.keyword("updates");
            vec![self.block()?]
        };
        self.expect(";")?;
        Ok(Transition { name, guard, choices })
    }
}

/// Parses a model in the text format described in this module.
pub fn parse_model(text: &str) -> Result<TransitionSystem, ModelError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars: HashMap::new(),
    };
    let mut name = "model".to_string();
    let mut dt = Real::from_integer(1);
    let mut tick_limit = None;
    let mut variables: Vec<Variable> = Vec::new();
    let mut processes: Vec<Process> = Vec::new();
    let mut main = Process {
        name: "main".into(),
        transitions: Vec::new(),
    };
    while *p.peek() != Tok::End {
        if p.keyword("model") {
            name = p.ident()?;
            p.expect(";")?;
        } else if p.keyword("dt") {
            let value = match p.bump() {
                Tok::Int(n) => Real::from_integer(n),
                Tok::Decimal(s) => parse_real(&s).map_err(|e| p.syntax(e.to_string()))?,
                t => return Err(p.syntax(format!("expected a tick length, found {}", t.describe()))),
            };
            if value <= Real::from_integer(0) {
                return Err(p.error(ModelErrorKind::BadDt));
            }
            dt = value;
            p.expect(";")?;
        } else if p.keyword("ticks") {
            let n = p.int()?;
            if n < 0 {
                return Err(p.syntax("tick limit must be non-negative"));
            }
            tick_limit = Some(n as u64);
            p.expect(";")?;
        } else if p.keyword("var") {
            let at = p.pos;
            let vname = p.ident()?;
            if p.vars.contains_key(&vname) {
                p.pos = at;
                return Err(p.error(ModelErrorKind::DuplicateVariable(vname)));
            }
            p.expect_keyword("in")?;
            p.expect("[")?;
            let lo = p.int()?;
            p.expect("..")?;
            let hi = p.int()?;
            p.expect("]")?;
            if hi < lo {
                p.pos = at;
                return Err(p.error(ModelErrorKind::EmptyDomain { name: vname, lo, hi }));
            }
            p.expect_keyword("init")?;
            let init = p.int()?;
            if init < lo || init > hi {
                p.pos = at;
                return Err(p.error(ModelErrorKind::InitOutOfDomain {
                    name: vname,
                    lo,
                    hi,
                    init,
                }));
            }
            p.expect(";")?;
            p.vars.insert(vname.clone(), variables.len());
            variables.push(Variable {
                name: vname,
                lo,
                hi,
                init,
            });
        } else if p.keyword("process") {
            let pname = p.ident()?;
            p.expect("{")?;
            let mut transitions = Vec::new();
            while !p.eat("}") {
                p.expect_keyword("trans")?;
                transitions.push(p.transition()?);
            }
            processes.push(Process {
                name: pname,
                transitions,
            });
        } else if p.keyword("trans") {
            main.transitions.push(p.transition()?);
        } else {
            return Err(p.syntax(format!("expected a declaration, found {}", p.peek().describe())));
        }
    }
    if variables.is_empty() {
        return Err(p.error(ModelErrorKind::NoVariables));
    }
    if !main.transitions.is_empty() {
        processes.insert(0, main);
    }
    let mut writer: HashMap<usize, &str> = HashMap::new();
    for proc in &processes {
        for t in &proc.transitions {
            for (var, _) in t.choices.iter().flatten() {
                match writer.get(var) {
                    Some(first) if *first != proc.name => {
                        return Err(ModelError {
                            line: 0,
                            column: 0,
                            kind: ModelErrorKind::SharedVariable {
                                variable: variables[*var].name.clone(),
                                first: first.to_string(),
                                second: proc.name.clone(),
                            },
                        });
                    }
                    _ => {
                        writer.insert(*var, &proc.name);
                    }
                }
            }
        }
    }
    Ok(TransitionSystem::new(name, dt, variables, processes, tick_limit))
}
