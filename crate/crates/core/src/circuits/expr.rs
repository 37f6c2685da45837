use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Var(String),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(name: &str) -> Self {
        BoolExpr::Var(name.to_owned())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(inner))
    }

    pub fn and(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn xor(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::Xor(Box::new(lhs), Box::new(rhs))
    }

    /// Variable names in sorted order.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolExpr::Var(v) => {
                out.insert(v.clone());
            }
            BoolExpr::Not(x) => x.collect_vars(out),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) | BoolExpr::Xor(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Direct evaluation; the reference the synthesized netlists are checked against.
    pub fn eval(&self, assignment: &BTreeMap<String, bool>) -> Result<bool> {
        Ok(match self {
            BoolExpr::Var(v) => *assignment.get(v).ok_or_else(|| Error::MissingAssignment(v.clone()))?,
            BoolExpr::Not(x) => !x.eval(assignment)?,
            BoolExpr::And(l, r) => l.eval(assignment)? & r.eval(assignment)?,
            BoolExpr::Or(l, r) => l.eval(assignment)? | r.eval(assignment)?,
            BoolExpr::Xor(l, r) => l.eval(assignment)? ^ r.eval(assignment)?,
        })
    }
}

impl fmt::Display for BoolExpr {
    /// Fully parenthesized, so the output parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Var(v) => f.write_str(v),
            BoolExpr::Not(x) => write!(f, "!{x}"),
            BoolExpr::And(l, r) => write!(f, "({l} & {r})"),
            BoolExpr::Or(l, r) => write!(f, "({l} | {r})"),
            BoolExpr::Xor(l, r) => write!(f, "({l} ^ {r})"),
        }
    }
}

/// Parses `var | '!' expr | expr ('&' | '^' | '|') expr | '(' expr ')'`.
/// `!` binds tightest, then `&`, then `^`, then `|`; binary operators are
/// left-associative. Variables are `[A-Za-z_][A-Za-z0-9_]*`.
pub fn parse_expression(text: &str) -> Result<BoolExpr> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let expr = parser.or_level()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_owned() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn binary(
        &mut self,
        op: u8,
        next: fn(&mut Self) -> Result<BoolExpr>,
        build: fn(BoolExpr, BoolExpr) -> BoolExpr,
    ) -> Result<BoolExpr> {
        let mut lhs = next(self)?;
        while self.eat(op) {
            let rhs = next(self)?;
            lhs = build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or_level(&mut self) -> Result<BoolExpr> {
        self.binary(b'|', Self::xor_level, BoolExpr::or)
    }

    fn xor_level(&mut self) -> Result<BoolExpr> {
        self.binary(b'^', Self::and_level, BoolExpr::xor)
    }

    fn and_level(&mut self) -> Result<BoolExpr> {
        self.binary(b'&', Self::unary, BoolExpr::and)
    }

    fn unary(&mut self) -> Result<BoolExpr> {
        if self.eat(b'!') {
            return Ok(BoolExpr::not(self.unary()?));
        }
        if self.eat(b'(') {
            let inner = self.or_level()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            Some(_) => return Err(self.error("expected a variable, `!` or `(`")),
            None => return Err(self.error("unexpected end of input")),
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        Ok(BoolExpr::var(name))
    }
}
