//! Parser for ring elements and group words.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor (['*'] factor | '/' INT)*
//! factor  := primary ['^' ['-'] INT]
//! primary := INT | LETTER | '(' expr ')'
//! INT     := [0-9]+
//! LETTER  := a single ASCII letter naming a generator
//! ```
//!
//! Juxtaposition multiplies (`2t`, `a b`). `^` binds tighter than `*` and
//! `/`, which bind tighter than `+` and `-`. Division is only by integer
//! literals and means multiplication by the inverse in the coefficient ring.
//! Negative powers are allowed for homogeneous units only.
//!
//! Group sets are comma-separated lists of words; free abelian backends also
//! take integer tuples such as `(0,0),(1,0)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::coeff::CoeffError;
use crate::group::{Backend, GroupElement};
use crate::ring::{Basis, ModelKind, RingElement, RingError, RingModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Lexical(char),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(char),
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("coefficient {0}")]
    Coefficient(String),
    #[error("{0}")]
    NotInvertible(String),
    #[error("not a group word: {0}")]
    NotGroupWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.column, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Letter(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Letter(c) => write!(f, "`{c}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, column: 1 };
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        chars.next();
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
            continue;
        }
        pos.column += 1;
        let tok = match c {
            ' ' | '\t' | '\r' => continue,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let mut digits = String::from(c);
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    chars.next();
                    pos.column += 1;
                }
                Tok::Int(digits.parse().expect("ascii digits"))
            }
            c if c.is_ascii_alphabetic() => Tok::Letter(c),
            c => return Err(here.err(ParseErrorKind::Lexical(c))),
        };
        out.push((tok, here));
    }
    out.push((Tok::End, pos));
    Ok(out)
}

/// Parsed expression tree; each node keeps its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    node: Node,
    pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Int(BigInt),
    Gen(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, BigInt),
    Pow(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        self.pos().err(ParseErrorKind::Unexpected(self.peek().to_string()))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos();
        let mut lhs = match self.peek() {
            Tok::Minus => {
                self.bump();
                let t = self.term()?;
                Expr { node: Node::Neg(Box::new(t)), pos: start }
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr { node: Node::Add(Box::new(lhs), Box::new(rhs)), pos };
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr { node: Node::Sub(Box::new(lhs), Box::new(rhs)), pos };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr { node: Node::Mul(Box::new(lhs), Box::new(rhs)), pos };
                }
                Tok::Slash => {
                    self.bump();
                    match self.bump() {
                        (Tok::Int(n), _) => lhs = Expr { node: Node::Div(Box::new(lhs), n), pos },
                        (t, p) => return Err(p.err(ParseErrorKind::Unexpected(t.to_string()))),
                    }
                }
                Tok::Int(_) | Tok::Letter(_) | Tok::LParen => {
                    let rhs = self.factor()?;
                    lhs = Expr { node: Node::Mul(Box::new(lhs), Box::new(rhs)), pos };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (Tok::Int(n), p) => {
                let n = if neg { -n } else { n };
                let e = n
                    .to_i32()
                    .ok_or_else(|| p.err(ParseErrorKind::ExponentOverflow))?;
                Ok(Expr { node: Node::Pow(Box::new(base), e as i64), pos })
            }
            (t, p) => Err(p.err(ParseErrorKind::Unexpected(t.to_string()))),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr { node: Node::Int(n), pos }),
            Tok::Letter(c) => Ok(Expr { node: Node::Gen(c), pos }),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (t, p) => Err(p.err(ParseErrorKind::Unexpected(t.to_string()))),
                }
            }
            t => Err(pos.err(ParseErrorKind::Unexpected(t.to_string()))),
        }
    }
}

/// Parses `src` into an expression tree without evaluating it.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected());
    }
    Ok(e)
}

fn generator(model: &Arc<RingModel>, c: char, pos: Pos) -> Result<RingElement, ParseError> {
    let k = model.coeffs();
    match model.kind() {
        ModelKind::Weyl => match c {
            'x' => Ok(RingElement::monomial(model, Basis::Weyl(1, 0), k.one())),
            'y' => Ok(RingElement::monomial(model, Basis::Weyl(0, 1), k.one())),
            _ => Err(pos.err(ParseErrorKind::UnknownGenerator(c))),
        },
        _ => {
            let g = model
                .backend()
                .unwrap()
                .symbol(c)
                .ok_or_else(|| pos.err(ParseErrorKind::UnknownGenerator(c)))?;
            Ok(RingElement::basis_element(model, g))
        }
    }
}

fn ring_err(pos: Pos, e: RingError) -> ParseError {
    match e {
        RingError::NotInvertible(s) => pos.err(ParseErrorKind::NotInvertible(format!("{s} is not invertible"))),
        RingError::Coeff(c) => pos.err(ParseErrorKind::Coefficient(c.to_string())),
        other => pos.err(ParseErrorKind::Unexpected(other.to_string())),
    }
}

impl Expr {
    /// Evaluates in `model`.
    pub fn eval(&self, model: &Arc<RingModel>) -> Result<RingElement, ParseError> {
        let k = model.coeffs();
        let pos = self.pos;
        match &self.node {
            Node::Int(n) => Ok(RingElement::scalar(model, k.from_bigint(n))),
            Node::Gen(c) => generator(model, *c, pos),
            Node::Neg(e) => Ok(e.eval(model)?.neg()),
            Node::Add(a, b) => a.eval(model)?.add(&b.eval(model)?).map_err(|e| ring_err(pos, e)),
            Node::Sub(a, b) => a.eval(model)?.sub(&b.eval(model)?).map_err(|e| ring_err(pos, e)),
            Node::Mul(a, b) => a.eval(model)?.mul(&b.eval(model)?).map_err(|e| ring_err(pos, e)),
            Node::Div(a, n) => {
                let inv = k
                    .from_fraction(&BigInt::one(), n)
                    .map_err(|e: CoeffError| pos.err(ParseErrorKind::Coefficient(e.to_string())))?;
                Ok(a.eval(model)?.scale(&inv))
            }
            Node::Pow(a, e) => a.eval(model)?.pow(*e).map_err(|err| ring_err(pos, err)),
        }
    }

    /// Evaluates as a group word: generators, products, powers and `1`.
    pub fn eval_group(&self, backend: Backend) -> Result<GroupElement, ParseError> {
        let pos = self.pos;
        let not_word = |what: &str| pos.err(ParseErrorKind::NotGroupWord(what.to_string()));
        match &self.node {
            Node::Int(n) if n.is_one() => Ok(backend.identity()),
            Node::Int(n) => Err(not_word(&n.to_string())),
            Node::Gen(c) => backend.symbol(*c).ok_or_else(|| pos.err(ParseErrorKind::UnknownGenerator(*c))),
            Node::Mul(a, b) => Ok(a.eval_group(backend)?.mul_unchecked(&b.eval_group(backend)?)),
            Node::Pow(a, e) => Ok(a.eval_group(backend)?.pow(*e)),
            Node::Neg(_) | Node::Sub(..) => Err(not_word("`-`")),
            Node::Add(..) => Err(not_word("`+`")),
            Node::Div(..) => Err(not_word("`/`")),
        }
    }
}

/// Parses and evaluates a ring element.
pub fn parse_element(src: &str, model: &Arc<RingModel>) -> Result<RingElement, ParseError> {
    parse_expr(src)?.eval(model)
}

/// Parses one group word such as `a^2*b^-1`.
pub fn parse_group_element(src: &str, backend: Backend) -> Result<GroupElement, ParseError> {
    parse_expr(src)?.eval_group(backend)
}

/// Splits at commas outside parentheses, keeping each piece's offset.
fn split_top_level(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &src[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &src[start..]));
    out
}

fn parse_tuple(item: &str, rank: usize) -> Option<Vec<i64>> {
    let inner = item.trim().strip_prefix('(')?.strip_suffix(')')?;
    let v: Option<Vec<i64>> = inner.split(',').map(|s| s.trim().parse().ok()).collect();
    v.filter(|v| v.len() == rank)
}

/// Parses a comma-separated list of group elements.
pub fn parse_group_set(src: &str, backend: Backend) -> Result<Vec<GroupElement>, ParseError> {
    let mut out = Vec::new();
    for (offset, item) in split_top_level(src) {
        if let Backend::Abelian { rank } = backend {
            if let Some(v) = parse_tuple(item, rank as usize) {
                out.push(backend.vector(&v).unwrap());
                continue;
            }
        }
        let g = parse_group_element(item, backend).map_err(|mut e| {
            if e.line == 1 {
                e.column += src[..offset].chars().count();
            }
            e
        })?;
        out.push(g);
    }
    if out.is_empty() || (out.len() == 1 && src.trim().is_empty()) {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::Unexpected("empty set".into()) });
    }
    Ok(out)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Int(n) => write!(f, "{n}"),
            Node::Gen(c) => write!(f, "{c}"),
            Node::Neg(e) => write!(f, "(-{e})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a}*{b})"),
            Node::Div(a, n) => write!(f, "({a}/{n})"),
            Node::Pow(a, e) => write!(f, "({a}^{e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;

    fn f2(b: Backend) -> Arc<RingModel> {
        RingModel::group_ring(b, CoeffRing::Prime(2))
    }

    #[test]
    fn free_group_element() {
        let m = f2(Backend::Free { rank: 2 });
        let x = parse_element("1 + a*b^-1", &m).unwrap();
        let supp: Vec<String> = x.group_support().iter().map(|g| g.to_string()).collect();
        assert_eq!(supp, vec!["1", "a*b^-1"]);
    }

    #[test]
    fn square_in_characteristic_two() {
        let m = f2(Backend::Abelian { rank: 1 });
        assert_eq!(parse_element("(1+t)^2", &m).unwrap().to_string(), "1 + t^2");
    }

    #[test]
    fn weyl_commutator() {
        let m = RingModel::weyl(CoeffRing::Rationals);
        assert_eq!(parse_element("x*y - y*x", &m).unwrap().to_string(), "-1");
        assert_eq!(parse_element("y x", &m).unwrap().to_string(), "1 + x*y");
    }

    #[test]
    fn precedence_and_juxtaposition() {
        let m = RingModel::group_ring(Backend::Abelian { rank: 1 }, CoeffRing::Integers);
        assert_eq!(parse_element("2t^2 + 3", &m).unwrap().to_string(), "3 + 2*t^2");
        assert_eq!(parse_element("-(1 - t)", &m).unwrap().to_string(), "-1 + t");
        assert_eq!(parse_element("t^-1 t", &m).unwrap().to_string(), "1");
    }

    #[test]
    fn fractions_follow_the_coefficient_ring() {
        let q = RingModel::quaternions(CoeffRing::Rationals).unwrap();
        assert_eq!(parse_element("(1 - i)/2", &q).unwrap().to_string(), "1/2 - 1/2*i");
        assert_eq!(parse_element("1/2*i", &q).unwrap().to_string(), "1/2*i");
        let z = RingModel::group_ring(Backend::Abelian { rank: 1 }, CoeffRing::Integers);
        let e = parse_element("1 + t/2", &z).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Coefficient(_)));
        assert_eq!((e.line, e.column), (1, 6));
    }

    #[test]
    fn errors_carry_positions() {
        let m = f2(Backend::Free { rank: 2 });
        let e = parse_element("a +\n  q", &m).unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (2, 3, ParseErrorKind::UnknownGenerator('q')));
        let e = parse_element("a $ b", &m).unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (1, 3, ParseErrorKind::Lexical('$')));
        let e = parse_element("a^99999999999", &m).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentOverflow);
        let e = parse_element("(1 + a)^-1", &m).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NotInvertible(_)));
        assert!(parse_element("a +", &m).is_err());
        assert!(parse_element("(a", &m).is_err());
    }

    #[test]
    fn group_sets() {
        let z2 = Backend::Abelian { rank: 2 };
        let s = parse_group_set("(0,0),(1,0), u*v^2", z2).unwrap();
        assert_eq!(s, vec![z2.vector(&[0, 0]).unwrap(), z2.vector(&[1, 0]).unwrap(), z2.vector(&[1, 2]).unwrap()]);
        let k = Backend::Klein;
        assert_eq!(parse_group_element("b*a", k).unwrap().to_string(), "a^-1*b");
        let e = parse_group_set("a, 1 + b", k).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NotGroupWord(_)));
        assert_eq!(e.column, 6);
    }

    #[test]
    fn expression_display_reparses() {
        let e = parse_expr("2 t^-3 (1 + a) - 1/2").unwrap();
        let again = parse_expr(&e.to_string()).unwrap();
        assert_eq!(again.to_string(), e.to_string());
    }
}
