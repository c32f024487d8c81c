//! Text syntax for algebra elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' int]
//! atom   := int ['/' int] | 'L^' rational | var | '(' expr ')'
//! var    := ('q' | 'p') ':' name [side] | 't:' name
//! side   := '+' | '-'
//! ```
//!
//! A `+`/`-` directly after a variable name is a side suffix unless the next
//! non-blank character starts an operand (letter, digit or `(`), so
//! `q:x+*p:y` is `q_x^+ p_y` while `q:x+p:y` is a sum.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::element::{AlgElement, Ctx, Truncation};
use crate::monomial::Monomial;
use crate::scalar::{Scalar, Q};
use crate::table::{GeneratorTable, Kind, Side, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("odd variable `{0}` raised to a power above 1")]
    OddPowerViolation(String),
    #[error("generator `{name}` is not declared on side {side}")]
    UndeclaredSide { name: String, side: String },
}

impl ParseError {
    pub fn syntax(offset: usize, msg: impl Into<String>) -> Self {
        ParseError { offset, kind: ParseErrorKind::Syntax(msg.into()) }
    }

    /// Shift the offset, e.g. when the parsed text sits inside a larger file.
    pub fn shifted(mut self, by: usize) -> Self {
        self.offset += by;
        self
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

/// Parse an element over `table`, tagged `ctx`, truncated by `trunc`.
pub fn parse_element(
    src: &str,
    table: &Arc<GeneratorTable>,
    ctx: Ctx,
    trunc: Truncation,
) -> std::result::Result<AlgElement, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, table, ctx, trunc };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(ParseError::syntax(p.pos, format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

/// Parse a nonnegative rational literal `a` or `a/b`.
pub fn parse_rational(src: &str) -> Option<Q> {
    let s = src.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a Arc<GeneratorTable>,
    ctx: Ctx,
    trunc: Truncation,
}

enum Atom {
    Var(Var, usize),
    Elem(AlgElement),
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn zero(&self) -> AlgElement {
        AlgElement::zero(self.table, self.ctx, self.trunc.clone())
    }

    fn constant(&self, c: Scalar) -> AlgElement {
        AlgElement::constant(self.table, self.ctx, self.trunc.clone(), c)
    }

    fn expr(&mut self) -> PResult<AlgElement> {
        let mut acc = self.zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let neg = if self.eat(b'-') {
                true
            } else if first {
                false
            } else if self.eat(b'+') {
                false
            } else {
                break;
            };
            let t = self.term()?;
            acc = if neg { acc.sub_any(&t) } else { acc.add_any(&t) };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<AlgElement> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.mul_any(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<AlgElement> {
        let atom = self.atom()?;
        let exp = if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let n = self.uint()?;
            u32::try_from(n).map_err(|_| ParseError::syntax(at, "exponent too large"))?
        } else {
            1
        };
        match atom {
            Atom::Var(v, at) => {
                if exp > 1 && self.table.is_odd(v) {
                    return Err(ParseError { offset: at, kind: ParseErrorKind::OddPowerViolation(self.table.var_name(v)) });
                }
                let m = if exp == 0 {
                    Monomial::one()
                } else {
                    Monomial::from_sorted(vec![(v, exp)])
                };
                Ok(AlgElement::from_term(self.table, self.ctx, self.trunc.clone(), m, Scalar::one()))
            }
            Atom::Elem(e) => Ok(e.pow(exp)),
        }
    }

    fn uint(&mut self) -> PResult<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::syntax(start, "expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits"))
    }

    /// `a` or `a/b`, with `/` immediately following.
    fn rational(&mut self) -> PResult<Q> {
        let n = self.uint()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let d = self.uint()?;
            if d.is_zero() {
                return Err(ParseError::syntax(at, "zero denominator"));
            }
            return Ok(Q::new(n, d));
        }
        Ok(Q::from_integer(n))
    }

    fn atom(&mut self) -> PResult<Atom> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(ParseError::syntax(start, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(ParseError::syntax(self.pos, "expected `)`"));
                }
                Ok(Atom::Elem(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(Atom::Elem(self.constant(Scalar::from_q(r))))
            }
            Some(b'L') if self.src.get(self.pos + 1) == Some(&b'^') => {
                self.pos += 2;
                self.skip_ws();
                let paren = self.peek() == Some(b'(');
                if paren {
                    self.pos += 1;
                    self.skip_ws();
                }
                let a = self.rational()?;
                if paren && !self.eat(b')') {
                    return Err(ParseError::syntax(self.pos, "expected `)`"));
                }
                if a.is_negative() {
                    return Err(ParseError::syntax(start, "negative Novikov exponent"));
                }
                Ok(Atom::Elem(self.constant(Scalar::monomial(Q::from_integer(1.into()), a))))
            }
            Some(k @ (b'q' | b'p' | b't')) if self.src.get(self.pos + 1) == Some(&b':') => {
                self.pos += 2;
                let name_start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                if name_start == self.pos {
                    return Err(ParseError::syntax(name_start, "expected a name"));
                }
                let name = std::str::from_utf8(&self.src[name_start..self.pos]).expect("ascii").to_string();
                if k == b't' {
                    let i = self.table.tvar_index(&name).ok_or(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnknownGenerator(format!("t:{name}")),
                    })?;
                    return Ok(Atom::Var(Var::t(i), start));
                }
                let side = self.side_suffix();
                let i = self
                    .table
                    .index_of(&name)
                    .ok_or(ParseError { offset: start, kind: ParseErrorKind::UnknownGenerator(name.clone()) })?;
                let v = if k == b'q' { Var::q(i, side) } else { Var::p(i, side) };
                debug_assert!(v.kind != Kind::T);
                if !self.table.generator(i).on_side(side) {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UndeclaredSide { name, side: side.to_string() },
                    });
                }
                Ok(Atom::Var(v, start))
            }
            Some(c) => Err(ParseError::syntax(start, format!("unexpected `{}`", c as char))),
        }
    }

    fn side_suffix(&mut self) -> Side {
        let side = match self.peek() {
            Some(b'+') => Side::Plus,
            Some(b'-') => Side::Minus,
            _ => return Side::Mid,
        };
        let mut j = self.pos + 1;
        while self.src.get(j).is_some_and(|c| c.is_ascii_whitespace()) {
            j += 1;
        }
        let operand = self.src.get(j).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'(');
        if operand {
            Side::Mid
        } else {
            self.pos += 1;
            side
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::GeneratorSpec;

    fn table() -> Arc<GeneratorTable> {
        Arc::new(
            GeneratorTable::new(
                1,
                vec![GeneratorSpec::new("x", 1, 1), GeneratorSpec::new("y", 2, 1).on(&[Side::Plus, Side::Mid])],
                vec![("s".into(), 2)],
            )
            .unwrap(),
        )
    }

    fn parse(s: &str) -> std::result::Result<AlgElement, ParseError> {
        parse_element(s, &table(), Ctx::P, Truncation::none())
    }

    #[test]
    fn side_suffixes() {
        let a = parse("q:x+*p:y+").unwrap();
        let m = a.terms().next().unwrap().0;
        assert_eq!(m.vars()[0].0, Var::q(0, Side::Plus));
        let sum = parse("q:x+p:y").unwrap();
        assert_eq!(sum.len(), 2);
        let diff = parse("q:y+ - q:y").unwrap();
        assert_eq!(diff.len(), 2);
        assert_eq!(parse("q:x- - q:x-").unwrap(), parse("0").unwrap());
    }

    #[test]
    fn errors_are_located() {
        let e = parse("q:x + q:zz").unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(matches!(e.kind, ParseErrorKind::UnknownGenerator(_)));
        let e = parse("2*q:x^2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::OddPowerViolation(_)));
        let e = parse("q:y-").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UndeclaredSide { .. }));
        assert!(parse("q:y +").is_err());
        assert!(parse("(q:y").is_err());
    }

    #[test]
    fn rationals_and_novikov() {
        let a = parse("1/2*L^3/2*q:y + L^(1/2)").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(parse("(q:y + 1)^2").unwrap(), parse("q:y^2 + 2*q:y + 1").unwrap());
        assert_eq!(parse_rational("3/6"), Some(Q::new(1.into(), 2.into())));
    }
}
