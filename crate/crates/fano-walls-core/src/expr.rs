//! Class-expression parser for the command line.
//!
//! Grammar (whitespace free between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | '(' expr ')' | rational | 'k1' | 'k2'
//!         | 'ch(' rational ',' rational ',' rational ',' rational ')'
//! rational := integer ('/' integer)?
//! ```
//!
//! `k1` and `k2` embed through the lattice, `ch(...)` is a raw coefficient
//! vector. Multiplication needs a scalar on at least one side; the result
//! of a full expression must be a class, not a bare scalar.

use crate::kulattice::{kappa1, kappa2};
use crate::numclass::{ChernCharacter, FanoContext};
use crate::rat::{Int, Rat};
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone)]
enum Val {
    Num(Rat),
    Class(ChernCharacter),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a FanoContext,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ExprError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn integer(&mut self) -> Result<Int, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<Int>().map_err(|e| ExprError { pos: start, msg: e.to_string() })
    }

    fn rational(&mut self) -> Result<Rat, ExprError> {
        let p = self.integer()?;
        if self.eat(b'/') {
            let q = self.integer()?;
            if q.is_zero() {
                return self.err("zero denominator");
            }
            Ok(Rat::new(p, q))
        } else {
            Ok(Rat::from_integer(p))
        }
    }

    fn chern_literal(&mut self) -> Result<ChernCharacter, ExprError> {
        self.expect(b'(')?;
        let a0 = self.rational()?;
        self.expect(b',')?;
        let a1 = self.rational()?;
        self.expect(b',')?;
        let a2 = self.rational()?;
        self.expect(b',')?;
        let a3 = self.rational()?;
        self.expect(b')')?;
        Ok(ChernCharacter::new(a0, a1, a2, a3))
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn factor(&mut self) -> Result<Val, ExprError> {
        match self.peek() {
            Some(b'-') => {
                // unary minus binds to a whole factor
                self.pos += 1;
                Ok(match self.factor()? {
                    Val::Num(x) => Val::Num(-x),
                    Val::Class(c) => Val::Class(c.scale(&Rat::from_integer(Int::from(-1)))),
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'c') if self.keyword("ch") => Ok(Val::Class(self.chern_literal()?)),
            Some(b'k') => {
                if self.keyword("k1") {
                    Ok(Val::Class(kappa1(self.ctx)))
                } else if self.keyword("k2") {
                    Ok(Val::Class(kappa2(self.ctx)))
                } else {
                    self.err("expected k1 or k2")
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(Val::Num(self.rational()?)),
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }

    fn term(&mut self) -> Result<Val, ExprError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            acc = match (acc, rhs) {
                (Val::Num(a), Val::Num(b)) => Val::Num(a * b),
                (Val::Num(a), Val::Class(c)) | (Val::Class(c), Val::Num(a)) => {
                    Val::Class(c.scale(&a))
                }
                (Val::Class(_), Val::Class(_)) => {
                    return self.err("cannot multiply two classes");
                }
            };
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<Val, ExprError> {
        let mut acc = self.term()?;
        loop {
            // subtraction rides on the next term's unary minus
            if !self.eat(b'+') && self.peek() != Some(b'-') {
                break;
            }
            let rhs = self.term()?;
            acc = match (acc, rhs) {
                (Val::Num(a), Val::Num(b)) => Val::Num(a + b),
                (Val::Class(a), Val::Class(b)) => Val::Class(&a + &b),
                _ => return self.err("cannot add a scalar to a class"),
            };
        }
        Ok(acc)
    }
}

/// Parses an expression to a Chern character in the given context.
pub fn parse_class_expr(ctx: &FanoContext, input: &str) -> Result<ChernCharacter, ExprError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, ctx };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    match v {
        Val::Class(c) => Ok(c),
        Val::Num(_) => Err(ExprError {
            pos: input.len(),
            msg: "expression is a scalar, expected a class".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kulattice::{embed, KuClass};
    use crate::rat::{rat, ratio};

    fn ctx(d: i64) -> FanoContext {
        FanoContext::new(d).unwrap()
    }

    #[test]
    fn basis_symbols() {
        let c = ctx(1);
        assert_eq!(parse_class_expr(&c, "k1").unwrap(), kappa1(&c));
        assert_eq!(parse_class_expr(&c, "-k1").unwrap(), kappa1(&c).scale(&rat(-1)));
        assert_eq!(
            parse_class_expr(&c, "-k1+2*k2").unwrap(),
            embed(&c, &KuClass::new(-1, 2))
        );
        assert_eq!(
            parse_class_expr(&c, " k2 - k1 ").unwrap(),
            embed(&c, &KuClass::new(-1, 1))
        );
    }

    #[test]
    fn chern_literals() {
        let c = ctx(2);
        assert_eq!(
            parse_class_expr(&c, "ch(1,-1,1/2,-1/6)").unwrap(),
            ChernCharacter::new(rat(1), rat(-1), ratio(1, 2), ratio(-1, 6))
        );
        assert_eq!(
            parse_class_expr(&c, "2*ch(1, 0, 0, 0) - ch(1,0,0,0)").unwrap(),
            ChernCharacter::unit()
        );
    }

    #[test]
    fn scalar_shapes() {
        let c = ctx(1);
        assert_eq!(
            parse_class_expr(&c, "1/2*ch(2,0,0,0)").unwrap(),
            ChernCharacter::unit()
        );
        assert_eq!(
            parse_class_expr(&c, "(k1-k2)*3").unwrap(),
            embed(&c, &KuClass::new(3, -3))
        );
        assert_eq!(
            parse_class_expr(&c, "-(k1 - k2)").unwrap(),
            embed(&c, &KuClass::new(-1, 1))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let c = ctx(1);
        let e = parse_class_expr(&c, "k3").unwrap_err();
        assert_eq!(e.pos, 0);
        let e = parse_class_expr(&c, "k1 + ").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_class_expr(&c, "k1*k2").unwrap_err();
        assert!(e.msg.contains("two classes"));
        let e = parse_class_expr(&c, "3").unwrap_err();
        assert!(e.msg.contains("scalar"));
        let e = parse_class_expr(&c, "ch(1,0,0)").unwrap_err();
        assert!(e.msg.contains("','"));
        let e = parse_class_expr(&c, "1/0*k1").unwrap_err();
        assert!(e.msg.contains("zero denominator"));
        let e = parse_class_expr(&c, "k1 k2").unwrap_err();
        assert!(e.msg.contains("trailing"));
    }
}
