//! Small expression language for algebra elements.
//!
//! Grammar: sums and differences of products, `^` with integer exponents
//! (negative only for scalar units), parentheses, integer literals, scalar
//! atoms `A Ah v1 v2 v3 d0 d1`, generator names supplied by a [`Lowering`],
//! and curve atoms `C(n,k)`.

use num_bigint::BigInt;

use crate::coeff::{CoeffElem, Scalar};
use crate::error::{Error, Result};

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Atom(String),
    Curve(i64, i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Target of evaluation: how generators, curves and products are realized.
pub trait Lowering {
    type Out: Clone;

    fn scalar(&self, c: CoeffElem) -> Self::Out;
    fn generator(&self, name: &str) -> Option<Self::Out>;
    fn curve(&self, n: i64, k: i64) -> Result<Self::Out> {
        let _ = (n, k);
        Err(Error::InvalidArgument("curve atoms are not available here".into()))
    }
    fn add(&self, x: &Self::Out, y: &Self::Out) -> Self::Out;
    fn neg(&self, x: &Self::Out) -> Self::Out;
    fn mul(&self, x: &Self::Out, y: &Self::Out) -> Result<Self::Out>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse { pos: self.pos(), msg: format!("expected {c:?}") })
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let v: i64 = n
                    .try_into()
                    .map_err(|_| Error::Parse { pos: self.pos(), msg: "integer too large".into() })?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse { pos: self.pos(), msg: "expected integer".into() }),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = if self.eat('(') {
                let e = self.signed_int()?;
                self.expect(')')?;
                e
            } else {
                self.signed_int()?
            };
            Ok(Expr::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if name == "C" && self.eat('(') {
                    let n = self.signed_int()?;
                    self.expect(',')?;
                    let k = self.signed_int()?;
                    self.expect(')')?;
                    Ok(Expr::Curve(n, k))
                } else {
                    Ok(Expr::Atom(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.at += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            _ => Err(Error::Parse { pos, msg: "expected a term".into() }),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.sum()?;
    if p.at != p.toks.len() {
        return Err(Error::Parse { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

fn scalar_atom(name: &str) -> Option<CoeffElem> {
    Some(match name {
        "A" => CoeffElem::a_pow(1),
        "Ah" => CoeffElem::var(Scalar::HalfA),
        "v1" => CoeffElem::var(Scalar::V1),
        "v2" => CoeffElem::var(Scalar::V2),
        "v3" => CoeffElem::var(Scalar::V3),
        "d0" => CoeffElem::var(Scalar::D0),
        "d1" => CoeffElem::var(Scalar::D1),
        _ => return None,
    })
}

enum Value<T> {
    Scalar(CoeffElem),
    Other(T),
}

fn lift<L: Lowering>(l: &L, v: Value<L::Out>) -> L::Out {
    match v {
        Value::Scalar(c) => l.scalar(c),
        Value::Other(x) => x,
    }
}

fn eval_value<L: Lowering>(e: &Expr, l: &L) -> Result<Value<L::Out>> {
    use Value::{Other, Scalar};
    Ok(match e {
        Expr::Int(n) => Scalar(CoeffElem::constant(n.clone())),
        Expr::Atom(name) => match scalar_atom(name) {
            Some(c) => Scalar(c),
            None => Other(
                l.generator(name)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown symbol {name}")))?,
            ),
        },
        Expr::Curve(n, k) => Other(l.curve(*n, *k)?),
        Expr::Neg(x) => match eval_value(x, l)? {
            Scalar(c) => Scalar(-c),
            Other(x) => Other(l.neg(&x)),
        },
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            let sub = matches!(e, Expr::Sub(..));
            match (eval_value(x, l)?, eval_value(y, l)?) {
                (Scalar(a), Scalar(b)) => Scalar(if sub { a - b } else { a + b }),
                (a, b) => {
                    let a = lift(l, a);
                    let b = lift(l, b);
                    Other(if sub { l.add(&a, &l.neg(&b)) } else { l.add(&a, &b) })
                }
            }
        }
        Expr::Mul(x, y) => match (eval_value(x, l)?, eval_value(y, l)?) {
            (Scalar(a), Scalar(b)) => Scalar(a * b),
            (a, b) => Other(l.mul(&lift(l, a), &lift(l, b))?),
        },
        Expr::Pow(x, n) => match eval_value(x, l)? {
            Scalar(c) => {
                if *n >= 0 {
                    Scalar(c.pow(*n as u32))
                } else {
                    Scalar(c.unit_inverse()?.pow(n.unsigned_abs() as u32))
                }
            }
            Other(x) => {
                if *n < 0 {
                    return Err(Error::InvalidArgument(
                        "negative powers are only defined for scalar units".into(),
                    ));
                }
                let mut acc = l.scalar(CoeffElem::one());
                for _ in 0..*n {
                    acc = l.mul(&acc, &x)?;
                }
                Other(acc)
            }
        },
    })
}

/// Evaluates a parsed expression through `l`.
pub fn eval<L: Lowering>(e: &Expr, l: &L) -> Result<L::Out> {
    let v = eval_value(e, l)?;
    Ok(lift(l, v))
}

/// Parses and evaluates `src` through `l`.
pub fn parse_with<L: Lowering>(src: &str, l: &L) -> Result<L::Out> {
    eval(&parse(src)?, l)
}

/// Parses a pure scalar expression.
pub fn parse_scalar(src: &str) -> Result<CoeffElem> {
    struct Scalars;
    impl Lowering for Scalars {
        type Out = CoeffElem;
        fn scalar(&self, c: CoeffElem) -> CoeffElem {
            c
        }
        fn generator(&self, _: &str) -> Option<CoeffElem> {
            None
        }
        fn add(&self, x: &CoeffElem, y: &CoeffElem) -> CoeffElem {
            x + y
        }
        fn neg(&self, x: &CoeffElem) -> CoeffElem {
            -x
        }
        fn mul(&self, x: &CoeffElem, y: &CoeffElem) -> Result<CoeffElem> {
            Ok(x * y)
        }
    }
    parse_with(src, &Scalars)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_expressions() {
        let x = parse_scalar("(A - A^-1)*(A + A^-1)").unwrap();
        assert_eq!(x, CoeffElem::a_pow(2) - CoeffElem::a_pow(-2));
        assert_eq!(parse_scalar("Ah^2").unwrap(), CoeffElem::a_pow(1));
        assert_eq!(parse_scalar("-2 + 3").unwrap(), CoeffElem::one());
        assert_eq!(parse_scalar("v1^(-1)*v1").unwrap(), CoeffElem::one());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("a +"), Err(Error::Parse { .. })));
        assert!(matches!(parse("a $ b"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_scalar("d0^-1").is_err());
        assert!(parse_scalar("q").is_err());
    }

    #[test]
    fn curve_atom() {
        assert_eq!(parse("C(2,-1)").unwrap(), Expr::Curve(2, -1));
    }
}
