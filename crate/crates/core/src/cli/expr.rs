//! The expression language.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := number [ijk]? | 'i' | 'j' | 'k' | 'q'
//!        | ('conj' | 'sym' | 'inv') '(' expr ')' | '(' expr ')'
//! ```
//!
//! `*` is always the `*`-product and `^` the `*`-power; there is no
//! pointwise product of regular functions to offer.

use std::fmt;

use crate::error::{Error, Result};
use crate::polynomial::QPolynomial;
use crate::quaternion::{scan_number, Quaternion};
use crate::rational::QRational;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Lit(Quaternion),
    Var,
    Neg(Box<Expr>),
    Conj(Box<Expr>),
    Sym(Box<Expr>),
    Inv(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Quaternion),
    Ident(String),
    Op(u8),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < b.len() {
        let c = b[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let len = scan_number(&b[pos..]);
            if len == 0 {
                return Err(Error::SyntaxError { offset: pos, message: "malformed number".into() });
            }
            let value: f64 = text[pos..pos + len]
                .parse()
                .map_err(|_| Error::SyntaxError { offset: pos, message: "malformed number".into() })?;
            let start = pos;
            pos += len;
            let mut q = Quaternion::real(value);
            if let Some(unit) = b.get(pos).and_then(|u| unit_of(*u)) {
                let after = b.get(pos + 1).copied().unwrap_or(b' ');
                if !after.is_ascii_alphanumeric() {
                    q = unit * value;
                    pos += 1;
                }
            }
            if !q.is_finite() {
                return Err(Error::SyntaxError { offset: start, message: "number out of range".into() });
            }
            out.push((start, Tok::Num(q)));
        } else if c.is_ascii_alphabetic() {
            let start = pos;
            while pos < b.len() && b[pos].is_ascii_alphanumeric() {
                pos += 1;
            }
            out.push((start, Tok::Ident(text[start..pos].to_string())));
        } else if b"+-*^()".contains(&c) {
            out.push((pos, Tok::Op(c)));
            pos += 1;
        } else {
            return Err(Error::SyntaxError { offset: pos, message: format!("unexpected character '{}'", c as char) });
        }
    }
    Ok(out)
}

fn unit_of(c: u8) -> Option<Quaternion> {
    match c {
        b'i' => Some(Quaternion::I),
        b'j' => Some(Quaternion::J),
        b'k' => Some(Quaternion::K),
        _ => None,
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Op(c)) => format!("'{}'", *c as char),
            Some(Tok::Ident(s)) => format!("'{s}'"),
            Some(Tok::Num(q)) => format!("'{q}'"),
        };
        Err(Error::SyntaxError { offset: self.offset(), message: format!("{message}, found {found}") })
    }

    fn eat(&mut self, op: u8) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: u8) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            self.error(&format!("expected '{}'", op as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        let n = match self.peek() {
            Some(Tok::Num(q)) if q.im_norm() == 0.0 && q.re().fract() == 0.0 && q.re().abs() <= 1e6 => q.re() as i32,
            _ => return self.error("expected an integer exponent"),
        };
        self.pos += 1;
        Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Expr::Lit(q))
            }
            Some(Tok::Ident(name)) => {
                let wrap: fn(Box<Expr>) -> Expr = match name.as_str() {
                    "q" => {
                        self.pos += 1;
                        return Ok(Expr::Var);
                    }
                    "i" | "j" | "k" => {
                        self.pos += 1;
                        return Ok(Expr::Lit(unit_of(name.as_bytes()[0]).expect("unit")));
                    }
                    "conj" => Expr::Conj,
                    "sym" => Expr::Sym,
                    "inv" => Expr::Inv,
                    _ => return self.error("unknown identifier"),
                };
                self.pos += 1;
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(wrap(Box::new(inner)))
            }
            Some(Tok::Op(b'(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            _ => self.error("expected an operand"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

impl fmt::Display for Expr {
    /// Canonical form: binary nodes fully parenthesised, so printing and
    /// re-parsing returns the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(q) => {
                // a lone positive term is an atom; anything with a sign is a sum
                let terms = q.components().iter().filter(|c| **c != 0.0).count();
                if terms <= 1 && q.components().iter().all(|c| *c >= 0.0) {
                    write!(f, "{q}")
                } else {
                    write!(f, "({q})")
                }
            }
            Expr::Var => f.write_str("q"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Conj(a) => write!(f, "conj({a})"),
            Expr::Sym(a) => write!(f, "sym({a})"),
            Expr::Inv(a) => write!(f, "inv({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
        }
    }
}

/// A lowered expression: polynomial unless a reciprocal was taken.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Poly(QPolynomial),
    Rat(QRational),
}

impl Value {
    pub fn into_rational(self) -> QRational {
        match self {
            Value::Poly(p) => QRational::from_poly(p),
            Value::Rat(r) => r,
        }
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        match self {
            Value::Poly(p) => Ok(p.eval(q)),
            Value::Rat(r) => r.eval(q),
        }
    }

    /// The polynomial, if the value is one (a rational with constant denominator counts).
    pub fn as_polynomial(&self) -> Option<QPolynomial> {
        match self {
            Value::Poly(p) => Some(p.clone()),
            Value::Rat(r) if r.is_polynomial() => Some(r.num().scale(1.0 / r.den().leading())),
            Value::Rat(_) => None,
        }
    }
}

fn binary(
    a: Value,
    b: Value,
    poly: impl Fn(&QPolynomial, &QPolynomial) -> QPolynomial,
    rat: impl Fn(&QRational, &QRational) -> Result<QRational>,
) -> Result<Value> {
    match (a, b) {
        (Value::Poly(x), Value::Poly(y)) => Ok(Value::Poly(poly(&x, &y))),
        (x, y) => Ok(Value::Rat(rat(&x.into_rational(), &y.into_rational())?)),
    }
}

pub fn lower(e: &Expr) -> Result<Value> {
    Ok(match e {
        Expr::Lit(q) => Value::Poly(QPolynomial::constant(*q)),
        Expr::Var => Value::Poly(QPolynomial::var()),
        Expr::Neg(a) => match lower(a)? {
            Value::Poly(p) => Value::Poly(-&p),
            Value::Rat(r) => Value::Rat(r.neg()),
        },
        Expr::Conj(a) => match lower(a)? {
            Value::Poly(p) => Value::Poly(p.regular_conj()),
            Value::Rat(r) => Value::Rat(r.regular_conj()),
        },
        Expr::Sym(a) => match lower(a)? {
            Value::Poly(p) => Value::Poly(QPolynomial::from_real(&p.symmetrize()?)),
            Value::Rat(r) => Value::Rat(r.symmetrize()?),
        },
        Expr::Inv(a) => Value::Rat(lower(a)?.into_rational().reciprocal()?),
        Expr::Add(a, b) => binary(lower(a)?, lower(b)?, |x, y| x + y, |x, y| x.add(y))?,
        Expr::Sub(a, b) => binary(lower(a)?, lower(b)?, |x, y| x - y, |x, y| x.sub(y))?,
        Expr::Mul(a, b) => binary(lower(a)?, lower(b)?, |x, y| x.star_mul(y), |x, y| x.star_mul(y))?,
        Expr::Pow(a, n) => match (lower(a)?, *n) {
            (Value::Poly(p), n) if n >= 0 => Value::Poly(p.star_pow(n as u32)),
            (v, n) => Value::Rat(v.into_rational().star_pow(n)?),
        },
    })
}

pub fn parse_and_lower(text: &str) -> Result<Value> {
    lower(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::RealPolynomial;

    #[test]
    fn precedence() {
        let e = parse("-q^2 + 3*q - i").unwrap();
        let expect = Expr::Sub(
            Box::new(Expr::Add(
                Box::new(Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2)))),
                Box::new(Expr::Mul(Box::new(Expr::Lit(Quaternion::real(3.0))), Box::new(Expr::Var))),
            )),
            Box::new(Expr::Lit(Quaternion::I)),
        );
        assert_eq!(e, expect);
        assert_eq!(parse("q^-1").unwrap(), Expr::Pow(Box::new(Expr::Var), -1));
        assert_eq!(parse("2.5k").unwrap(), Expr::Lit(Quaternion::new(0.0, 0.0, 0.0, 2.5)));
    }

    #[test]
    fn lowering_examples() {
        let v = parse_and_lower("(q - i)*(q + i)").unwrap();
        assert_eq!(v, Value::Poly(QPolynomial::from_real(&RealPolynomial::sphere(0.0, 1.0))));
        match parse_and_lower("inv(q + i)").unwrap() {
            Value::Rat(r) => {
                assert_eq!(r.num(), &QPolynomial::linear(Quaternion::I));
                assert_eq!(r.den().coeffs(), &[1.0, 0.0, 1.0]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_and_lower("(q+i)^-1").unwrap(), Value::Rat(_)));
        assert_eq!(
            parse_and_lower("conj(q*i)").unwrap(),
            Value::Poly(QPolynomial::new(vec![Quaternion::ZERO, -Quaternion::I]))
        );
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse("q + * 3"), Err(Error::SyntaxError { offset: 4, .. })));
        assert!(matches!(parse("(q"), Err(Error::SyntaxError { offset: 2, .. })));
        assert!(matches!(parse("foo(q)"), Err(Error::SyntaxError { offset: 0, .. })));
        assert!(matches!(parse("q $"), Err(Error::SyntaxError { offset: 2, .. })));
        assert!(matches!(parse("q^1.5"), Err(Error::SyntaxError { offset: 2, .. })));
        assert!(matches!(parse(""), Err(Error::SyntaxError { offset: 0, .. })));
    }

    #[test]
    fn print_parse_roundtrip() {
        for text in ["-q^2 + 3*q - i", "inv(conj(q) - 2.5j)^-3", "sym(q*k + 1e-7)", "--q"] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }
}
