//! Text syntax for forms.
//!
//! Accepted input is a sum of terms in `x, y, z` with Gaussian-rational
//! coefficients, e.g. `x^3 - 3/2*x*y*z + 2i*z^3`. Besides the flat
//! sum-of-monomials syntax, parenthesized factors, implicit products and
//! integer powers of groups are allowed: `(x-2*y)(x^2+y^2-z^2)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::forms::{ExactForm, FormError};
use crate::scalar::{Coeff, QI};

type Sparse = BTreeMap<(u32, u32, u32), QI>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, FormError> {
    Err(FormError::Parse {
        position: pos,
        message: msg.into(),
    })
}

fn constant(c: QI) -> Sparse {
    let mut m = Sparse::new();
    if !Coeff::is_zero(&c) {
        m.insert((0, 0, 0), c);
    }
    m
}

fn add_into(acc: &mut Sparse, other: Sparse, negate: bool) {
    for (k, v) in other {
        let v = if negate { v.neg_ref() } else { v };
        let e = acc.entry(k).or_insert_with(<QI as Coeff>::zero);
        *e = e.add_ref(&v);
        if Coeff::is_zero(e) {
            acc.remove(&k);
        }
    }
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
            let e = out.entry(k).or_insert_with(<QI as Coeff>::zero);
            *e = e.add_ref(&va.mul_ref(vb));
        }
    }
    out.retain(|_, v| !Coeff::is_zero(v));
    out
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt, FormError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an unsigned integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small_uint(&mut self) -> Result<u32, FormError> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).or_else(|_| err(start, "exponent too large"))
    }

    fn expr(&mut self) -> Result<Sparse, FormError> {
        let mut acc = Sparse::new();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            add_into(&mut acc, t, negate);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse, FormError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = mul(&acc, &f);
                }
                Some(c) if c == b'(' || c.is_ascii_digit() || matches!(c, b'x' | b'y' | b'z' | b'i') => {
                    let f = self.factor()?;
                    acc = mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Sparse, FormError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.small_uint()?;
            let mut out = constant(<QI as Coeff>::one());
            for _ in 0..e {
                out = mul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse, FormError> {
        let pos = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => self.var(0),
            Some(b'y') => self.var(1),
            Some(b'z') => self.var(2),
            Some(b'i') => {
                self.pos += 1;
                Ok(constant(QI::new(BigRational::zero(), BigRational::one())))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den_pos = self.pos;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return err(den_pos, "zero denominator");
                    }
                    value /= BigRational::from_integer(den);
                }
                // `3i` is an imaginary literal
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    return Ok(constant(QI::new(BigRational::zero(), value)));
                }
                Ok(constant(QI::new(value, BigRational::zero())))
            }
            Some(c) => err(self.pos, format!("unexpected character '{}'", c as char)),
            None => err(pos, "unexpected end of input"),
        }
    }

    fn var(&mut self, k: usize) -> Result<Sparse, FormError> {
        self.pos += 1;
        let mut e = [0u32; 3];
        e[k] = 1;
        let mut m = Sparse::new();
        m.insert((e[0], e[1], e[2]), <QI as Coeff>::one());
        Ok(m)
    }
}

/// Parses a homogeneous form. `degree_hint` fixes the degree of the zero
/// form and is checked against nonzero input.
pub fn parse_form(text: &str, degree_hint: Option<u32>) -> Result<ExactForm, FormError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    let mut degrees = poly.keys().map(|(a, b, c)| a + b + c);
    let degree = match degrees.next() {
        None => return Ok(ExactForm::zero(degree_hint.unwrap_or(0))),
        Some(d) => d,
    };
    if degrees.any(|d| d != degree) {
        return Err(FormError::NotHomogeneous);
    }
    if let Some(h) = degree_hint {
        if h != degree {
            return Err(FormError::DegreeMismatch(h, degree));
        }
    }
    ExactForm::from_terms(degree, poly)
}
