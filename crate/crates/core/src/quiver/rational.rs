//! Exact rational functions in canonical form.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::poly::MultivariatePolynomial as Poly;
use crate::error::{Error, Result};

/// Quotient of two integer polynomials with common factors removed and the
/// denominator's leading coefficient positive. The canonical form is unique,
/// so structural equality is equality of functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

/// `a` divided by its gcd with `b`, and `b` likewise, trying exact division first.
fn cancel(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if b.is_one() || a.is_zero() {
        return (a.clone(), b.clone());
    }
    if let Some(q) = a.exact_div(b) {
        return (q, Poly::one(a.nvars()));
    }
    let g = a.gcd(b);
    if g.is_one() {
        return (a.clone(), b.clone());
    }
    (
        a.exact_div(&g).expect("gcd divides"),
        b.exact_div(&g).expect("gcd divides"),
    )
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let nvars = num.nvars();
        if num.is_zero() {
            return Self {
                num,
                den: Poly::one(nvars),
            };
        }
        let (num, den) = cancel(&num, &den);
        Self::with_sign(num, den)
    }

    fn with_sign(num: Poly, den: Poly) -> Self {
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            Self {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            Self { num, den }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        Self {
            num: p,
            den: Poly::one(n),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Laurent polynomials are exactly the canonical forms with a monomial denominator.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    /// Equality decided by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        let (d1, d2) = cancel(&self.den, &other.den);
        // self.den = g*d1, other.den = g*d2; lcm = self.den*d2.
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        let den = self.den.mul(&d2);
        Self::normalized(num, den)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::constant(self.nvars(), 0);
        }
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        Self::with_sign(a.mul(&c), b.mul(&d))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::with_sign(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let num = self.num.to_string_with(names);
        if self.den.is_one() {
            return num;
        }
        let wrap = |p: &Poly, s: String| {
            let single_factor = p.num_terms() == 1
                && (p.is_constant() || p.leading().is_some_and(|(m, c)| c.is_one() && m.degree() == 1));
            if single_factor {
                s
            } else {
                format!("({s})")
            }
        };
        let num_s = if self.num.num_terms() > 1 || num.contains('*') {
            format!("({num})")
        } else {
            num
        };
        let den_s = wrap(&self.den, self.den.to_string_with(names));
        format!("{num_s}/{den_s}")
    }

    /// Parses expressions built from integers, the given variable names,
    /// `+ - * / ^` and parentheses.
    pub fn parse(s: &str, names: &[String]) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            names,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!(
                "unexpected `{}` at offset {} in `{s}`",
                p.src[p.pos] as char, p.pos
            )));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
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

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc.mul(&rhs) } else { acc.div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected exponent"))?;
            let mut out = RationalFunction::one(self.nvars());
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(RationalFunction::from_poly(Poly::constant(self.nvars(), n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric()
                        || self.src[self.pos] == b'_'
                        || self.src[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                if self.src.get(self.pos) == Some(&b'{') {
                    while self.pos < self.src.len() && self.src[self.pos] != b'}' {
                        self.pos += 1;
                    }
                    if self.pos == self.src.len() {
                        return Err(self.err("unterminated `{`"));
                    }
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self
                    .names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok(RationalFunction::var(self.nvars(), idx))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}
