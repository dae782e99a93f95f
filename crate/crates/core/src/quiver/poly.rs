//! Sparse multivariate polynomials over the integers.
//!
//! Terms are kept in a `BTreeMap` under graded lexicographic order, so the
//! last entry is always the leading term. The gcd works one variable at a
//! time: contents are peeled off recursively and the primitive parts are
//! reduced with a primitive pseudo-remainder sequence.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exponent vector ordered by total degree, then lexicographically with
/// `x_1 > x_2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn gcd_with(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

type Poly = MultivariatePolynomial;

impl MultivariatePolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(Monomial(e), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let nvars = m.0.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.is_constant() && self.terms.values().next().unwrap().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Gcd of the integer coefficients, always non-negative.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Largest monomial dividing every term.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd_with(m)),
        }
    }

    /// Negates if needed so the leading coefficient is positive.
    pub fn with_positive_lead(self) -> Poly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self,
        }
    }

    /// Quotient when `divisor` divides `self` exactly over the integers.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.leading()?;
        if divisor.is_monomial() {
            let mut out = Poly::zero(self.nvars);
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.terms.insert(m.div(dm), q);
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let (q, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let m = rm.div(dm);
            rem = rem.sub(&divisor.mul_term(&m, &q));
            quot.add_term(m, q);
        }
        Some(quot)
    }

    fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Coefficients of `self` as a polynomial in `x_v`, lowest degree first.
    fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.nvars); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let d = m.0[v] as usize;
            let mut e = m.0.clone();
            e[v] = 0;
            out[d].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    fn from_coefficients(nvars: usize, v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (d, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut e = m.0.clone();
                e[v] += d as u32;
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd(self, other)
    }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().with_positive_lead();
    }
    if b.is_zero() {
        return a.clone().with_positive_lead();
    }
    let nvars = a.nvars;
    if a.is_monomial() || b.is_monomial() {
        let c = a.content().gcd(&b.content());
        let m = a.monomial_content().gcd_with(&b.monomial_content());
        return Poly::term(m, c);
    }
    if a == b {
        return a.clone().with_positive_lead();
    }
    // Strip the shared monomial factor first; it is cheap and common.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd_with(&mb);
    if m.degree() > 0 {
        let one = BigInt::one();
        let a2 = a.exact_div(&Poly::term(ma.clone(), one.clone())).unwrap();
        let b2 = b.exact_div(&Poly::term(mb.clone(), one.clone())).unwrap();
        return gcd(&a2, &b2).mul_term(&m, &one);
    }
    // Cheap divisibility shortcuts before the full sequence.
    if let Some(_q) = a.exact_div(b) {
        return b.clone().with_positive_lead();
    }
    if let Some(_q) = b.exact_div(a) {
        return a.clone().with_positive_lead();
    }
    let used_a: Vec<bool> = (0..nvars).map(|v| a.uses_var(v)).collect();
    let used_b: Vec<bool> = (0..nvars).map(|v| b.uses_var(v)).collect();
    // A variable that occurs in only one argument cannot occur in the gcd.
    if let Some(v) = (0..nvars).find(|&v| used_a[v] != used_b[v]) {
        let (with, without) = if used_a[v] { (a, b) } else { (b, a) };
        let mut g = without.clone();
        for c in with.coefficients_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() && g.content().is_one() {
                break;
            }
        }
        return g.with_positive_lead();
    }
    let Some(v) = (0..nvars).rev().find(|&v| used_a[v]) else {
        // Both constants.
        return Poly::constant(nvars, a.content().gcd(&b.content()));
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !g.is_zero() {
        let r = pseudo_remainder(&f, &g, v);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            primitive_part_in(&r, v)
        };
    }
    let h = primitive_part_in(&f, v);
    c.mul(&h).with_positive_lead()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(p.nvars);
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() && g.content().is_one() {
            break;
        }
    }
    g.with_positive_lead()
}

fn primitive_part_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides").with_positive_lead()
}

fn pseudo_remainder(f: &Poly, g: &Poly, v: usize) -> Poly {
    let gc = g.coefficients_in(v);
    let dg = gc.len() - 1;
    let lg = &gc[dg];
    let mut r = f.coefficients_in(v);
    trim(&mut r);
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        for p in r.iter_mut() {
            *p = p.mul(lg);
        }
        for (i, q) in gc.iter().enumerate() {
            let t = q.mul(&lr);
            r[i + shift] = r[i + shift].sub(&t);
        }
        trim(&mut r);
    }
    Poly::from_coefficients(f.nvars, v, &r)
}

fn trim(r: &mut Vec<Poly>) {
    while r.len() > 1 && r.last().is_some_and(|p| p.is_zero()) {
        r.pop();
    }
}

impl MultivariatePolynomial {
    /// Writes the polynomial with `*` and `^`, terms in descending order.
    pub fn fmt_with(&self, names: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                f.write_char(if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.fmt_with(names, &mut s).unwrap();
        s
    }
}
