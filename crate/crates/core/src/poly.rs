//! Integer polynomials in two variables: `t1` (universe size) and `t2`
//! (regularity degree).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("cannot parse polynomial at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

/// Degrees `(t1, t2)` of the lexicographically largest monomial, `t1` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeadingDegree {
    pub t1: u32,
    pub t2: u32,
}

/// Sparse map from `(deg t1, deg t2)` to a nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, i: u32, j: u32) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    pub fn t1() -> Self {
        Poly2::monomial(1, 1, 0)
    }

    pub fn t2() -> Self {
        Poly2::monomial(1, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in descending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.terms.iter().rev().map(|(&e, c)| (e, c))
    }

    fn add_term(&mut self, exp: (u32, u32), c: BigInt) {
        let slot = self.terms.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly2 {
        let mut base = self.clone();
        let mut acc = Poly2::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, alpha: &BigInt, beta: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(alpha.clone(), i as usize) * num_traits::pow(beta.clone(), j as usize))
            .sum()
    }

    pub fn eval_u64(&self, alpha: u64, beta: u64) -> BigInt {
        self.eval(&BigInt::from(alpha), &BigInt::from(beta))
    }

    pub fn leading(&self) -> Result<LeadingDegree, PolyError> {
        self.terms
            .keys()
            .next_back()
            .map(|&(t1, t2)| LeadingDegree { t1, t2 })
            .ok_or(PolyError::ZeroPolynomial)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly2 {
            type Output = Poly2;

            fn $m(self, rhs: Poly2) -> Poly2 {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        -&self
    }
}

impl std::iter::Sum for Poly2 {
    fn sum<I: Iterator<Item = Poly2>>(iter: I) -> Poly2 {
        iter.fold(Poly2::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, ((i, j), c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts = Vec::new();
            let abs = c.abs();
            if !abs.is_one() || (i == 0 && j == 0) {
                parts.push(abs.to_string());
            }
            for (name, e) in [("t1", i), ("t2", j)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for Poly2 {
    type Err = PolyError;

    /// Accepts integer expressions over `t1`, `t2` with `+ - * ^` and
    /// parentheses; exponents must be non-negative integer literals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ExprParser { src: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse { offset: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<Poly2, PolyError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly2, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly2, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly2, PolyError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected an exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn primary(&mut self) -> Result<Poly2, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b't') => {
                let var = self.src.get(self.pos + 1).copied();
                self.pos += 2;
                match var {
                    Some(b'1') => Ok(Poly2::t1()),
                    Some(b'2') => Ok(Poly2::t2()),
                    _ => {
                        self.pos -= 2;
                        Err(self.error("expected t1 or t2"))
                    }
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Poly2::constant(digits.parse::<BigInt>().expect("digit string")))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    #[test]
    fn leading_examples() {
        assert_eq!(p("t1^2*t2 - t1*t2^3").leading().unwrap(), LeadingDegree { t1: 2, t2: 1 });
        assert_eq!(p("t1 - t2").leading().unwrap(), LeadingDegree { t1: 1, t2: 0 });
        assert_eq!(Poly2::zero().leading(), Err(PolyError::ZeroPolynomial));
        assert_eq!(p("t2 - t2").leading(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn eval_example() {
        assert_eq!(p("t2*(t2-1)^2").eval_u64(10, 3), BigInt::from(12));
        assert_eq!(p("t1 - 3*t2").eval_u64(10, 3), BigInt::from(1));
    }

    #[test]
    fn rendering() {
        assert_eq!(p("(t2-1)*(t2-2)").to_string(), "t2^2 - 3*t2 + 2");
        assert_eq!(p("t1 - t2").to_string(), "t1 - t2");
        assert_eq!(p("-t2 + 1").to_string(), "-t2 + 1");
        assert_eq!(p("2*t1*t2^2 - 1").to_string(), "2*t1*t2^2 - 1");
        assert_eq!(Poly2::zero().to_string(), "0");
        assert_eq!(p("-7").to_string(), "-7");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["t2^2 - 3*t2 + 2", "t1*t2^2", "t1 - t2^3 + 4*t2 - 1", "0", "-t1"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!("t3".parse::<Poly2>().is_err());
        assert!("t1 +".parse::<Poly2>().is_err());
        assert!("(t1".parse::<Poly2>().is_err());
        assert!("t1^".parse::<Poly2>().is_err());
        assert!("t1 t2".parse::<Poly2>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = p("t2 - 1");
        assert_eq!(a.pow(0), Poly2::one());
        assert_eq!(a.pow(3), p("t2^3 - 3*t2^2 + 3*t2 - 1"));
        assert_eq!(&a - &a, Poly2::zero());
        assert_eq!(&p("t1") * &Poly2::zero(), Poly2::zero());
        let big = Poly2::constant(BigInt::from(u64::MAX)).pow(3);
        assert_eq!(big.coefficient(0, 0), BigInt::from(u64::MAX).pow(3));
    }
}
