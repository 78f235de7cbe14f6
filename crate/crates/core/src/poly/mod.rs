//! Exact sparse multivariate polynomials, Gröbner bases and radical membership.
//!
//! This is the independent verification side of the crate: it knows nothing
//! about matroids and checks certificates by plain commutative algebra.
//! Polynomials are generic over the coefficient field; the crate root exposes
//! the rational instantiation used everywhere else.

mod groebner;
mod radical;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::ideal::Monomial;

pub use groebner::{buchberger, is_groebner_basis, member, reduce, s_polynomial, DEFAULT_MAX_PAIRS};
pub use radical::{verify_radical_cert, RadicalVerification, DEFAULT_POWER_CAP};

/// Coefficient field for [`Poly`]. Anything with exact field arithmetic works.
pub trait Coefficient: Num + Neg<Output = Self> + Clone + fmt::Debug + Send + Sync {}

impl<T> Coefficient for T where T: Num + Neg<Output = T> + Clone + fmt::Debug + Send + Sync {}

/// Exponent vector of a term; its length is the number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn from_vec(v: Vec<u32>) -> Self {
        Exponent(v)
    }

    /// `x_{i_1}^N ⋯ x_{i_k}^N` for a square-free monomial.
    pub fn from_squarefree(m: Monomial, nvars: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        for v in m.vars() {
            e[v - 1] = power;
        }
        Exponent(e)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`; caller guarantees `other` divides `self`.
    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// The variables with positive exponent, as a square-free monomial.
    pub fn support(&self) -> Monomial {
        Monomial::from_bits(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .fold(0u64, |acc, (i, _)| acc | 1 << i),
        )
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate().filter(|(_, &a)| a > 0) {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    #[default]
    DegRevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Exponent, b: &Exponent) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegLex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        // smaller power of the last differing variable is larger
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// A polynomial with terms sorted by decreasing monomial order and no zero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Exponent, C)>,
}

impl<C: Coefficient> Poly<C> {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Poly { nvars, order, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: C) -> Self {
        Self::from_terms(nvars, order, vec![(Exponent::zero(nvars), c)])
    }

    pub fn term(order: MonomialOrder, exp: Exponent, c: C) -> Self {
        let nvars = exp.nvars();
        Self::from_terms(nvars, order, vec![(exp, c)])
    }

    /// A square-free monomial with coefficient 1.
    pub fn from_monomial(m: Monomial, nvars: usize, order: MonomialOrder) -> Self {
        Self::term(order, Exponent::from_squarefree(m, nvars, 1), C::one())
    }

    /// Sum of square-free monomials with coefficient 1.
    pub fn sum_of(ms: &[Monomial], nvars: usize, order: MonomialOrder) -> Self {
        let terms = ms.iter().map(|m| (Exponent::from_squarefree(*m, nvars, 1), C::one())).collect();
        Self::from_terms(nvars, order, terms)
    }

    /// Normalizes arbitrary terms: sorts, merges equal exponents, drops zeros.
    pub fn from_terms(nvars: usize, order: MonomialOrder, mut terms: Vec<(Exponent, C)>) -> Self {
        assert!(terms.iter().all(|(e, _)| e.nvars() == nvars), "exponent length mismatch");
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Exponent, C)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.clone() + c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, order, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Exponent, C)] {
        &self.terms
    }

    /// Number of terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Exponent, C)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Exponent> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.degree()).max()
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        if order == self.order {
            return self.clone();
        }
        Self::from_terms(self.nvars, order, self.terms.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c.clone())).collect();
        Poly { nvars: self.nvars, order: self.order, terms }
    }

    /// Multiplies by the single term `c x^e`; the order is preserved.
    pub fn mul_term(&self, e: &Exponent, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        let terms = self.terms.iter().map(|(f, a)| (f.add(e), a.clone() * c.clone())).collect();
        Poly { nvars: self.nvars, order: self.order, terms }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, lc)) if !lc.is_one() => self.scale(&(C::one() / lc.clone())),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.order, C::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self - c x^e g`, merged in one pass.
    pub(crate) fn sub_scaled(&self, g: &Poly<C>, e: &Exponent, c: &C) -> Self {
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(f, gc)| (f.add(e), gc.clone() * c.clone())).peekable();
        loop {
            let next = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some((ea, _)), Some((eb, _))) => order.cmp(ea, eb),
            };
            match next {
                Ordering::Greater => out.push(a.next().cloned().expect("peeked")),
                Ordering::Less => {
                    let (eb, cb) = b.next().expect("peeked");
                    out.push((eb, -cb));
                }
                Ordering::Equal => {
                    let (ea, ca) = a.next().expect("peeked");
                    let (_, cb) = b.next().expect("peeked");
                    let s = ca.clone() - cb;
                    if !s.is_zero() {
                        out.push((ea.clone(), s));
                    }
                }
            }
        }
        Poly { nvars: self.nvars, order, terms: out }
    }

    fn check_compatible(&self, other: &Poly<C>) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different rings");
    }
}

impl<C: Coefficient> Add for &Poly<C> {
    type Output = Poly<C>;

    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.check_compatible(rhs);
        let rhs = rhs.with_order(self.order);
        let one = C::one();
        self.sub_scaled(&rhs, &Exponent::zero(self.nvars), &(-one))
    }
}

impl<C: Coefficient> Sub for &Poly<C> {
    type Output = Poly<C>;

    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.check_compatible(rhs);
        let rhs = rhs.with_order(self.order);
        self.sub_scaled(&rhs, &Exponent::zero(self.nvars), &C::one())
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        self.scale(&(-C::one()))
    }
}

impl<C: Coefficient> Mul for &Poly<C> {
    type Output = Poly<C>;

    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.check_compatible(rhs);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                terms.push((ea.add(eb), ca.clone() * cb.clone()));
            }
        }
        Poly::from_terms(self.nvars, self.order, terms)
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Poly<C> {
    /// Grammar: `term (+ term)*`, where a term is `[-][coef*]x<i>[^e]*..`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{e}")?;
            } else if (-c.clone()).is_one() {
                write!(f, "-{e}")?;
            } else {
                write!(f, "{c}*{e}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient + FromStr> Poly<C> {
    /// Parses the printed grammar. Also accepts `a-b` for `a+-b` and whitespace.
    pub fn parse(s: &str, nvars: usize, order: MonomialOrder) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_err("empty polynomial"));
        }
        if compact == "0" {
            return Ok(Self::zero(nvars, order));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            let split_plus = b == b'+';
            let split_minus = b == b'-' && i > start && !matches!(bytes[i - 1], b'+' | b'^' | b'/');
            if split_plus || split_minus {
                pieces.push(&compact[start..i]);
                start = if split_plus { i + 1 } else { i };
            }
        }
        pieces.push(&compact[start..]);
        let terms = pieces
            .into_iter()
            .map(|t| parse_term::<C>(t, nvars))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(nvars, order, terms))
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, message: msg.into() }
}

fn parse_term<C: Coefficient + FromStr>(t: &str, nvars: usize) -> Result<(Exponent, C)> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    if body.is_empty() {
        return Err(parse_err(format!("empty term in {t:?}")));
    }
    let mut exp = vec![0u32; nvars];
    let mut coef = C::one();
    for (k, factor) in body.split('*').enumerate() {
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, power) = match rest.split_once('^') {
                Some((i, p)) => (i, p.parse::<u32>().map_err(|_| parse_err(format!("bad exponent in {factor:?}")))?),
                None => (rest, 1),
            };
            let v: usize = idx.parse().map_err(|_| parse_err(format!("bad variable {factor:?}")))?;
            if v == 0 || v > nvars {
                return Err(Error::VariableOutOfRange { index: v, n: nvars });
            }
            exp[v - 1] += power;
        } else if k == 0 {
            coef = factor
                .parse::<C>()
                .map_err(|_| parse_err(format!("bad coefficient {factor:?}")))?;
        } else {
            return Err(parse_err(format!("unexpected factor {factor:?}")));
        }
    }
    if neg {
        coef = -coef;
    }
    Ok((Exponent(exp), coef))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RationalPoly;
    use num_rational::BigRational;

    fn p(s: &str, n: usize) -> RationalPoly {
        RationalPoly::parse(s, n, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn degrevlex_orders_terms() {
        let f = p("x1*x3+x2^2+x1^2+x3^2+x2*x3+x1*x2", 3);
        assert_eq!(f.to_string(), "x1^2+x1*x2+x2^2+x1*x3+x2*x3+x3^2");
        let g = f.with_order(MonomialOrder::Lex);
        assert_eq!(g.to_string(), "x1^2+x1*x2+x1*x3+x2^2+x2*x3+x3^2");
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = p("1/2*x1+x2", 2);
        let b = p("x1-2*x2", 2);
        assert_eq!((&a + &b).to_string(), "3/2*x1+-x2");
        assert_eq!((&a - &a), RationalPoly::zero(2, MonomialOrder::DegRevLex));
        assert_eq!((&a * &b).to_string(), "1/2*x1^2+-2*x2^2");
        assert_eq!(p("x1+x2", 2).pow(2), p("x1^2+2*x1*x2+x2^2", 2));
        assert_eq!(b.monic(), b);
        assert_eq!(p("2*x1+x2", 2).monic().to_string(), "x1+1/2*x2");
        assert_eq!((-&b).to_string(), "-x1+2*x2");
    }

    #[test]
    fn parse_and_print() {
        let f = p("-3*x1^2*x2 + 4 - x2", 2);
        assert_eq!(f.to_string(), "-3*x1^2*x2+-x2+4");
        assert_eq!(p(&f.to_string(), 2), f);
        assert_eq!(p("x1*x1", 2).to_string(), "x1^2");
        assert!(RationalPoly::parse("x3", 2, MonomialOrder::DegRevLex).is_err());
        assert!(RationalPoly::parse("y1", 2, MonomialOrder::DegRevLex).is_err());
        assert!(RationalPoly::parse("", 2, MonomialOrder::DegRevLex).is_err());
        assert!(p("0", 2).is_zero());
        let c: RationalPoly = RationalPoly::constant(2, MonomialOrder::Lex, BigRational::from_integer(5.into()));
        assert_eq!(c.to_string(), "5");
    }

    #[test]
    fn works_over_machine_rationals() {
        type Q64 = num_rational::Rational64;
        let f = Poly::<Q64>::parse("x1+1/3*x2", 2, MonomialOrder::Lex).unwrap();
        assert_eq!((&f * &f).to_string(), "x1^2+2/3*x1*x2+1/9*x2^2");
    }
}
