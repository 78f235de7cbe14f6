//! Square-free monomials and the monomial ideals they generate.
//!
//! A [`Monomial`] is a set of variable indices stored as one machine word:
//! bit `i - 1` is set when `x_i` divides the monomial. The empty set is the
//! unit monomial. An [`Ideal`] keeps its minimal generating set `G(I)` as a
//! sorted antichain together with the ambient variable count `n`.
//!
//! The plain-text ideal format is
//!
//! ```text
//! n=4
//! # comment
//! x1 x3
//! x2 x4
//! ```
//!
//! one generator per line. The unit monomial is written `1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ambient variable count.
pub const MAX_VARS: usize = 64;

/// A square-free monomial, equivalently a finite set of variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

/// A set of variables; primes and partition blocks reuse the monomial bitset.
pub type VarSet = Monomial;

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub const fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a monomial from 1-based variable indices.
    pub fn from_vars<I: IntoIterator<Item = usize>>(vars: I) -> Result<Self> {
        let mut bits = 0u64;
        for v in vars {
            if v == 0 || v > MAX_VARS {
                return Err(Error::VariableOutOfRange { index: v, n: MAX_VARS });
            }
            bits |= 1 << (v - 1);
        }
        Ok(Monomial(bits))
    }

    /// The single variable `x_i`. Panics when `i` is not in `1..=64`.
    pub fn var(i: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&i), "variable index {i} out of range");
        Monomial(1 << (i - 1))
    }

    /// All variables `x_1..x_n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VARS);
        if n == MAX_VARS {
            Monomial(u64::MAX)
        } else {
            Monomial((1u64 << n) - 1)
        }
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn has_var(self, i: usize) -> bool {
        (1..=MAX_VARS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn gcd(self, other: Monomial) -> Monomial {
        Monomial(self.0 & other.0)
    }

    /// Product in the square-free world: the union of the supports.
    pub fn lcm(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    /// `self / gcd(self, other)`.
    pub fn strip(self, other: Monomial) -> Monomial {
        Monomial(self.0 & !other.0)
    }

    pub fn is_coprime(self, other: Monomial) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with_var(self, i: usize) -> Monomial {
        self.lcm(Monomial::var(i))
    }

    pub fn without_var(self, i: usize) -> Monomial {
        self.strip(Monomial::var(i))
    }

    /// Variables in increasing index order.
    pub fn vars(self) -> Vars {
        Vars(self.0)
    }

    pub fn max_var(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(64 - self.0.leading_zeros() as usize)
        }
    }

    pub fn min_var(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Applies a relabeling: `perm[i - 1]` is the new index of `x_i`.
    pub fn relabel(self, perm: &[usize]) -> Monomial {
        let mut bits = 0u64;
        for v in self.vars() {
            bits |= 1 << (perm[v - 1] - 1);
        }
        Monomial(bits)
    }

    /// Parses `x1*x3`, `x1 x3` or `1`.
    pub fn parse_term(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::ONE);
        }
        let mut bits = 0u64;
        for tok in s.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let v = parse_var_token(tok)?;
            let bit = 1u64 << (v - 1);
            if bits & bit != 0 {
                return Err(Error::NonSquareFree(s.to_string()));
            }
            bits |= bit;
        }
        if bits == 0 {
            return Err(Error::Parse { line: 0, message: format!("empty monomial {s:?}") });
        }
        Ok(Monomial(bits))
    }

    fn joined(self, sep: &str) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.vars().map(|v| format!("x{v}")).collect::<Vec<_>>().join(sep)
    }

    /// Ideal text-format line: `x1 x3`.
    pub fn to_line(self) -> String {
        self.joined(" ")
    }
}

fn parse_var_token(tok: &str) -> Result<usize> {
    let digits = tok
        .strip_prefix('x')
        .ok_or_else(|| Error::Parse { line: 0, message: format!("expected x<i>, got {tok:?}") })?;
    let v: usize = digits
        .parse()
        .map_err(|_| Error::Parse { line: 0, message: format!("bad variable index in {tok:?}") })?;
    if v == 0 || v > MAX_VARS {
        return Err(Error::VariableOutOfRange { index: v, n: MAX_VARS });
    }
    Ok(v)
}

/// Iterator over the variables of a monomial.
pub struct Vars(u64);

impl Iterator for Vars {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(t + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl DoubleEndedIterator for Vars {
    fn next_back(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let t = 63 - self.0.leading_zeros() as usize;
        self.0 &= !(1u64 << t);
        Some(t + 1)
    }
}

impl ExactSizeIterator for Vars {}

/// Lexicographic order on the increasing variable lists, so that
/// `x1x2 < x1x3 < x1x4 < x2x3` and a proper prefix sorts first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let t = diff.trailing_zeros();
        let above = if t == 63 { 0 } else { u64::MAX << (t + 1) };
        // The side owning x_{t+1} sorts first iff the other side continues past it.
        let self_owns = self.0 >> t & 1 == 1;
        let other_side = if self_owns { other.0 } else { self.0 };
        let owner_first = other_side & above != 0;
        if self_owns == owner_first {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.joined("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Monomial::parse_term(&s).map_err(serde::de::Error::custom)
    }
}

/// A square-free monomial ideal in `K[x_1..x_n]`, stored by its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    n: usize,
    gens: Vec<Monomial>,
}

impl Ideal {
    /// Canonicalizes an arbitrary generating family to `G(I)`.
    pub fn new<I: IntoIterator<Item = Monomial>>(n: usize, ms: I) -> Result<Self> {
        minimal_generators(ms, n)
    }

    /// Convenience constructor from lists of variable indices.
    pub fn from_sets<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        let ms = sets
            .iter()
            .map(|s| {
                let s = s.as_ref();
                if let Some(&bad) = s.iter().find(|&&v| v == 0 || v > n) {
                    return Err(Error::VariableOutOfRange { index: bad, n });
                }
                Monomial::from_vars(s.iter().copied())
            })
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(n, ms)
    }

    pub fn zero(n: usize) -> Self {
        Ideal { n, gens: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        Ideal { n, gens: vec![Monomial::ONE] }
    }

    /// Ideal generated by the variables in `vars`.
    pub fn of_vars(n: usize, vars: VarSet) -> Result<Self> {
        Ideal::new(n, vars.vars().map(Monomial::var))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.first().is_some_and(|g| g.is_one())
    }

    /// `supp(I)`: union of the generator supports.
    pub fn support(&self) -> VarSet {
        self.gens.iter().fold(Monomial::ONE, |acc, g| acc.lcm(*g))
    }

    pub fn has_full_support(&self) -> bool {
        self.support() == Monomial::full(self.n)
    }

    /// Monomial membership: some generator divides `m`.
    pub fn contains(&self, m: Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn is_generator(&self, m: Monomial) -> bool {
        self.gens.binary_search(&m).is_ok()
    }

    /// Common degree of the generators, if they all agree.
    pub fn uniform_degree(&self) -> Option<usize> {
        let d = self.gens.first()?.degree();
        self.gens.iter().all(|g| g.degree() == d).then_some(d)
    }

    /// The ideal product, which must stay square-free.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        let mut out = Vec::with_capacity(self.gens.len() * other.gens.len());
        for &a in &self.gens {
            for &b in &other.gens {
                if !a.is_coprime(b) {
                    let shared = a.gcd(b);
                    let term = a
                        .vars()
                        .chain(b.vars())
                        .collect::<std::collections::BTreeSet<_>>()
                        .into_iter()
                        .map(|v| if shared.has_var(v) { format!("x{v}^2") } else { format!("x{v}") })
                        .collect::<Vec<_>>()
                        .join("*");
                    return Err(Error::NonSquareFree(term));
                }
                out.push(a.lcm(b));
            }
        }
        Ideal::new(self.n, out)
    }

    /// Colon ideal `I : x_i`.
    pub fn colon_by_var(&self, i: usize) -> Result<Ideal> {
        if i == 0 || i > self.n {
            return Err(Error::VariableOutOfRange { index: i, n: self.n });
        }
        self.colon(Monomial::var(i))
    }

    /// Colon ideal `I : m`, generated by `g / gcd(g, m)`.
    pub fn colon(&self, m: Monomial) -> Result<Ideal> {
        Ideal::new(self.n, self.gens.iter().map(|g| g.strip(m)))
    }

    pub fn relabel(&self, perm: &[usize]) -> Ideal {
        let mut gens: Vec<_> = self.gens.iter().map(|g| g.relabel(perm)).collect();
        gens.sort_unstable();
        Ideal { n: self.n, gens }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for g in &self.gens {
            s.push_str(&g.to_line());
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Ideal> {
        let mut n = None;
        let mut ms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(n) = n else {
                let value = line.strip_prefix("n=").ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "first line must be n=<int>".into(),
                })?;
                let parsed: usize = value.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad variable count {value:?}"),
                })?;
                if parsed > MAX_VARS {
                    return Err(Error::TooManyVariables(parsed));
                }
                n = Some(parsed);
                continue;
            };
            let m = Monomial::parse_term(line).map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse { line: line_no, message },
                other => other,
            })?;
            if let Some(v) = m.max_var().filter(|&v| v > n) {
                return Err(Error::VariableOutOfRange { index: v, n });
            }
            ms.push(m);
        }
        let n = n.ok_or(Error::Parse { line: 0, message: "missing n=<int> header".into() })?;
        Ideal::new(n, ms)
    }
}

/// Canonicalizes `ms` to the divisibility-minimal antichain `G(I)`.
pub fn minimal_generators<I: IntoIterator<Item = Monomial>>(ms: I, n: usize) -> Result<Ideal> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    let full = Monomial::full(n);
    let mut all: Vec<Monomial> = Vec::new();
    for m in ms {
        if !m.divides(full) {
            let index = m.strip(full).min_var().unwrap_or(0);
            return Err(Error::VariableOutOfRange { index, n });
        }
        all.push(m);
    }
    all.sort_unstable_by_key(|m| (m.degree(), m.bits()));
    all.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(all.len());
    for m in all {
        if !kept.iter().any(|g| g.divides(m)) {
            kept.push(m);
        }
    }
    kept.sort_unstable();
    Ok(Ideal { n, gens: kept })
}

/// Product of ideals with pairwise disjoint supports.
pub fn star_product(ideals: &[Ideal]) -> Result<Ideal> {
    let (first, rest) = ideals
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("star product of an empty list".into()))?;
    let mut seen = first.support();
    let mut acc = first.clone();
    for next in rest {
        if next.n != acc.n {
            return Err(Error::AmbientMismatch(acc.n, next.n));
        }
        let s = next.support();
        if let Some(v) = seen.gcd(s).min_var() {
            return Err(Error::OverlappingSupports(v));
        }
        seen = seen.lcm(s);
        acc = acc.product(next)?;
    }
    Ok(acc)
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(n={}, {self})", self.n)
    }
}

impl FromStr for Ideal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ideal::parse_text(s)
    }
}

/// Every square-free monomial over `x_1..x_n` of degree at most `max_degree`.
pub fn squarefree_monomials(n: usize, max_degree: usize) -> impl Iterator<Item = Monomial> {
    assert!(n < MAX_VARS, "exhaustive monomial scan needs n < 64");
    (0u64..1 << n).map(Monomial).filter(move |m| m.degree() <= max_degree)
}

/// All `d`-subsets of `x_1..x_n`, in increasing lexicographic order.
pub fn subsets_of_size(n: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, acc: u64, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial(acc));
            return;
        }
        for v in start..=n {
            if n - v + 1 < left {
                break;
            }
            rec(v + 1, n, left - 1, acc | 1 << (v - 1), out);
        }
    }
    if d <= n {
        rec(1, n, d, 0, &mut out);
    }
    out
}

/// Binomial coefficient `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().copied()).unwrap()
    }

    fn veronese42() -> Ideal {
        Ideal::new(4, subsets_of_size(4, 2)).unwrap()
    }

    #[test]
    fn lex_order_on_monomials() {
        let mut v = vec![m(&[2, 3]), m(&[1, 4]), m(&[1]), m(&[1, 2]), m(&[1, 3]), m(&[3])];
        v.sort();
        assert_eq!(v, vec![m(&[1]), m(&[1, 2]), m(&[1, 3]), m(&[1, 4]), m(&[2, 3]), m(&[3])]);
        assert_eq!(m(&[64]).cmp(&m(&[1, 64])), Ordering::Greater);
        assert_eq!(m(&[63, 64]).cmp(&m(&[63])), Ordering::Greater);
    }

    #[test]
    fn minimal_generators_examples() {
        let i = Ideal::new(3, [m(&[1, 2]), m(&[1, 2, 3])]).unwrap();
        assert_eq!(i.gens(), &[m(&[1, 2])]);
        let i = Ideal::new(2, [m(&[1]), m(&[2])]).unwrap();
        assert_eq!(i.len(), 2);
        assert_eq!(veronese42().len(), 6);
        assert_eq!(
            Ideal::new(3, [m(&[4])]),
            Err(Error::VariableOutOfRange { index: 4, n: 3 })
        );
        assert_eq!(Ideal::new(65, []), Err(Error::TooManyVariables(65)));
    }

    #[test]
    fn support_examples() {
        assert_eq!(Ideal::from_sets(2, &[[1, 2]]).unwrap().support(), m(&[1, 2]));
        assert_eq!(veronese42().support(), Monomial::full(4));
        assert_eq!(Ideal::zero(3).support(), Monomial::ONE);
    }

    #[test]
    fn contains_examples() {
        let v = veronese42();
        assert!(v.contains(m(&[1, 2, 3])));
        assert!(!v.contains(m(&[1])));
        let b = Ideal::from_sets(4, &[[1, 3], [1, 4], [2, 3], [2, 4]]).unwrap();
        assert!(!b.contains(m(&[1, 2])));
    }

    #[test]
    fn product_examples() {
        let a = Ideal::from_sets(4, &[[1], [2]]).unwrap();
        let b = Ideal::from_sets(4, &[[3], [4]]).unwrap();
        let p = a.product(&b).unwrap();
        assert_eq!(p, Ideal::from_sets(4, &[[1, 3], [1, 4], [2, 3], [2, 4]]).unwrap());

        let x1 = Ideal::from_sets(1, &[[1]]).unwrap();
        assert!(matches!(x1.product(&x1), Err(Error::NonSquareFree(_))));

        let c = Ideal::from_sets(3, &[[1], [2]]).unwrap();
        let e = Ideal::from_sets(3, &[[2], [3]]).unwrap();
        assert_eq!(c.product(&e), Err(Error::NonSquareFree("x2^2".into())));
    }

    #[test]
    fn star_product_examples() {
        let a = Ideal::from_sets(4, &[[1], [2]]).unwrap();
        let b = Ideal::from_sets(4, &[[3], [4]]).unwrap();
        let p = star_product(&[a.clone(), b]).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.gens().iter().all(|g| g.degree() == 2));
        assert_eq!(star_product(std::slice::from_ref(&a)).unwrap(), a);

        let c = Ideal::from_sets(3, &[[1], [2]]).unwrap();
        let e = Ideal::from_sets(3, &[[2], [3]]).unwrap();
        assert_eq!(star_product(&[c, e]), Err(Error::OverlappingSupports(2)));
    }

    #[test]
    fn colon_examples() {
        let b = Ideal::from_sets(4, &[[1, 3], [1, 4], [2, 3], [2, 4]]).unwrap();
        assert_eq!(b.colon_by_var(1).unwrap(), Ideal::from_sets(4, &[[3], [4]]).unwrap());
        let p = Ideal::from_sets(3, &[[1, 2]]).unwrap();
        assert_eq!(p.colon_by_var(3).unwrap(), p);
        let x1 = Ideal::from_sets(1, &[[1]]).unwrap();
        assert!(x1.colon_by_var(1).unwrap().is_unit());
        assert!(x1.colon_by_var(2).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "n=4\n# block product\nx1 x3\n\nx1 x4\nx2 x3\nx2 x4\nx1 x2 x3\n";
        let i: Ideal = text.parse().unwrap();
        assert_eq!(i.len(), 4);
        assert_eq!(i.to_text(), "n=4\nx1 x3\nx1 x4\nx2 x3\nx2 x4\n");
        assert_eq!(i.to_text().parse::<Ideal>().unwrap(), i);
        assert!(matches!("x1 x2\n".parse::<Ideal>(), Err(Error::Parse { line: 1, .. })));
        assert!(matches!("n=2\nx1 x3\n".parse::<Ideal>(), Err(Error::VariableOutOfRange { index: 3, n: 2 })));
        assert!(matches!("n=2\nx1 y2\n".parse::<Ideal>(), Err(Error::Parse { line: 2, .. })));
        assert!("n=2\n1\n".parse::<Ideal>().unwrap().is_unit());
    }
}
