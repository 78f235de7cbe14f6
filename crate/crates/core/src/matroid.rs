//! Recognition and construction of matroidal ideals.
//!
//! An ideal is matroidal when its generators are square-free and their
//! supports satisfy the basis exchange axiom: for bases `B1, B2` and
//! `x ∈ B1 \ B2` some `y ∈ B2 \ B1` makes `B1 - x + y` a basis again.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{subsets_of_size, Ideal, Monomial, VarSet};

/// A validated matroidal ideal together with its degree (the matroid rank).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatroidalIdeal {
    ideal: Ideal,
    d: usize,
}

/// Ordered pair of bases and the variable for which no exchange exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeViolation {
    pub b1: Monomial,
    pub b2: Monomial,
    pub x: usize,
}

impl fmt::Display for ExchangeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "B1={}, B2={}, x=x{}: no y in B2-B1 gives a generator",
            self.b1, self.b2, self.x
        )
    }
}

impl MatroidalIdeal {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn into_ideal(self) -> Ideal {
        self.ideal
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.ideal.n()
    }

    pub fn gens(&self) -> &[Monomial] {
        self.ideal.gens()
    }

    pub fn support(&self) -> VarSet {
        self.ideal.support()
    }

    pub fn require_full_support(&self) -> Result<()> {
        if self.ideal.has_full_support() {
            Ok(())
        } else {
            Err(Error::SupportNotFull { n: self.n() })
        }
    }

    pub fn relabel(&self, perm: &[usize]) -> MatroidalIdeal {
        MatroidalIdeal { ideal: self.ideal.relabel(perm), d: self.d }
    }
}

/// First exchange failure in lexicographic generator order, if any.
///
/// `gens` must be sorted; membership is a binary search.
pub fn find_exchange_violation(gens: &[Monomial]) -> Option<ExchangeViolation> {
    for &b1 in gens {
        for &b2 in gens {
            let out = b1.strip(b2);
            if out.is_one() {
                continue;
            }
            let inn = b2.strip(b1);
            for x in out.vars() {
                let base = b1.without_var(x);
                let ok = inn.vars().any(|y| gens.binary_search(&base.with_var(y)).is_ok());
                if !ok {
                    return Some(ExchangeViolation { b1, b2, x });
                }
            }
        }
    }
    None
}

/// Validates the exchange condition, returning the matroidal ideal or why it fails.
pub fn check_matroidal(ideal: &Ideal) -> Result<MatroidalIdeal> {
    if ideal.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let d = ideal.gens()[0].degree();
    if let Some(g) = ideal.gens().iter().find(|g| g.degree() != d) {
        return Err(Error::MixedDegrees(d, g.degree()));
    }
    if let Some(w) = find_exchange_violation(ideal.gens()) {
        return Err(Error::NotMatroidal(w));
    }
    Ok(MatroidalIdeal { ideal: ideal.clone(), d })
}

/// The square-free Veronese ideal: all degree-`d` square-free monomials in `x_1..x_n`.
pub fn veronese(n: usize, d: usize) -> Result<MatroidalIdeal> {
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!("veronese degree {d} not in 1..={n}")));
    }
    if n > crate::ideal::MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    let ideal = Ideal::new(n, subsets_of_size(n, d))?;
    Ok(MatroidalIdeal { ideal, d })
}

/// Transversal ideal of a partition: the star product of the ideals generated
/// by each block's variables, living in `K[x_1..x_n]`.
pub fn var_block_product(n: usize, blocks: &[VarSet]) -> Result<MatroidalIdeal> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("no blocks given".into()));
    }
    let mut seen = Monomial::ONE;
    for b in blocks {
        if b.is_one() {
            return Err(Error::InvalidArgument("empty block".into()));
        }
        if let Some(v) = seen.gcd(*b).min_var() {
            return Err(Error::OverlappingSupports(v));
        }
        if let Some(v) = b.max_var().filter(|&v| v > n) {
            return Err(Error::VariableOutOfRange { index: v, n });
        }
        seen = seen.lcm(*b);
    }
    let mut gens = vec![Monomial::ONE];
    for b in blocks {
        gens = gens.iter().flat_map(|g| b.vars().map(move |v| g.with_var(v))).collect();
    }
    let ideal = Ideal::new(n, gens)?;
    Ok(MatroidalIdeal { ideal, d: blocks.len() })
}

/// For a generator `f` and a variable `y` outside it, the smallest variable
/// `x_i` of `f` with `f / x_i * y` in the ideal.
pub fn pivot(ideal: &MatroidalIdeal, f: Monomial, y: usize) -> Result<usize> {
    if !ideal.ideal.is_generator(f) {
        return Err(Error::InvalidArgument(format!("{f} is not a generator")));
    }
    if !ideal.support().has_var(y) || f.has_var(y) {
        return Err(Error::InvalidArgument(format!("x{y} must lie in supp(I) - supp({f})")));
    }
    f.vars()
        .find(|&i| ideal.ideal.contains(f.without_var(i).with_var(y)))
        .ok_or_else(|| {
            Error::InvariantViolation(format!("no pivot for f={f}, y=x{y} in {}", ideal.ideal))
        })
}

/// Generators divisible by `x_i`, divided by `x_i`.
pub(crate) fn fiber(ideal: &Ideal, i: usize) -> Vec<Monomial> {
    let mut out: Vec<_> = ideal
        .gens()
        .iter()
        .filter(|g| g.has_var(i))
        .map(|g| g.without_var(i))
        .collect();
    out.sort_unstable();
    out
}

/// Checks `{f : x f ∈ G(I)} = {f : y f ∈ G(I)}` for variables `x, y` that
/// never occur together in a generator.
pub fn transfer_fibers_equal(ideal: &MatroidalIdeal, x: usize, y: usize) -> Result<bool> {
    let n = ideal.n();
    for v in [x, y] {
        if v == 0 || v > n {
            return Err(Error::VariableOutOfRange { index: v, n });
        }
    }
    if x == y {
        return Err(Error::InvalidArgument("x and y must differ".into()));
    }
    let xy = Monomial::var(x).with_var(y);
    if let Some(g) = ideal.gens().iter().find(|g| xy.divides(**g)) {
        return Err(Error::InvalidArgument(format!("x{x}x{y} divides generator {g}")));
    }
    Ok(fiber(&ideal.ideal, x) == fiber(&ideal.ideal, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().copied()).unwrap()
    }

    fn blocks(n: usize, bs: &[&[usize]]) -> MatroidalIdeal {
        let bs: Vec<_> = bs.iter().map(|b| m(b)).collect();
        var_block_product(n, &bs).unwrap()
    }

    #[test]
    fn check_examples() {
        let v = veronese(4, 2).unwrap();
        assert_eq!(check_matroidal(v.ideal()).unwrap().degree(), 2);

        let bad = Ideal::from_sets(4, &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(
            check_matroidal(&bad),
            Err(Error::NotMatroidal(ExchangeViolation { b1: m(&[1, 2]), b2: m(&[3, 4]), x: 1 }))
        );

        let path = Ideal::from_sets(3, &[[1, 2], [2, 3]]).unwrap();
        assert_eq!(check_matroidal(&path).unwrap().degree(), 2);
    }

    #[test]
    fn check_rejects_degenerate_inputs() {
        assert_eq!(check_matroidal(&Ideal::zero(3)), Err(Error::ZeroIdeal));
        assert_eq!(check_matroidal(&Ideal::unit(3)), Err(Error::UnitIdeal));
        let mixed = Ideal::from_sets(3, &[vec![1], vec![2, 3]]).unwrap();
        assert_eq!(check_matroidal(&mixed), Err(Error::MixedDegrees(1, 2)));
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese(4, 2).unwrap().gens().len(), 6);
        assert_eq!(veronese(3, 3).unwrap().gens(), &[m(&[1, 2, 3])]);
        assert_eq!(veronese(2, 1).unwrap().gens(), &[m(&[1]), m(&[2])]);
        assert!(veronese(2, 3).is_err());
        assert!(veronese(2, 0).is_err());
    }

    #[test]
    fn block_product_examples() {
        let b = blocks(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(b.gens(), &[m(&[1, 3]), m(&[1, 4]), m(&[2, 3]), m(&[2, 4])]);
        assert!(check_matroidal(b.ideal()).is_ok());
        assert_eq!(blocks(1, &[&[1]]).gens(), &[m(&[1])]);
        assert_eq!(
            var_block_product(3, &[m(&[1, 2]), m(&[2, 3])]),
            Err(Error::OverlappingSupports(2))
        );
    }

    #[test]
    fn constructions_are_matroidal_up_to_eight() {
        for n in 1..=8 {
            for d in 1..=n {
                assert!(check_matroidal(veronese(n, d).unwrap().ideal()).is_ok());
            }
        }
        // every composition of total <= 8 into consecutive blocks
        for total in 1..=8usize {
            for cut in 0u32..1 << (total - 1) {
                let mut bs = Vec::new();
                let mut cur = Monomial::ONE;
                for v in 1..=total {
                    cur = cur.with_var(v);
                    if v == total || cut >> (v - 1) & 1 == 1 {
                        bs.push(cur);
                        cur = Monomial::ONE;
                    }
                }
                let b = var_block_product(total, &bs).unwrap();
                let checked = check_matroidal(b.ideal()).unwrap();
                assert_eq!(checked.degree(), bs.len());
            }
        }
    }

    #[test]
    fn pivot_examples() {
        let v = veronese(4, 2).unwrap();
        assert_eq!(pivot(&v, m(&[1, 2]), 3).unwrap(), 1);
        let b = blocks(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(pivot(&b, m(&[1, 3]), 2).unwrap(), 1);
        let lin = veronese(2, 1).unwrap();
        assert_eq!(pivot(&lin, m(&[1]), 2).unwrap(), 1);
        assert!(pivot(&v, m(&[1, 2]), 2).is_err());
        assert!(pivot(&v, m(&[1]), 3).is_err());
    }

    #[test]
    fn transfer_examples() {
        let b = blocks(4, &[&[1, 2], &[3, 4]]);
        assert!(transfer_fibers_equal(&b, 1, 2).unwrap());
        assert_eq!(fiber(b.ideal(), 1), vec![m(&[3]), m(&[4])]);

        let k21 = check_matroidal(&Ideal::from_sets(3, &[[1, 2], [2, 3]]).unwrap()).unwrap();
        assert!(transfer_fibers_equal(&k21, 1, 3).unwrap());
        assert_eq!(fiber(k21.ideal(), 3), vec![m(&[2])]);

        let v = veronese(4, 2).unwrap();
        assert!(matches!(transfer_fibers_equal(&v, 1, 2), Err(Error::InvalidArgument(_))));
    }
}
