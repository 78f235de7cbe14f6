use std::collections::BTreeSet;

use super::{Coefficient, Exponent, MonomialOrder, Poly};
use crate::error::{Error, Result};

/// Default cap on the number of S-pairs reduced by [`buchberger`].
pub const DEFAULT_MAX_PAIRS: usize = 200_000;

/// Normal form of `f` modulo `basis` (full reduction of every term).
pub fn reduce<C: Coefficient>(f: &Poly<C>, basis: &[Poly<C>]) -> Poly<C> {
    let order = basis.first().map_or(f.order(), |g| g.order());
    let mut p = f.with_order(order);
    let mut rem: Vec<(Exponent, C)> = Vec::new();
    while let Some((lm, lc)) = p.leading().cloned() {
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|gl| gl.divides(&lm)));
        match divisor {
            Some(g) => {
                let (gl, gc) = g.leading().expect("nonzero basis element");
                p = p.sub_scaled(g, &lm.sub(gl), &(lc / gc.clone()));
            }
            None => {
                rem.push((lm, lc));
                p.terms.remove(0);
            }
        }
    }
    // remainder terms come out in decreasing order already
    Poly { nvars: f.nvars(), order, terms: rem }
}

/// Ideal membership, given a Gröbner basis.
pub fn member<C: Coefficient>(f: &Poly<C>, basis: &[Poly<C>]) -> bool {
    reduce(f, basis).is_zero()
}

pub fn s_polynomial<C: Coefficient>(f: &Poly<C>, g: &Poly<C>) -> Poly<C> {
    let (fl, fc) = f.leading().expect("nonzero");
    let (gl, gc) = g.leading().expect("nonzero");
    let l = fl.lcm(gl);
    let left = f.mul_term(&l.sub(fl), &(C::one() / fc.clone()));
    left.sub_scaled(g, &l.sub(gl), &(C::one() / gc.clone()))
}

/// True when every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis<C: Coefficient>(basis: &[Poly<C>]) -> bool {
    (0..basis.len()).all(|i| {
        (i + 1..basis.len()).all(|j| reduce(&s_polynomial(&basis[i], &basis[j]), basis).is_zero())
    })
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Reduced Gröbner basis of `gens` by Buchberger's algorithm with the normal
/// selection strategy and both Buchberger criteria.
pub fn buchberger<C: Coefficient>(
    gens: &[Poly<C>],
    order: MonomialOrder,
    max_pairs: usize,
) -> Result<Vec<Poly<C>>> {
    let mut basis: Vec<Poly<C>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order).monic())
        .collect();
    if basis.is_empty() {
        return Err(Error::InvalidArgument("Gröbner basis of an empty or zero family".into()));
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        let lcm_of = |&(i, j): &(usize, usize)| {
            basis[i].leading_monomial().expect("nonzero").lcm(basis[j].leading_monomial().expect("nonzero"))
        };
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| order.cmp(&lcm_of(a), &lcm_of(b)).then(a.cmp(b)))
            .expect("nonempty");
        pairs.remove(&(i, j));
        let li = basis[i].leading_monomial().expect("nonzero");
        let lj = basis[j].leading_monomial().expect("nonzero");
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().is_some_and(|lk| lk.divides(&l))
                && !pairs.contains(&ordered(i, k))
                && !pairs.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > max_pairs {
            return Err(Error::GroebnerBudget(max_pairs));
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic());
            for t in 0..k {
                pairs.insert((t, k));
            }
        }
    }
    Ok(interreduce(basis, order))
}

fn interreduce<C: Coefficient>(mut basis: Vec<Poly<C>>, order: MonomialOrder) -> Vec<Poly<C>> {
    basis.sort_by(|a, b| {
        order.cmp(
            a.leading_monomial().expect("nonzero"),
            b.leading_monomial().expect("nonzero"),
        )
    });
    // drop elements whose leading monomial is divisible by an earlier (smaller) one
    let mut minimal: Vec<Poly<C>> = Vec::new();
    for g in basis {
        let lg = g.leading_monomial().expect("nonzero");
        if !minimal.iter().any(|h| h.leading_monomial().expect("nonzero").divides(lg)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let (head, tail) = minimal[k].terms.split_first().expect("nonzero");
        let others: Vec<Poly<C>> = minimal
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != k)
            .map(|(_, p)| p.clone())
            .collect();
        let tail_poly = Poly { nvars: minimal[k].nvars, order, terms: tail.to_vec() };
        let reduced_tail = reduce(&tail_poly, &others);
        let mut terms = vec![head.clone()];
        terms.extend(reduced_tail.terms);
        out.push(Poly { nvars: minimal[k].nvars, order, terms }.monic());
    }
    out
}
