//! Minimal primes, height and unmixedness of square-free monomial ideals, and
//! the structure theory of matroidal ideals built on them.
//!
//! The minimal primes of a square-free monomial ideal are the ideals generated
//! by the minimal transversals (vertex covers) of the hypergraph of generator
//! supports. For degree-2 matroidal ideals the generators are the edges of a
//! complete multipartite graph and the primes are the complements of its parts.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{binomial, Ideal, Monomial, VarSet};
use crate::matroid::{check_matroidal, fiber, MatroidalIdeal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDecomposition {
    /// Minimal primes as variable sets, sorted.
    pub primes: Vec<VarSet>,
    pub height: usize,
    pub unmixed: bool,
}

impl PrimeDecomposition {
    /// Membership in the intersection of the primes.
    pub fn contains(&self, m: Monomial) -> bool {
        self.primes.iter().all(|p| !p.is_coprime(m))
    }

    pub fn heights(&self) -> Vec<usize> {
        self.primes.iter().map(|p| p.degree()).collect()
    }
}

fn covers(edges: &[u64], set: u64) -> bool {
    edges.iter().all(|&e| e & set != 0)
}

/// Every chosen vertex still owns an edge that no other chosen vertex meets.
fn all_private(edges: &[u64], set: u64) -> bool {
    let mut rest = set;
    while rest != 0 {
        let w = rest & rest.wrapping_neg();
        rest &= rest - 1;
        if !edges.iter().any(|&e| e & set == w) {
            return false;
        }
    }
    true
}

fn transversals(edges: &[u64], chosen: u64, forbidden: u64, out: &mut BTreeSet<u64>) {
    let Some(&edge) = edges.iter().find(|&&e| e & chosen == 0) else {
        out.insert(chosen);
        return;
    };
    let mut options = edge & !forbidden;
    let mut banned = forbidden;
    while options != 0 {
        let v = options & options.wrapping_neg();
        options &= options - 1;
        let next = chosen | v;
        if all_private(edges, next) {
            transversals(edges, next, banned, out);
        }
        // later branches avoid v; transversals containing v were covered here
        banned |= v;
    }
}

/// Minimal primes of a square-free monomial ideal by minimal-transversal search.
pub fn minimal_primes(ideal: &Ideal) -> Result<PrimeDecomposition> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if ideal.is_empty() {
        return Ok(PrimeDecomposition { primes: vec![Monomial::ONE], height: 0, unmixed: true });
    }
    let edges: Vec<u64> = ideal.gens().iter().map(|g| g.bits()).collect();
    let mut found = BTreeSet::new();
    transversals(&edges, 0, 0, &mut found);
    let mut primes: Vec<VarSet> = found
        .into_iter()
        .filter(|&s| covers(&edges, s) && all_private(&edges, s))
        .map(Monomial::from_bits)
        .collect();
    primes.sort_unstable();
    let height = primes.iter().map(|p| p.degree()).min().unwrap_or(0);
    let unmixed = primes.iter().all(|p| p.degree() == height);
    Ok(PrimeDecomposition { primes, height, unmixed })
}

pub fn height(ideal: &Ideal) -> Result<usize> {
    Ok(minimal_primes(ideal)?.height)
}

pub fn is_unmixed(ideal: &Ideal) -> Result<bool> {
    Ok(minimal_primes(ideal)?.unmixed)
}

/// The parts `S_1..S_m` of a degree-2 matroidal ideal viewed as a complete
/// multipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultipartitePartition {
    pub parts: Vec<VarSet>,
    /// Part sizes, largest first.
    pub signature: Vec<usize>,
}

impl MultipartitePartition {
    /// The primes generated by the complement of each part.
    pub fn complement_primes(&self, n: usize) -> Vec<VarSet> {
        let full = Monomial::full(n);
        let mut out: Vec<_> = self.parts.iter().map(|p| full.strip(*p)).collect();
        out.sort_unstable();
        out
    }
}

fn check_partition(ideal: &Ideal, parts: &[VarSet]) -> std::result::Result<(), String> {
    if parts.len() < 2 {
        return Err(format!("only {} part(s)", parts.len()));
    }
    let mut seen = Monomial::ONE;
    for p in parts {
        if p.is_one() {
            return Err("empty part".into());
        }
        if !p.is_coprime(seen) {
            return Err(format!("part {p} overlaps an earlier part"));
        }
        seen = seen.lcm(*p);
    }
    if seen != Monomial::full(ideal.n()) {
        return Err("parts do not cover all variables".into());
    }
    for (i, a) in parts.iter().enumerate() {
        for (j, b) in parts.iter().enumerate() {
            for x in a.vars() {
                for y in b.vars() {
                    if x >= y {
                        continue;
                    }
                    let edge = Monomial::var(x).with_var(y);
                    let present = ideal.is_generator(edge);
                    if i != j && !present {
                        return Err(format!("cross pair {edge} is not a generator"));
                    }
                    if i == j && present {
                        return Err(format!("pair {edge} inside one part is a generator"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Splits off the lowest unassigned variable together with its non-neighbors,
/// then repeats on the remaining variables.
pub fn degree2_partition(ideal: &MatroidalIdeal) -> Result<MultipartitePartition> {
    if ideal.degree() != 2 {
        return Err(Error::WrongDegree { expected: 2, found: ideal.degree() });
    }
    ideal.require_full_support()?;
    let g = ideal.ideal();
    let mut remaining = Monomial::full(g.n());
    let mut parts = Vec::new();
    while let Some(anchor) = remaining.min_var() {
        let part = remaining
            .vars()
            .filter(|&v| v == anchor || !g.is_generator(Monomial::var(anchor).with_var(v)))
            .fold(Monomial::ONE, |acc, v| acc.with_var(v));
        remaining = remaining.strip(part);
        parts.push(part);
    }
    check_partition(g, &parts)
        .map_err(|why| Error::InvariantViolation(format!("degree-2 partition of {g}: {why}")))?;
    let mut signature: Vec<usize> = parts.iter().map(|p| p.degree()).collect();
    signature.sort_unstable_by(|a, b| b.cmp(a));
    Ok(MultipartitePartition { parts, signature })
}

pub fn multipartite_signature(ideal: &MatroidalIdeal) -> Result<Vec<usize>> {
    Ok(degree2_partition(ideal)?.signature)
}

/// The ideal generated by `{g / x : x | g}`, of degree `d - 1`.
pub fn contraction(ideal: &MatroidalIdeal, x: usize) -> Result<MatroidalIdeal> {
    if !ideal.support().has_var(x) {
        return Err(Error::InvalidArgument(format!("x{x} is not in the support")));
    }
    if ideal.degree() < 2 {
        return Err(Error::InvalidArgument("contraction of a degree-1 ideal is the unit ideal".into()));
    }
    let c = Ideal::new(ideal.n(), fiber(ideal.ideal(), x))?;
    check_matroidal(&c)
        .map_err(|e| Error::InvariantViolation(format!("contraction at x{x} not matroidal: {e}")))
}

pub fn recognize_veronese(ideal: &Ideal) -> bool {
    match ideal.uniform_degree() {
        Some(d) if d >= 1 => ideal.has_full_support() && ideal.len() == binomial(ideal.n(), d),
        _ => false,
    }
}

/// Blocks `B_1..B_d` with `G(I)` equal to all transversals of the blocks, if any.
pub fn recognize_var_block_product(ideal: &Ideal) -> Option<Vec<VarSet>> {
    let d = ideal.uniform_degree().filter(|&d| d >= 1)?;
    let support = ideal.support();
    let n = ideal.n();
    // union-find over variables that never share a generator
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut co = vec![Monomial::ONE; n + 1];
    for g in ideal.gens() {
        for v in g.vars() {
            co[v] = co[v].lcm(*g);
        }
    }
    for u in support.vars() {
        for v in support.vars().filter(|&v| v > u) {
            if !co[u].has_var(v) {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<VarSet> = Vec::new();
    let mut root_of = vec![usize::MAX; n + 1];
    for v in support.vars() {
        let r = find(&mut parent, v);
        if root_of[r] == usize::MAX {
            root_of[r] = blocks.len();
            blocks.push(Monomial::ONE);
        }
        let k = root_of[r];
        blocks[k] = blocks[k].with_var(v);
    }
    if blocks.len() != d {
        return None;
    }
    let count = blocks.iter().try_fold(1usize, |acc, b| acc.checked_mul(b.degree()))?;
    let transversal = |g: &Monomial| blocks.iter().all(|b| b.gcd(*g).degree() == 1);
    (count == ideal.len() && ideal.gens().iter().all(transversal)).then_some(blocks)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnmixedBounds {
    pub h: usize,
    pub d: usize,
    pub n: usize,
    pub lower_tight: bool,
    pub upper_tight: bool,
}

/// `h + d - 1 <= n <= h d` with the tightness flags checked against the recognizers.
pub fn unmixed_bounds_report(ideal: &MatroidalIdeal) -> Result<UnmixedBounds> {
    ideal.require_full_support()?;
    let n = ideal.n();
    if n < 2 {
        return Err(Error::InvalidArgument("unmixed bounds need n >= 2".into()));
    }
    let dec = minimal_primes(ideal.ideal())?;
    if !dec.unmixed {
        return Err(Error::InvalidArgument(format!("{} is not unmixed", ideal.ideal())));
    }
    let (h, d) = (dec.height, ideal.degree());
    if !(h + d - 1 <= n && n <= h * d) {
        return Err(Error::InvariantViolation(format!(
            "bounds h+d-1 <= n <= hd fail: h={h}, d={d}, n={n}"
        )));
    }
    let lower_tight = n == h + d - 1;
    let upper_tight = n == h * d;
    let veronese = recognize_veronese(ideal.ideal());
    let blocks = recognize_var_block_product(ideal.ideal());
    if lower_tight != veronese {
        return Err(Error::InvariantViolation(format!(
            "lower tightness {lower_tight} disagrees with Veronese recognition {veronese}"
        )));
    }
    let equal_blocks = blocks.as_ref().is_some_and(|bs| bs.iter().all(|b| b.degree() == h));
    if upper_tight != equal_blocks {
        return Err(Error::InvariantViolation(format!(
            "upper tightness {upper_tight} disagrees with block recognition {blocks:?}"
        )));
    }
    Ok(UnmixedBounds { h, d, n, lower_tight, upper_tight })
}
