//! Linear-quotient orderings and the invariants read off from them.
//!
//! An ordering `u_1..u_s` of `G(I)` has linear quotients when each colon
//! `(u_1..u_{j-1}) : u_j` is generated by variables. The colon is computed
//! exactly from the quotients `u_i / gcd(u_i, u_j)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::minimal_primes;
use crate::error::{Error, Result};
use crate::ideal::{Monomial, VarSet};
use crate::matroid::MatroidalIdeal;

const DFS_NODE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientOrdering {
    order: Vec<Monomial>,
    colon_vars: Vec<VarSet>,
    q: usize,
}

impl QuotientOrdering {
    pub fn order(&self) -> &[Monomial] {
        &self.order
    }

    /// Colon variables for steps `j = 2..s`.
    pub fn colon_vars(&self) -> &[VarSet] {
        &self.colon_vars
    }

    /// Largest colon size; 0 for a single generator.
    pub fn q(&self) -> usize {
        self.q
    }
}

/// How the generators are prioritized when an ordering is searched for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingStrategy {
    /// `x1x2, x1x3, .., x2x3, ..`: lexicographically descending monomials.
    Lex,
    /// `x1x2, x1x3, x2x3, x1x4, ..`: reverse-lexicographically descending.
    RevLex,
    /// A deterministic shuffle.
    Shuffled(u64),
}

/// Variables generating `(prev) : u`, or `None` if that colon is not
/// generated by variables.
pub fn colon_step(prev: &[Monomial], u: Monomial) -> Option<VarSet> {
    let linear = prev
        .iter()
        .map(|p| p.strip(u))
        .filter(|q| q.degree() == 1)
        .fold(Monomial::ONE, |acc, q| acc.lcm(q));
    prev.iter()
        .all(|p| !p.strip(u).is_coprime(linear))
        .then_some(linear)
}

/// Checks that `order` is a permutation of `G(I)` with linear quotients.
pub fn verify_ordering(ideal: &MatroidalIdeal, order: &[Monomial]) -> Result<QuotientOrdering> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != ideal.gens() {
        return Err(Error::InvalidArgument("ordering is not a permutation of G(I)".into()));
    }
    let mut colon_vars = Vec::with_capacity(order.len().saturating_sub(1));
    for j in 1..order.len() {
        let vars = colon_step(&order[..j], order[j]).ok_or_else(|| {
            Error::InvalidArgument(format!("colon at step {} is not generated by variables", j + 1))
        })?;
        colon_vars.push(vars);
    }
    let q = colon_vars.iter().map(|v| v.degree()).max().unwrap_or(0);
    Ok(QuotientOrdering { order: order.to_vec(), colon_vars, q })
}

fn priority(ideal: &MatroidalIdeal, strategy: OrderingStrategy) -> Vec<Monomial> {
    let mut gens = ideal.gens().to_vec();
    match strategy {
        OrderingStrategy::Lex => {}
        OrderingStrategy::RevLex => {
            gens.sort_by_cached_key(|g| g.vars().rev().collect::<Vec<_>>());
        }
        OrderingStrategy::Shuffled(seed) => {
            gens.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
    }
    gens
}

fn greedy(prio: &[Monomial]) -> Option<Vec<Monomial>> {
    let mut order = vec![*prio.first()?];
    let mut left: Vec<Monomial> = prio[1..].to_vec();
    while !left.is_empty() {
        let k = left.iter().position(|&u| colon_step(&order, u).is_some())?;
        order.push(left.remove(k));
    }
    Some(order)
}

fn dfs(order: &mut Vec<Monomial>, left: &mut Vec<Monomial>, nodes: &mut usize) -> bool {
    if left.is_empty() {
        return true;
    }
    for k in 0..left.len() {
        *nodes += 1;
        if *nodes > DFS_NODE_LIMIT {
            return false;
        }
        let u = left[k];
        if order.is_empty() || colon_step(order, u).is_some() {
            order.push(left.remove(k));
            if dfs(order, left, nodes) {
                return true;
            }
            left.insert(k, order.pop().unwrap_or(u));
        }
    }
    false
}

/// Tries the strategy's order directly, then greedy repair, then exhaustive DFS.
pub fn find_ordering_with(
    ideal: &MatroidalIdeal,
    strategy: OrderingStrategy,
) -> Result<QuotientOrdering> {
    let prio = priority(ideal, strategy);
    if let Ok(ordering) = verify_ordering(ideal, &prio) {
        return Ok(ordering);
    }
    if let Some(order) = greedy(&prio) {
        return verify_ordering(ideal, &order);
    }
    let mut order = Vec::new();
    let mut left = prio;
    let mut nodes = 0;
    if dfs(&mut order, &mut left, &mut nodes) {
        return verify_ordering(ideal, &order);
    }
    Err(Error::InvariantViolation(format!(
        "no linear-quotient ordering found for {}",
        ideal.ideal()
    )))
}

pub fn find_ordering(ideal: &MatroidalIdeal) -> Result<QuotientOrdering> {
    find_ordering_with(ideal, OrderingStrategy::Lex)
}

/// `q(I)`, computed from an ordering and cross-checked against `n - d`.
pub fn q_index(ideal: &MatroidalIdeal) -> Result<usize> {
    ideal.require_full_support()?;
    let q = find_ordering(ideal)?.q();
    let expected = ideal.n() - ideal.degree();
    if q != expected {
        return Err(Error::InvariantViolation(format!(
            "q(I) = {q} but n - d = {expected} for {}",
            ideal.ideal()
        )));
    }
    Ok(q)
}

/// Projective dimension `pd_R(I) = q(I)`.
pub fn proj_dim(ideal: &MatroidalIdeal) -> Result<usize> {
    q_index(ideal)
}

/// `depth R/I = n - q(I) - 1`.
pub fn depth(ideal: &MatroidalIdeal) -> Result<usize> {
    let q = q_index(ideal)?;
    Ok(ideal.n() - q - 1)
}

pub fn is_cohen_macaulay(ideal: &MatroidalIdeal) -> Result<bool> {
    let q = q_index(ideal)?;
    Ok(minimal_primes(ideal.ideal())?.height == q + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub d: usize,
    pub q: usize,
    pub pd: usize,
    pub depth: usize,
    pub height: usize,
    pub cohen_macaulay: bool,
}

pub fn analyze(ideal: &MatroidalIdeal) -> Result<Analysis> {
    let q = q_index(ideal)?;
    let height = minimal_primes(ideal.ideal())?.height;
    Ok(Analysis {
        n: ideal.n(),
        d: ideal.degree(),
        q,
        pd: q,
        depth: ideal.n() - q - 1,
        height,
        cohen_macaulay: height == q + 1,
    })
}
