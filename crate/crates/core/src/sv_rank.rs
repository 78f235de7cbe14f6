//! Schmitt–Vogel certificates for the arithmetical rank.
//!
//! A layered partition `P_0, .., P_r` of `G(I)` with `|P_0| = 1`, in which
//! the product of any two distinct elements of a layer is divisible by an
//! element of an earlier layer, yields `r + 1` layer sums generating `I` up
//! to radical. That bounds `ara I <= r + 1`; the lower bound `q(I) + 1`
//! comes from the projective dimension.

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::decomposition::{degree2_partition, recognize_var_block_product, recognize_veronese};
use crate::error::{Error, Result};
use crate::ideal::{star_product, subsets_of_size, Ideal, Monomial, VarSet};
use crate::matroid::MatroidalIdeal;
use crate::poly::{Coefficient, MonomialOrder, Poly};
use crate::quotients::q_index;

/// A candidate Schmitt–Vogel partition of the generators of `ideal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvPartition {
    ideal: Ideal,
    layers: Vec<Vec<Monomial>>,
}

impl SvPartition {
    pub fn new(ideal: Ideal, layers: Vec<Vec<Monomial>>) -> Self {
        SvPartition { ideal, layers }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn layers(&self) -> &[Vec<Monomial>] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }
}

/// First reason a layered family is not a Schmitt–Vogel partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SvViolation {
    NoLayers,
    EmptyLayer { layer: usize },
    FirstLayerSize { size: usize },
    NotAGenerator { monomial: Monomial },
    Duplicate { monomial: Monomial },
    MissingGenerator { monomial: Monomial },
    NoEarlierDivisor { layer: usize, p: Monomial, p2: Monomial },
}

impl fmt::Display for SvViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SvViolation::NoLayers => write!(f, "no layers"),
            SvViolation::EmptyLayer { layer } => write!(f, "layer {layer} is empty"),
            SvViolation::FirstLayerSize { size } => write!(f, "P_0 has {size} elements, not 1"),
            SvViolation::NotAGenerator { monomial } => write!(f, "{monomial} is not a generator"),
            SvViolation::Duplicate { monomial } => write!(f, "{monomial} appears twice"),
            SvViolation::MissingGenerator { monomial } => write!(f, "generator {monomial} is missing"),
            SvViolation::NoEarlierDivisor { layer, p, p2 } => {
                write!(f, "no element before layer {layer} divides {p}*{p2}")
            }
        }
    }
}

/// Checks the three Schmitt–Vogel conditions, reporting the first failure.
pub fn verify_sv(p: &SvPartition) -> std::result::Result<(), SvViolation> {
    let gens = p.ideal.gens();
    if p.layers.is_empty() {
        return Err(SvViolation::NoLayers);
    }
    let mut seen: Vec<Monomial> = Vec::with_capacity(gens.len());
    for (k, layer) in p.layers.iter().enumerate() {
        if layer.is_empty() {
            return Err(SvViolation::EmptyLayer { layer: k });
        }
        for &m in layer {
            if !p.ideal.is_generator(m) {
                return Err(SvViolation::NotAGenerator { monomial: m });
            }
            if seen.contains(&m) {
                return Err(SvViolation::Duplicate { monomial: m });
            }
            seen.push(m);
        }
    }
    if let Some(&m) = gens.iter().find(|g| !seen.contains(g)) {
        return Err(SvViolation::MissingGenerator { monomial: m });
    }
    if p.layers[0].len() != 1 {
        return Err(SvViolation::FirstLayerSize { size: p.layers[0].len() });
    }
    let mut earlier: Vec<Monomial> = p.layers[0].clone();
    for (k, layer) in p.layers.iter().enumerate().skip(1) {
        for (a, &x) in layer.iter().enumerate() {
            for &y in &layer[a + 1..] {
                let prod = x.lcm(y);
                if !earlier.iter().any(|e| e.divides(prod)) {
                    return Err(SvViolation::NoEarlierDivisor { layer: k, p: x, p2: y });
                }
            }
        }
        earlier.extend_from_slice(layer);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    SvPartition,
    ProductComposition,
    Manual,
}

/// Polynomials claimed to generate `target` up to radical.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalCertificate<C> {
    pub polys: Vec<Poly<C>>,
    pub target: Ideal,
    pub provenance: Provenance,
}

impl<C> RadicalCertificate<C> {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// The layer sums `q_i = Σ_{p ∈ P_i} p` of a verified partition.
pub fn sv_sums<C: Coefficient>(p: &SvPartition) -> Result<RadicalCertificate<C>> {
    verify_sv(p).map_err(|v| Error::MalformedCertificate(v.to_string()))?;
    let n = p.ideal.n();
    let polys = p
        .layers
        .iter()
        .map(|layer| Poly::sum_of(layer, n, MonomialOrder::DegRevLex))
        .collect();
    Ok(RadicalCertificate { polys, target: p.ideal.clone(), provenance: Provenance::SvPartition })
}

/// Layers by largest variable: `P_0 = {x_1⋯x_d}` and `P_i` the monomials
/// whose largest variable is `x_{d+i}`.
pub fn veronese_cert(n: usize, d: usize) -> Result<SvPartition> {
    let ideal = crate::matroid::veronese(n, d)?.into_ideal();
    let mut layers: Vec<Vec<Monomial>> = vec![Vec::new(); n - d + 1];
    for m in subsets_of_size(n, d) {
        let top = m.max_var().expect("d >= 1");
        layers[top - d].push(m);
    }
    Ok(SvPartition { ideal, layers })
}

/// Singleton layers `{x_i}` for an ideal generated by variables.
pub fn variable_cert(n: usize, vars: VarSet) -> Result<SvPartition> {
    if vars.is_one() {
        return Err(Error::InvalidArgument("empty variable set".into()));
    }
    let ideal = Ideal::of_vars(n, vars)?;
    let layers = vars.vars().map(|v| vec![Monomial::var(v)]).collect();
    Ok(SvPartition { ideal, layers })
}

/// Folds the anti-diagonal product `c_k = Σ_{i+j=k} a_i b_j` over the list,
/// certifying the star product of the targets.
pub fn product_cert<C: Coefficient>(certs: &[RadicalCertificate<C>]) -> Result<RadicalCertificate<C>> {
    let (first, rest) = certs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("product of no certificates".into()))?;
    if rest.is_empty() {
        return Ok(first.clone());
    }
    let targets: Vec<Ideal> = certs.iter().map(|c| c.target.clone()).collect();
    let target = star_product(&targets)?;
    let n = target.n();
    let mut acc = first.polys.clone();
    for next in rest {
        let (u, v) = (acc.len(), next.polys.len());
        if u == 0 || v == 0 {
            return Err(Error::InvalidArgument("empty certificate in product".into()));
        }
        let mut folded = vec![Poly::zero(n, MonomialOrder::DegRevLex); u + v - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in next.polys.iter().enumerate() {
                folded[i + j] = &folded[i + j] + &(a * b);
            }
        }
        acc = folded;
    }
    Ok(RadicalCertificate { polys: acc, target, provenance: Provenance::ProductComposition })
}

/// Product of the variable certificates of each block.
pub fn block_product_cert<C: Coefficient>(n: usize, blocks: &[VarSet]) -> Result<RadicalCertificate<C>> {
    let certs = blocks
        .iter()
        .map(|b| sv_sums(&variable_cert(n, *b)?))
        .collect::<Result<Vec<_>>>()?;
    product_cert(&certs)
}

/// Anti-diagonal layering of the generator matrix of a complete
/// multipartite ideal, with parts placed largest first.
pub fn degree2_cert(ideal: &MatroidalIdeal) -> Result<SvPartition> {
    let mut parts = degree2_partition(ideal)?.parts;
    parts.sort_by_key(|p| std::cmp::Reverse(p.degree()));
    let n = ideal.n();
    // position (1-based) in the concatenated parts -> original variable
    let relabeled: Vec<usize> = parts.iter().flat_map(|p| p.vars()).collect();
    let mut layers: Vec<Vec<Monomial>> = vec![Vec::new(); n.saturating_sub(1)];
    let mut part_end = 0;
    for part in &parts[..parts.len() - 1] {
        let part_start = part_end;
        part_end += part.degree();
        for i in part_start + 1..=part_end {
            for j in 1..=n - part_end {
                let y = Monomial::var(relabeled[i - 1]).with_var(relabeled[part_end + j - 1]);
                layers[i + j - 2].push(y);
            }
        }
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }
    layers.retain(|l| !l.is_empty());
    Ok(SvPartition { ideal: ideal.ideal().clone(), layers })
}

/// Which construction produced an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Veronese,
    Product,
    Degree2,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AraBounds {
    /// `q(I) + 1 = pd R/I`.
    pub lower: usize,
    pub upper: Option<usize>,
    pub exact: Option<usize>,
    pub construction: Option<Construction>,
    /// `μ(I)`, the trivial upper bound.
    pub generators: usize,
}

/// Size of the best certificate among the constructions that apply.
pub fn best_construction(ideal: &MatroidalIdeal) -> Result<Option<(Construction, usize)>> {
    let mut best: Option<(Construction, usize)> = None;
    let mut offer = |c: Construction, size: usize| {
        if best.is_none_or(|(_, b)| size < b) {
            best = Some((c, size));
        }
    };
    let g = ideal.ideal();
    if recognize_veronese(g) {
        let cert = veronese_cert(ideal.n(), ideal.degree())?;
        if verify_sv(&cert).is_ok() {
            offer(Construction::Veronese, cert.len());
        }
    }
    if let Some(blocks) = recognize_var_block_product(g) {
        let cert: RadicalCertificate<BigRational> = block_product_cert(ideal.n(), &blocks)?;
        offer(Construction::Product, cert.len());
    }
    if ideal.degree() == 2 {
        let cert = degree2_cert(ideal)?;
        if verify_sv(&cert).is_ok() {
            offer(Construction::Degree2, cert.len());
        }
    }
    Ok(best)
}

/// Lower bound from the projective dimension, upper bound from constructions
/// and, when a budget is given and needed, certificate search at size `q + 1`.
pub fn ara_bounds(ideal: &MatroidalIdeal, search_budget: Option<u64>) -> Result<AraBounds> {
    let lower = q_index(ideal)? + 1;
    let (mut construction, mut upper) = match best_construction(ideal)? {
        Some((c, s)) => (Some(c), Some(s)),
        None => (None, None),
    };
    if upper != Some(lower) {
        if let Some(budget) = search_budget {
            if let SearchOutcome::Found(_) = search_cert(ideal, lower, budget) {
                construction = Some(Construction::Search);
                upper = Some(lower);
            }
        }
    }
    if let Some(u) = upper {
        if u < lower {
            return Err(Error::InvariantViolation(format!(
                "certificate of size {u} below the lower bound {lower}"
            )));
        }
    }
    let exact = upper.filter(|&u| u == lower);
    Ok(AraBounds { lower, upper, exact, construction, generators: ideal.gens().len() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(SvPartition),
    /// Every layered partition of this size was ruled out. Says nothing
    /// about `ara` itself.
    Exhausted { nodes: u64 },
    BudgetExceeded { nodes: u64 },
    /// More generators than the search representation supports.
    TooLarge,
}

struct Search<'a> {
    gens: &'a [Monomial],
    /// `divisors[a][b]`: generators other than `a, b` dividing `g_a g_b`.
    divisors: Vec<Vec<u128>>,
    target: usize,
    blocks: Vec<u128>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn pair_ok(&self, a: usize, b: usize, block: u128) -> bool {
        self.divisors[a][b] & !block != 0
    }

    fn block_ok(&self, block: u128) -> bool {
        let members: Vec<usize> = bits(block).collect();
        members
            .iter()
            .enumerate()
            .all(|(k, &a)| members[k + 1..].iter().all(|&b| self.pair_ok(a, b, block)))
    }

    /// Orders the blocks into layers: a singleton first, then repeatedly any
    /// block whose pairs all have a divisor among the placed generators.
    fn layer_order(&self) -> Option<Vec<usize>> {
        let k = self.blocks.len();
        let first = (0..k).find(|&b| self.blocks[b].count_ones() == 1)?;
        let mut order = vec![first];
        let mut placed = self.blocks[first];
        let mut used = vec![false; k];
        used[first] = true;
        while order.len() < k {
            let next = (0..k).find(|&b| {
                !used[b] && {
                    let members: Vec<usize> = bits(self.blocks[b]).collect();
                    members.iter().enumerate().all(|(i, &a)| {
                        members[i + 1..].iter().all(|&c| self.divisors[a][c] & placed != 0)
                    })
                }
            })?;
            used[next] = true;
            placed |= self.blocks[next];
            order.push(next);
        }
        Some(order)
    }

    /// `Some(true)` found, `Some(false)` subtree exhausted, `None` out of budget.
    fn dfs(&mut self, t: usize) -> Option<bool> {
        let s = self.gens.len();
        if t == s {
            return Some(self.blocks.len() == self.target && self.layer_order().is_some());
        }
        let used = self.blocks.len();
        let open_new = used < self.target;
        for b in 0..used + usize::from(open_new) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let new_block = b == used;
            let blocks_after = used + usize::from(new_block);
            if blocks_after + (s - t - 1) < self.target {
                continue;
            }
            let with = if new_block { 1u128 << t } else { self.blocks[b] | 1u128 << t };
            if !new_block && !self.block_ok(with) {
                continue;
            }
            if new_block {
                self.blocks.push(with);
            } else {
                self.blocks[b] = with;
            }
            let r = self.dfs(t + 1);
            if r != Some(false) {
                return r;
            }
            if new_block {
                self.blocks.pop();
            } else {
                self.blocks[b] &= !(1u128 << t);
            }
        }
        Some(false)
    }
}

fn bits(mut x: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            return None;
        }
        let t = x.trailing_zeros() as usize;
        x &= x - 1;
        Some(t)
    })
}

/// Searches for a Schmitt–Vogel partition with exactly `target_size` layers.
///
/// Set partitions of the sorted generators are enumerated in restricted
/// growth order, pruning any block containing a pair whose product has no
/// divisor outside the block. Complete partitions are then ordered into
/// layers greedily, which succeeds whenever some valid order exists.
pub fn search_cert(ideal: &MatroidalIdeal, target_size: usize, budget: u64) -> SearchOutcome {
    let gens = ideal.gens();
    let s = gens.len();
    if s > 128 {
        return SearchOutcome::TooLarge;
    }
    if target_size == 0 || target_size > s {
        return SearchOutcome::Exhausted { nodes: 0 };
    }
    let mut divisors = vec![vec![0u128; s]; s];
    for a in 0..s {
        for b in 0..s {
            if a == b {
                continue;
            }
            let prod = gens[a].lcm(gens[b]);
            for (c, g) in gens.iter().enumerate() {
                if c != a && c != b && g.divides(prod) {
                    divisors[a][b] |= 1u128 << c;
                }
            }
        }
    }
    let mut search = Search {
        gens,
        divisors,
        target: target_size,
        blocks: Vec::new(),
        nodes: 0,
        budget,
    };
    match search.dfs(0) {
        Some(true) => {
            let order = search.layer_order().expect("leaf accepted an ordering");
            let layers = order
                .into_iter()
                .map(|b| bits(search.blocks[b]).map(|i| gens[i]).collect())
                .collect();
            SearchOutcome::Found(SvPartition { ideal: ideal.ideal().clone(), layers })
        }
        Some(false) => SearchOutcome::Exhausted { nodes: search.nodes },
        None => SearchOutcome::BudgetExceeded { nodes: search.nodes },
    }
}
