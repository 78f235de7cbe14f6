//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use matroidal::decomposition::{
    degree2_partition, minimal_primes, recognize_var_block_product, recognize_veronese,
};
use matroidal::explorer::{conjecture_scan, distinct_orderings, enumerate_matroidal, BatteryOptions, ScanOptions};
use matroidal::matroid::var_block_product;
use matroidal::poly::verify_radical_cert;
use matroidal::quotients::{find_ordering, is_cohen_macaulay, q_index, verify_ordering};
use matroidal::sv_rank::{
    ara_bounds, block_product_cert, degree2_cert, search_cert, sv_sums, veronese_cert, verify_sv,
    SearchOutcome, SvPartition,
};
use matroidal::{MatroidalIdeal, Monomial, RationalCertificate};

const GRID: [(usize, usize); 8] = [(2, 1), (3, 2), (4, 2), (5, 2), (6, 2), (4, 3), (5, 3), (6, 3)];
const ORACLE_CAP: u32 = 8;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Grid {
    cells: Vec<((usize, usize), Vec<MatroidalIdeal>)>,
}

impl Grid {
    fn load() -> Grid {
        let cells = GRID
            .iter()
            .map(|&(n, d)| ((n, d), enumerate_matroidal(n, d, false).expect("grid enumerates")))
            .collect();
        Grid { cells }
    }

    fn all(&self) -> impl Iterator<Item = &MatroidalIdeal> {
        self.cells.iter().flat_map(|(_, v)| v.iter())
    }

    fn degree2(&self) -> impl Iterator<Item = &MatroidalIdeal> {
        self.all().filter(|m| m.degree() == 2)
    }

    fn total(&self) -> usize {
        self.cells.iter().map(|(_, v)| v.len()).sum()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q_equals_n_minus_d(grid: &Grid) -> Outcome {
    let start = Instant::now();
    for m in grid.all() {
        let q = find_ordering(m).map_err(|e| format!("{}: {e}", m.ideal()))?.q();
        ensure(q == m.n() - m.degree(), || format!("{}: q = {q}", m.ideal()))?;
        q_index(m).map_err(|e| e.to_string())?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    let counts: Vec<String> = grid.cells.iter().map(|((n, d), v)| format!("({n},{d}):{}", v.len())).collect();
    Ok(format!("{} ideals [{}] in {:.2?}", grid.total(), counts.join(" "), elapsed))
}

fn ordering_independence(grid: &Grid) -> Outcome {
    let mut with_three = 0;
    for m in grid.all() {
        let orderings = distinct_orderings(m).map_err(|e| e.to_string())?;
        let wanted = m.gens().len().min(3);
        ensure(orderings.len() == wanted, || {
            format!("{}: {} distinct orderings", m.ideal(), orderings.len())
        })?;
        let mut qs = BTreeSet::new();
        for o in &orderings {
            // re-verify each ordering from scratch
            let again = verify_ordering(m, o.order()).map_err(|e| e.to_string())?;
            qs.insert(again.q());
        }
        ensure(qs.len() == 1, || format!("{}: q values {qs:?}", m.ideal()))?;
        if orderings.len() == 3 {
            with_three += 1;
        }
    }
    Ok(format!("{with_three} ideals checked with 3 orderings, the rest with all their orderings"))
}

fn degree2_structure(grid: &Grid) -> Outcome {
    let mut count = 0;
    for m in grid.degree2() {
        let p = degree2_partition(m).map_err(|e| format!("{}: {e}", m.ideal()))?;
        let id = m.ideal();
        // (i) at least two nonempty parts
        ensure(p.parts.len() >= 2 && p.parts.iter().all(|s| !s.is_one()), || format!("{id}: (i)"))?;
        // (ii) disjoint parts covering all variables
        let covered = p.parts.iter().fold(Monomial::ONE, |a, s| a.lcm(*s));
        let sizes: usize = p.parts.iter().map(|s| s.degree()).sum();
        ensure(covered == Monomial::full(m.n()) && sizes == m.n(), || format!("{id}: (ii)"))?;
        // (iii) cross-part pairs are generators, (iv) intra-part pairs are not
        for x in 1..=m.n() {
            for y in x + 1..=m.n() {
                let same = p.parts.iter().any(|s| s.has_var(x) && s.has_var(y));
                let edge = id.is_generator(Monomial::var(x).with_var(y));
                ensure(edge != same, || format!("{id}: (iii)/(iv) at x{x}, x{y}"))?;
            }
        }
        let primes = minimal_primes(id).map_err(|e| e.to_string())?;
        let complements: BTreeSet<Monomial> = p.complement_primes(m.n()).into_iter().collect();
        let transversals: BTreeSet<Monomial> = primes.primes.iter().copied().collect();
        ensure(complements == transversals, || format!("{id}: complement primes differ"))?;
        count += 1;
    }
    Ok(format!("{count} degree-2 ideals"))
}

fn example_signatures(grid: &Grid) -> Outcome {
    let (_, ideals) = grid.cells.iter().find(|(nd, _)| *nd == (6, 2)).expect("(6,2) in grid");
    let mut found = BTreeSet::new();
    for m in ideals {
        if minimal_primes(m.ideal()).map_err(|e| e.to_string())?.unmixed {
            found.insert(degree2_partition(m).map_err(|e| e.to_string())?.signature);
        }
    }
    let expected: BTreeSet<Vec<usize>> = [vec![1; 6], vec![3, 3], vec![2, 2, 2]].into_iter().collect();
    ensure(found == expected, || format!("signatures {found:?}"))?;
    Ok(format!("{found:?}"))
}

fn unmixed_bounds(grid: &Grid) -> Outcome {
    let mut count = 0;
    for m in grid.all() {
        let dec = minimal_primes(m.ideal()).map_err(|e| e.to_string())?;
        if !dec.unmixed {
            continue;
        }
        let (h, d, n) = (dec.height, m.degree(), m.n());
        let id = m.ideal();
        ensure(h + d - 1 <= n && n <= h * d, || format!("{id}: h={h} d={d} n={n}"))?;
        ensure((n == h + d - 1) == recognize_veronese(id), || format!("{id}: lower tightness"))?;
        ensure((n == h * d) == recognize_var_block_product(id).is_some(), || {
            format!("{id}: upper tightness")
        })?;
        count += 1;
    }
    Ok(format!("{count} unmixed ideals"))
}

fn cm_classification(grid: &Grid) -> Outcome {
    let mut cm = 0;
    for m in grid.all() {
        let is_cm = is_cohen_macaulay(m).map_err(|e| e.to_string())?;
        ensure(is_cm == recognize_veronese(m.ideal()), || format!("{}: CM = {is_cm}", m.ideal()))?;
        cm += usize::from(is_cm);
    }
    Ok(format!("{cm} Cohen-Macaulay of {}", grid.total()))
}

/// Compositions of `total` into positive parts.
fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    (1..=total)
        .flat_map(|first| {
            compositions(total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn consecutive_blocks(sizes: &[usize]) -> Vec<Monomial> {
    let mut start = 1;
    sizes
        .iter()
        .map(|&s| {
            let b = Monomial::from_vars(start..start + s).expect("in range");
            start += s;
            b
        })
        .collect()
}

fn sv_constructions(grid: &Grid) -> Outcome {
    let mut veronese = 0;
    for n in 1..=8 {
        for d in 1..=n {
            let p = veronese_cert(n, d).map_err(|e| e.to_string())?;
            ensure(verify_sv(&p).is_ok(), || format!("veronese_cert({n},{d}) fails"))?;
            ensure(p.len() == n - d + 1, || format!("veronese_cert({n},{d}) has {} layers", p.len()))?;
            veronese += 1;
        }
    }
    let mut degree2 = 0;
    for m in grid.degree2() {
        let p = degree2_cert(m).map_err(|e| e.to_string())?;
        ensure(verify_sv(&p).is_ok(), || format!("degree2_cert {} fails", m.ideal()))?;
        ensure(p.len() == m.n() - 1, || format!("degree2_cert {} has {} layers", m.ideal(), p.len()))?;
        degree2 += 1;
    }
    let mut products = 0;
    for total in 1..=8 {
        for sizes in compositions(total) {
            let blocks = consecutive_blocks(&sizes);
            let c: RationalCertificate = block_product_cert(total, &blocks).map_err(|e| e.to_string())?;
            let d = sizes.len();
            ensure(c.len() == total - d + 1, || format!("blocks {sizes:?}: size {}", c.len()))?;
            let ideal = var_block_product(total, &blocks).map_err(|e| e.to_string())?;
            ensure(c.target == *ideal.ideal(), || format!("blocks {sizes:?}: wrong target"))?;
            products += 1;
        }
    }
    Ok(format!("{veronese} Veronese, {degree2} degree-2, {products} block shapes"))
}

fn oracle_soundness(grid: &Grid) -> Outcome {
    let mut partitions: Vec<SvPartition> = Vec::new();
    for n in 1..=5 {
        for d in 1..=n {
            partitions.push(veronese_cert(n, d).map_err(|e| e.to_string())?);
        }
    }
    for m in grid.all().filter(|m| m.n() <= 5) {
        if m.degree() == 2 {
            partitions.push(degree2_cert(m).map_err(|e| e.to_string())?);
        }
        if let SearchOutcome::Found(p) = search_cert(m, m.n() - m.degree() + 1, 1_000_000) {
            partitions.push(p);
        }
    }
    let mut slowest = Duration::ZERO;
    let mut checked = 0;
    for p in partitions.iter().filter(|p| verify_sv(p).is_ok()) {
        let start = Instant::now();
        let sums: RationalCertificate = sv_sums(p).map_err(|e| e.to_string())?;
        let v = verify_radical_cert(&sums, ORACLE_CAP).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        ensure(v.verified, || format!("{}: no power <= {ORACLE_CAP} for {:?}", p.ideal(), v.failures))?;
        ensure(took < Duration::from_secs(120), || format!("{}: oracle took {took:?}", p.ideal()))?;
        slowest = slowest.max(took);
        checked += 1;
    }
    Ok(format!("{checked} partitions, slowest {slowest:.2?}"))
}

fn cm_iff_stci(grid: &Grid) -> Outcome {
    let mut determined = 0;
    for m in grid.all() {
        let bounds = ara_bounds(m, None).map_err(|e| e.to_string())?;
        let Some(ara) = bounds.exact else { continue };
        let h = minimal_primes(m.ideal()).map_err(|e| e.to_string())?.height;
        let cm = is_cohen_macaulay(m).map_err(|e| e.to_string())?;
        ensure((h == ara) == cm, || format!("{}: ht {h}, ara {ara}, CM {cm}", m.ideal()))?;
        determined += 1;
    }
    let degree2 = grid.degree2().count();
    ensure(determined >= degree2, || format!("only {determined} determined"))?;
    Ok(format!("{determined} ideals with exact ara"))
}

fn conjecture_scans() -> Outcome {
    let mut lines = Vec::new();
    for (n, d) in [(5, 3), (6, 3)] {
        let opts = ScanOptions {
            budget: 200_000,
            up_to_symmetry: false,
            battery: BatteryOptions { oracle: n <= 5 },
        };
        let r = conjecture_scan(n, d, &opts).map_err(|e| e.to_string())?;
        ensure(r.reverify_failures == 0, || format!("({n},{d}): {} certificates failed", r.reverify_failures))?;
        for t in &r.theorems {
            ensure(t.pass + t.fail + t.skipped == r.total_ideals, || format!("({n},{d}): tally mismatch"))?;
            ensure(t.fail == 0, || format!("({n},{d}): {:?} failed {} times", t.check, t.fail))?;
        }
        let certified = r.certified_by_construction + r.certified_by_search;
        let inconclusive = r.inconclusive_exhausted + r.inconclusive_budget;
        ensure(certified + inconclusive == r.total_ideals, || format!("({n},{d}): outcome mismatch"))?;
        lines.push(format!(
            "({n},{d}): {} ideals, {} by construction, {} by search, {} inconclusive, {} ms",
            r.total_ideals, r.certified_by_construction, r.certified_by_search, inconclusive, r.wall_time_ms
        ));
    }
    Ok(lines.join("; "))
}

fn main() -> ExitCode {
    let grid = Grid::load();
    let criteria: Vec<Criterion> = vec![
        ("q(I) = n - d on the grid", Box::new(|| q_equals_n_minus_d(&grid))),
        ("q is ordering independent", Box::new(|| ordering_independence(&grid))),
        ("degree-2 partition structure", Box::new(|| degree2_structure(&grid))),
        ("n = 6 unmixed degree-2 signatures", Box::new(|| example_signatures(&grid))),
        ("unmixed bounds and tightness", Box::new(|| unmixed_bounds(&grid))),
        ("Cohen-Macaulay iff Veronese", Box::new(|| cm_classification(&grid))),
        ("SV constructions verify with n - d + 1 elements", Box::new(|| sv_constructions(&grid))),
        ("oracle confirms SV sums for n <= 5", Box::new(|| oracle_soundness(&grid))),
        ("CM iff set-theoretic complete intersection", Box::new(|| cm_iff_stci(&grid))),
        ("conjecture scan completes and re-verifies", Box::new(conjecture_scans)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
