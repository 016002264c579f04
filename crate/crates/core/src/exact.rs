//! Brute-force exact counters over k-subsets: parity counts, colourful
//! variants, multicolour cliques, the colour-pattern census and the edge
//! count histogram. Everything here enumerates, so everything takes a
//! budget; exceeding it is an error, never a partial answer.
//!
//! Subset counts are canonical; tuple (labelled) counts are `k!` times the
//! subset count, since edge parity does not depend on the labelling.

use crate::combin::{binom, factorial_big};
use crate::error::{Error, Result};
use crate::graph::{colex_unrank, Colouring, Graph, KSubsets, ParityTarget, VertexSet};
use crate::lattice::EdgePattern;
use num_bigint::BigUint;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

/// Default enumeration budget: the number of subsets an operation may scan.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Budget and parallelism knobs for the enumerating operations.
#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Maximum subsets scanned; `None` means the practical limit `u64::MAX`.
    pub budget: Option<u64>,
    /// Worker threads; ranges are partitioned by colex rank, so results do
    /// not depend on this.
    pub workers: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            budget: Some(DEFAULT_BUDGET),
            workers: 1,
        }
    }
}

impl EnumOptions {
    pub fn with_budget(budget: Option<u64>) -> Self {
        EnumOptions {
            budget,
            ..Default::default()
        }
    }

    fn budget_value(&self) -> u64 {
        self.budget.unwrap_or(u64::MAX)
    }

    fn check_planned(&self, planned: u128) -> Result<()> {
        if planned > self.budget_value() as u128 {
            return Err(Error::BudgetExceeded {
                planned,
                budget: self.budget_value(),
            });
        }
        Ok(())
    }
}

/// Which enumeration kernel to use. `Word` requires n <= 64 and keeps the
/// whole subset mask in one machine word; `Wide` works for any n. `Auto`
/// picks `Word` when possible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Auto,
    Word,
    Wide,
}

fn split_ranges(total: u128, workers: usize) -> Vec<(u128, u128)> {
    let workers = workers.max(1).min(64) as u128;
    let w = workers.min(total.max(1));
    let chunk = total / w;
    let rem = total % w;
    let mut out = Vec::new();
    let mut start = 0u128;
    for i in 0..w {
        let len = chunk + if i < rem { 1 } else { 0 };
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Visits every k-subset with colex rank in `start..end` as a one-word mask
/// plus its induced edge count. Returns false if the visitor stopped early.
fn scan_word(
    g: &Graph,
    k: usize,
    start: u128,
    end: u128,
    visit: &mut impl FnMut(u64, u64) -> bool,
) -> bool {
    debug_assert!(g.n() <= 64);
    let mut indices = colex_unrank(k, start);
    let mut remaining = end - start;
    while remaining > 0 {
        let mut mask = 0u64;
        for &i in &indices {
            mask |= 1 << i;
        }
        let mut twice_edges = 0u64;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            twice_edges += (g.row_word(v) & mask).count_ones() as u64;
            m &= m - 1;
        }
        if !visit(mask, twice_edges >> 1) {
            return false;
        }
        remaining -= 1;
        if remaining > 0 {
            KSubsets::advance(&mut indices, g.n());
        }
    }
    true
}

/// Multi-word variant of [`scan_word`]: visits ascending member indices,
/// mask words and the induced edge count.
fn scan_wide(
    g: &Graph,
    k: usize,
    start: u128,
    end: u128,
    visit: &mut impl FnMut(&[usize], &[u64], u64) -> bool,
) -> bool {
    let stride = g.stride();
    let mut indices = colex_unrank(k, start);
    let mut words = vec![0u64; stride];
    let mut remaining = end - start;
    while remaining > 0 {
        for w in words.iter_mut() {
            *w = 0;
        }
        for &i in &indices {
            words[i / 64] |= 1 << (i % 64);
        }
        let mut twice_edges = 0u64;
        for &v in &indices {
            let row = g.row(v);
            for (r, m) in row.iter().zip(words.iter()) {
                twice_edges += (r & m).count_ones() as u64;
            }
        }
        if !visit(&indices, &words, twice_edges >> 1) {
            return false;
        }
        remaining -= 1;
        if remaining > 0 {
            KSubsets::advance(&mut indices, g.n());
        }
    }
    true
}

fn resolve_kernel(g: &Graph, kernel: Kernel) -> Result<Kernel> {
    match kernel {
        Kernel::Auto => Ok(if g.n() <= 64 { Kernel::Word } else { Kernel::Wide }),
        Kernel::Word if g.n() > 64 => Err(Error::invalid(
            "word kernel requires n <= 64; use the wide kernel",
        )),
        k => Ok(k),
    }
}

fn even_count_range(g: &Graph, k: usize, start: u128, end: u128, kernel: Kernel) -> u64 {
    let mut even = 0u64;
    match kernel {
        Kernel::Word => {
            scan_word(g, k, start, end, &mut |_, e| {
                even += (e & 1 == 0) as u64;
                true
            });
        }
        _ => {
            scan_wide(g, k, start, end, &mut |_, _, e| {
                even += (e & 1 == 0) as u64;
                true
            });
        }
    }
    even
}

/// Exact even and odd subset counts in one enumeration pass, with an
/// explicit kernel choice (used by the benchmark to compare
/// representations).
pub fn count_parity_both_with_kernel(
    g: &Graph,
    k: usize,
    opts: &EnumOptions,
    kernel: Kernel,
) -> Result<(BigUint, BigUint)> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let kernel = resolve_kernel(g, kernel)?;
    if k > g.n() {
        return Ok((BigUint::ZERO, BigUint::ZERO));
    }
    let total = binom(g.n() as u64, k as u64);
    opts.check_planned(total)?;
    let ranges = split_ranges(total, opts.workers);
    let even: u64 = if ranges.len() <= 1 {
        even_count_range(g, k, 0, total, kernel)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(s, e)| scope.spawn(move || even_count_range(g, k, s, e, kernel)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };
    let odd = total as u64 - even;
    Ok((BigUint::from(even), BigUint::from(odd)))
}

/// Exact even and odd subset counts in one pass.
pub fn count_parity_both(g: &Graph, k: usize, opts: &EnumOptions) -> Result<(BigUint, BigUint)> {
    count_parity_both_with_kernel(g, k, opts, Kernel::Auto)
}

/// Number of k-subsets inducing a subgraph of the target parity. Returns 0
/// when `k > n`; rejects `k = 0`.
pub fn count_parity_subsets(
    g: &Graph,
    k: usize,
    target: ParityTarget,
    opts: &EnumOptions,
) -> Result<BigUint> {
    let (even, odd) = count_parity_both(g, k, opts)?;
    Ok(match target {
        ParityTarget::Even => even,
        ParityTarget::Odd => odd,
    })
}

/// Labelled count: `k!` times the subset count, since parity is invariant
/// under relabelling.
pub fn count_parity_tuples(
    g: &Graph,
    k: usize,
    target: ParityTarget,
    opts: &EnumOptions,
) -> Result<BigUint> {
    Ok(factorial_big(k as u64) * count_parity_subsets(g, k, target, opts)?)
}

/// Histogram over k-subsets: entry `e` counts the subsets inducing exactly
/// `e` edges. Length C(k,2) + 1.
pub fn edge_count_histogram(g: &Graph, k: usize, opts: &EnumOptions) -> Result<Vec<BigUint>> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let bins = k * (k - 1) / 2 + 1;
    if k > g.n() {
        return Ok(vec![BigUint::ZERO; bins]);
    }
    let total = binom(g.n() as u64, k as u64);
    opts.check_planned(total)?;
    let kernel = resolve_kernel(g, Kernel::Auto)?;
    let ranges = split_ranges(total, opts.workers);
    let scan_bins = |s: u128, e: u128| -> Vec<u64> {
        let mut local = vec![0u64; bins];
        match kernel {
            Kernel::Word => {
                scan_word(g, k, s, e, &mut |_, edges| {
                    local[edges as usize] += 1;
                    true
                });
            }
            _ => {
                scan_wide(g, k, s, e, &mut |_, _, edges| {
                    local[edges as usize] += 1;
                    true
                });
            }
        }
        local
    };
    let merged: Vec<u64> = if ranges.len() <= 1 {
        scan_bins(0, total)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(s, e)| scope.spawn(move || scan_bins(s, e)))
                .collect();
            let mut acc = vec![0u64; bins];
            for h in handles {
                for (a, b) in acc.iter_mut().zip(h.join().unwrap()) {
                    *a += b;
                }
            }
            acc
        })
    };
    Ok(merged.into_iter().map(BigUint::from).collect())
}

/// Early-exit search for a k-subset of the target parity. `Ok(None)` means
/// the enumeration completed with no witness; hitting the budget first is
/// an error since existence would remain unknown.
pub fn find_parity_witness(
    g: &Graph,
    k: usize,
    target: ParityTarget,
    opts: &EnumOptions,
) -> Result<Option<VertexSet>> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if k > g.n() {
        return Ok(None);
    }
    let total = binom(g.n() as u64, k as u64);
    let budget = opts.budget_value();
    let kernel = resolve_kernel(g, Kernel::Auto)?;
    let ranges = split_ranges(total, opts.workers);

    let stop = AtomicBool::new(false);
    let budget_hit = AtomicBool::new(false);
    let scanned = AtomicU64::new(0);
    let found: Mutex<Option<VertexSet>> = Mutex::new(None);

    const BATCH: u64 = 4096;
    let scan_range = |s: u128, e: u128| {
        let mut local = 0u64;
        // Shared per-subset step: record a hit and stop, or tick the
        // budget every BATCH subsets. Returns whether to keep scanning.
        let mut step = |hit: Option<Vec<usize>>| -> bool {
            if let Some(members) = hit {
                let set = VertexSet::from_members(g.n(), &members).expect("indices in range");
                *found.lock().unwrap() = Some(set);
                stop.store(true, Ordering::Relaxed);
                return false;
            }
            local += 1;
            if local % BATCH == 0 {
                if stop.load(Ordering::Relaxed) {
                    return false;
                }
                let seen = scanned.fetch_add(BATCH, Ordering::Relaxed) + BATCH;
                if seen >= budget {
                    budget_hit.store(true, Ordering::Relaxed);
                    stop.store(true, Ordering::Relaxed);
                    return false;
                }
            }
            true
        };
        match kernel {
            Kernel::Word => {
                scan_word(g, k, s, e, &mut |mask, edges| {
                    let hit = target.matches(edges).then(|| {
                        (0..64usize).filter(|&b| mask >> b & 1 == 1).collect()
                    });
                    step(hit)
                });
            }
            _ => {
                scan_wide(g, k, s, e, &mut |idxs, _, edges| {
                    let hit = target.matches(edges).then(|| idxs.to_vec());
                    step(hit)
                });
            }
        }
    };

    if ranges.len() <= 1 {
        scan_range(0, total);
    } else {
        let scan_range = &scan_range;
        std::thread::scope(|scope| {
            for &(s, e) in &ranges {
                scope.spawn(move || scan_range(s, e));
            }
        });
    }

    let witness = found.into_inner().unwrap();
    if witness.is_some() {
        return Ok(witness);
    }
    if budget_hit.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            planned: total,
            budget,
        });
    }
    Ok(None)
}

fn check_colouring(g: &Graph, f: &Colouring, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if f.k() != k {
        return Err(Error::invalid(format!(
            "colouring declares {} colours but k = {k}",
            f.k()
        )));
    }
    if f.n() != g.n() {
        return Err(Error::invalid(format!(
            "colouring covers {} vertices but the graph has {}",
            f.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Visits each colourful k-set as a slice of vertices (one per colour, in
/// colour order). The total is the product of the colour class sizes.
fn for_each_colourful(
    g: &Graph,
    f: &Colouring,
    k: usize,
    opts: &EnumOptions,
    visit: &mut impl FnMut(&[usize]),
) -> Result<()> {
    check_colouring(g, f, k)?;
    let classes = f.classes();
    let mut planned: u128 = 1;
    for c in &classes {
        planned = planned.saturating_mul(c.len() as u128);
    }
    if planned == 0 {
        return Ok(()); // a colour is unused: no colourful sets
    }
    opts.check_planned(planned)?;
    let mut choice = vec![0usize; k];
    let mut current: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    loop {
        visit(&current);
        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(());
            }
            choice[pos] += 1;
            if choice[pos] < classes[pos].len() {
                current[pos] = classes[pos][choice[pos]];
                break;
            }
            choice[pos] = 0;
            current[pos] = classes[pos][0];
            pos += 1;
        }
    }
}

fn edges_among(g: &Graph, verts: &[usize]) -> u64 {
    let mut e = 0u64;
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            if g.has_edge(u, v) {
                e += 1;
            }
        }
    }
    e
}

/// Number of colourful k-subsets inducing the target parity.
pub fn count_colourful_parity_subsets(
    g: &Graph,
    f: &Colouring,
    k: usize,
    target: ParityTarget,
    opts: &EnumOptions,
) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_colourful(g, f, k, opts, &mut |verts| {
        if target.matches(edges_among(g, verts)) {
            count += 1;
        }
    })?;
    Ok(BigUint::from(count))
}

/// Labelled colourful count (strong embeddings with colourful image):
/// `k!` times the colourful subset count.
pub fn count_colourful_parity_embeddings(
    g: &Graph,
    f: &Colouring,
    k: usize,
    target: ParityTarget,
    opts: &EnumOptions,
) -> Result<BigUint> {
    Ok(factorial_big(k as u64) * count_colourful_parity_subsets(g, f, k, target, opts)?)
}

/// Number of colourful k-subsets inducing a clique.
pub fn count_multicolour_cliques(
    g: &Graph,
    f: &Colouring,
    k: usize,
    opts: &EnumOptions,
) -> Result<BigUint> {
    let want = (k * (k - 1) / 2) as u64;
    let mut count = 0u64;
    for_each_colourful(g, f, k, opts, &mut |verts| {
        if edges_among(g, verts) == want {
            count += 1;
        }
    })?;
    Ok(BigUint::from(count))
}

/// The colour-pattern census: for each pattern `I` of colour pairs, the
/// number of colourful k-subsets whose induced edges realise exactly the
/// pairs in `I`.
#[derive(Debug, Clone)]
pub struct PatternCensus {
    k: usize,
    counts: Vec<BigUint>,
}

impl PatternCensus {
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Count for one pattern.
    pub fn count(&self, pattern: &EdgePattern) -> &BigUint {
        &self.counts[pattern.bits() as usize]
    }

    /// Dense counts indexed by pattern bitmask.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Total over all patterns: the number of colourful k-subsets.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Marginal over patterns whose cardinality has the target parity. For
    /// colourful sets the pattern cardinality equals the induced edge
    /// count, so this matches the colourful parity count.
    pub fn parity_marginal(&self, target: ParityTarget) -> BigUint {
        self.counts
            .iter()
            .enumerate()
            .filter(|(m, _)| target.matches(m.count_ones() as u64))
            .map(|(_, c)| c)
            .sum()
    }
}

/// Computes the colour-pattern census by one sweep over all colourful sets.
pub fn colour_pattern_census(
    g: &Graph,
    f: &Colouring,
    k: usize,
    opts: &EnumOptions,
) -> Result<PatternCensus> {
    check_colouring(g, f, k)?;
    let ground = EdgePattern::ground_size(k);
    if ground > 20 {
        return Err(Error::invalid(format!(
            "census needs a dense table of 2^C(k,2) patterns; C({k},2) = {ground} is too large"
        )));
    }
    let mut counts = vec![0u64; 1usize << ground];
    for_each_colourful(g, f, k, opts, &mut |verts| {
        let mut bits = 0u64;
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if g.has_edge(u, v) {
                    bits |= 1 << EdgePattern::pair_index(f.colour(u), f.colour(v));
                }
            }
        }
        counts[bits as usize] += 1;
    })?;
    Ok(PatternCensus {
        k,
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::binom_big;
    use crate::graph::{generate, GraphSpec};
    use proptest::prelude::*;

    fn cycle5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap()
    }

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    #[test]
    fn triangle_counts() {
        let k3 = generate(&GraphSpec::Clique(3)).unwrap();
        assert_eq!(
            count_parity_subsets(&k3, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::ZERO
        );
        assert_eq!(
            count_parity_subsets(&k3, 3, ParityTarget::Odd, &opts()).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            count_parity_tuples(&k3, 3, ParityTarget::Odd, &opts()).unwrap(),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn empty_graph_counts() {
        let g = Graph::empty(5);
        assert_eq!(
            count_parity_subsets(&g, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::from(10u32)
        );
        assert_eq!(
            count_parity_tuples(&g, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::from(60u32)
        );
    }

    #[test]
    fn cycle5_counts() {
        // of the 10 3-subsets of C5, 5 induce one edge and 5 induce two
        let g = cycle5();
        assert_eq!(
            count_parity_subsets(&g, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::from(5u32)
        );
        assert_eq!(
            count_parity_subsets(&g, 3, ParityTarget::Odd, &opts()).unwrap(),
            BigUint::from(5u32)
        );
        assert_eq!(
            count_parity_tuples(&g, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::from(30u32)
        );
    }

    #[test]
    fn k_zero_rejected_and_k_over_n_zero() {
        let g = Graph::empty(4);
        assert!(count_parity_subsets(&g, 0, ParityTarget::Even, &opts()).is_err());
        assert_eq!(
            count_parity_subsets(&g, 5, ParityTarget::Even, &opts()).unwrap(),
            BigUint::ZERO
        );
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let g = Graph::empty(5);
        let tight = EnumOptions {
            budget: Some(5),
            workers: 1,
        };
        match count_parity_subsets(&g, 3, ParityTarget::Even, &tight) {
            Err(Error::BudgetExceeded { planned, budget }) => {
                assert_eq!(planned, 10);
                assert_eq!(budget, 5);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn histogram_examples() {
        let k4 = generate(&GraphSpec::Clique(4)).unwrap();
        let h = edge_count_histogram(&k4, 3, &opts()).unwrap();
        assert_eq!(h[3], BigUint::from(4u32));
        assert_eq!(h[0], BigUint::ZERO);

        let g = Graph::empty(5);
        let h = edge_count_histogram(&g, 3, &opts()).unwrap();
        assert_eq!(h[0], BigUint::from(10u32));

        let h = edge_count_histogram(&cycle5(), 3, &opts()).unwrap();
        assert_eq!(h[1], BigUint::from(5u32));
        assert_eq!(h[2], BigUint::from(5u32));
        assert_eq!(h[0], BigUint::ZERO);
        assert_eq!(h[3], BigUint::ZERO);
    }

    #[test]
    fn colourful_triangle() {
        let k3 = generate(&GraphSpec::Clique(3)).unwrap();
        let f = Colouring::new(3, vec![1, 2, 3]).unwrap();
        assert_eq!(
            count_colourful_parity_subsets(&k3, &f, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::ZERO
        );
        assert_eq!(
            count_colourful_parity_subsets(&k3, &f, 3, ParityTarget::Odd, &opts()).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            count_colourful_parity_embeddings(&k3, &f, 3, ParityTarget::Odd, &opts()).unwrap(),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn colourful_two_cliques() {
        // side-rainbow colouring of two triangles: every colourful set is
        // odd (1,1,3,... edges), so even = 0 and odd = 2*2*2 = 8
        let g = generate(&GraphSpec::TwoCliques(3, 3)).unwrap();
        let f = Colouring::new(3, vec![1, 2, 3, 1, 2, 3]).unwrap();
        assert_eq!(
            count_colourful_parity_subsets(&g, &f, 3, ParityTarget::Even, &opts()).unwrap(),
            BigUint::ZERO
        );
        assert_eq!(
            count_colourful_parity_subsets(&g, &f, 3, ParityTarget::Odd, &opts()).unwrap(),
            BigUint::from(8u32)
        );
    }

    #[test]
    fn colourful_mismatched_k_rejected() {
        let g = Graph::empty(3);
        let f = Colouring::new(2, vec![1, 2, 1]).unwrap();
        assert!(count_colourful_parity_subsets(&g, &f, 3, ParityTarget::Even, &opts()).is_err());
    }

    #[test]
    fn multicolour_clique_examples() {
        let k4 = generate(&GraphSpec::Clique(4)).unwrap();
        let f = Colouring::new(4, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(
            count_multicolour_cliques(&k4, &f, 4, &opts()).unwrap(),
            BigUint::from(1u32)
        );

        let g = Graph::empty(6);
        let f = Colouring::new(2, vec![1, 2, 1, 2, 1, 2]).unwrap();
        assert_eq!(
            count_multicolour_cliques(&g, &f, 2, &opts()).unwrap(),
            BigUint::ZERO
        );
    }

    #[test]
    fn census_examples() {
        let k3 = generate(&GraphSpec::Clique(3)).unwrap();
        let f = Colouring::new(3, vec![1, 2, 3]).unwrap();
        let census = colour_pattern_census(&k3, &f, 3, &opts()).unwrap();
        let full = EdgePattern::full(3).unwrap();
        assert_eq!(census.count(&full), &BigUint::from(1u32));
        assert_eq!(census.total(), BigUint::from(1u32));

        let e3 = Graph::empty(3);
        let census = colour_pattern_census(&e3, &f, 3, &opts()).unwrap();
        let empty = EdgePattern::empty(3).unwrap();
        assert_eq!(census.count(&empty), &BigUint::from(1u32));
        assert_eq!(census.total(), BigUint::from(1u32));
    }

    #[test]
    fn census_two_cliques_side_rainbow() {
        let g = generate(&GraphSpec::TwoCliques(3, 3)).unwrap();
        let f = Colouring::new(3, vec![1, 2, 3, 1, 2, 3]).unwrap();
        let census = colour_pattern_census(&g, &f, 3, &opts()).unwrap();
        let full = EdgePattern::full(3).unwrap();
        assert_eq!(census.count(&full), &BigUint::from(2u32));
        // each single-pair pattern appears exactly twice
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            let p = EdgePattern::empty(3).unwrap().with_pair(a, b);
            assert_eq!(census.count(&p), &BigUint::from(2u32), "pair {a}-{b}");
        }
        assert_eq!(census.total(), BigUint::from(8u32));
        assert_eq!(
            census.parity_marginal(ParityTarget::Odd),
            BigUint::from(8u32)
        );
    }

    #[test]
    fn witness_search_and_budget() {
        let g = cycle5();
        let w = find_parity_witness(&g, 3, ParityTarget::Odd, &opts())
            .unwrap()
            .unwrap();
        assert!(ParityTarget::Odd.matches(g.induced_edge_count(&w)));

        // no witness exists: K4 has only 3-edge 3-subsets
        let k4 = generate(&GraphSpec::Clique(4)).unwrap();
        assert!(find_parity_witness(&k4, 3, ParityTarget::Even, &opts())
            .unwrap()
            .is_none());
    }

    #[test]
    fn workers_do_not_change_counts() {
        let g = generate(&GraphSpec::Gnp {
            n: 16,
            p: 0.5,
            seed: 5,
        })
        .unwrap();
        let serial = count_parity_both(&g, 4, &opts()).unwrap();
        let parallel = count_parity_both(
            &g,
            4,
            &EnumOptions {
                budget: None,
                workers: 4,
            },
        )
        .unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn wide_kernel_matches_word_kernel() {
        let g = generate(&GraphSpec::Gnp {
            n: 20,
            p: 0.4,
            seed: 77,
        })
        .unwrap();
        let word = count_parity_both_with_kernel(&g, 4, &opts(), Kernel::Word).unwrap();
        let wide = count_parity_both_with_kernel(&g, 4, &opts(), Kernel::Wide).unwrap();
        assert_eq!(word, wide);

        // n > 64 forces the wide kernel and rejects the word kernel
        let big = generate(&GraphSpec::TwoCliques(40, 40)).unwrap();
        assert!(count_parity_both_with_kernel(&big, 2, &opts(), Kernel::Word).is_err());
        let (even, odd) = count_parity_both(&big, 2, &opts()).unwrap();
        assert_eq!(even + odd, binom_big(80, 2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn parity_counts_sum_to_binomial(n in 1usize..14, k in 1usize..7,
                                         p in 0.0f64..=1.0, seed: u64) {
            let g = generate(&GraphSpec::Gnp { n, p, seed }).unwrap();
            let (even, odd) = count_parity_both(&g, k, &opts()).unwrap();
            prop_assert_eq!(even + odd, binom_big(n as u64, k as u64));
        }

        #[test]
        fn complement_duality(n in 1usize..12, k in 2usize..6,
                              p in 0.0f64..=1.0, seed: u64) {
            let g = generate(&GraphSpec::Gnp { n, p, seed }).unwrap();
            let gc = g.complement();
            let even_g = count_parity_subsets(&g, k, ParityTarget::Even, &opts()).unwrap();
            if (k * (k - 1) / 2) % 2 == 1 {
                let odd_gc = count_parity_subsets(&gc, k, ParityTarget::Odd, &opts()).unwrap();
                prop_assert_eq!(even_g, odd_gc);
            } else {
                let even_gc = count_parity_subsets(&gc, k, ParityTarget::Even, &opts()).unwrap();
                prop_assert_eq!(even_g, even_gc);
            }
        }

        #[test]
        fn early_exit_agrees_with_count(n in 1usize..12, k in 1usize..6,
                                        p in 0.0f64..=1.0, seed: u64) {
            let g = generate(&GraphSpec::Gnp { n, p, seed }).unwrap();
            for target in [ParityTarget::Even, ParityTarget::Odd] {
                let count = count_parity_subsets(&g, k, target, &opts()).unwrap();
                let witness = find_parity_witness(&g, k, target, &opts()).unwrap();
                prop_assert_eq!(count > BigUint::ZERO, witness.is_some());
                if let Some(w) = witness {
                    prop_assert!(target.matches(g.induced_edge_count(&w)));
                    prop_assert_eq!(w.len(), k);
                }
            }
        }

        #[test]
        fn census_totals_consistent(n in 1usize..10, p in 0.0f64..=1.0, seed: u64) {
            let k = 3usize;
            let g = generate(&GraphSpec::Gnp { n, p, seed }).unwrap();
            let colours: Vec<usize> = (0..n).map(|v| v % k + 1).collect();
            let f = Colouring::new(k, colours).unwrap();
            let census = colour_pattern_census(&g, &f, k, &opts()).unwrap();
            let product: u128 = f.classes().iter().map(|c| c.len() as u128)
                .product();
            prop_assert_eq!(census.total(), BigUint::from(product));
            for target in [ParityTarget::Even, ParityTarget::Odd] {
                let direct =
                    count_colourful_parity_subsets(&g, &f, k, target, &opts()).unwrap();
                prop_assert_eq!(census.parity_marginal(target), direct);
            }
        }
    }
}
