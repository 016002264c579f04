//! From a colourful parity-counting oracle to exact multicolour clique
//! counts.
//!
//! For a k-coloured graph, every colourful k-set U realises an edge
//! pattern I(U): the set of colour pairs joined by an edge inside U. Query
//! the oracle once per pattern I in a family 𝓘, on the graph filtered to
//! edges whose colour pair lies in I, and the answers z satisfy A·N = z,
//! where N counts colourful sets per pattern and
//! `a_ij = k! · [ |I_i ∩ I_j| has the target parity ]`. A is a meet-matrix
//! over the subset lattice of colour pairs, nonsingular by the determinant
//! product formula, so N — and in particular the count of colourful
//! cliques, the full-pattern entry — is recovered exactly.
//!
//! The solver normalises by k! first and then uses the triangular
//! factorisation A/k! = E Λ Eᵀ (inclusion matrix and totient diagonal) that
//! certifies nonsingularity in the first place: two unit-triangular solves
//! plus exact divisions by the totients. Every division along the way must
//! be exact and every recovered count non-negative; violations surface as
//! oracle-inconsistency errors, which is what the negative tests corrupt
//! oracles to trigger. The full identity A·N = z is re-verified after the
//! solve.

use crate::combin::factorial_big;
use crate::error::{Error, Result};
use crate::exact::{count_colourful_parity_embeddings, EnumOptions};
use crate::graph::{Colouring, Graph, ParityTarget};
use crate::lattice::{totient_table, EdgePattern, LatticeFn, Mask};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Hard ceiling on k without the override: the family has 2^C(k,2)
/// patterns, which at k = 5 is already a 1024-dimensional exact solve.
pub const DEFAULT_MAX_K: usize = 5;

#[derive(Debug, Clone)]
pub struct ReductionOptions {
    /// Allow k beyond [`DEFAULT_MAX_K`]. The pattern family doubles per
    /// added colour pair; this is the reduction's own cost, not an
    /// implementation limit.
    pub force_large_k: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            force_large_k: false,
        }
    }
}

/// A counting oracle: labelled colourful target-parity embeddings of a
/// coloured graph (`k!` times the colourful subset count).
pub type ParityOracle<'a> = dyn Fn(&Graph, &Colouring) -> Result<BigUint> + Sync + 'a;

/// The exact brute-force oracle over the given enumeration options.
pub fn exact_oracle(
    k: usize,
    target: ParityTarget,
    opts: EnumOptions,
) -> impl Fn(&Graph, &Colouring) -> Result<BigUint> + Sync {
    move |g, f| count_colourful_parity_embeddings(g, f, k, target, &opts)
}

fn check_k(k: usize, opts: &ReductionOptions) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid("reduction requires k >= 2"));
    }
    if k > DEFAULT_MAX_K && !opts.force_large_k {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the guard {DEFAULT_MAX_K} (2^C(k,2) patterns); set force_large_k to override"
        )));
    }
    if EdgePattern::ground_size(k) > 24 {
        return Err(Error::invalid(format!(
            "k = {k} needs 2^{} patterns; not enumerable",
            EdgePattern::ground_size(k)
        )));
    }
    Ok(())
}

fn family_masks(k: usize, target: ParityTarget) -> Vec<Mask> {
    let ground = EdgePattern::ground_size(k);
    let size = 1u64 << ground;
    let mut masks: Vec<Mask> = match target {
        // the empty subgraph has 0 edges (even), so every pattern contains
        // a qualifying sub-pattern
        ParityTarget::Even => (0..size).collect(),
        // a single pair is an odd subgraph, so exactly the non-empty
        // patterns qualify
        ParityTarget::Odd => (1..size).collect(),
    };
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
}

/// The index family 𝓘 for the target parity: every pattern with a
/// sub-pattern realising the parity, in non-decreasing cardinality order
/// (ties by mask value). The last element is always the full pattern.
pub fn enumerate_index_family(k: usize, target: ParityTarget) -> Result<Vec<EdgePattern>> {
    check_k(k, &ReductionOptions::default())?;
    family_masks(k, target)
        .into_iter()
        .map(|m| EdgePattern::from_bits(k, m))
        .collect()
}

/// Keeps exactly the edges whose endpoint colour pair lies in the pattern.
/// Monochromatic edges never survive (their endpoints share a colour, so
/// they have no colour pair).
pub fn filter_graph(g: &Graph, f: &Colouring, pattern: &EdgePattern) -> Result<Graph> {
    if f.k() != pattern.k() {
        return Err(Error::invalid(format!(
            "colouring has {} colours, pattern expects {}",
            f.k(),
            pattern.k()
        )));
    }
    if f.n() != g.n() {
        return Err(Error::invalid("colouring does not cover the graph"));
    }
    let mut kept = Vec::new();
    for (u, v) in g.edges() {
        let (cu, cv) = (f.colour(u), f.colour(v));
        if cu != cv && pattern.contains_pair(cu, cv) {
            kept.push((u, v));
        }
    }
    Graph::from_edges(g.n(), &kept)
}

/// The 0/1 parity indicator on patterns, as a lattice function.
fn parity_indicator(k: usize, target: ParityTarget) -> Result<LatticeFn> {
    let ground = EdgePattern::ground_size(k);
    let values = (0..1u64 << ground)
        .map(|m| {
            if target.matches(m.count_ones() as u64) {
                BigInt::one()
            } else {
                BigInt::ZERO
            }
        })
        .collect();
    LatticeFn::new(ground, values)
}

/// The reduction matrix: `a_ij = k! · [ |I_i ∩ I_j| ≡ target ]`. Symmetric;
/// nonsingularity is asserted via the determinant product formula on the
/// normalised 0/1 matrix before returning.
pub fn build_reduction_matrix(
    k: usize,
    target: ParityTarget,
    family: &[EdgePattern],
) -> Result<crate::lattice::BigMatrix> {
    let kfact = BigInt::from(factorial_big(k as u64));
    let m = family.len();
    let mut a = crate::lattice::BigMatrix::zeros(m);
    for i in 0..m {
        for j in 0..=i {
            let meet = family[i].intersect(&family[j])?;
            let v = if target.matches(meet.cardinality() as u64) {
                kfact.clone()
            } else {
                BigInt::ZERO
            };
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    // det(A / k!) = Π Ψ(I_i) over the family; all factors nonzero.
    let f = parity_indicator(k, target)?;
    let psi = totient_table(&f)?;
    let mut det = BigInt::one();
    for p in family {
        let t = &psi[p.bits() as usize];
        if t.is_zero() {
            return Err(Error::Internal(format!(
                "reduction matrix is singular: zero totient at pattern {p:?}"
            )));
        }
        det *= t;
    }
    debug_assert!(!det.is_zero());
    Ok(a)
}

/// Everything a reduction run produces, for inspection and tracing.
#[derive(Debug, Clone)]
pub struct ReductionRun {
    /// `N_m`: the number of colourful k-cliques.
    pub multicolour_cliques: BigUint,
    pub oracle_calls: usize,
    pub family: Vec<EdgePattern>,
    /// Oracle answers (labelled counts), one per family member.
    pub z: Vec<BigUint>,
    /// Recovered per-pattern colourful subset counts N.
    pub solution: Vec<BigUint>,
    pub matrix_dim: usize,
}

/// Runs the reduction: one oracle call per family pattern on the filtered
/// graph, then the exact solve. The oracle must return labelled colourful
/// parity embeddings (`k!` times subset counts); divisibility by `k!`,
/// exactness of the totient divisions, non-negativity of every recovered
/// count and the full identity `A·N = z` are all enforced.
pub fn run_reduction(
    g: &Graph,
    f: &Colouring,
    k: usize,
    target: ParityTarget,
    oracle: &ParityOracle<'_>,
    opts: &ReductionOptions,
) -> Result<ReductionRun> {
    check_k(k, opts)?;
    if f.k() != k {
        return Err(Error::invalid(format!(
            "colouring has {} colours but k = {k}",
            f.k()
        )));
    }
    if f.n() != g.n() {
        return Err(Error::invalid("colouring does not cover the graph"));
    }

    let masks = family_masks(k, target);
    let family: Vec<EdgePattern> = masks
        .iter()
        .map(|&m| EdgePattern::from_bits(k, m))
        .collect::<Result<_>>()?;
    let m = family.len();

    let kfact = factorial_big(k as u64);
    let mut z = Vec::with_capacity(m);
    for pattern in &family {
        let filtered = filter_graph(g, f, pattern)?;
        z.push(oracle(&filtered, f)?);
    }

    // Normalise: subset-level counts.
    let mut z_sub: Vec<BigInt> = Vec::with_capacity(m);
    for (i, zi) in z.iter().enumerate() {
        if (zi % &kfact) != BigUint::ZERO {
            return Err(Error::OracleInconsistency(format!(
                "oracle answer {zi} for pattern #{i} is not divisible by k! = {kfact}"
            )));
        }
        z_sub.push(BigInt::from(zi / &kfact));
    }

    // A/k! = E Λ Eᵀ with e_ij = [mask_j ⊆ mask_i] unit lower triangular in
    // family order and Λ the totients of the parity indicator.
    let f_ind = parity_indicator(k, target)?;
    let psi_all = totient_table(&f_ind)?;
    let psi: Vec<&BigInt> = masks.iter().map(|&mk| &psi_all[mk as usize]).collect();
    if let Some(i) = psi.iter().position(|t| t.is_zero()) {
        return Err(Error::Internal(format!(
            "singular reduction system: zero totient at pattern #{i}"
        )));
    }

    // Forward solve E y = z_sub.
    let mut y: Vec<BigInt> = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = z_sub[i].clone();
        for j in 0..i {
            if masks[j] & !masks[i] == 0 {
                acc -= &y[j];
            }
        }
        y.push(acc);
    }

    // Diagonal solve w = Λ⁻¹ y, exact divisions only.
    let mut w: Vec<BigInt> = Vec::with_capacity(m);
    for i in 0..m {
        let (q, r) = num_integer::Integer::div_rem(&y[i], psi[i]);
        if !r.is_zero() {
            return Err(Error::OracleInconsistency(format!(
                "system solution is not integral at pattern #{i} (remainder {r} dividing by totient {})",
                psi[i]
            )));
        }
        w.push(q);
    }

    // Backward solve Eᵀ N = w.
    let mut counts: Vec<BigInt> = vec![BigInt::ZERO; m];
    for i in (0..m).rev() {
        let mut acc = w[i].clone();
        for j in i + 1..m {
            if masks[i] & !masks[j] == 0 {
                acc -= &counts[j];
            }
        }
        if acc.is_negative() {
            return Err(Error::OracleInconsistency(format!(
                "recovered count for pattern #{i} is negative ({acc})"
            )));
        }
        counts[i] = acc;
    }

    // Re-verify A·N = z on the normalised system.
    for i in 0..m {
        let mut acc = BigInt::ZERO;
        for j in 0..m {
            let meet = masks[i] & masks[j];
            if target.matches(meet.count_ones() as u64) {
                acc += &counts[j];
            }
        }
        if acc != z_sub[i] {
            return Err(Error::Internal(format!(
                "A·N = z failed at row {i} after an exact solve"
            )));
        }
    }

    let solution: Vec<BigUint> = counts
        .iter()
        .map(|c| c.magnitude().clone())
        .collect();
    Ok(ReductionRun {
        multicolour_cliques: solution[m - 1].clone(),
        oracle_calls: m,
        family,
        z,
        solution,
        matrix_dim: m,
    })
}

/// Pads a k-coloured instance to k' colours by adding k'-k universal
/// vertices with fresh colours; multicolour clique counts are preserved.
pub fn pad_instance(
    g: &Graph,
    f: &Colouring,
    k: usize,
    k_prime: usize,
) -> Result<(Graph, Colouring)> {
    if f.k() != k {
        return Err(Error::invalid(format!(
            "colouring has {} colours but k = {k}",
            f.k()
        )));
    }
    if k_prime <= k {
        return Err(Error::invalid(format!("k' = {k_prime} must exceed k = {k}")));
    }
    let extra = k_prime - k;
    let n = g.n();
    let mut edges = g.edges();
    for i in 0..extra {
        let w = n + i;
        for v in 0..w {
            edges.push((v, w));
        }
        // later universal vertices connect to w when added
    }
    let padded = Graph::from_edges(n + extra, &edges)?;
    let mut colours: Vec<usize> = (0..n).map(|v| f.colour(v)).collect();
    colours.extend(k + 1..=k_prime);
    let padded_colouring = Colouring::new(k_prime, colours)?;
    Ok((padded, padded_colouring))
}
