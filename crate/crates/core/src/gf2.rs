//! Graphs as quadratic polynomials over GF(2).
//!
//! Encoding each edge `ij` as the monomial `X_i X_j` turns "how many even
//! induced subgraphs does G have, over all sizes" into "how many zeros does
//! the quadratic form have": an assignment is a vertex subset, and the form
//! evaluates to the parity of the induced edge count. The zero count
//! includes the all-zero assignment, i.e. the empty subgraph, so the total
//! here is `1 + Σ_{k>=1}` (the k = 0 term is the empty set).
//!
//! Zeros are counted in polynomial time by repeatedly splitting off a
//! hyperbolic block: pick a quadratic pair `X_a X_b`, substitute
//! `X_a <- X_a + B` and `X_b <- X_b + A` (where `A`, `B` collect the terms
//! multiplying `X_a`, `X_b`) to reach `X_a X_b + q'` with `q'` free of both
//! variables, and use `N0(X_a X_b + q') = 3 N0(q') + (2^(n-2) - N0(q'))`.
//! The base case is an affine form.

use crate::error::Result;
use crate::graph::Graph;
use num_bigint::BigUint;
use num_traits::One;

/// A quadratic polynomial over GF(2) in `n` Boolean variables, reduced
/// modulo `X^2 = X`: a set of unordered pairs, a linear part and a
/// constant. Encoded graphs have empty linear and constant parts, but the
/// recursion's intermediate forms need them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFormF2 {
    n: usize,
    /// Symmetric adjacency of quadratic terms: `quad[i]` has bit `j` set
    /// iff the monomial `X_i X_j` is present (i != j).
    quad: Vec<Vec<u64>>,
    lin: Vec<u64>,
    constant: bool,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn flip_bit(words: &mut [u64], i: usize) {
    words[i / 64] ^= 1 << (i % 64);
}

impl QuadraticFormF2 {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        QuadraticFormF2 {
            n,
            quad: vec![vec![0; words_for(n)]; n],
            lin: vec![0; words_for(n)],
            constant: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Toggles the quadratic monomial `X_i X_j`, `i != j`.
    pub fn toggle_pair(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "monomials are products of distinct variables");
        flip_bit(&mut self.quad[i], j);
        flip_bit(&mut self.quad[j], i);
    }

    /// Toggles the linear term `X_i`.
    pub fn toggle_lin(&mut self, i: usize) {
        flip_bit(&mut self.lin, i);
    }

    /// Toggles the constant term.
    pub fn toggle_const(&mut self) {
        self.constant = !self.constant;
    }

    pub fn has_pair(&self, i: usize, j: usize) -> bool {
        get_bit(&self.quad[i], j)
    }

    /// The quadratic monomials as sorted pairs (i < j).
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_pair(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn linear_terms(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| get_bit(&self.lin, i)).collect()
    }

    pub fn constant_term(&self) -> bool {
        self.constant
    }

    /// Evaluates the form at an assignment given as a bitmask over the
    /// variables (word `v/64`, bit `v%64`).
    pub fn eval(&self, assignment: &[u64]) -> bool {
        let mut acc = self.constant;
        for i in 0..self.n {
            if !get_bit(assignment, i) {
                continue;
            }
            if get_bit(&self.lin, i) {
                acc = !acc;
            }
            for j in i + 1..self.n {
                if get_bit(assignment, j) && self.has_pair(i, j) {
                    acc = !acc;
                }
            }
        }
        acc
    }
}

/// Encodes a graph as its edge polynomial `Σ_{ij ∈ E} X_i X_j`.
pub fn encode_polynomial(g: &Graph) -> QuadraticFormF2 {
    let mut q = QuadraticFormF2::zero(g.n());
    for (u, v) in g.edges() {
        q.toggle_pair(u, v);
    }
    q
}

/// Exact number of zeros of `q` over GF(2)^n, in time polynomial in `n`.
pub fn count_zeros(q: &QuadraticFormF2) -> BigUint {
    // Work on an index-compacted copy; each round removes two variables.
    count_zeros_inner(q.clone())
}

fn count_zeros_inner(q: QuadraticFormF2) -> BigUint {
    let n = q.n;
    // Find any quadratic pair. Variables not appearing anywhere simply
    // double the count, which the 2^(n-2) term handles automatically.
    let pair = (0..n).find_map(|i| {
        q.quad[i]
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| (i, wi * 64 + w.trailing_zeros() as usize))
    });
    let Some((a, b)) = pair else {
        // Affine base case.
        let has_lin = q.lin.iter().any(|&w| w != 0);
        return if has_lin {
            BigUint::one() << (n - 1)
        } else if q.constant {
            BigUint::ZERO
        } else {
            BigUint::one() << n
        };
    };

    // A = terms multiplying X_a (minus X_b), with the linear bit of a as
    // its constant; symmetrically B for X_b.
    let mut a_vars = q.quad[a].clone();
    flip_bit(&mut a_vars, b); // X_aX_b handled separately; bit is set, clear it
    let a_const = get_bit(&q.lin, a);
    let mut b_vars = q.quad[b].clone();
    flip_bit(&mut b_vars, a);
    let b_const = get_bit(&q.lin, b);

    // Rest of the form with a, b rows/bits removed, re-indexed densely.
    let keep: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
    let mut rest = QuadraticFormF2::zero(n - 2);
    for (new_i, &old_i) in keep.iter().enumerate() {
        for (new_j, &old_j) in keep.iter().enumerate().skip(new_i + 1) {
            if q.has_pair(old_i, old_j) {
                rest.toggle_pair(new_i, new_j);
            }
        }
        if get_bit(&q.lin, old_i) {
            rest.toggle_lin(new_i);
        }
    }
    if q.constant {
        rest.toggle_const();
    }

    // Add A*B over the remaining variables (X^2 = X makes shared
    // variables linear).
    let a_list: Vec<usize> = keep.iter().copied().filter(|&v| get_bit(&a_vars, v)).collect();
    let b_list: Vec<usize> = keep.iter().copied().filter(|&v| get_bit(&b_vars, v)).collect();
    let old_to_new = {
        let mut map = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        map
    };
    for &i in &a_list {
        for &j in &b_list {
            if i == j {
                rest.toggle_lin(old_to_new[i]);
            } else {
                rest.toggle_pair(old_to_new[i], old_to_new[j]);
            }
        }
    }
    if a_const {
        for &j in &b_list {
            rest.toggle_lin(old_to_new[j]);
        }
    }
    if b_const {
        for &i in &a_list {
            rest.toggle_lin(old_to_new[i]);
        }
    }
    if a_const && b_const {
        rest.toggle_const();
    }

    // N0(X_aX_b + q') = 3*N0(q') + (2^(n-2) - N0(q'))
    let inner = count_zeros_inner(rest);
    let all = BigUint::one() << (n - 2);
    BigUint::from(2u32) * &inner + all
}

/// Zero count by sweeping all `2^n` assignments; the independent reference
/// for [`count_zeros`]. Only sensible for small `n`.
pub fn count_zeros_by_sweep(q: &QuadraticFormF2) -> BigUint {
    let n = q.n();
    assert!(n <= 26, "sweep over 2^{n} assignments is not sensible");
    let mut zeros = 0u64;
    for assignment in 0..1u64 << n {
        if !q.eval(&[assignment]) {
            zeros += 1;
        }
    }
    BigUint::from(zeros)
}

/// Total number of induced even subgraphs of `g` over all sizes, including
/// the empty subgraph (the k = 0 term contributes exactly 1).
pub fn total_even_subgraphs(g: &Graph) -> Result<BigUint> {
    Ok(count_zeros(&encode_polynomial(g)))
}
