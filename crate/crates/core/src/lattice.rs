//! Incidence algebra on subset lattices: the Möbius function, the
//! generalised Euler totient, meet-matrices and two independent determinant
//! routes (a product formula over the lattice and fraction-free
//! elimination).
//!
//! Lattice elements are bitmasks over a ground set of at most [`MAX_GROUND`]
//! elements, ordered by inclusion; meet is bitwise AND. [`EdgePattern`]
//! fixes the ground set to the colour pairs of a k-colouring, which is how
//! the reduction instantiates everything here.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashSet;
use std::fmt;

/// A lattice element: a bitmask over the ground set.
pub type Mask = u64;

/// Largest supported ground set; lattices have `2^ground` elements and the
/// dense tables below would explode beyond this.
pub const MAX_GROUND: usize = 20;

/// Möbius function of the subset lattice: 0 unless `x ⊆ y`, otherwise
/// `(-1)^(|y| - |x|)`.
#[inline]
pub fn mobius(x: Mask, y: Mask) -> i64 {
    if x & !y != 0 {
        return 0;
    }
    if (y ^ x).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Möbius function computed from the recursive definition; exponential, for
/// cross-checking `mobius` in tests.
pub fn mobius_recursive(x: Mask, y: Mask) -> i64 {
    if x == y {
        return 1;
    }
    if x & !y != 0 {
        return 0;
    }
    // - sum over x <= z < y of mu(x, z); z ranges over masks between x and y
    let free = y & !x;
    let mut acc = 0i64;
    let mut sub = free;
    loop {
        sub = (sub.wrapping_sub(1)) & free;
        let z = x | sub;
        if z != y {
            acc += mobius_recursive(x, z);
        }
        if sub == 0 {
            break;
        }
    }
    -acc
}

/// An integer-valued function on the full subset lattice of a ground set,
/// stored densely: `values[m]` is `f(m)`.
#[derive(Debug, Clone)]
pub struct LatticeFn {
    ground: usize,
    values: Vec<BigInt>,
}

impl LatticeFn {
    pub fn new(ground: usize, values: Vec<BigInt>) -> Result<Self> {
        if ground > MAX_GROUND {
            return Err(Error::invalid(format!(
                "ground set size {ground} exceeds {MAX_GROUND}"
            )));
        }
        if values.len() != 1usize << ground {
            return Err(Error::invalid(format!(
                "expected {} values for ground size {ground}, got {}",
                1usize << ground,
                values.len()
            )));
        }
        Ok(LatticeFn { ground, values })
    }

    /// The constant function.
    pub fn constant(ground: usize, v: BigInt) -> Result<Self> {
        LatticeFn::new(ground, vec![v; 1usize << ground])
    }

    /// Indicator of a single lattice element.
    pub fn indicator(ground: usize, at: Mask) -> Result<Self> {
        let mut values = vec![BigInt::ZERO; 1usize << ground];
        values[at as usize] = BigInt::one();
        LatticeFn::new(ground, values)
    }

    #[inline]
    pub fn ground(&self) -> usize {
        self.ground
    }

    #[inline]
    pub fn value(&self, m: Mask) -> &BigInt {
        &self.values[m as usize]
    }

    /// Elements with nonzero value.
    pub fn support(&self) -> Vec<Mask> {
        (0..self.values.len() as Mask)
            .filter(|&m| !self.values[m as usize].is_zero())
            .collect()
    }
}

/// Generalised totient of `f` at `x`: the Möbius transform
/// `Ψ_f(x) = Σ_{y ⊆ x} f(y) μ(y, x)`.
pub fn totient(f: &LatticeFn, x: Mask) -> BigInt {
    let mut acc = BigInt::ZERO;
    let mut sub = x;
    loop {
        let mu = mobius(sub, x);
        if mu == 1 {
            acc += f.value(sub);
        } else {
            acc -= f.value(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & x;
    }
    acc
}

/// Totient table over the whole lattice, computed by the in-place butterfly
/// transform (the inductive definition `Ψ_f(x) = f(x) - Σ_{y ⊊ x} Ψ_f(y)`
/// rearranged); verified against its inverse zeta transform before
/// returning.
pub fn totient_table(f: &LatticeFn) -> Result<Vec<BigInt>> {
    let g = f.ground;
    let size = 1usize << g;
    let mut vals = f.values.clone();
    for b in 0..g {
        let bit = 1usize << b;
        for m in 0..size {
            if m & bit != 0 {
                let prev = vals[m ^ bit].clone();
                vals[m] -= prev;
            }
        }
    }
    // zeta(psi) must reproduce f; this is exactly the inductive definition.
    let mut z = vals.clone();
    for b in 0..g {
        let bit = 1usize << b;
        for m in 0..size {
            if m & bit != 0 {
                let prev = z[m ^ bit].clone();
                z[m] += prev;
            }
        }
    }
    if z != f.values {
        return Err(Error::Internal(
            "totient transform failed its zeta cross-check".into(),
        ));
    }
    Ok(vals)
}

/// The upward closure of the support of `f`:
/// `{x : ∃ y ⊆ x with f(y) ≠ 0}`, sorted by non-decreasing cardinality with
/// ties broken by mask value.
pub fn upward_closure_of_support(f: &LatticeFn) -> Vec<Mask> {
    let size = 1usize << f.ground;
    let mut reach: Vec<bool> = f.values.iter().map(|v| !v.is_zero()).collect();
    for b in 0..f.ground {
        let bit = 1usize << b;
        for m in 0..size {
            if m & bit != 0 && reach[m ^ bit] {
                reach[m] = true;
            }
        }
    }
    let mut out: Vec<Mask> = (0..size as Mask).filter(|&m| reach[m as usize]).collect();
    out.sort_by_key(|&m| (m.count_ones(), m));
    out
}

/// Square matrix of exact integers.
#[derive(Clone, PartialEq, Eq)]
pub struct BigMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn zeros(dim: usize) -> Self {
        BigMatrix {
            dim,
            data: vec![BigInt::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = BigMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix rows must all have length dim"));
        }
        Ok(BigMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.dim + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = BigInt::ZERO;
                for j in 0..self.dim {
                    if !self.get(i, j).is_zero() && !v[j].is_zero() {
                        acc += self.get(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination: every
    /// division along the way is exact, so no rationals appear.
    pub fn det_exact(&self) -> BigInt {
        let n = self.dim;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| -> BigInt { m[i * n + j].clone() };
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for p in 0..n - 1 {
            if m[p * n + p].is_zero() {
                match (p + 1..n).find(|&r| !m[r * n + p].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(p * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::ZERO,
                }
            }
            for i in p + 1..n {
                for j in p + 1..n {
                    let num = at(&m, p, p) * at(&m, i, j) - at(&m, i, p) * at(&m, p, j);
                    m[i * n + j] = num / &prev;
                }
                m[i * n + p] = BigInt::ZERO;
            }
            prev = at(&m, p, p);
        }
        let d = at(&m, n - 1, n - 1);
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

impl fmt::Debug for BigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BigMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Exact determinant of a [`BigMatrix`] (free-function form of
/// [`BigMatrix::det_exact`]).
pub fn det_exact(m: &BigMatrix) -> BigInt {
    m.det_exact()
}

/// The meet-matrix of `s` with respect to `f`: `a_ij = f(x_i ∧ x_j)` with
/// meet = intersection. `s` must be duplicate-free.
pub fn meet_matrix(s: &[Mask], f: &LatticeFn) -> Result<BigMatrix> {
    let mut seen = HashSet::new();
    for &m in s {
        if m as usize >= 1usize << f.ground {
            return Err(Error::invalid(format!(
                "mask {m:#b} outside lattice of ground size {}",
                f.ground
            )));
        }
        if !seen.insert(m) {
            return Err(Error::invalid(format!("duplicate element {m:#b} in S")));
        }
    }
    let n = s.len();
    let mut a = BigMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = f.value(s[i] & s[j]).clone();
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    Ok(a)
}

/// Determinant of the meet-matrix via the product formula
/// `det(A) = Π_i Σ_{y ⊆ x_i} f(y) μ(y, x_i)`, valid when `s` is exactly the
/// upward closure of the support of `f`, ordered so that `x_i ⊊ x_j`
/// implies `i < j`. Both preconditions are checked.
pub fn det_via_formula(s: &[Mask], f: &LatticeFn) -> Result<BigInt> {
    let closure = upward_closure_of_support(f);
    let want: HashSet<Mask> = closure.iter().copied().collect();
    let got: HashSet<Mask> = s.iter().copied().collect();
    if got.len() != s.len() {
        return Err(Error::invalid("duplicate element in S"));
    }
    if want != got {
        return Err(Error::invalid(
            "S must equal the upward closure of the support of f",
        ));
    }
    for i in 0..s.len() {
        for j in 0..i {
            // x_j listed before x_i, so x_i must not be a strict subset of x_j
            if s[i] != s[j] && s[i] & !s[j] == 0 {
                return Err(Error::invalid(format!(
                    "ordering violation: element {} at position {i} is a strict subset of element {} at position {j}",
                    s[i], s[j]
                )));
            }
        }
    }
    let mut det = BigInt::one();
    for &x in s {
        det *= totient(f, x);
        if det.is_zero() {
            // keep multiplying anyway; result is zero regardless
        }
    }
    Ok(det)
}

/// Outcome of [`decomposition_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub holds: bool,
    /// Coordinates of the first differing entry when the identity fails.
    pub first_mismatch: Option<(usize, usize)>,
}

/// Verifies the decomposition `A = E Λ E^T` entry by entry, where `A` is
/// the meet-matrix of `s`, `E` is the |s| x 2^ground inclusion 0/1 matrix
/// and `Λ` is the diagonal of totients over the full lattice.
pub fn decomposition_check(s: &[Mask], f: &LatticeFn) -> Result<DecompositionReport> {
    let size = 1usize << f.ground;
    if s.len() * s.len() * size > 200_000_000 {
        return Err(Error::invalid(
            "decomposition check too large for the dense verification",
        ));
    }
    let a = meet_matrix(s, f)?;
    let psi = totient_table(f)?;
    for i in 0..s.len() {
        for j in 0..s.len() {
            let mut acc = BigInt::ZERO;
            for (r, psi_r) in psi.iter().enumerate() {
                let e_ir = r as Mask & !s[i] == 0;
                let e_jr = r as Mask & !s[j] == 0;
                if e_ir && e_jr {
                    acc += psi_r;
                }
            }
            if &acc != a.get(i, j) {
                return Ok(DecompositionReport {
                    holds: false,
                    first_mismatch: Some((i, j)),
                });
            }
        }
    }
    Ok(DecompositionReport {
        holds: true,
        first_mismatch: None,
    })
}

/// A subset of the colour pairs `{a,b}` with `1 <= a < b <= k`, stored as a
/// bitmask of width C(k,2). Bit order is colex on pairs:
/// `{a,b} -> C(b-1,2) + (a-1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgePattern {
    k: usize,
    bits: Mask,
}

impl EdgePattern {
    /// Number of colour pairs for `k` colours; the pattern-mask width.
    pub fn ground_size(k: usize) -> usize {
        k * (k - 1) / 2
    }

    fn check_k(k: usize) -> Result<()> {
        if k < 1 || EdgePattern::ground_size(k) > 64 {
            return Err(Error::invalid(format!(
                "colour count {k} unsupported (need 1 <= k and C(k,2) <= 64)"
            )));
        }
        Ok(())
    }

    pub fn empty(k: usize) -> Result<Self> {
        EdgePattern::check_k(k)?;
        Ok(EdgePattern { k, bits: 0 })
    }

    pub fn full(k: usize) -> Result<Self> {
        EdgePattern::check_k(k)?;
        let g = EdgePattern::ground_size(k);
        let bits = if g == 64 { Mask::MAX } else { (1u64 << g) - 1 };
        Ok(EdgePattern { k, bits })
    }

    pub fn from_bits(k: usize, bits: Mask) -> Result<Self> {
        let full = EdgePattern::full(k)?;
        if bits & !full.bits != 0 {
            return Err(Error::invalid("pattern bits outside C(k,2) width"));
        }
        Ok(EdgePattern { k, bits })
    }

    /// Bit index of the colour pair `{a,b}`, colours 1-based, `a != b`.
    pub fn pair_index(a: usize, b: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        debug_assert!(lo >= 1);
        (hi - 1) * (hi - 2) / 2 + (lo - 1)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn bits(&self) -> Mask {
        self.bits
    }

    #[inline]
    pub fn cardinality(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains_pair(&self, a: usize, b: usize) -> bool {
        self.bits >> EdgePattern::pair_index(a, b) & 1 == 1
    }

    pub fn with_pair(mut self, a: usize, b: usize) -> Self {
        self.bits |= 1 << EdgePattern::pair_index(a, b);
        self
    }

    pub fn intersect(&self, other: &EdgePattern) -> Result<EdgePattern> {
        if self.k != other.k {
            return Err(Error::invalid(format!(
                "pattern colour counts differ: {} vs {}",
                self.k, other.k
            )));
        }
        Ok(EdgePattern {
            k: self.k,
            bits: self.bits & other.bits,
        })
    }

    pub fn is_subset_of(&self, other: &EdgePattern) -> bool {
        self.k == other.k && self.bits & !other.bits == 0
    }

    /// The colour pairs in the pattern, 1-based, `a < b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 2..=self.k {
            for a in 1..b {
                if self.contains_pair(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Möbius function between two patterns over the same colour count.
    pub fn mobius_to(&self, other: &EdgePattern) -> Result<i64> {
        if self.k != other.k {
            return Err(Error::invalid("pattern colour counts differ"));
        }
        Ok(mobius(self.bits, other.bits))
    }
}

impl fmt::Debug for EdgePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgePattern(k={}, {{", self.k)?;
        for (i, (a, b)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "}})")
    }
}
