//! Simple undirected graphs over bit-vector adjacency rows, vertex subsets
//! sharing the same representation, vertex colourings, and the k-subset
//! enumeration stream used by every counting routine.
//!
//! Vertices are 0-indexed everywhere, including the file formats.

use crate::combin::binom;
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::fmt;

/// Words needed to hold `n` bits.
#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Parity of an induced edge count, and the two-valued property family it
/// encodes: a k-subset satisfies the property iff the number of edges it
/// induces has this parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityTarget {
    Even,
    Odd,
}

impl ParityTarget {
    /// Does `edge_count` have this parity?
    #[inline]
    pub fn matches(self, edge_count: u64) -> bool {
        (edge_count & 1 == 1) == (self == ParityTarget::Odd)
    }

    /// The other parity.
    pub fn flip(self) -> Self {
        match self {
            ParityTarget::Even => ParityTarget::Odd,
            ParityTarget::Odd => ParityTarget::Even,
        }
    }
}

impl fmt::Display for ParityTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParityTarget::Even => write!(f, "even"),
            ParityTarget::Odd => write!(f, "odd"),
        }
    }
}

/// A set of vertices of an `n`-vertex graph, stored as a bit vector with a
/// cached popcount. Shares the word layout of adjacency rows so that
/// induced-edge counting is a masked popcount.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    nbits: usize,
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    /// The empty subset of an `n`-vertex ground set.
    pub fn empty(n: usize) -> Self {
        VertexSet {
            nbits: n,
            words: vec![0; words_for(n)],
            len: 0,
        }
    }

    /// Builds a set from explicit members. Out-of-range members are an error.
    pub fn from_members(n: usize, members: &[usize]) -> Result<Self> {
        let mut s = VertexSet::empty(n);
        for &v in members {
            if v >= n {
                return Err(Error::invalid(format!("vertex {v} out of range 0..{n}")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Ground-set size (not the member count).
    #[inline]
    pub fn ground_size(&self) -> usize {
        self.nbits
    }

    /// Number of members.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.nbits && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Inserts `v`; returns true if it was absent.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.nbits, "vertex {v} out of range 0..{}", self.nbits);
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Removes `v`; returns true if it was present.
    pub fn remove(&mut self, v: usize) -> bool {
        assert!(v < self.nbits);
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            BitIter { word: w }.map(move |b| wi * 64 + b)
        })
    }

    /// Members collected into a vector, increasing order.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    #[inline]
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Is `self` a subset of `other`? Requires equal ground sets.
    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Size of the intersection with `other`.
    pub fn intersection_size(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            None
        } else {
            let b = self.word.trailing_zeros() as usize;
            self.word &= self.word - 1;
            Some(b)
        }
    }
}

/// A simple undirected graph: `n` fixed-width bit-vector adjacency rows laid
/// out contiguously. Row `i` is the neighbourhood N(i); the diagonal is
/// always zero and rows are kept symmetric by construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    /// Builds a graph from an edge list. Loops and duplicates are errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    /// Adjacency row of vertex `i` as words.
    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.stride..(i + 1) * self.stride]
    }

    /// First word of row `i`; the whole row when n <= 64.
    #[inline]
    pub(crate) fn row_word(&self, i: usize) -> u64 {
        self.rows[i * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert_ne!(u, v);
        let bu = 1u64 << (v % 64);
        let bv = 1u64 << (u % 64);
        if present {
            self.rows[u * self.stride + v / 64] |= bu;
            self.rows[v * self.stride + u / 64] |= bv;
        } else {
            self.rows[u * self.stride + v / 64] &= !bu;
            self.rows[v * self.stride + u / 64] &= !bv;
        }
    }

    /// Toggles the edge `uv` and returns the new state.
    pub fn flip_edge(&mut self, u: usize, v: usize) -> bool {
        let now = !self.has_edge(u, v);
        self.set_edge(u, v, now);
        now
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of edges, by halving the popcount of all rows.
    pub fn edge_count(&self) -> u64 {
        let total: u64 = self.rows.iter().map(|w| w.count_ones() as u64).sum();
        total / 2
    }

    /// Edges as (u, v) pairs with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count() as usize);
        for u in 0..self.n {
            for (wi, &w) in self.row(u).iter().enumerate() {
                let mut word = w;
                // keep only v > u
                if wi == u / 64 {
                    word &= !((1u64 << (u % 64)) - 1) & !(1u64 << (u % 64));
                }
                if wi < u / 64 {
                    continue;
                }
                while word != 0 {
                    let v = wi * 64 + word.trailing_zeros() as usize;
                    out.push((u, v));
                    word &= word - 1;
                }
            }
        }
        out
    }

    /// The complement graph: edge ij (i != j) present iff absent here.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        let tail_mask = if self.n % 64 == 0 {
            u64::MAX
        } else {
            (1u64 << (self.n % 64)) - 1
        };
        for i in 0..self.n {
            for wi in 0..self.stride {
                let mut w = !self.row(i)[wi];
                if wi == self.stride - 1 {
                    w &= tail_mask;
                }
                if wi == i / 64 {
                    w &= !(1u64 << (i % 64));
                }
                g.rows[i * self.stride + wi] = w;
            }
        }
        g
    }

    /// Number of edges of the subgraph induced by `u`: masked popcounts of
    /// the member rows, halved.
    pub fn induced_edge_count(&self, u: &VertexSet) -> u64 {
        debug_assert_eq!(u.ground_size(), self.n);
        let mut total = 0u64;
        for v in u.iter() {
            total += self
                .row(v)
                .iter()
                .zip(u.words())
                .map(|(r, m)| (r & m).count_ones() as u64)
                .sum::<u64>();
        }
        total / 2
    }

    /// Checks the representation invariants: symmetric rows, zero diagonal,
    /// no bits at or above `n`. Cheap enough to call in tests everywhere.
    pub fn check_invariants(&self) -> Result<()> {
        let tail_mask = if self.n % 64 == 0 {
            u64::MAX
        } else {
            (1u64 << (self.n % 64)) - 1
        };
        for i in 0..self.n {
            if self.has_edge(i, i) {
                return Err(Error::Internal(format!("loop at {i}")));
            }
            if self.stride > 0 {
                let last = self.row(i)[self.stride - 1];
                if last & !tail_mask != 0 {
                    return Err(Error::Internal(format!("row {i} has bits beyond n")));
                }
            }
            for j in 0..i {
                if self.has_edge(i, j) != self.has_edge(j, i) {
                    return Err(Error::Internal(format!("asymmetry at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Parses the edge-list format: first line `n m`, then `m` lines `u v`
    /// with 0-based endpoints. Rejects loops, duplicates (in either
    /// orientation), out-of-range vertices and malformed lines, each with
    /// its 1-based line number.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text.split('\n').enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty document"))?;
        let header = header.trim_end_matches('\r');
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(1, "expected `n m`"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(1, "expected `n m`"))?;
        if it.next().is_some() {
            return Err(Error::parse(1, "trailing tokens after `n m`"));
        }
        let mut g = Graph::empty(n);
        let mut seen = 0usize;
        for (idx, raw) in lines {
            let lineno = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            if seen == m {
                return Err(Error::parse(lineno, format!("expected {m} edges, found more")));
            }
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(lineno, "expected `u v`"))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(lineno, "expected `u v`"))?;
            if it.next().is_some() {
                return Err(Error::parse(lineno, "trailing tokens after `u v`"));
            }
            if u >= n || v >= n {
                return Err(Error::parse(
                    lineno,
                    format!("vertex out of range 0..{n}"),
                ));
            }
            if u == v {
                return Err(Error::parse(lineno, format!("loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::parse(lineno, format!("duplicate edge ({u},{v})")));
            }
            g.set_edge(u, v, true);
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(
                text.split('\n').count(),
                format!("header declares {m} edges but {seen} were given"),
            ));
        }
        Ok(g)
    }

    /// Serialises to the edge-list format (LF line endings, edges sorted).
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

/// A vertex colouring with colours in `1..=k`. Colourings need not be
/// surjective; colourful counts are simply zero when a colour is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    k: usize,
    colours: Vec<usize>,
}

impl Colouring {
    /// Builds a colouring; every entry must lie in `1..=k` and `k >= 1`.
    pub fn new(k: usize, colours: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("colour count k must be >= 1"));
        }
        for (v, &c) in colours.iter().enumerate() {
            if c == 0 || c > k {
                return Err(Error::invalid(format!(
                    "vertex {v} has colour {c}, outside 1..={k}"
                )));
            }
        }
        Ok(Colouring { k, colours })
    }

    /// Parses the colouring format: `n` lines, one colour in `1..=k` each.
    pub fn parse(text: &str, k: usize, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("colour count k must be >= 1"));
        }
        let mut colours = Vec::with_capacity(n);
        for (idx, raw) in text.split('\n').enumerate() {
            let lineno = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            if colours.len() == n {
                return Err(Error::parse(
                    lineno,
                    format!("expected {n} colour lines, found more"),
                ));
            }
            let c: usize = line
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, "expected an integer colour"))?;
            if c == 0 || c > k {
                return Err(Error::parse(
                    lineno,
                    format!("colour {c} outside 1..={k}"),
                ));
            }
            colours.push(c);
        }
        if colours.len() != n {
            return Err(Error::parse(
                text.split('\n').count(),
                format!("expected {n} colour lines, found {}", colours.len()),
            ));
        }
        Ok(Colouring { k, colours })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.colours.len()
    }

    /// Colour of vertex `v`, in `1..=k`.
    #[inline]
    pub fn colour(&self, v: usize) -> usize {
        self.colours[v]
    }

    /// Vertices of each colour class, indexed by colour - 1.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.k];
        for (v, &c) in self.colours.iter().enumerate() {
            classes[c - 1].push(v);
        }
        classes
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for &c in &self.colours {
            out.push_str(&format!("{c}\n"));
        }
        out
    }
}

/// Deterministic graph generators. `Gnp` uses a seeded ChaCha stream so the
/// output is a pure function of the spec.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Clique(usize),
    Independent(usize),
    TwoCliques(usize, usize),
    CompleteBipartite(usize, usize),
    Gnp { n: usize, p: f64, seed: u64 },
}

/// Generates a graph from a spec. Deterministic for a fixed spec.
pub fn generate(spec: &GraphSpec) -> Result<Graph> {
    match *spec {
        GraphSpec::Clique(n) => {
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    g.set_edge(u, v, true);
                }
            }
            Ok(g)
        }
        GraphSpec::Independent(n) => Ok(Graph::empty(n)),
        GraphSpec::TwoCliques(a, b) => {
            // Vertices 0..a form one clique, a..a+b the other; no cross edges.
            let mut g = Graph::empty(a + b);
            for u in 0..a {
                for v in u + 1..a {
                    g.set_edge(u, v, true);
                }
            }
            for u in a..a + b {
                for v in u + 1..a + b {
                    g.set_edge(u, v, true);
                }
            }
            Ok(g)
        }
        GraphSpec::CompleteBipartite(a, b) => {
            let mut g = Graph::empty(a + b);
            for u in 0..a {
                for v in a..a + b {
                    g.set_edge(u, v, true);
                }
            }
            Ok(g)
        }
        GraphSpec::Gnp { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("p={p} outside [0,1]")));
            }
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        g.set_edge(u, v, true);
                    }
                }
            }
            Ok(g)
        }
    }
}

/// Streams all k-subsets of `0..n` in colexicographic order. Supports
/// rank-based range splitting so enumeration can be partitioned across
/// workers; each split owns an independent cursor.
pub struct KSubsets {
    n: usize,
    indices: Vec<usize>,
    remaining: u128,
}

/// All k-subsets of `0..n` in colex order. `k > n` yields an empty stream.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    let total = binom(n as u64, k as u64);
    KSubsets {
        n,
        indices: (0..k).collect(),
        remaining: total,
    }
}

/// A sub-stream covering colex ranks `start..end`.
pub fn k_subsets_range(n: usize, k: usize, start: u128, end: u128) -> KSubsets {
    let total = binom(n as u64, k as u64);
    let end = end.min(total);
    if start >= end {
        return KSubsets {
            n,
            indices: (0..k).collect(),
            remaining: 0,
        };
    }
    KSubsets {
        n,
        indices: colex_unrank(k, start),
        remaining: end - start,
    }
}

/// Colex rank of an ascending index combination.
pub fn colex_rank(indices: &[usize]) -> u128 {
    indices
        .iter()
        .enumerate()
        .map(|(j, &s)| binom(s as u64, j as u64 + 1))
        .sum()
}

/// Inverse of `colex_rank` for k-subsets (of a sufficiently large ground set).
pub fn colex_unrank(k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = vec![0usize; k];
    for j in (1..=k).rev() {
        // Largest s with C(s, j) <= rank.
        let mut s = j - 1; // C(j-1, j) = 0 <= rank always
        while binom(s as u64 + 1, j as u64) <= rank {
            s += 1;
        }
        out[j - 1] = s;
        rank -= binom(s as u64, j as u64);
    }
    out
}

impl KSubsets {
    /// Advances in place; returns false when the stream is exhausted.
    /// `indices` stays ascending.
    pub(crate) fn advance(indices: &mut [usize], n: usize) -> bool {
        let k = indices.len();
        for i in 0..k {
            let limit = if i + 1 < k { indices[i + 1] } else { n };
            if indices[i] + 1 < limit {
                indices[i] += 1;
                for (j, slot) in indices.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for KSubsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let set = VertexSet::from_members(self.n, &self.indices)
            .expect("cursor indices are in range");
        if self.remaining > 0 {
            let ok = KSubsets::advance(&mut self.indices, self.n);
            debug_assert!(ok, "stream underflow");
        }
        Some(set)
    }
}
