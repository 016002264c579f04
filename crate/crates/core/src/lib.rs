//! Counting, deciding and approximating even/odd induced k-vertex subgraphs.
//!
//! An induced k-vertex subgraph is *even* (resp. *odd*) when it induces an
//! even (odd) number of edges. This crate provides:
//!
//! - [`graph`]: bit-vector graphs, generators, edge-list parsing, and
//!   colex k-subset enumeration with rank-based range splitting;
//! - [`exact`]: brute-force exact counters (the ground-truth oracle for
//!   everything else), including colourful variants and the colour-pattern
//!   census;
//! - [`decide`]: structural recognizers and the fixed-parameter decision
//!   procedures for "does any even/odd k-subset exist";
//! - [`approx`]: uniform-sampling approximate counting with two sample
//!   budget regimes, plus the parity density lower bound;
//! - [`gf2`]: the encoding of a graph as a quadratic form over GF(2) and a
//!   polynomial-time zero counter, giving the total number of even induced
//!   subgraphs over all sizes;
//! - [`lattice`]: subset-lattice incidence algebra (Möbius function,
//!   generalised totient, meet-matrices, determinant identities) over
//!   arbitrary small ground sets;
//! - [`reduction`]: an executable Turing reduction recovering exact
//!   multicolour clique counts from a parity-counting oracle.

pub mod approx;
pub mod combin;
pub mod decide;
pub mod error;
pub mod exact;
pub mod gf2;
pub mod graph;
pub mod lattice;
pub mod reduction;

pub use error::{Error, Result};
pub use graph::{Colouring, Graph, GraphSpec, ParityTarget, VertexSet};
