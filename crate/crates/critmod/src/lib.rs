//! Critical modules of connected multigraphs.
//!
//! The library builds the two critical modules attached to a connected
//! multigraph — the G-parking critical module (generators indexed by acyclic
//! orientations with a unique sink) and the toppling critical module
//! (generators indexed by equivalence classes of acyclic orientations) — from
//! their explicit orientation-labeled presentations, together with the graded
//! module maps relating a graph to its edge contraction and edge deletion.
//!
//! Everything is verified by exact computation: graded pieces are
//! finite-dimensional GF(2) vector spaces handled by bitset Gaussian
//! elimination, divisor theory runs on exact integers (Dhar reduction,
//! Baker-Norine rank, Riemann-Roch), and the Tutte polynomial is computed by
//! memoized deletion-contraction with big-integer coefficients. The crate
//! exposes degree-wise exactness verifiers for the contraction-deletion
//! sequences of both module families, Betti tables of connected partition
//! graphs, Hilbert series from three independent routes (Merino's theorem),
//! and the divisor-class reciprocity identities.
//!
//! No floating point is used anywhere.

#![forbid(unsafe_code)]

pub mod betti;
pub mod divisor;
pub mod error;
pub mod exactness;
pub mod gf2;
pub mod graph;
pub mod maps;
pub mod oracle;
pub mod orientation;
pub mod presentation;
pub mod series;
pub mod tutte;

pub use error::{Error, Result};
pub use graph::{Multigraph, VertexPartition};
pub use orientation::Orientation;
