//! Node-subsampling inference for the joint distribution of network moments.
//!
//! The crate is organized around the pipeline it implements:
//!
//! * [`graph`] — simple undirected graphs: edge-list ingestion, induced
//!   subgraphs, connected components, edge density.
//! * [`motif`] — exact non-induced / induced motif counts, injective
//!   homomorphisms, automorphism groups, and network moments.
//! * [`algebra`] — the merge-set algebra of motif pairs: the linearity
//!   identity, exact subsample expectation/covariance, and the linear
//!   Hoeffding term of subsampled moments.
//! * [`graphon`] — sparse graphon models, graph sampling, population
//!   moment integrals, and the limiting covariance of rescaled moments.
//! * [`subsample`] — uniform node subsampling of a host graph, rescaled
//!   statistics, empirical joint CDFs, and Kolmogorov-Smirnov distances.
//! * [`compare`] — unmatchable-network comparison workflows and
//!   conditional-slice analysis.
//! * [`experiment`] — the seeded KS-error experiment harness.

pub mod algebra;
pub mod compare;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod graphon;
pub mod motif;
pub mod oracle;
pub mod rng;
pub mod subsample;

pub use error::{Error, Result};
pub use graph::{Graph, NodeSet};
pub use motif::{CountMode, Motif};
