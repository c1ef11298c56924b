//! Clique-count fluctuations in W-random graphs over step graphons.
//!
//! A step graphon (block weights plus a symmetric matrix of edge
//! probabilities) drives a two-step random graph: vertices draw blocks, pairs
//! draw edges independently. This crate computes, exactly where finite sums
//! allow it:
//!
//! * homomorphism and conditional densities of small patterns
//!   ([`density`]), including glued clique pairs and loose-cycle graphs
//!   ([`multigraph`]);
//! * kernel spectra and cycle densities through eigenvalues or transfer
//!   matrices ([`spectral`]);
//! * the limit law of the centered r-clique count — degenerate, Gaussian of
//!   order `n^(r-1/2)`, or a chi-square mixture of order `n^(r-1)` — with its
//!   coefficients, moment power series, and moment generating function
//!   ([`limit`]);
//! * seeded parallel sampling ([`sampler`]), bit-parallel clique counting
//!   ([`cliques`]), and a Monte Carlo harness that compares empirical
//!   fluctuations against the classified limit ([`experiments`]);
//! * brute-force ground truth for all of the above ([`oracle`],
//!   [`selftest`]).

pub mod cliques;
pub mod corpus;
pub mod density;
pub mod error;
pub mod experiments;
pub mod graphon;
pub mod limit;
pub mod multigraph;
pub mod oracle;
pub mod sampler;
pub mod selftest;
mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use graphon::{BlockVector, StepGraphon};
pub use limit::{classify_limit, LawKind, LimitLaw, MomentSeries};
pub use multigraph::LabeledMultigraph;
pub use sampler::{sample_graph, split_stream, RngStream, SampledGraph};
