//! Exact inference for discrete belief networks by directed reduction.
//!
//! The engine never builds a joint distribution to answer a query (the
//! brute-force joint lives in [`infer`] purely as an oracle). Instead it
//! transforms the diagram itself: arcs are pre-reversed until a chosen
//! target order is an ordered list for the diagram, observations are
//! absorbed into likelihood tables, and evidence is propagated by reversals
//! until every evidence node is a disconnected scalar. The tables touched
//! along the way stay inside the maximal cliques of the chordal graph the
//! target order induces, and [`infer::complexity_report`] verifies that
//! bound on every recorded run.
//!
//! Modules:
//! - [`graph`]: orders, moralization, chordality, maximum cardinality
//!   search, fill-in, cliques.
//! - [`pid`]: the diagram data model, validation, decomposability.
//! - [`reduce`]: arc reversal, pre-reversal, evidence absorption and
//!   propagation, trace recording and replay.
//! - [`infer`]: joint oracle, posterior marginals, evidence probability,
//!   complexity reporting.
//! - [`random`]: seeded random diagrams and pipeline spot checks.

pub mod error;
mod factor;
pub mod graph;
pub mod infer;
pub mod pid;
pub mod random;
pub mod reduce;

pub use error::{Error, Result};
