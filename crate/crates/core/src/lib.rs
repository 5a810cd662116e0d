//! UCCA passages with a fine-grained implicit-argument refinement layer.
//!
//! The crate covers the passage graph model and its validator, the on-disk
//! passage and sidecar formats, the six-way implicit category typology,
//! passage-to-sentence conversion, a rule-based category suggester and
//! corpus statistics including inter-annotator agreement.

pub mod corpus;
pub mod fixtures;
pub mod graph;
pub mod heuristics;
pub mod refinement;
pub mod scalar;
pub mod stats;
pub mod transform;

pub use graph::{
    implicit_units, scenes, validate_graph, CategorySet, Edge, EdgeCategory, EdgeKind, Node,
    NodeKind, Passage, Token, ValidationReport,
};
pub use refinement::{ImplicitCategory, RefinementDocument, ReviewStatus};

/// Category shares and agreement scores in double precision.
pub type Distribution = stats::Distribution<f64>;
pub type KappaResult = stats::KappaResult<f64>;
pub type ComparisonTable = stats::ComparisonTable<f64>;

/// Exact rational agreement scores.
pub type ExactKappaResult = stats::KappaResult<num_rational::Rational64>;
