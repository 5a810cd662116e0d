//! Passage graphs: tokens, units, labelled primary and remote edges.
//!
//! Primary edges form a tree rooted at the passage root; remote edges add
//! reentrancy while keeping the whole graph acyclic. Implicit units are
//! token-less leaves standing for core arguments absent from the text.

mod category;
mod passage;
mod validate;

pub use category::{CategoryParseError, CategorySet, EdgeCategory};
pub use passage::{Edge, EdgeKind, Node, NodeKind, Passage, PassageIndex, Token};
pub(crate) use validate::scenes_unchecked;
pub use validate::{
    implicit_units, scenes, validate_graph, ImplicitUnit, InvalidPassage, RuleCode, SceneView,
    ValidationReport, Violation,
};
