//! The implicit-argument refinement layer.
//!
//! Six interpretation categories, the priority rule used when several of
//! them apply, per-passage sidecar documents with review status, and the
//! mapping from the eleven-type FiGref inventory onto this category set.

mod category;
mod document;
mod ogorman;

pub use category::{
    resolve_priority, CategoryCandidates, ImplicitCategory, UnknownCategory, DOMINANCE,
    TIE_BREAK_ORDER,
};
pub use document::{
    assign_category, assign_category_with_note, validate_refinement, RefinementDocument,
    RefinementEntry, RefinementError, ReviewStatus,
};
pub use ogorman::{ogorman_mapping, Definiteness, OGormanType, Treatment};
