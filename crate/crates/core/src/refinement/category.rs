use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Interpretation type of an implicit Participant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ImplicitCategory {
    /// The speaker or the addressee.
    Deictic,
    /// People in general.
    Generic,
    /// Omission conventional to the text genre, such as the reviewed business.
    GenreBased,
    /// A referent whose type follows from the predicate (eat: food).
    TypeIdentifiable,
    /// Cannot be inferred from context or common knowledge.
    NonSpecific,
    /// A heterogeneous set filling the role of a repeated or habitual action.
    IteratedSet,
}

impl ImplicitCategory {
    pub const ALL: [ImplicitCategory; 6] = [
        ImplicitCategory::Deictic,
        ImplicitCategory::Generic,
        ImplicitCategory::GenreBased,
        ImplicitCategory::TypeIdentifiable,
        ImplicitCategory::NonSpecific,
        ImplicitCategory::IteratedSet,
    ];

    /// Name used in sidecar files and reports.
    pub fn name(self) -> &'static str {
        match self {
            ImplicitCategory::Deictic => "Deictic",
            ImplicitCategory::Generic => "Generic",
            ImplicitCategory::GenreBased => "Genre-based",
            ImplicitCategory::TypeIdentifiable => "Type-identifiable",
            ImplicitCategory::NonSpecific => "Non-specific",
            ImplicitCategory::IteratedSet => "Iterated-set",
        }
    }

    pub(crate) fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for ImplicitCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown implicit category '{0}'")]
pub struct UnknownCategory(pub String);

/// Matches the sidecar names case-insensitively ("Genre-Based" is accepted).
impl FromStr for ImplicitCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ImplicitCategory::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

impl Serialize for ImplicitCategory {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ImplicitCategory {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A non-empty set of candidate categories.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CategoryCandidates(u8);

impl CategoryCandidates {
    pub fn new() -> Self {
        CategoryCandidates(0)
    }

    pub fn insert(&mut self, c: ImplicitCategory) {
        self.0 |= c.bit();
    }

    pub fn contains(self, c: ImplicitCategory) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = ImplicitCategory> {
        ImplicitCategory::ALL
            .into_iter()
            .filter(move |c| self.contains(*c))
    }

    /// Every non-empty subset of the six categories, 63 in all.
    pub fn all_subsets() -> impl Iterator<Item = CategoryCandidates> {
        (1u8..64).map(CategoryCandidates)
    }
}

impl FromIterator<ImplicitCategory> for CategoryCandidates {
    fn from_iter<I: IntoIterator<Item = ImplicitCategory>>(iter: I) -> Self {
        let mut set = CategoryCandidates::new();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

/// Fallback order applied once the dominance rules are exhausted.
pub const TIE_BREAK_ORDER: [ImplicitCategory; 6] = [
    ImplicitCategory::Deictic,
    ImplicitCategory::GenreBased,
    ImplicitCategory::Generic,
    ImplicitCategory::TypeIdentifiable,
    ImplicitCategory::IteratedSet,
    ImplicitCategory::NonSpecific,
];

/// Pairs (winner, loser): Deictic over Generic, Genre-based over Non-specific.
pub const DOMINANCE: [(ImplicitCategory, ImplicitCategory); 2] = [
    (ImplicitCategory::Deictic, ImplicitCategory::Generic),
    (ImplicitCategory::GenreBased, ImplicitCategory::NonSpecific),
];

/// Picks one category out of competing readings.
///
/// Dominated categories are removed first, then the first survivor in
/// [`TIE_BREAK_ORDER`] wins. Returns `None` only for an empty set.
pub fn resolve_priority(candidates: CategoryCandidates) -> Option<ImplicitCategory> {
    let mut remaining = candidates;
    for (winner, loser) in DOMINANCE {
        if remaining.contains(winner) {
            remaining.0 &= !loser.bit();
        }
    }
    TIE_BREAK_ORDER.into_iter().find(|c| remaining.contains(*c))
}
