use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Foundational-layer edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeCategory {
    Participant,
    Center,
    Adverbial,
    Elaborator,
    Function,
    Ground,
    ParallelScene,
    Linker,
    Connector,
    Process,
    Quantifier,
    Relator,
    State,
    Time,
}

impl EdgeCategory {
    /// All categories in code order.
    pub const ALL: [EdgeCategory; 14] = [
        EdgeCategory::Participant,
        EdgeCategory::Center,
        EdgeCategory::Adverbial,
        EdgeCategory::Elaborator,
        EdgeCategory::Function,
        EdgeCategory::Ground,
        EdgeCategory::ParallelScene,
        EdgeCategory::Linker,
        EdgeCategory::Connector,
        EdgeCategory::Process,
        EdgeCategory::Quantifier,
        EdgeCategory::Relator,
        EdgeCategory::State,
        EdgeCategory::Time,
    ];

    pub fn code(self) -> char {
        match self {
            EdgeCategory::Participant => 'A',
            EdgeCategory::Center => 'C',
            EdgeCategory::Adverbial => 'D',
            EdgeCategory::Elaborator => 'E',
            EdgeCategory::Function => 'F',
            EdgeCategory::Ground => 'G',
            EdgeCategory::ParallelScene => 'H',
            EdgeCategory::Linker => 'L',
            EdgeCategory::Connector => 'N',
            EdgeCategory::Process => 'P',
            EdgeCategory::Quantifier => 'Q',
            EdgeCategory::Relator => 'R',
            EdgeCategory::State => 'S',
            EdgeCategory::Time => 'T',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeCategory::Participant => "Participant",
            EdgeCategory::Center => "Center",
            EdgeCategory::Adverbial => "Adverbial",
            EdgeCategory::Elaborator => "Elaborator",
            EdgeCategory::Function => "Function",
            EdgeCategory::Ground => "Ground",
            EdgeCategory::ParallelScene => "ParallelScene",
            EdgeCategory::Linker => "Linker",
            EdgeCategory::Connector => "Connector",
            EdgeCategory::Process => "Process",
            EdgeCategory::Quantifier => "Quantifier",
            EdgeCategory::Relator => "Relator",
            EdgeCategory::State => "State",
            EdgeCategory::Time => "Time",
        }
    }

    pub fn from_code(code: char) -> Option<EdgeCategory> {
        EdgeCategory::ALL.iter().copied().find(|c| c.code() == code)
    }

    pub fn from_name(name: &str) -> Option<EdgeCategory> {
        EdgeCategory::ALL.iter().copied().find(|c| c.name() == name)
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for EdgeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryParseError {
    #[error("empty category label")]
    Empty,
    #[error("unknown edge category code '{0}'")]
    UnknownCode(char),
}

/// A set of edge categories carried by one edge, such as `A/P`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CategorySet(u16);

impl CategorySet {
    pub const fn empty() -> Self {
        CategorySet(0)
    }

    pub fn single(category: EdgeCategory) -> Self {
        CategorySet(category.bit())
    }

    pub fn insert(&mut self, category: EdgeCategory) {
        self.0 |= category.bit();
    }

    pub fn remove(&mut self, category: EdgeCategory) {
        self.0 &= !category.bit();
    }

    pub fn contains(self, category: EdgeCategory) -> bool {
        self.0 & category.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersects(self, other: CategorySet) -> bool {
        self.0 & other.0 != 0
    }

    /// Categories in code order.
    pub fn iter(self) -> impl Iterator<Item = EdgeCategory> {
        EdgeCategory::ALL
            .into_iter()
            .filter(move |c| self.contains(*c))
    }

    pub fn is_participant(self) -> bool {
        self.contains(EdgeCategory::Participant)
    }

    /// True for labels that evoke a Scene (Process or State).
    pub fn is_main_relation(self) -> bool {
        self.contains(EdgeCategory::Process) || self.contains(EdgeCategory::State)
    }
}

impl FromIterator<EdgeCategory> for CategorySet {
    fn from_iter<I: IntoIterator<Item = EdgeCategory>>(iter: I) -> Self {
        let mut set = CategorySet::empty();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl From<EdgeCategory> for CategorySet {
    fn from(category: EdgeCategory) -> Self {
        CategorySet::single(category)
    }
}

impl fmt::Display for CategorySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.iter() {
            if !first {
                f.write_str("/")?;
            }
            write!(f, "{}", c.code())?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for CategorySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CategorySet({self})")
    }
}

/// Accepts `A`, `A/P`, `F+D` and the concatenated corpus form `FD`.
impl FromStr for CategorySet {
    type Err = CategoryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = CategorySet::empty();
        for ch in s
            .chars()
            .filter(|ch| !matches!(ch, '/' | '+') && !ch.is_whitespace())
        {
            let category =
                EdgeCategory::from_code(ch).ok_or(CategoryParseError::UnknownCode(ch))?;
            set.insert(category);
        }
        if set.is_empty() {
            return Err(CategoryParseError::Empty);
        }
        Ok(set)
    }
}

impl Serialize for CategorySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CategorySet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
