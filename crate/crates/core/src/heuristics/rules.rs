use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::refinement::ImplicitCategory;

/// Rule set shipped with the library.
pub const DEFAULT_RULES: &str = include_str!("../../data/rules.json");

#[derive(Debug, Error)]
pub enum RuleSetError {
    #[error("rule file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rule file: {0}")]
    Io(#[from] std::io::Error),
    #[error("rule id '{0}' is used twice")]
    DuplicateId(String),
    #[error("genre '{0}' is declared twice")]
    DuplicateGenre(String),
    #[error("unknown genre '{0}'")]
    UnknownGenre(String),
}

/// Construction pattern a rule looks for in a Scene.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cue {
    Imperative,
    Thanks,
    Passive,
    GenrePredicate,
    Infinitive,
    Gerund,
    Occupation,
    Iterated,
    TypeableObject,
    Nominal,
}

/// Which core argument of the Scene the rule is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Agent,
    Patient,
    /// Existing implicit node no rule accounts for.
    Unspecified,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Agent => "agent",
            Slot::Patient => "patient",
            Slot::Unspecified => "unspecified",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    Low,
    Medium,
    High,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Low => "low",
            Confidence::Medium => "medium",
            Confidence::High => "high",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub id: String,
    pub cue: Cue,
    pub slot: Slot,
    pub emits: ImplicitCategory,
    pub confidence: Confidence,
    pub description: String,
    /// A sentence the rule is meant to catch.
    pub example: String,
}

/// Word lists the cues consult. Entries are lowercase surface forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicon {
    pub thanks: Vec<String>,
    pub imperative_auxiliaries: Vec<String>,
    pub auxiliaries: Vec<String>,
    pub passive_auxiliaries: Vec<String>,
    pub irregular_participles: Vec<String>,
    pub agent_markers: Vec<String>,
    pub infinitive_markers: Vec<String>,
    pub existential: Vec<String>,
    pub negation: Vec<String>,
    pub nominal_suffixes: Vec<String>,
    pub nominals: Vec<String>,
    pub occupation_suffixes: Vec<String>,
    pub occupations: Vec<String>,
    pub typeable_object_verbs: Vec<String>,
}

/// A text genre with conventionally omitted roles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenreProfile {
    pub tag: String,
    pub default_role: String,
    /// Predicates whose provider role the genre leaves out.
    pub predicates: Vec<String>,
}

impl GenreProfile {
    /// Profile with no genre conventions.
    pub fn none() -> Self {
        GenreProfile {
            tag: "none".to_string(),
            default_role: String::new(),
            predicates: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSet {
    pub version: u32,
    pub rules: Vec<Rule>,
    pub lexicon: Lexicon,
    #[serde(default)]
    pub genres: Vec<GenreProfile>,
}

impl RuleSet {
    pub fn from_json(text: &str) -> Result<Self, RuleSetError> {
        let set: RuleSet = serde_json::from_str(text)?;
        let mut ids = HashSet::new();
        for r in &set.rules {
            if !ids.insert(r.id.as_str()) {
                return Err(RuleSetError::DuplicateId(r.id.clone()));
            }
        }
        let mut tags = HashSet::new();
        for g in &set.genres {
            if !tags.insert(g.tag.as_str()) {
                return Err(RuleSetError::DuplicateGenre(g.tag.clone()));
            }
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self, RuleSetError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Looks up a genre by tag; `none` always resolves to the empty profile.
    pub fn genre(&self, tag: &str) -> Result<GenreProfile, RuleSetError> {
        if tag == "none" {
            return Ok(GenreProfile::none());
        }
        self.genres
            .iter()
            .find(|g| g.tag == tag)
            .cloned()
            .ok_or_else(|| RuleSetError::UnknownGenre(tag.to_string()))
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::from_json(DEFAULT_RULES).expect("bundled rule set parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_rules_load() {
        let set = RuleSet::default();
        assert!(set.rules.len() >= 10);
        assert!(set.genre("review").is_ok());
        assert!(set.genre("none").unwrap().predicates.is_empty());
        assert!(matches!(
            set.genre("diary"),
            Err(RuleSetError::UnknownGenre(_))
        ));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let mut set = RuleSet::default();
        let copy = set.rules[0].clone();
        set.rules.push(copy);
        let text = serde_json::to_string(&set).unwrap();
        assert!(matches!(
            RuleSet::from_json(&text),
            Err(RuleSetError::DuplicateId(_))
        ));
    }
}
