//! Rule-based detection of implicit-argument sites and category
//! suggestions.
//!
//! Rules pair a construction cue with the argument slot it leaves empty and
//! the category that omission usually has. Every rule that fires on a site
//! contributes its category; the final pick goes through
//! [`resolve_priority`](crate::refinement::resolve_priority). Output is only
//! ever a suggestion for a reviewer.

mod cues;
mod rules;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{scenes, CategorySet, EdgeCategory, InvalidPassage, Passage, PassageIndex};
use crate::refinement::{
    resolve_priority, CategoryCandidates, ImplicitCategory, RefinementDocument, RefinementEntry,
    ReviewStatus,
};
use cues::SceneContext;

pub use rules::{
    Confidence, Cue, GenreProfile, Lexicon, Rule, RuleSet, RuleSetError, Slot, DEFAULT_RULES,
};

/// Trigger id of sites made for implicit nodes no rule accounts for.
pub const FALLBACK_RULE: &str = "fallback";

/// File suffix of suggestion documents next to a corpus.
pub const SUGGESTIONS_SUFFIX: &str = ".suggestions.json";

/// A Scene slot where a core Participant is missing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSite {
    pub passage_id: String,
    pub scene: String,
    pub role: CategorySet,
    pub slot: Slot,
    /// First rule (in rule-set order) whose cue matched.
    pub trigger: String,
    /// Token range of the main relation, end exclusive.
    pub span: (usize, usize),
    /// Implicit node already standing in this slot, if any.
    pub implicit_node: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub site: CandidateSite,
    pub category: ImplicitCategory,
    pub rule: String,
    pub confidence: Confidence,
    /// Every rule that fired on the site, in rule-set order.
    pub fired: Vec<String>,
}

/// All suggestions for one passage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuggestionsDocument {
    pub passage_id: String,
    pub rules_version: u32,
    pub genre: String,
    pub suggestions: Vec<Suggestion>,
}

impl SuggestionsDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("suggestions serialize");
        s.push('\n');
        s
    }

    /// Refinement sidecar with a `suggested` entry per linked site.
    ///
    /// Entries of `base` that are already suggested or confirmed are kept;
    /// unreviewed ones are replaced.
    pub fn refinement(&self, base: Option<&RefinementDocument>) -> RefinementDocument {
        let mut doc = base
            .cloned()
            .unwrap_or_else(|| RefinementDocument::new(self.passage_id.clone()));
        for s in &self.suggestions {
            let Some(node) = &s.site.implicit_node else {
                continue;
            };
            let entry = RefinementEntry {
                node_id: node.clone(),
                category: Some(s.category),
                status: ReviewStatus::Suggested,
                note: format!("rule {}, {} confidence", s.rule, s.confidence),
            };
            match doc.entries.iter_mut().find(|e| &e.node_id == node) {
                Some(e) if e.status == ReviewStatus::Unreviewed => *e = entry,
                Some(_) => {}
                None => doc.entries.push(entry),
            }
        }
        doc
    }
}

/// A rule set with one active genre.
#[derive(Clone, Debug)]
pub struct Engine {
    rules: RuleSet,
    genre: GenreProfile,
}

impl Default for Engine {
    /// Bundled rules with the `review` genre.
    fn default() -> Self {
        let rules = RuleSet::default();
        let genre = rules
            .genre("review")
            .expect("bundled rules declare the review genre");
        Engine { rules, genre }
    }
}

impl Engine {
    pub fn new(rules: RuleSet, genre: GenreProfile) -> Self {
        Engine { rules, genre }
    }

    /// Loads rules from `path` (bundled rules when `None`) and activates
    /// `genre`.
    pub fn load(path: Option<&Path>, genre: &str) -> Result<Self, RuleSetError> {
        let rules = match path {
            Some(p) => RuleSet::load(p)?,
            None => RuleSet::default(),
        };
        let genre = rules.genre(genre)?;
        Ok(Engine { rules, genre })
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn genre(&self) -> &GenreProfile {
        &self.genre
    }

    fn fired<'r>(&'r self, ctx: &SceneContext, slot: Slot) -> Vec<&'r Rule> {
        self.rules
            .rules
            .iter()
            .filter(|r| r.slot == slot && ctx.holds(r.cue, &self.rules.lexicon, &self.genre))
            .collect()
    }

    /// Candidate sites in document order: Scenes in pre-order, agent before
    /// patient within a Scene. Implicit Participants already in a Scene are
    /// linked to its sites in order; any left over get a fallback site.
    pub fn detect_candidates(&self, p: &Passage) -> Result<Vec<CandidateSite>, InvalidPassage> {
        let views = scenes(p)?;
        let index = p.index();
        let mut sites = Vec::new();
        for scene in &views {
            let Some(ctx) = SceneContext::new(p, &index, scene) else {
                continue;
            };
            let span = main_span(&index, &scene.main_relation.child);
            let mut implicit = scene.implicit_participants.iter().filter(|n| {
                index
                    .primary_parent_edge(n)
                    .is_some_and(|e| e.categories.is_participant())
            });
            for slot in [Slot::Agent, Slot::Patient] {
                if let Some(rule) = self.fired(&ctx, slot).first() {
                    sites.push(CandidateSite {
                        passage_id: p.id().to_string(),
                        scene: scene.scene_node.clone(),
                        role: CategorySet::single(EdgeCategory::Participant),
                        slot,
                        trigger: rule.id.clone(),
                        span,
                        implicit_node: implicit.next().cloned(),
                    });
                }
            }
            for node in implicit {
                sites.push(CandidateSite {
                    passage_id: p.id().to_string(),
                    scene: scene.scene_node.clone(),
                    role: CategorySet::single(EdgeCategory::Participant),
                    slot: Slot::Unspecified,
                    trigger: FALLBACK_RULE.to_string(),
                    span,
                    implicit_node: Some(node.clone()),
                });
            }
        }
        Ok(sites)
    }

    /// Resolves the categories of every rule firing on `site` to one
    /// suggestion. Sites no rule explains fall back to Non-specific with low
    /// confidence.
    pub fn suggest_category(&self, site: &CandidateSite, p: &Passage) -> Suggestion {
        let index = p.index();
        let fired: Vec<&Rule> = crate::graph::scenes_unchecked(p)
            .iter()
            .find(|s| s.scene_node == site.scene)
            .and_then(|s| SceneContext::new(p, &index, s))
            .map(|ctx| self.fired(&ctx, site.slot))
            .unwrap_or_default();
        let mut candidates = CategoryCandidates::new();
        for r in &fired {
            candidates.insert(r.emits);
        }
        let winner = resolve_priority(candidates);
        let (category, rule, confidence) = match winner {
            Some(c) => {
                let r = fired
                    .iter()
                    .find(|r| r.emits == c)
                    .expect("winner comes from a fired rule");
                (c, r.id.clone(), r.confidence)
            }
            None => (
                ImplicitCategory::NonSpecific,
                FALLBACK_RULE.to_string(),
                Confidence::Low,
            ),
        };
        Suggestion {
            site: site.clone(),
            category,
            rule,
            confidence,
            fired: fired.iter().map(|r| r.id.clone()).collect(),
        }
    }

    pub fn suggest(&self, p: &Passage) -> Result<SuggestionsDocument, InvalidPassage> {
        let suggestions = self
            .detect_candidates(p)?
            .iter()
            .map(|s| self.suggest_category(s, p))
            .collect();
        Ok(SuggestionsDocument {
            passage_id: p.id().to_string(),
            rules_version: self.rules.version,
            genre: self.genre.tag.clone(),
            suggestions,
        })
    }

    /// Suggestions for many passages, computed in parallel, in input order.
    pub fn suggest_all(
        &self,
        passages: &[Passage],
    ) -> Vec<Result<SuggestionsDocument, InvalidPassage>> {
        passages.par_iter().map(|p| self.suggest(p)).collect()
    }
}

fn main_span(index: &PassageIndex<'_>, node: &str) -> (usize, usize) {
    let tokens = index.yield_tokens(node);
    match (tokens.iter().min(), tokens.iter().max()) {
        (Some(&a), Some(&b)) => (a, b + 1),
        _ => (0, 0),
    }
}
