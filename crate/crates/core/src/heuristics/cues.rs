use super::rules::{Cue, GenreProfile, Lexicon};
use crate::graph::{CategorySet, EdgeCategory, Passage, PassageIndex, SceneView};

fn normalize(s: &str) -> String {
    s.to_lowercase().replace('\u{2019}', "'")
}

fn listed(list: &[String], word: &str) -> bool {
    list.iter().any(|w| w == word)
}

fn has_suffix(list: &[String], word: &str) -> bool {
    list.iter()
        .any(|s| word.len() > s.len() + 2 && word.ends_with(s.as_str()))
}

fn is_punctuation(s: &str) -> bool {
    !s.chars().any(char::is_alphanumeric)
}

/// A non-main child of a Scene, reduced to what the cues need.
struct Child {
    categories: CategorySet,
    first: usize,
    text: String,
    relators: Vec<String>,
}

/// Surface and structural facts about one Scene.
pub(super) struct SceneContext {
    main_first: usize,
    main_text: String,
    main_head: String,
    main_categories: CategorySet,
    incoming: CategorySet,
    sentence_initial: bool,
    remote_participant: bool,
    children: Vec<Child>,
}

impl SceneContext {
    pub(super) fn new(p: &Passage, index: &PassageIndex<'_>, scene: &SceneView) -> Option<Self> {
        let text_of = |tokens: &[usize]| {
            tokens
                .iter()
                .filter_map(|&t| index.token_text(t))
                .map(normalize)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let main = &scene.main_relation;
        let main_tokens = index.yield_tokens(&main.child);
        let main_first = *main_tokens.first()?;
        let main_text = text_of(&main_tokens);
        let main_head = main_text.split(' ').next().unwrap_or_default().to_string();

        let sentence_initial = match index.first_token(&scene.scene_node) {
            Some(0) => true,
            Some(t) => {
                let tokens = p.tokens();
                tokens[t - 1].sentence_index != tokens[t].sentence_index
                    || is_punctuation(&tokens[t - 1].text)
            }
            None => false,
        };
        let remote_participant = index
            .children(&scene.scene_node)
            .any(|e| e.is_remote() && e.categories.is_participant());

        let mut children = Vec::new();
        for e in index.primary_children(&scene.scene_node) {
            if e.child == main.child {
                continue;
            }
            let tokens = index.yield_tokens(&e.child);
            let Some(&first) = tokens.first() else {
                continue;
            };
            let relators = index
                .primary_children(&e.child)
                .filter(|c| c.categories.contains(EdgeCategory::Relator))
                .map(|c| text_of(&index.yield_tokens(&c.child)))
                .collect();
            children.push(Child {
                categories: e.categories,
                first,
                text: text_of(&tokens),
                relators,
            });
        }

        Some(SceneContext {
            main_first,
            main_text,
            main_head,
            main_categories: main.categories,
            incoming: index
                .primary_parent_edge(&scene.scene_node)
                .map(|e| e.categories)
                .unwrap_or_default(),
            sentence_initial,
            remote_participant,
            children,
        })
    }

    fn is_process(&self) -> bool {
        self.main_categories.contains(EdgeCategory::Process)
    }

    fn before(&self, category: EdgeCategory) -> impl Iterator<Item = &Child> {
        let main = self.main_first;
        self.children
            .iter()
            .filter(move |c| c.first < main && c.categories.contains(category))
    }

    fn participant_before(&self) -> bool {
        self.before(EdgeCategory::Participant).next().is_some()
    }

    fn participant_after(&self) -> bool {
        self.children
            .iter()
            .any(|c| c.first > self.main_first && c.categories.is_participant())
    }

    /// A Participant after the main relation that is not introduced by a
    /// Relator.
    fn direct_object(&self) -> bool {
        self.children.iter().any(|c| {
            c.first > self.main_first && c.categories.is_participant() && c.relators.is_empty()
        })
    }

    fn by_phrase(&self, lex: &Lexicon) -> bool {
        self.children.iter().any(|c| {
            c.categories.is_participant()
                && c.relators.iter().any(|r| listed(&lex.agent_markers, r))
        })
    }

    fn is_nominal(&self, lex: &Lexicon) -> bool {
        listed(&lex.nominals, &self.main_head) || has_suffix(&lex.nominal_suffixes, &self.main_head)
    }

    fn is_participle(&self, lex: &Lexicon) -> bool {
        let h = &self.main_head;
        listed(&lex.irregular_participles, h)
            || (h.len() > 3 && (h.ends_with("ed") || h.ends_with("en")))
    }

    fn passive(&self, lex: &Lexicon) -> bool {
        self.is_process()
            && self.is_participle(lex)
            && self
                .before(EdgeCategory::Function)
                .any(|c| listed(&lex.passive_auxiliaries, &c.text))
    }

    /// The agent is expressed: by-phrase in a passive, otherwise a
    /// Participant before the main relation or a remote Participant.
    fn agent_filled(&self, lex: &Lexicon) -> bool {
        if self.passive(lex) {
            self.by_phrase(lex)
        } else {
            self.participant_before() || self.remote_participant
        }
    }

    fn thanks(&self, lex: &Lexicon) -> bool {
        listed(&lex.thanks, &self.main_text)
    }

    pub(super) fn holds(&self, cue: Cue, lex: &Lexicon, genre: &GenreProfile) -> bool {
        match cue {
            Cue::Imperative => {
                let h = &self.main_head;
                self.is_process()
                    && self.sentence_initial
                    && !self.participant_before()
                    && !self.remote_participant
                    && self
                        .before(EdgeCategory::Function)
                        .all(|c| listed(&lex.imperative_auxiliaries, &c.text))
                    && !listed(&lex.auxiliaries, h)
                    && !h.ends_with("ing")
                    && !h.ends_with("ed")
                    && !self.is_nominal(lex)
                    && !self.thanks(lex)
            }
            Cue::Thanks => self.thanks(lex) && !self.participant_before(),
            Cue::Passive => self.passive(lex) && !self.by_phrase(lex),
            Cue::GenrePredicate => {
                (listed(&genre.predicates, &self.main_head)
                    || listed(&genre.predicates, &self.main_text))
                    && !self.agent_filled(lex)
            }
            Cue::Infinitive => {
                let marker = self.before(EdgeCategory::Function).find(|c| {
                    c.first + 1 == self.main_first && listed(&lex.infinitive_markers, &c.text)
                });
                let Some(marker) = marker else {
                    return false;
                };
                let existential = self
                    .before(EdgeCategory::Function)
                    .any(|c| listed(&lex.existential, &c.text));
                let controlled = self
                    .before(EdgeCategory::Participant)
                    .any(|c| c.first < marker.first);
                !self.remote_participant && (existential || !controlled)
            }
            Cue::Gerund => {
                self.is_process()
                    && self.main_head.ends_with("ing")
                    && self.incoming.is_participant()
                    && !self.participant_before()
                    && !self.remote_participant
            }
            Cue::Occupation => {
                self.main_categories.is_participant()
                    && (listed(&lex.occupations, &self.main_head)
                        || has_suffix(&lex.occupation_suffixes, &self.main_head))
                    && !self.direct_object()
            }
            Cue::Iterated => {
                let negated = self
                    .children
                    .iter()
                    .filter(|c| c.first < self.main_first)
                    .filter(|c| {
                        c.categories.contains(EdgeCategory::Adverbial)
                            || c.categories.contains(EdgeCategory::Time)
                    })
                    .any(|c| listed(&lex.negation, &c.text));
                self.is_process()
                    && negated
                    && self.participant_before()
                    && !self.direct_object()
                    && !self.passive(lex)
            }
            Cue::TypeableObject => {
                listed(&lex.typeable_object_verbs, &self.main_head)
                    && !self.direct_object()
                    && !self.passive(lex)
            }
            Cue::Nominal => {
                self.is_process()
                    && !self.main_categories.is_participant()
                    && self.is_nominal(lex)
                    && !self.participant_after()
            }
        }
    }
}
