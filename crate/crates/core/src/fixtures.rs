//! Hand-built and generated passages for tests, demos and benchmarks.
//!
//! Small passages are written in a bracket notation: `word:CAT` is a
//! terminal attached with category `CAT`, `[ ... ]:CAT` an internal unit,
//! `IMP:CAT` an implicit unit, `~name:CAT` a remote edge to the unit named
//! `name` (any item can be named with `@name` before the colon) and `|`
//! starts a new sentence. Top-level items hang from the root `1.1`.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{CategorySet, Edge, Node, Passage, Token};
use crate::heuristics::Slot;
use crate::refinement::{ImplicitCategory, RefinementDocument, RefinementEntry, ReviewStatus};
use crate::stats::Corpus;

pub const ROOT_ID: &str = "1.1";

fn split_item(item: &str) -> Result<(&str, Option<&str>, CategorySet), String> {
    let (left, cats) = item
        .rsplit_once(':')
        .ok_or_else(|| format!("item '{item}' has no category"))?;
    let cats: CategorySet = cats.parse().map_err(|e| format!("item '{item}': {e}"))?;
    match left.rsplit_once('@') {
        Some((body, name)) if !body.is_empty() && !name.is_empty() => Ok((body, Some(name), cats)),
        _ => Ok((left, None, cats)),
    }
}

/// Builds a passage from bracket notation. Returns the passage and the
/// node id of every `@name`.
pub fn bracketed(id: &str, text: &str) -> Result<(Passage, BTreeMap<String, String>), String> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut nodes = vec![Node::internal(ROOT_ID)];
    let mut edges = Vec::new();
    let mut names = BTreeMap::new();
    let mut remotes = Vec::new();
    let mut stack = vec![ROOT_ID.to_string()];
    let mut next_unit = 2;
    let mut sentence = 0;
    let mut new_unit = || {
        let id = format!("1.{next_unit}");
        next_unit += 1;
        id
    };

    for item in text.split_whitespace() {
        if item == "|" {
            sentence += 1;
            continue;
        }
        if item == "[" {
            let unit = new_unit();
            nodes.push(Node::internal(unit.clone()));
            stack.push(unit);
            continue;
        }
        let (body, name, cats) = split_item(item)?;
        let parent = stack.last().cloned().expect("root stays on the stack");
        let child = if body == "]" {
            if stack.len() == 1 {
                return Err(format!("unbalanced '{item}'"));
            }
            let unit = stack.pop().unwrap();
            let parent = stack.last().cloned().unwrap();
            edges.push(Edge::primary(parent, unit.clone(), cats));
            unit
        } else if let Some(target) = body.strip_prefix('~') {
            let target = if target.is_empty() {
                name.ok_or_else(|| format!("remote '{item}' names no target"))?
            } else {
                target
            };
            remotes.push((parent, target.to_string(), cats));
            continue;
        } else if body == "IMP" {
            let unit = new_unit();
            nodes.push(Node::implicit(unit.clone()));
            edges.push(Edge::primary(parent, unit.clone(), cats));
            unit
        } else {
            let i = tokens.len();
            tokens.push(Token::new(i, body, sentence));
            let terminal = format!("0.{}", i + 1);
            nodes.push(Node::terminal(terminal.clone(), i));
            edges.push(Edge::primary(parent, terminal.clone(), cats));
            terminal
        };
        if let Some(name) = name {
            if names.insert(name.to_string(), child).is_some() {
                return Err(format!("name '{name}' used twice"));
            }
        }
    }
    if stack.len() != 1 {
        return Err("unclosed '['".to_string());
    }
    for (parent, target, cats) in remotes {
        let child = names
            .get(&target)
            .ok_or_else(|| format!("remote to unknown name '{target}'"))?;
        edges.push(Edge::remote(parent, child.clone(), cats));
    }
    Ok((Passage::new(id, tokens, nodes, edges, ROOT_ID), names))
}

fn fixed(id: &str, text: &str) -> (Passage, BTreeMap<String, String>) {
    bracketed(id, text).unwrap_or_else(|e| panic!("fixture {id}: {e}"))
}

const MECHANIC: &str =
    "[ Have:D [ a:F real:D mechanic:C ]@mechanic:A check:P ~you:A IMP@imp1:A ]@check:H \
                        before:L [ you@you:A leave:P IMP@imp2:A ]@leave:H";

/// "Have a real mechanic check before you leave": two Scenes, two implicit
/// Participants and a remote "you" in the first Scene.
pub fn mechanic_passage() -> Passage {
    fixed("mechanic", MECHANIC).0
}

/// Node ids of the named units of [`mechanic_passage`].
pub fn mechanic_names() -> BTreeMap<String, String> {
    fixed("mechanic", MECHANIC).1
}

/// The mechanic passage without its Process "check".
pub fn mechanic_missing_process() -> Passage {
    fixed(
        "mechanic",
        "[ Have:D [ a:F real:D mechanic:C ]:A ~you:A IMP:A ]:H before:L [ you@you:A leave:P IMP:A ]:H",
    )
    .0
}

/// The mechanic passage with an extra primary edge from the mechanic unit
/// back to its own Scene.
pub fn mechanic_primary_cycle() -> Passage {
    let names = mechanic_names();
    let (id, tokens, nodes, mut edges, root) = mechanic_passage().into_parts();
    edges.push(Edge::primary(
        names["mechanic"].clone(),
        names["check"].clone(),
        CategorySet::single(crate::graph::EdgeCategory::Elaborator),
    ));
    Passage::new(id, tokens, nodes, edges, root)
}

/// The mechanic passage with the first implicit unit attached as an
/// Elaborator instead of a Participant.
pub fn mechanic_implicit_under_elaborator() -> Passage {
    let names = mechanic_names();
    let (id, tokens, nodes, mut edges, root) = mechanic_passage().into_parts();
    for e in edges.iter_mut().filter(|e| e.child == names["imp1"]) {
        e.categories = CategorySet::single(crate::graph::EdgeCategory::Elaborator);
    }
    Passage::new(id, tokens, nodes, edges, root)
}

/// A site the suggester is expected to find, with its reference category.
#[derive(Clone, Debug)]
pub struct ExpectedSite {
    pub scene: String,
    pub slot: Slot,
    pub category: ImplicitCategory,
}

#[derive(Clone, Debug)]
pub struct HeuristicCase {
    pub name: &'static str,
    pub passage: Passage,
    pub expected: Vec<ExpectedSite>,
}

fn case(
    name: &'static str,
    text: &str,
    expected: &[(&str, Slot, ImplicitCategory)],
) -> HeuristicCase {
    let (passage, names) = fixed(name, text);
    HeuristicCase {
        name,
        passage,
        expected: expected
            .iter()
            .map(|(scene, slot, category)| ExpectedSite {
                scene: names[*scene].clone(),
                slot: *slot,
                category: *category,
            })
            .collect(),
    }
}

/// Annotated sentences covering every category, nine reference sites in
/// all.
pub fn category_cases() -> Vec<HeuristicCase> {
    use ImplicitCategory::*;
    use Slot::*;
    vec![
        case(
            "ask",
            "[ Just:D ask:P them:A [ exactly:E what@what:C [ you:A want:S ~what:A ]:E ]:A IMP:A ]@s:H",
            &[("s", Agent, Deictic)],
        ),
        case(
            "thank-you-guys",
            "[ [ Thank:C you:C ]:P guys:G/A IMP:A ]@s:H",
            &[("s", Agent, Deictic)],
        ),
        case(
            "delivery-fast",
            "[ Delivery:P is:F [ lightning:E fast:C ]:D IMP:A IMP:A ]@s:H !:F",
            &[("s", Agent, GenreBased), ("s", Patient, NonSpecific)],
        ),
        case(
            "great-service",
            "[ Great:D service:P IMP:A IMP:A ]@s:H and:L [ awesome:S prices:A ]:H",
            &[("s", Agent, GenreBased)],
        ),
        case(
            "charged",
            "[ I:A don:F 't:D think:P [ I:A have:F ever:T been:F charged:P before:T IMP:A ]@s:A ]:H",
            &[("s", Agent, NonSpecific)],
        ),
        case(
            "never-wait",
            "[ I:A never:T wait:P [ in:R the:F waiting:E room:C ]:A \
             [ [ more:C [ than:R two:C ]:C ]:Q minutes:C ]:T IMP:A ]@s:H",
            &[("s", Patient, IteratedSet)],
        ),
        case(
            "dont-steal",
            "[ I:A don:F 't:D steal:P IMP:A ]@s:H",
            &[("s", Patient, IteratedSet)],
        ),
        case(
            "teachers",
            "[ They:A are:F [ very:E good:C ]:D teachers:A/P IMP:A ]@s:H",
            &[("s", Patient, TypeIdentifiable)],
        ),
    ]
}

/// One sentence per licensing construction: imperative, passive,
/// infinitive, gerund and thanking.
pub fn construction_cases() -> Vec<HeuristicCase> {
    use ImplicitCategory::*;
    use Slot::*;
    vec![
        case(
            "imperative",
            "[ IMP:A Do:F n't:D bother:P ]@s:H",
            &[("s", Agent, Deictic)],
        ),
        case(
            "passive",
            "[ [ The:F doctor:C ]:A has:F already:T been:F paid:P IMP:A ]@s:H",
            &[("s", Agent, NonSpecific)],
        ),
        case(
            "infinitive",
            "[ Is:F there:F [ no:E other:E Verizon:C ]:A IMP:A to:F go:P [ to:R around:R downtown:C ]:A ?:F ]@s:H",
            &[("s", Agent, Generic)],
        ),
        case(
            "gerund",
            "[ How:D addicting:S [ IMP:A going:P [ to:R Fitness:C Unlimited:C ]:A ]@s:A can:F/D be:F !:F ]:H",
            &[("s", Agent, Generic)],
        ),
        case(
            "thanks",
            "[ IMP:A Thanks:P ,:F John:A !:F ]@s:H",
            &[("s", Agent, Deictic)],
        ),
    ]
}

/// Fully explicit sentences; no site should be found in any of them.
pub fn control_passages() -> Vec<Passage> {
    [
        ("control-leave", "[ You:A leave:P home:A ]:H"),
        ("control-love", "[ I:A love:S [ this:E place:C ]:A ]:H"),
        (
            "control-staff",
            "[ [ The:F staff:C ]:A answered:P [ all:Q my:E questions:C ]:A ]:H",
        ),
        ("control-pasta", "[ We:A ordered:P [ the:F pasta:C ]:A ]:H"),
        ("control-truck", "[ She:A drives:P [ a:F truck:C ]:A ]:H"),
    ]
    .iter()
    .map(|(id, text)| fixed(id, text).0)
    .collect()
}

/// Passage-level counters a generated corpus must hit exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusShape {
    pub passages: usize,
    pub passages_with_implicit: usize,
    pub sentences: usize,
    pub sentences_with_implicit: usize,
    pub implicit_total: usize,
    pub implicit_valid: usize,
}

impl CorpusShape {
    pub fn row(&self) -> [usize; 6] {
        [
            self.passages,
            self.passages_with_implicit,
            self.sentences,
            self.sentences_with_implicit,
            self.implicit_total,
            self.implicit_valid,
        ]
    }

    pub fn check(&self) -> Result<(), String> {
        let s = self;
        let ok = s.passages_with_implicit <= s.passages
            && s.sentences >= s.passages
            && s.sentences_with_implicit >= s.passages_with_implicit
            && s.sentences_with_implicit <= s.sentences
            && s.sentences - s.passages >= s.sentences_with_implicit - s.passages_with_implicit
            && s.implicit_total >= s.sentences_with_implicit
            && s.implicit_valid <= s.implicit_total
            && (s.passages_with_implicit == 0) == (s.sentences_with_implicit == 0);
        if ok {
            Ok(())
        } else {
            Err(format!("infeasible corpus shape {:?}", s.row()))
        }
    }
}

/// Counters of the corpus before refinement.
pub const ORIGINAL_SHAPE: CorpusShape = CorpusShape {
    passages: 200,
    passages_with_implicit: 103,
    sentences: 306,
    sentences_with_implicit: 111,
    implicit_total: 153,
    implicit_valid: 98,
};

/// Counters of the refined corpus.
pub const REFINED_SHAPE: CorpusShape = CorpusShape {
    passages: 200,
    passages_with_implicit: 116,
    sentences: 339,
    sentences_with_implicit: 221,
    implicit_total: 413,
    implicit_valid: 348,
};

/// Confirmed categories over the valid implicit units of the refined
/// corpus.
pub const REFINED_CATEGORY_COUNTS: [(ImplicitCategory, usize); 6] = [
    (ImplicitCategory::Deictic, 61),
    (ImplicitCategory::Generic, 63),
    (ImplicitCategory::GenreBased, 89),
    (ImplicitCategory::TypeIdentifiable, 33),
    (ImplicitCategory::NonSpecific, 93),
    (ImplicitCategory::IteratedSet, 9),
];

/// Fixes which passages carry implicit units, so that the passages with
/// implicit units in a smaller corpus are among those of a larger one.
const PASSAGE_ORDER_SEED: u64 = 0x5eed_0001;
pub const ORIGINAL_SEED: u64 = 11;
pub const REFINED_SEED: u64 = 29;

const SUBJECTS: [&str; 6] = ["I", "We", "They", "She", "He", "Everyone"];
const VERBS: [&str; 6] = ["liked", "found", "ordered", "visited", "tried", "loved"];
const OBJECTS: [&str; 6] = ["pizza", "place", "room", "price", "menu", "coffee"];
const ADJECTIVES: [&str; 5] = ["old", "new", "small", "great", "cheap"];

pub fn passage_id(i: usize) -> String {
    format!("rev-{i:03}")
}

/// Generates passages hitting `shape` exactly. Every sentence is one Scene;
/// valid implicit units are Participants of it, the others sit as Centers
/// inside a Participant unit.
pub fn generate_corpus(shape: &CorpusShape, seed: u64) -> Result<Vec<Passage>, String> {
    shape.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shape.passages;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(PASSAGE_ORDER_SEED));
    let implicit_passages: Vec<usize> = order[..shape.passages_with_implicit].to_vec();

    let mut sentences = vec![1usize; n];
    let needed = shape.sentences_with_implicit - shape.passages_with_implicit;
    for _ in 0..needed {
        sentences[*implicit_passages.choose(&mut rng).unwrap()] += 1;
    }
    for _ in 0..(shape.sentences - n - needed) {
        sentences[rng.random_range(0..n)] += 1;
    }

    // Per passage, which sentences carry implicit units.
    let mut marked: Vec<Vec<bool>> = sentences.iter().map(|&k| vec![false; k]).collect();
    let mut extra_slots = Vec::new();
    for &p in &implicit_passages {
        marked[p][0] = true;
        extra_slots.extend((1..sentences[p]).map(|s| (p, s)));
    }
    extra_slots.shuffle(&mut rng);
    for &(p, s) in &extra_slots[..needed] {
        marked[p][s] = true;
    }

    let implicit_sentences: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| (0..sentences[p]).map(move |s| (p, s)))
        .filter(|&(p, s)| marked[p][s])
        .collect();
    let mut units: BTreeMap<(usize, usize), usize> =
        implicit_sentences.iter().map(|&k| (k, 1)).collect();
    for _ in 0..(shape.implicit_total - shape.sentences_with_implicit) {
        *units
            .get_mut(implicit_sentences.choose(&mut rng).unwrap())
            .unwrap() += 1;
    }
    let mut valid: Vec<bool> = (0..shape.implicit_total)
        .map(|i| i < shape.implicit_valid)
        .collect();
    valid.shuffle(&mut rng);
    let mut valid = valid.into_iter();

    let mut out = Vec::with_capacity(n);
    for (p, &count) in sentences.iter().enumerate() {
        let mut text = String::new();
        for s in 0..count {
            if s > 0 {
                text.push_str(" | ");
            }
            text.push_str(&format!(
                "[ {}:A {}:P {}:A",
                SUBJECTS.choose(&mut rng).unwrap(),
                VERBS.choose(&mut rng).unwrap(),
                OBJECTS.choose(&mut rng).unwrap()
            ));
            for _ in 0..units.get(&(p, s)).copied().unwrap_or(0) {
                if valid.next().unwrap() {
                    text.push_str(" IMP:A");
                } else {
                    text.push_str(&format!(
                        " [ the:F {}:E IMP:C ]:A",
                        ADJECTIVES.choose(&mut rng).unwrap()
                    ));
                }
            }
            text.push_str(" .:F ]:H");
        }
        out.push(bracketed(&passage_id(p), &text)?.0);
    }
    Ok(out)
}

pub fn original_corpus() -> Corpus {
    Corpus::new(
        generate_corpus(&ORIGINAL_SHAPE, ORIGINAL_SEED).expect("original shape is feasible"),
    )
}

/// Refined corpus with a confirmed category on every valid implicit unit,
/// distributed as [`REFINED_CATEGORY_COUNTS`].
pub fn refined_corpus() -> Corpus {
    let passages =
        generate_corpus(&REFINED_SHAPE, REFINED_SEED).expect("refined shape is feasible");
    let mut labels: Vec<ImplicitCategory> = REFINED_CATEGORY_COUNTS
        .iter()
        .flat_map(|&(c, k)| std::iter::repeat_n(c, k))
        .collect();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(REFINED_SEED));
    let mut labels = labels.into_iter();
    let docs: Vec<RefinementDocument> = passages
        .iter()
        .filter_map(|p| {
            let mut doc = RefinementDocument::new(p.id());
            for u in crate::graph::implicit_units(p)
                .into_iter()
                .filter(|u| u.valid)
            {
                doc.entries.push(RefinementEntry {
                    node_id: u.node,
                    category: labels.next(),
                    status: ReviewStatus::Confirmed,
                    note: String::new(),
                });
            }
            (!doc.is_empty()).then_some(doc)
        })
        .collect();
    Corpus::new(passages).with_refinements(docs)
}

const WORDS: [&str; 14] = [
    "food",
    "staff",
    "&",
    "<b>",
    "\"quoted\"",
    "it's",
    "caf\u{e9}",
    "na\u{ef}ve",
    "a>b",
    "price",
    "room",
    "town",
    "5%",
    "x&amp;y",
];
const RELATIONS: [&str; 8] = ["ate", "saw", "is", "went", "took", "left", "made", "paid"];

/// A random valid passage with one to three sentences, nested units,
/// implicit units (some outside Participant position) and remote edges
/// pointing back to earlier Scenes, possibly across sentences.
pub fn random_passage(seed: u64, id: &str) -> Passage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    let mut targets: Vec<String> = Vec::new();
    let mut fresh = 0;
    let mut name = |rng: &mut ChaCha8Rng, targets: &mut Vec<String>| {
        fresh += 1;
        let n = format!("n{fresh}");
        if rng.random_bool(0.7) {
            targets.push(n.clone());
        }
        n
    };
    let word = |rng: &mut ChaCha8Rng| *WORDS.choose(rng).unwrap();

    for s in 0..rng.random_range(1..=3) {
        if s > 0 {
            text.push_str(" | ");
        }
        let scenes = rng.random_range(1..=2);
        let mut closed = Vec::new();
        for k in 0..scenes {
            if k > 0 && rng.random_bool(0.5) {
                text.push_str(" and:L");
            }
            let mut scene = String::from(" [");
            if rng.random_bool(0.3) {
                scene.push_str(if rng.random_bool(0.5) {
                    " really:D"
                } else {
                    " do:F/D"
                });
            }
            let n = name(&mut rng, &mut closed);
            if rng.random_bool(0.5) {
                scene.push_str(&format!(" {}@{n}:A", word(&mut rng)));
            } else {
                scene.push_str(&format!(
                    " [ the:F {}:E {}:C ]@{n}:A",
                    word(&mut rng),
                    word(&mut rng)
                ));
            }
            match rng.random_range(0..3) {
                0 => scene.push_str(&format!(" {}:P", RELATIONS.choose(&mut rng).unwrap())),
                1 => scene.push_str(&format!(" {}:S", word(&mut rng))),
                _ => scene.push_str(&format!(
                    " [ {}:C {}:C ]:P",
                    RELATIONS.choose(&mut rng).unwrap(),
                    word(&mut rng)
                )),
            }
            if rng.random_bool(0.4) {
                let n = name(&mut rng, &mut closed);
                scene.push_str(&format!(
                    " [ {}:A {}:P ]@{n}:A",
                    word(&mut rng),
                    RELATIONS.choose(&mut rng).unwrap()
                ));
            } else if rng.random_bool(0.5) {
                let n = name(&mut rng, &mut closed);
                scene.push_str(&format!(" {}@{n}:A", word(&mut rng)));
            }
            if rng.random_bool(0.4) {
                scene.push_str(" IMP:A");
            }
            if rng.random_bool(0.1) {
                scene.push_str(" [ the:F IMP:C ]:E");
            }
            if !targets.is_empty() && rng.random_bool(0.4) {
                let t = targets.choose(&mut rng).unwrap();
                scene.push_str(&format!(" ~{t}:A"));
            }
            scene.push_str(" ]:H");
            text.push_str(&scene);
            targets.append(&mut closed);
        }
        if rng.random_bool(0.5) {
            text.push_str(" .:F");
        }
    }
    bracketed(id, &text)
        .unwrap_or_else(|e| panic!("generated passage {id}: {e}"))
        .0
}
