use proptest::prelude::*;

use ucca_refine::corpus::{
    parse_passage, parse_refinement, write_passage, write_refinement, ParseMode,
};
use ucca_refine::fixtures::{bracketed, mechanic_passage, random_passage};
use ucca_refine::graph::validate_graph;
use ucca_refine::refinement::{
    ImplicitCategory, RefinementDocument, RefinementEntry, ReviewStatus,
};
use ucca_refine::transform::{merge_sentences, split_passage, SentenceBoundaries};

fn sentences_of(p: &ucca_refine::Passage) -> SentenceBoundaries {
    SentenceBoundaries::from_tokens(p.tokens())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn write_parse_write_is_stable(seed in any::<u64>()) {
        let p = random_passage(seed, &format!("p{seed}"));
        let first = write_passage(&p).unwrap();
        let parsed = parse_passage(&first, ParseMode::Strict).unwrap();
        prop_assert_eq!(&parsed, &p);
        let second = write_passage(&parsed).unwrap();
        prop_assert_eq!(first, second);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_keeps_tokens_and_counts_conversions(seed in any::<u64>()) {
        let p = random_passage(seed, "doc");
        let (parts, log) = split_passage(&p, &sentences_of(&p)).unwrap();
        prop_assert_eq!(parts.len(), p.sentence_count());

        let texts: Vec<&str> = parts.iter().flat_map(|s| s.tokens()).map(|t| t.text.as_str()).collect();
        let original: Vec<&str> = p.tokens().iter().map(|t| t.text.as_str()).collect();
        prop_assert_eq!(texts, original);
        for part in &parts {
            prop_assert!(validate_graph(part).ok());
        }

        // Independent count of remotes whose parent Scene and target fall in
        // different sentences.
        let index = p.index();
        let crossing = p
            .edges()
            .iter()
            .filter(|e| e.is_remote())
            .filter(|e| index.sentence_of(&e.parent) != index.sentence_of(&e.child))
            .count();
        prop_assert_eq!(log.len(), crossing);
        let implicit_after: usize = parts.iter().map(|s| s.implicit_count()).sum();
        prop_assert_eq!(implicit_after, p.implicit_count() + log.len());
        let remote_after: usize = parts.iter().map(|s| s.remote_count()).sum();
        prop_assert_eq!(remote_after, p.remote_count() - log.len());

        let merged = merge_sentences(&parts).unwrap();
        prop_assert_eq!(merged.implicit_count(), p.implicit_count() + log.len());
        prop_assert_eq!(merged.tokens(), p.tokens());
        if log.is_empty() {
            prop_assert_eq!(&merged, &p);
        }

        let (again, log_again) = split_passage(&p, &sentences_of(&p)).unwrap();
        prop_assert_eq!(again, parts);
        prop_assert_eq!(log_again, log);
    }
}

#[test]
fn whole_passage_split_is_identity() {
    let p = mechanic_passage();
    let (parts, log) = split_passage(&p, &SentenceBoundaries::single(p.tokens().len())).unwrap();
    assert_eq!(parts, vec![p.clone()]);
    assert!(log.is_empty());
    assert_eq!(merge_sentences(&parts).unwrap(), p);
}

#[test]
fn cross_sentence_remote_becomes_unreviewed_implicit() {
    let (p, names) = bracketed(
        "two",
        "[ you@you:A should:F go:P ]:H .:F | [ ~you:A take:P [ the:F bus:C ]:A ]@second:H",
    )
    .unwrap();
    let (parts, log) = split_passage(&p, &sentences_of(&p)).unwrap();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[1].id(), "two#s1");
    assert_eq!(log.len(), 1);
    let entry = &log.entries[0];
    assert_eq!(entry.origin_scene, names["second"]);
    assert_eq!(entry.status, ReviewStatus::Unreviewed);
    let node = parts[1].node(&entry.implicit_node).unwrap();
    assert!(node.is_implicit());
    assert_eq!(parts[1].remote_count(), 0);

    let docs = log.refinements();
    assert_eq!(docs.len(), 1);
    assert_eq!(docs[0].passage_id, "two#s1");
    assert_eq!(docs[0].entries[0].category, None);
}

#[test]
fn unit_spanning_sentences_is_rejected() {
    let (p, _) = bracketed("span", "[ a:A [ b:C | c:C ]:P ]:H").unwrap();
    assert!(validate_graph(&p).ok());
    let err = split_passage(&p, &sentences_of(&p)).unwrap_err();
    assert!(err.to_string().contains("spans"));
}

#[test]
fn merge_rejects_foreign_parts() {
    let a = random_passage(1, "x");
    let b = random_passage(2, "y");
    assert!(merge_sentences(&[a.clone(), b]).is_err());
    assert!(merge_sentences(&[]).is_err());
    assert_eq!(merge_sentences(std::slice::from_ref(&a)).unwrap(), a);
}

#[test]
fn sidecar_round_trip() {
    let doc = RefinementDocument {
        passage_id: "p1".into(),
        version: 3,
        entries: vec![
            RefinementEntry {
                node_id: "1.5".into(),
                category: Some(ImplicitCategory::GenreBased),
                status: ReviewStatus::Confirmed,
                note: "checked".into(),
            },
            RefinementEntry {
                node_id: "1.9".into(),
                category: None,
                status: ReviewStatus::Unreviewed,
                note: String::new(),
            },
        ],
    };
    let bytes = write_refinement(&doc);
    let back = parse_refinement(&bytes).unwrap();
    assert_eq!(back, doc);
    assert_eq!(write_refinement(&back), bytes);
}

#[test]
fn generator_covers_both_split_cases() {
    let mut converted = 0;
    let mut lossless_multi = 0;
    for seed in 0..200 {
        let p = random_passage(seed, "g");
        let (parts, log) = split_passage(&p, &sentences_of(&p)).unwrap();
        if !log.is_empty() {
            converted += 1;
        } else if parts.len() > 1 {
            lossless_multi += 1;
        }
    }
    assert!(converted > 10, "{converted}");
    assert!(lossless_multi > 10, "{lossless_multi}");
}
