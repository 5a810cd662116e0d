mod common;

use std::fs;

use common::{cli, fixture, measure, s, write_corpus};
use ucca_refine::corpus::{parse_passage, read_refinement_or_empty, ParseMode};
use ucca_refine::fixtures::{
    bracketed, mechanic_names, mechanic_passage, original_corpus, refined_corpus, REFINED_SHAPE,
};
use ucca_refine::stats::Corpus;
use ucca_refine::ReviewStatus;

#[test]
fn exit_statuses_per_fixture_class() {
    let ok = cli(&["validate", s(&fixture("mechanic.xml"))]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert_eq!(ok.stdout.trim(), "1 passage, 0 violations");

    let bad = cli(&["validate", s(&fixture("missing_process.xml"))]);
    assert_eq!(bad.code, 1);
    assert!(
        bad.stdout.contains("scene-no-main-relation [1.5]"),
        "{}",
        bad.stdout
    );
    assert!(bad.stdout.ends_with("1 passage, 1 violation\n"));

    let broken = cli(&["validate", s(&fixture("dangling.xml"))]);
    assert_eq!(broken.code, 2);
    assert!(
        broken.stderr.contains("reference error at 39:7"),
        "{}",
        broken.stderr
    );
    assert!(broken.stdout.is_empty());

    let missing = cli(&["validate", "/nonexistent/passage.xml"]);
    assert_eq!(missing.code, 2);
}

#[test]
fn checked_in_fixture_is_the_mechanic_passage() {
    let bytes = fs::read(fixture("mechanic.xml")).unwrap();
    assert_eq!(
        parse_passage(&bytes, ParseMode::Strict).unwrap(),
        mechanic_passage()
    );
}

#[test]
fn strict_sidecar_validation() {
    let dir = tempfile::tempdir().unwrap();
    let refs = dir.path();
    let mechanic = fixture("mechanic.xml");
    let lax = cli(&["validate", s(&mechanic), "--refinements", s(refs)]);
    assert_eq!(lax.code, 0);
    let strict = cli(&[
        "validate",
        "--strict",
        s(&mechanic),
        "--refinements",
        s(refs),
    ]);
    assert_eq!(strict.code, 1);
    assert_eq!(strict.stdout.matches("uncategorized-implicit").count(), 2);
}

#[test]
fn stats_and_diff_on_generated_corpora() {
    let dir = tempfile::tempdir().unwrap();
    let (orig, orig_refs) = write_corpus(&dir.path().join("original"), &original_corpus());
    let (refined, refs) = write_corpus(&dir.path().join("refined"), &refined_corpus());

    let r = cli(&[
        "stats",
        s(&refined),
        "--refinements",
        s(&refs),
        "--format",
        "delimited",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row = [
        "passages",
        "passages with implicit",
        "sentences",
        "sentences with implicit",
        "implicit units",
        "valid implicit units",
    ]
    .map(|m| measure(&r.stdout, m) as usize);
    assert_eq!(row, REFINED_SHAPE.row());
    assert!(r.stdout.contains("Deictic\t61\t17.53"));

    let text = cli(&["stats", s(&refined), "--refinements", s(&refs), "--compare"]);
    assert!(text.stdout.contains("FiGref"));

    let strict = cli(&[
        "stats",
        "--strict",
        s(&orig),
        "--refinements",
        s(&orig_refs),
    ]);
    assert_eq!(strict.code, 1);

    let d = cli(&[
        "diff",
        s(&orig),
        s(&refined),
        "--original-refinements",
        s(&orig_refs),
        "--refinements",
        s(&refs),
        "--format",
        "tsv",
    ]);
    assert_eq!(d.code, 0, "{}", d.stderr);
    assert_eq!(measure(&d.stdout, "valid implicit units"), 250);
    assert_eq!(measure(&d.stdout, "passages with implicit"), 13);
}

#[test]
fn kappa_from_label_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tsv");
    let b = dir.path().join("b.tsv");
    fs::write(&a, "# first rater\nx1\tDeictic\nx2\tGeneric\n").unwrap();
    fs::write(&b, "x1\tGeneric\nx2\tDeictic\n").unwrap();
    let r = cli(&["kappa", s(&a), s(&b), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["kappa"].as_f64(), Some(-1.0));

    fs::write(&b, "x1\tCataphoric\n").unwrap();
    assert_eq!(cli(&["kappa", s(&a), s(&b)]).code, 2);
}

#[test]
fn split_writes_parts_and_converted_sidecars() {
    let (p, _) = bracketed(
        "two",
        "[ you@you:A should:F go:P ]:H .:F | [ ~you:A take:P [ the:F bus:C ]:A ]:H",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let corpus = Corpus::new(vec![p]);
    let (passages, _) = write_corpus(dir.path(), &corpus);
    let out = dir.path().join("split");
    let r = cli(&["split", s(&passages.join("two.xml")), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim(), "two: 2 sentences, 1 converted remote");
    let v = cli(&["validate", s(&out)]);
    assert_eq!(v.stdout.trim(), "2 passages, 0 violations");
    let doc = read_refinement_or_empty(&out, "two#s1").unwrap();
    assert_eq!(doc.entries.len(), 1);
    assert_eq!(doc.entries[0].status, ReviewStatus::Unreviewed);
}

#[test]
fn suggest_writes_files_and_applies_to_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("suggestions");
    let refs = dir.path().join("refs");
    fs::create_dir_all(&refs).unwrap();
    let mechanic = fixture("mechanic.xml");
    let r = cli(&[
        "suggest",
        s(&mechanic),
        "--out",
        s(&out),
        "--apply",
        s(&refs),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(out.join("mechanic.suggestions.json").exists());
    let doc = read_refinement_or_empty(&refs, "mechanic").unwrap();
    assert_eq!(doc.version, 1);
    let names = mechanic_names();
    for n in ["imp1", "imp2"] {
        let e = doc.entry(&names[n]).expect("suggested entry");
        assert_eq!(e.status, ReviewStatus::Suggested);
    }
    // A second run changes nothing.
    cli(&["suggest", s(&mechanic), "--apply", s(&refs)]);
    assert_eq!(read_refinement_or_empty(&refs, "mechanic").unwrap(), doc);

    let unknown = cli(&["suggest", s(&mechanic), "--genre", "poetry"]);
    assert_eq!(unknown.code, 2);
}
