use std::fs;

use ucca_refine::corpus::{
    parse_passage, parse_refinement, read_refinement_or_empty, write_passage,
    write_refinement_file, CorpusError, CorpusHandle, ParseMode,
};
use ucca_refine::fixtures::{mechanic_passage, random_passage};
use ucca_refine::refinement::{
    ImplicitCategory, RefinementDocument, RefinementEntry, ReviewStatus,
};

const MINIMAL: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<root passageID="t1">
  <layer layerID="0">
    <node ID="0.1" type="Word">
      <attributes sentence="0" text="Thanks"/>
    </node>
  </layer>
  <layer layerID="1" rootID="1.1">
    <node ID="1.1" type="FN">
      <edge toID="1.2" type="H"/>
    </node>
    <node ID="1.2" type="FN">
      <edge toID="1.3" type="A"/>
      <edge toID="0.1" type="P"/>
    </node>
    <node ID="1.3" type="FN">
      <attributes implicit="True"/>
    </node>
  </layer>
</root>
"#;

#[test]
fn parses_documented_layout() {
    let p = parse_passage(MINIMAL.as_bytes(), ParseMode::Strict).unwrap();
    assert_eq!(p.id(), "t1");
    assert_eq!(p.tokens()[0].text, "Thanks");
    assert_eq!(p.implicit_count(), 1);
    let again = write_passage(&p).unwrap();
    assert_eq!(parse_passage(&again, ParseMode::Strict).unwrap(), p);
}

#[test]
fn undeclared_target_is_a_reference_error_with_position() {
    let broken = MINIMAL.replace(r#"toID="1.3""#, r#"toID="1.9""#);
    match parse_passage(broken.as_bytes(), ParseMode::Strict) {
        Err(CorpusError::Reference { at, id }) => {
            assert_eq!(id, "1.9");
            assert_eq!(at.line, 13);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn malformed_xml_is_a_syntax_error() {
    let broken = MINIMAL.replace("</layer>\n  <layer", "</lay>\n  <layer");
    assert!(matches!(
        parse_passage(broken.as_bytes(), ParseMode::Strict),
        Err(CorpusError::Syntax { .. })
    ));
}

#[test]
fn unknown_elements_depend_on_mode() {
    let extra = MINIMAL.replace(
        r#"<node ID="1.3" type="FN">"#,
        r#"<node ID="1.3" type="FN"><extra note="x"/>"#,
    );
    assert!(matches!(
        parse_passage(extra.as_bytes(), ParseMode::Strict),
        Err(CorpusError::Schema { .. })
    ));
    assert!(parse_passage(extra.as_bytes(), ParseMode::Lenient).is_ok());
}

#[test]
fn duplicate_node_ids_are_rejected() {
    let dup = MINIMAL.replace(r#"<node ID="1.3""#, r#"<node ID="1.2""#);
    assert!(parse_passage(dup.as_bytes(), ParseMode::Strict).is_err());
}

#[test]
fn sidecar_schema_errors() {
    let unknown = br#"{"passage_id":"p","entries":[{"node_id":"1.2","category":"Cataphoric","status":"confirmed"}]}"#;
    assert!(matches!(
        parse_refinement(unknown),
        Err(CorpusError::UnknownCategory(_))
    ));
    let dup = br#"{"passage_id":"p","entries":[
        {"node_id":"1.2","category":"Deictic","status":"confirmed"},
        {"node_id":"1.2","category":"Generic","status":"confirmed"}]}"#;
    assert!(matches!(
        parse_refinement(dup),
        Err(CorpusError::DuplicateEntry(_))
    ));
    let missing =
        br#"{"passage_id":"p","entries":[{"node_id":"1.2","category":null,"status":"confirmed"}]}"#;
    assert!(matches!(
        parse_refinement(missing),
        Err(CorpusError::MissingCategory { .. })
    ));
}

#[test]
fn directory_handle() {
    let dir = tempfile::tempdir().unwrap();
    let passages = [
        mechanic_passage(),
        random_passage(7, "r7"),
        random_passage(8, "r8"),
    ];
    for p in &passages {
        fs::write(
            dir.path().join(format!("{}.xml", p.id())),
            write_passage(p).unwrap(),
        )
        .unwrap();
    }
    let handle = CorpusHandle::open(dir.path(), ParseMode::Strict).unwrap();
    assert_eq!(handle.len(), 3);
    assert_eq!(handle.load("r7").unwrap(), passages[1]);
    assert!(handle.load("nope").is_err());

    let mut doc = RefinementDocument::new("r7");
    doc.entries.push(RefinementEntry {
        node_id: "1.2".into(),
        category: Some(ImplicitCategory::Deictic),
        status: ReviewStatus::Suggested,
        note: String::new(),
    });
    write_refinement_file(dir.path(), &doc).unwrap();
    assert_eq!(read_refinement_or_empty(dir.path(), "r7").unwrap(), doc);
    assert!(read_refinement_or_empty(dir.path(), "r8")
        .unwrap()
        .is_empty());
    let all = handle.load_refinements(dir.path()).unwrap();
    assert_eq!(all.len(), 3);

    fs::write(
        dir.path().join("copy.xml"),
        write_passage(&passages[1]).unwrap(),
    )
    .unwrap();
    assert!(matches!(
        CorpusHandle::open(dir.path(), ParseMode::Strict),
        Err(CorpusError::DuplicatePassage { .. })
    ));
}
