//! Passage XML.
//!
//! The layout follows the published UCCA corpus files: a terminal layer
//! (`layerID="0"`) holding one `Word` node per token and a foundational layer
//! (`layerID="1"`) holding units, their labelled edges and the `implicit` and
//! `remote` flags.
//!
//! ```xml
//! <?xml version="1.0" encoding="UTF-8"?>
//! <root passageID="p1">
//!   <layer layerID="0">
//!     <node ID="0.1" type="Word">
//!       <attributes sentence="0" text="Thanks"/>
//!     </node>
//!   </layer>
//!   <layer layerID="1" rootID="1.1">
//!     <node ID="1.1" type="FN">
//!       <edge toID="1.2" type="A"/>
//!       <edge toID="0.1" type="P"/>
//!     </node>
//!     <node ID="1.2" type="FN">
//!       <attributes implicit="True"/>
//!     </node>
//!   </layer>
//! </root>
//! ```
//!
//! Edge labels are single category codes joined by `/` in code order. Remote
//! edges carry `<attributes remote="True"/>`. Writing is canonical: two-space
//! indentation, LF line ends, attributes sorted by name.

use std::collections::HashMap;
use std::fmt::Write as _;

use quick_xml::events::{BytesStart, Event};
use quick_xml::reader::Reader;
use quick_xml::XmlVersion;

use super::{CorpusError, ParseMode, Position};
use crate::graph::{validate_graph, CategorySet, Edge, EdgeKind, Node, NodeKind, Passage, Token};

/// Root id assumed when the foundational layer omits `rootID` (lenient mode).
pub const DEFAULT_ROOT_ID: &str = "1.1";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Layer {
    Terminals,
    Foundational,
}

struct PendingEdge {
    parent: String,
    child: String,
    categories: CategorySet,
    kind: EdgeKind,
    at: Position,
}

enum Scope {
    Root,
    Layer(Layer),
    TerminalNode,
    UnitNode,
    Edge,
    Attributes,
    Ignored,
}

struct Builder<'a> {
    text: &'a str,
    mode: ParseMode,
    passage_id: Option<String>,
    root_id: Option<String>,
    tokens: Vec<Token>,
    nodes: Vec<Node>,
    declared: HashMap<String, Position>,
    edges: Vec<PendingEdge>,
}

impl<'a> Builder<'a> {
    /// Position of the first non-blank byte at or after `offset`, i.e. the
    /// start of the tag read from there.
    fn pos(&self, offset: u64) -> Position {
        let offset = (offset as usize).min(self.text.len());
        let skipped = self.text.as_bytes()[offset..]
            .iter()
            .take_while(|b| b.is_ascii_whitespace())
            .count();
        Position::from_offset(self.text, offset + skipped)
    }

    fn attrs(&self, e: &BytesStart<'_>, at: u64) -> Result<Vec<(String, String)>, CorpusError> {
        let mut out = Vec::new();
        for a in e.attributes() {
            let a = a.map_err(|err| CorpusError::Syntax {
                at: self.pos(at),
                message: err.to_string(),
            })?;
            let key = a.key.as_ref().to_string();
            let value = a
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|err| CorpusError::Syntax {
                    at: self.pos(at),
                    message: err.to_string(),
                })?
                .into_owned();
            out.push((key, value));
        }
        Ok(out)
    }

    fn unknown_attrs(
        &self,
        attrs: &[(String, String)],
        allowed: &[&str],
        element: &str,
        at: u64,
    ) -> Result<(), CorpusError> {
        if self.mode == ParseMode::Lenient {
            return Ok(());
        }
        match attrs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(CorpusError::Schema {
                at: self.pos(at),
                message: format!("unknown attribute '{k}' on <{element}>"),
            }),
            None => Ok(()),
        }
    }

    fn require(
        &self,
        attrs: &[(String, String)],
        key: &str,
        element: &str,
        at: u64,
    ) -> Result<String, CorpusError> {
        get(attrs, key)
            .map(str::to_string)
            .ok_or_else(|| CorpusError::Schema {
                at: self.pos(at),
                message: format!("<{element}> is missing attribute '{key}'"),
            })
    }

    fn flag(&self, value: &str, at: u64) -> Result<bool, CorpusError> {
        match value {
            "True" | "true" => Ok(true),
            "False" | "false" => Ok(false),
            other => Err(CorpusError::Schema {
                at: self.pos(at),
                message: format!("expected True or False, found '{other}'"),
            }),
        }
    }

    fn declare(&mut self, id: &str, at: u64) -> Result<(), CorpusError> {
        let position = self.pos(at);
        if self.declared.insert(id.to_string(), position).is_some() {
            return Err(CorpusError::DuplicateNode {
                at: position,
                id: id.to_string(),
            });
        }
        Ok(())
    }
}

fn get<'v>(attrs: &'v [(String, String)], key: &str) -> Option<&'v str> {
    attrs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

/// Parses a passage document.
pub fn parse_passage(bytes: &[u8], mode: ParseMode) -> Result<Passage, CorpusError> {
    let text = std::str::from_utf8(bytes).map_err(|err| {
        let offset = err.valid_up_to();
        let prefix = std::str::from_utf8(&bytes[..offset]).unwrap_or_default();
        CorpusError::Syntax {
            at: Position::from_offset(prefix, offset),
            message: "input is not valid UTF-8".to_string(),
        }
    })?;
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut b = Builder {
        text,
        mode,
        passage_id: None,
        root_id: None,
        tokens: Vec::new(),
        nodes: Vec::new(),
        declared: HashMap::new(),
        edges: Vec::new(),
    };
    let mut stack: Vec<Scope> = Vec::new();
    let mut current_unit: Option<usize> = None;
    let mut seen_root = false;

    loop {
        let at = reader.buffer_position();
        let event = reader.read_event().map_err(|err| CorpusError::Syntax {
            at: Position::from_offset(text, reader.error_position() as usize),
            message: err.to_string(),
        })?;
        let (start, is_empty) = match &event {
            Event::Start(e) => (Some(e.clone()), false),
            Event::Empty(e) => (Some(e.clone()), true),
            Event::End(_) => {
                if let Some(Scope::UnitNode | Scope::TerminalNode) = stack.pop() {
                    current_unit = None;
                }
                continue;
            }
            Event::Text(t) => {
                let ignored = matches!(stack.last(), Some(Scope::Ignored));
                if !ignored && mode == ParseMode::Strict && !t.trim().is_empty() {
                    return Err(CorpusError::Schema {
                        at: b.pos(at),
                        message: "unexpected text content".to_string(),
                    });
                }
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let e = start.expect("start event");
        let name = e.name().as_ref().to_string();
        let attrs = b.attrs(&e, at)?;

        let scope = match (stack.last(), name.as_str()) {
            (Some(Scope::Ignored), _) => Scope::Ignored,
            (None, "root") => {
                if seen_root {
                    return Err(CorpusError::Schema {
                        at: b.pos(at),
                        message: "more than one <root> element".to_string(),
                    });
                }
                seen_root = true;
                b.unknown_attrs(&attrs, &["passageID"], "root", at)?;
                b.passage_id = Some(b.require(&attrs, "passageID", "root", at)?);
                Scope::Root
            }
            (Some(Scope::Root), "layer") => {
                b.unknown_attrs(&attrs, &["layerID", "rootID"], "layer", at)?;
                match b.require(&attrs, "layerID", "layer", at)?.as_str() {
                    "0" => Scope::Layer(Layer::Terminals),
                    "1" => {
                        match get(&attrs, "rootID") {
                            Some(r) => b.root_id = Some(r.to_string()),
                            None if mode == ParseMode::Strict => {
                                return Err(CorpusError::Schema {
                                    at: b.pos(at),
                                    message: "foundational <layer> is missing attribute 'rootID'"
                                        .to_string(),
                                })
                            }
                            None => {}
                        }
                        Scope::Layer(Layer::Foundational)
                    }
                    _ if mode == ParseMode::Lenient => Scope::Ignored,
                    other => {
                        return Err(CorpusError::Schema {
                            at: b.pos(at),
                            message: format!("unknown layerID '{other}'"),
                        })
                    }
                }
            }
            (Some(Scope::Layer(layer)), "node") => {
                let layer = *layer;
                b.unknown_attrs(&attrs, &["ID", "type"], "node", at)?;
                let id = b.require(&attrs, "ID", "node", at)?;
                let kind = b.require(&attrs, "type", "node", at)?;
                b.declare(&id, at)?;
                match layer {
                    Layer::Terminals => {
                        if !matches!(kind.as_str(), "Word" | "Punctuation") {
                            return Err(CorpusError::Schema {
                                at: b.pos(at),
                                message: format!("terminal node type must be Word, found '{kind}'"),
                            });
                        }
                        let index = b.tokens.len();
                        b.tokens.push(Token::new(index, String::new(), 0));
                        b.nodes.push(Node::terminal(id, index));
                        current_unit = Some(b.nodes.len() - 1);
                        Scope::TerminalNode
                    }
                    Layer::Foundational => {
                        if mode == ParseMode::Strict && kind != "FN" {
                            return Err(CorpusError::Schema {
                                at: b.pos(at),
                                message: format!("unit node type must be FN, found '{kind}'"),
                            });
                        }
                        b.nodes.push(Node::internal(id));
                        current_unit = Some(b.nodes.len() - 1);
                        Scope::UnitNode
                    }
                }
            }
            (Some(Scope::TerminalNode), "attributes") => {
                b.unknown_attrs(&attrs, &["text", "sentence"], "attributes", at)?;
                let text_value = b.require(&attrs, "text", "attributes", at)?;
                let sentence = match get(&attrs, "sentence") {
                    Some(s) => s.parse::<usize>().map_err(|_| CorpusError::Schema {
                        at: b.pos(at),
                        message: format!("sentence must be a non-negative integer, found '{s}'"),
                    })?,
                    None if mode == ParseMode::Strict => {
                        return Err(CorpusError::Schema {
                            at: b.pos(at),
                            message: "<attributes> is missing attribute 'sentence'".to_string(),
                        })
                    }
                    None => 0,
                };
                let token = b.tokens.last_mut().expect("terminal node pushed a token");
                token.text = text_value;
                token.sentence_index = sentence;
                Scope::Attributes
            }
            (Some(Scope::UnitNode), "attributes") => {
                b.unknown_attrs(&attrs, &["implicit"], "attributes", at)?;
                if let Some(v) = get(&attrs, "implicit") {
                    if b.flag(v, at)? {
                        let i = current_unit.expect("inside a unit node");
                        b.nodes[i].kind = NodeKind::Implicit;
                    }
                }
                Scope::Attributes
            }
            (Some(Scope::UnitNode), "edge") => {
                b.unknown_attrs(&attrs, &["toID", "type"], "edge", at)?;
                let child = b.require(&attrs, "toID", "edge", at)?;
                let label = b.require(&attrs, "type", "edge", at)?;
                let categories: CategorySet = label.parse().map_err(|err| CorpusError::Schema {
                    at: b.pos(at),
                    message: format!("bad edge type '{label}': {err}"),
                })?;
                let i = current_unit.expect("inside a unit node");
                b.edges.push(PendingEdge {
                    parent: b.nodes[i].id.clone(),
                    child,
                    categories,
                    kind: EdgeKind::Primary,
                    at: b.pos(at),
                });
                Scope::Edge
            }
            (Some(Scope::Edge), "attributes") => {
                b.unknown_attrs(&attrs, &["remote"], "attributes", at)?;
                if let Some(v) = get(&attrs, "remote") {
                    if b.flag(v, at)? {
                        b.edges.last_mut().expect("inside an edge").kind = EdgeKind::Remote;
                    }
                }
                Scope::Attributes
            }
            (_, other) => {
                if mode == ParseMode::Strict {
                    return Err(CorpusError::Schema {
                        at: b.pos(at),
                        message: format!("unexpected element <{other}>"),
                    });
                }
                Scope::Ignored
            }
        };
        if !is_empty {
            stack.push(scope);
        } else if matches!(scope, Scope::UnitNode | Scope::TerminalNode) {
            current_unit = None;
        }
    }

    if !stack.is_empty() {
        return Err(CorpusError::Syntax {
            at: Position::from_offset(text, text.len()),
            message: "unexpected end of document".to_string(),
        });
    }
    let passage_id = b.passage_id.ok_or_else(|| CorpusError::Schema {
        at: Position::from_offset(text, 0),
        message: "document has no <root> element".to_string(),
    })?;
    for e in &b.edges {
        if !b.declared.contains_key(&e.child) {
            return Err(CorpusError::Reference {
                at: e.at,
                id: e.child.clone(),
            });
        }
    }
    let root = b.root_id.unwrap_or_else(|| DEFAULT_ROOT_ID.to_string());
    if !b.declared.contains_key(&root) {
        return Err(CorpusError::Reference {
            at: Position::from_offset(text, 0),
            id: root,
        });
    }
    let edges = b
        .edges
        .into_iter()
        .map(|e| Edge {
            parent: e.parent,
            child: e.child,
            categories: e.categories,
            kind: e.kind,
        })
        .collect();
    Ok(Passage::new(passage_id, b.tokens, b.nodes, edges, root))
}

/// Canonical serialization. Refuses passages that fail validation.
pub fn write_passage(p: &Passage) -> Result<Vec<u8>, CorpusError> {
    let report = validate_graph(p);
    if !report.ok() {
        return Err(CorpusError::InvalidPassage(report));
    }
    Ok(write_passage_unchecked(p).into_bytes())
}

fn escape(s: &str) -> String {
    let escaped = quick_xml::escape::escape(s);
    let mut out = String::with_capacity(escaped.len());
    for ch in escaped.chars() {
        match ch {
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn write_passage_unchecked(p: &Passage) -> String {
    let index = p.index();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<root passageID=\"{}\">", escape(p.id()));

    out.push_str("  <layer layerID=\"0\">\n");
    for n in p.nodes() {
        if let NodeKind::Terminal(t) = n.kind {
            let token = &p.tokens()[t];
            let _ = writeln!(out, "    <node ID=\"{}\" type=\"Word\">", escape(&n.id));
            let _ = writeln!(
                out,
                "      <attributes sentence=\"{}\" text=\"{}\"/>",
                token.sentence_index,
                escape(&token.text)
            );
            out.push_str("    </node>\n");
        }
    }
    out.push_str("  </layer>\n");

    let _ = writeln!(
        out,
        "  <layer layerID=\"1\" rootID=\"{}\">",
        escape(p.root())
    );
    for n in p.nodes().iter().filter(|n| n.token().is_none()) {
        let edges: Vec<&Edge> = index.children(&n.id).collect();
        if edges.is_empty() && !n.is_implicit() {
            let _ = writeln!(out, "    <node ID=\"{}\" type=\"FN\"/>", escape(&n.id));
            continue;
        }
        let _ = writeln!(out, "    <node ID=\"{}\" type=\"FN\">", escape(&n.id));
        if n.is_implicit() {
            out.push_str("      <attributes implicit=\"True\"/>\n");
        }
        for e in edges {
            let head = format!(
                "<edge toID=\"{}\" type=\"{}\"",
                escape(&e.child),
                e.categories
            );
            if e.is_remote() {
                let _ = writeln!(out, "      {head}>");
                out.push_str("        <attributes remote=\"True\"/>\n");
                out.push_str("      </edge>\n");
            } else {
                let _ = writeln!(out, "      {head}/>");
            }
        }
        out.push_str("    </node>\n");
    }
    out.push_str("  </layer>\n");
    out.push_str("</root>\n");
    out
}
