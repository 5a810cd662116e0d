use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::category::CategorySet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub text: String,
    pub sentence_index: usize,
}

impl Token {
    pub fn new(index: usize, text: impl Into<String>, sentence_index: usize) -> Self {
        Token {
            index,
            text: text.into(),
            sentence_index,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "token", rename_all = "lowercase")]
pub enum NodeKind {
    Internal,
    Terminal(usize),
    Implicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
}

impl Node {
    pub fn internal(id: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            kind: NodeKind::Internal,
        }
    }

    pub fn terminal(id: impl Into<String>, token: usize) -> Self {
        Node {
            id: id.into(),
            kind: NodeKind::Terminal(token),
        }
    }

    pub fn implicit(id: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            kind: NodeKind::Implicit,
        }
    }

    pub fn is_implicit(&self) -> bool {
        self.kind == NodeKind::Implicit
    }

    pub fn is_internal(&self) -> bool {
        self.kind == NodeKind::Internal
    }

    pub fn token(&self) -> Option<usize> {
        match self.kind {
            NodeKind::Terminal(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Primary,
    Remote,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub parent: String,
    pub child: String,
    pub categories: CategorySet,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn primary(
        parent: impl Into<String>,
        child: impl Into<String>,
        categories: impl Into<CategorySet>,
    ) -> Self {
        Edge {
            parent: parent.into(),
            child: child.into(),
            categories: categories.into(),
            kind: EdgeKind::Primary,
        }
    }

    pub fn remote(
        parent: impl Into<String>,
        child: impl Into<String>,
        categories: impl Into<CategorySet>,
    ) -> Self {
        Edge {
            parent: parent.into(),
            child: child.into(),
            categories: categories.into(),
            kind: EdgeKind::Remote,
        }
    }

    pub fn is_primary(&self) -> bool {
        self.kind == EdgeKind::Primary
    }

    pub fn is_remote(&self) -> bool {
        self.kind == EdgeKind::Remote
    }

    /// Stable identity used for diagnostics and derived ids.
    pub fn label(&self) -> String {
        let arrow = if self.is_remote() { "~>" } else { "->" };
        format!(
            "{}{}{}[{}]",
            self.parent, arrow, self.child, self.categories
        )
    }
}

/// A passage graph in canonical order.
///
/// Construction normalizes node and edge order: terminals come first in
/// token order, then the remaining nodes in primary pre-order from the root
/// (unreachable nodes keep their relative input order at the end), and edges
/// are grouped by parent in node order while keeping their relative order
/// within a parent. Two passages describing the same graph with the same
/// per-parent child order therefore compare equal and serialize identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passage {
    id: String,
    tokens: Vec<Token>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    root: String,
}

impl Passage {
    pub fn new(
        id: impl Into<String>,
        tokens: Vec<Token>,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        root: impl Into<String>,
    ) -> Self {
        let root = root.into();
        let (nodes, edges) = canonicalize(nodes, edges, &root);
        Passage {
            id: id.into(),
            tokens,
            nodes,
            edges,
            root,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn implicit_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_implicit()).count()
    }

    pub fn remote_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_remote()).count()
    }

    /// Number of distinct sentence indices among the tokens.
    pub fn sentence_count(&self) -> usize {
        let mut seen: Vec<usize> = self.tokens.iter().map(|t| t.sentence_index).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Decomposes the passage into its parts, for building a modified copy.
    pub fn into_parts(self) -> (String, Vec<Token>, Vec<Node>, Vec<Edge>, String) {
        (self.id, self.tokens, self.nodes, self.edges, self.root)
    }

    pub fn index(&self) -> PassageIndex<'_> {
        PassageIndex::new(self)
    }
}

fn canonicalize(nodes: Vec<Node>, edges: Vec<Edge>, root: &str) -> (Vec<Node>, Vec<Edge>) {
    let mut first_pos: HashMap<&str, usize> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        first_pos.entry(n.id.as_str()).or_insert(i);
    }
    let mut primary_children: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in edges.iter().filter(|e| e.is_primary()) {
        primary_children
            .entry(e.parent.as_str())
            .or_default()
            .push(e.child.as_str());
    }

    let mut order: Vec<usize> = Vec::with_capacity(nodes.len());
    let mut placed = vec![false; nodes.len()];

    let mut terminals: Vec<usize> = (0..nodes.len())
        .filter(|&i| matches!(nodes[i].kind, NodeKind::Terminal(_)))
        .collect();
    terminals.sort_by_key(|&i| nodes[i].token());
    for i in terminals {
        placed[i] = true;
        order.push(i);
    }

    let mut stack: Vec<&str> = vec![root];
    while let Some(id) = stack.pop() {
        if let Some(&i) = first_pos.get(id) {
            if placed[i] {
                continue;
            }
            placed[i] = true;
            order.push(i);
        } else {
            continue;
        }
        if let Some(children) = primary_children.get(id) {
            stack.extend(children.iter().rev());
        }
    }
    for (i, done) in placed.iter().enumerate() {
        if !done {
            order.push(i);
        }
    }

    let mut slots: Vec<Option<Node>> = nodes.into_iter().map(Some).collect();
    let nodes: Vec<Node> = order.iter().map(|&i| slots[i].take().unwrap()).collect();

    let mut position: HashMap<&str, usize> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        position.entry(n.id.as_str()).or_insert(i);
    }
    let mut keyed: Vec<(usize, Edge)> = edges
        .into_iter()
        .map(|e| {
            (
                position
                    .get(e.parent.as_str())
                    .copied()
                    .unwrap_or(usize::MAX),
                e,
            )
        })
        .collect();
    keyed.sort_by_key(|(k, _)| *k);
    let edges = keyed.into_iter().map(|(_, e)| e).collect();
    (nodes, edges)
}

/// Lookup tables over a passage, built on demand.
pub struct PassageIndex<'a> {
    passage: &'a Passage,
    by_id: HashMap<&'a str, usize>,
    outgoing: HashMap<&'a str, Vec<usize>>,
    primary_parent: HashMap<&'a str, usize>,
}

impl<'a> PassageIndex<'a> {
    fn new(passage: &'a Passage) -> Self {
        let mut by_id = HashMap::new();
        for (i, n) in passage.nodes.iter().enumerate() {
            by_id.entry(n.id.as_str()).or_insert(i);
        }
        let mut outgoing: HashMap<&str, Vec<usize>> = HashMap::new();
        let mut primary_parent = HashMap::new();
        for (i, e) in passage.edges.iter().enumerate() {
            outgoing.entry(e.parent.as_str()).or_default().push(i);
            if e.is_primary() {
                primary_parent.entry(e.child.as_str()).or_insert(i);
            }
        }
        PassageIndex {
            passage,
            by_id,
            outgoing,
            primary_parent,
        }
    }

    pub fn passage(&self) -> &'a Passage {
        self.passage
    }

    pub fn node(&self, id: &str) -> Option<&'a Node> {
        self.by_id.get(id).map(|&i| &self.passage.nodes[i])
    }

    /// Outgoing edges of `id` (primary and remote) in canonical order.
    pub fn children(&self, id: &str) -> impl Iterator<Item = &'a Edge> + '_ {
        self.outgoing
            .get(id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.passage.edges[i])
    }

    pub fn primary_children(&self, id: &str) -> impl Iterator<Item = &'a Edge> + '_ {
        self.children(id).filter(|e| e.is_primary())
    }

    pub fn primary_parent_edge(&self, id: &str) -> Option<&'a Edge> {
        self.primary_parent.get(id).map(|&i| &self.passage.edges[i])
    }

    /// Nodes reachable from the root through primary edges, in pre-order.
    pub fn preorder(&self) -> Vec<&'a Node> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.passage.root.as_str()];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            let Some(node) = self.node(id) else { continue };
            out.push(node);
            let children: Vec<&str> = self
                .primary_children(id)
                .map(|e| e.child.as_str())
                .collect();
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// Token indices reached from `id` through primary edges, sorted.
    pub fn yield_tokens(&self, id: &str) -> Vec<usize> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur) {
                continue;
            }
            if let Some(t) = self.node(cur).and_then(Node::token) {
                out.push(t);
            }
            stack.extend(self.primary_children(cur).map(|e| e.child.as_str()));
        }
        out.sort_unstable();
        out
    }

    pub fn first_token(&self, id: &str) -> Option<usize> {
        self.yield_tokens(id).first().copied()
    }

    /// Sentence of a node: that of its first yielded token, or of the nearest
    /// primary ancestor with a non-empty yield.
    pub fn sentence_of(&self, id: &str) -> Option<usize> {
        let mut cur = id;
        for _ in 0..=self.passage.nodes.len() {
            if let Some(t) = self.first_token(cur) {
                return self.passage.tokens.get(t).map(|t| t.sentence_index);
            }
            cur = self.primary_parent_edge(cur)?.parent.as_str();
        }
        None
    }

    pub fn token_text(&self, index: usize) -> Option<&'a str> {
        self.passage.tokens.get(index).map(|t| t.text.as_str())
    }
}
