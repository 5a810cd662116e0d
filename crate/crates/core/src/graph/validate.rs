use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::category::{CategorySet, EdgeCategory};
use super::passage::{Edge, NodeKind, Passage};

/// Stable diagnostic codes. Ordering of reports follows declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleCode {
    InvalidRoot,
    DuplicateNodeId,
    DanglingReference,
    EmptyCategories,
    ParentNotInternal,
    RemoteTargetsRoot,
    PrimaryNotTree,
    Cycle,
    InternalWithoutChildren,
    TerminalBadToken,
    TokenIndexGap,
    EmptyTokenText,
    TokenUnanchored,
    TokenMultiplyAnchored,
    SceneNoMainRelation,
    SceneProcessAndState,
    SceneMultipleMainRelations,
    ImplicitNotParticipant,
    PassageMismatch,
    DuplicateEntry,
    EntryUnknownNode,
    EntryNotImplicit,
    UncategorizedImplicit,
    CategoryOnNonParticipant,
}

impl RuleCode {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleCode::InvalidRoot => "invalid-root",
            RuleCode::DuplicateNodeId => "duplicate-node-id",
            RuleCode::DanglingReference => "dangling-reference",
            RuleCode::EmptyCategories => "empty-categories",
            RuleCode::ParentNotInternal => "parent-not-internal",
            RuleCode::RemoteTargetsRoot => "remote-targets-root",
            RuleCode::PrimaryNotTree => "primary-not-tree",
            RuleCode::Cycle => "cycle",
            RuleCode::InternalWithoutChildren => "internal-without-children",
            RuleCode::TerminalBadToken => "terminal-bad-token",
            RuleCode::TokenIndexGap => "token-index-gap",
            RuleCode::EmptyTokenText => "empty-token-text",
            RuleCode::TokenUnanchored => "token-unanchored",
            RuleCode::TokenMultiplyAnchored => "token-multiply-anchored",
            RuleCode::SceneNoMainRelation => "scene-no-main-relation",
            RuleCode::SceneProcessAndState => "scene-process-and-state",
            RuleCode::SceneMultipleMainRelations => "scene-multiple-main-relations",
            RuleCode::ImplicitNotParticipant => "implicit-not-participant",
            RuleCode::PassageMismatch => "passage-mismatch",
            RuleCode::DuplicateEntry => "duplicate-entry",
            RuleCode::EntryUnknownNode => "entry-unknown-node",
            RuleCode::EntryNotImplicit => "entry-not-implicit",
            RuleCode::UncategorizedImplicit => "uncategorized-implicit",
            RuleCode::CategoryOnNonParticipant => "category-on-non-participant",
        }
    }
}

impl fmt::Display for RuleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub code: RuleCode,
    /// Node id, edge label or token position the violation is about.
    pub target: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.code, self.target, self.message)
    }
}

/// Outcome of a structural check. Warnings never affect `ok`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passage_id: String,
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(passage_id: impl Into<String>) -> Self {
        ValidationReport {
            passage_id: passage_id.into(),
            violations: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn error(&mut self, code: RuleCode, target: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            code,
            target: target.into(),
            message: message.into(),
        });
    }

    pub fn warn(&mut self, code: RuleCode, target: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Violation {
            code,
            target: target.into(),
            message: message.into(),
        });
    }

    /// Every code in the report, errors and warnings, sorted and deduplicated.
    pub fn codes(&self) -> Vec<RuleCode> {
        let mut codes: Vec<RuleCode> = self
            .violations
            .iter()
            .chain(&self.warnings)
            .map(|v| v.code)
            .collect();
        codes.sort();
        codes.dedup();
        codes
    }

    pub(crate) fn finish(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self.warnings.sort();
        self.warnings.dedup();
        self
    }
}

/// Checks every structural invariant of a passage.
pub fn validate_graph(p: &Passage) -> ValidationReport {
    let mut report = ValidationReport::new(p.id());
    let index = p.index();

    let mut seen = HashSet::new();
    for n in p.nodes() {
        if !seen.insert(n.id.as_str()) {
            report.error(
                RuleCode::DuplicateNodeId,
                &n.id,
                "node id declared more than once",
            );
        }
    }

    match index.node(p.root()) {
        None => report.error(RuleCode::InvalidRoot, p.root(), "root node is not declared"),
        Some(n) if n.kind != NodeKind::Internal => report.error(
            RuleCode::InvalidRoot,
            p.root(),
            "root node must be an internal unit",
        ),
        Some(_) => {}
    }

    for e in p.edges() {
        let label = e.label();
        let parent = index.node(&e.parent);
        let child = index.node(&e.child);
        if parent.is_none() {
            report.error(
                RuleCode::DanglingReference,
                &label,
                format!("edge parent '{}' is not declared", e.parent),
            );
        }
        if child.is_none() {
            report.error(
                RuleCode::DanglingReference,
                &label,
                format!("edge child '{}' is not declared", e.child),
            );
        }
        if e.categories.is_empty() {
            report.error(
                RuleCode::EmptyCategories,
                &label,
                "edge carries no category",
            );
        }
        if let Some(parent) = parent {
            if parent.kind != NodeKind::Internal {
                report.error(
                    RuleCode::ParentNotInternal,
                    &label,
                    format!("edge parent '{}' is not an internal unit", e.parent),
                );
            }
        }
        if e.is_remote() && e.child == p.root() {
            report.error(
                RuleCode::RemoteTargetsRoot,
                &label,
                "remote edge targets the root",
            );
        }
    }

    check_tree(p, &mut report);
    check_tokens(p, &mut report);
    check_scenes(p, &mut report);

    for unit in implicit_units(p) {
        if !unit.valid {
            report.warn(
                RuleCode::ImplicitNotParticipant,
                &unit.node,
                format!(
                    "implicit unit is attached as '{}', not as a Participant",
                    unit.categories
                ),
            );
        }
    }

    report.finish()
}

fn check_tree(p: &Passage, report: &mut ValidationReport) {
    let index = p.index();
    let mut primary_in: HashMap<&str, usize> = HashMap::new();
    for e in p.edges().iter().filter(|e| e.is_primary()) {
        *primary_in.entry(e.child.as_str()).or_default() += 1;
    }

    let reachable: HashSet<&str> = index.preorder().iter().map(|n| n.id.as_str()).collect();

    let mut tree_ok = true;
    for n in p.nodes() {
        let incoming = primary_in.get(n.id.as_str()).copied().unwrap_or(0);
        let problem = if n.id == p.root() {
            (incoming > 0).then(|| "root has an incoming primary edge".to_string())
        } else if incoming == 0 {
            Some("node has no incoming primary edge".to_string())
        } else if incoming > 1 {
            Some(format!("node has {incoming} incoming primary edges"))
        } else if !reachable.contains(n.id.as_str()) {
            Some("node is not reachable from the root through primary edges".to_string())
        } else {
            None
        };
        if let Some(message) = problem {
            tree_ok = false;
            report.error(RuleCode::PrimaryNotTree, &n.id, message);
        }
        if n.kind == NodeKind::Internal
            && n.id != p.root()
            && index.primary_children(&n.id).next().is_none()
        {
            report.error(
                RuleCode::InternalWithoutChildren,
                &n.id,
                "internal unit has no outgoing primary edge",
            );
        }
    }

    if tree_ok {
        if let Some(stuck) = first_cycle_node(p) {
            report.error(
                RuleCode::Cycle,
                stuck,
                "primary and remote edges together contain a cycle",
            );
        }
    }
}

/// Kahn's algorithm over primary and remote edges; returns the first node (in
/// node order) left with unresolved in-degree, if any.
fn first_cycle_node(p: &Passage) -> Option<&str> {
    let ids: HashSet<&str> = p.nodes().iter().map(|n| n.id.as_str()).collect();
    let mut indegree: HashMap<&str, usize> = ids.iter().map(|id| (*id, 0)).collect();
    let mut out: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in p.edges() {
        if ids.contains(e.parent.as_str()) && ids.contains(e.child.as_str()) {
            *indegree.get_mut(e.child.as_str()).unwrap() += 1;
            out.entry(e.parent.as_str())
                .or_default()
                .push(e.child.as_str());
        }
    }
    let mut queue: Vec<&str> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(id, _)| *id)
        .collect();
    while let Some(id) = queue.pop() {
        for child in out.get(id).into_iter().flatten() {
            let d = indegree.get_mut(child).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push(child);
            }
        }
    }
    p.nodes()
        .iter()
        .map(|n| n.id.as_str())
        .find(|id| indegree.get(id).copied().unwrap_or(0) > 0)
}

fn check_tokens(p: &Passage, report: &mut ValidationReport) {
    let mut anchors = vec![0usize; p.tokens().len()];
    for (i, t) in p.tokens().iter().enumerate() {
        if t.index != i {
            report.error(
                RuleCode::TokenIndexGap,
                format!("token#{i}"),
                format!("token at position {i} carries index {}", t.index),
            );
        }
        if t.text.is_empty() {
            report.error(
                RuleCode::EmptyTokenText,
                format!("token#{i}"),
                "token text is empty",
            );
        }
    }
    for n in p.nodes() {
        if let NodeKind::Terminal(t) = n.kind {
            match anchors.get_mut(t) {
                Some(count) => *count += 1,
                None => report.error(
                    RuleCode::TerminalBadToken,
                    &n.id,
                    format!(
                        "terminal references token {t}, passage has {}",
                        p.tokens().len()
                    ),
                ),
            }
        }
    }
    for (i, count) in anchors.into_iter().enumerate() {
        match count {
            0 => report.error(
                RuleCode::TokenUnanchored,
                format!("token#{i}"),
                "token is not anchored by a terminal",
            ),
            1 => {}
            k => report.error(
                RuleCode::TokenMultiplyAnchored,
                format!("token#{i}"),
                format!("token is anchored by {k} terminals"),
            ),
        }
    }
}

fn check_scenes(p: &Passage, report: &mut ValidationReport) {
    let index = p.index();
    for n in p.nodes().iter().filter(|n| n.is_internal()) {
        let mains: Vec<&Edge> = index
            .primary_children(&n.id)
            .filter(|e| e.categories.is_main_relation())
            .collect();
        if mains.is_empty() {
            let under_h = index
                .primary_parent_edge(&n.id)
                .is_some_and(|e| e.categories.contains(EdgeCategory::ParallelScene));
            let has_participant = index.children(&n.id).any(|e| e.categories.is_participant());
            if under_h || has_participant {
                report.error(
                    RuleCode::SceneNoMainRelation,
                    &n.id,
                    "scene lacks main relation (Process or State)",
                );
            }
            continue;
        }
        let has_p = mains
            .iter()
            .any(|e| e.categories.contains(EdgeCategory::Process));
        let has_s = mains
            .iter()
            .any(|e| e.categories.contains(EdgeCategory::State));
        if mains.len() > 1 && has_p && has_s {
            report.error(
                RuleCode::SceneProcessAndState,
                &n.id,
                "scene has both a Process and a State child",
            );
        } else if mains.len() > 1 {
            report.warn(
                RuleCode::SceneMultipleMainRelations,
                &n.id,
                format!("scene has {} main-relation children", mains.len()),
            );
        }
    }
}

/// A Scene: an internal unit with a Process or State child.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SceneView {
    pub scene_node: String,
    pub main_relation: Edge,
    pub participants: Vec<Edge>,
    pub implicit_participants: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
#[error("passage '{}' failed validation with {} violation(s)", .0.passage_id, .0.violations.len())]
pub struct InvalidPassage(pub ValidationReport);

/// Scenes in primary pre-order. Requires a valid passage.
pub fn scenes(p: &Passage) -> Result<Vec<SceneView>, InvalidPassage> {
    let report = validate_graph(p);
    if !report.ok() {
        return Err(InvalidPassage(report));
    }
    Ok(scenes_unchecked(p))
}

pub(crate) fn scenes_unchecked(p: &Passage) -> Vec<SceneView> {
    let index = p.index();
    index
        .preorder()
        .into_iter()
        .filter(|n| n.is_internal())
        .filter_map(|n| {
            let main = index
                .primary_children(&n.id)
                .find(|e| e.categories.is_main_relation())?
                .clone();
            let participants = index
                .children(&n.id)
                .filter(|e| e.categories.is_participant())
                .cloned()
                .collect();
            let implicit_participants = index
                .primary_children(&n.id)
                .filter(|e| index.node(&e.child).is_some_and(|c| c.is_implicit()))
                .map(|e| e.child.clone())
                .collect();
            Some(SceneView {
                scene_node: n.id.clone(),
                main_relation: main,
                participants,
                implicit_participants,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicitUnit {
    pub node: String,
    pub categories: CategorySet,
    /// True iff the unit is attached as a Participant.
    pub valid: bool,
}

/// Every implicit node with its incoming primary label.
pub fn implicit_units(p: &Passage) -> Vec<ImplicitUnit> {
    let index = p.index();
    p.nodes()
        .iter()
        .filter(|n| n.is_implicit())
        .map(|n| {
            let categories = index
                .primary_parent_edge(&n.id)
                .map(|e| e.categories)
                .unwrap_or_default();
            ImplicitUnit {
                node: n.id.clone(),
                categories,
                valid: categories.is_participant(),
            }
        })
        .collect()
}
