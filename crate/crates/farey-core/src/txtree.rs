//! Data model and validator for leveled filling-descent trees.
//!
//! Nodes carry a manifold class and sit on levels in blocks of three:
//! geometric classes (hyperbolic, Seifert fibered, sol) on levels `3m`,
//! reducible on `3m+1`, torus-decomposable (JSJ) on `3m+2`. Edges go
//! strictly down-level within the parent's block, and each child's edge
//! label kind is dictated by the parent's class. Trees are ingested from a
//! text document, never computed from geometry; distinct vertices may
//! carry equal manifold labels, so identity is by id only.
//!
//! # Document format (`txtree v1`)
//!
//! ```text
//! txtree v1
//! # comment
//! node id=X0 class=hyperbolic level=0 tori=3 volume=2.03
//! node id=X2 class=jsj level=2 parent=X0 edge=mnh:1/0,inf,inf
//! node id=X3a class=hyperbolic level=3 parent=X2 edge=jsj volume=1.01
//! ```
//!
//! One `node` record per line; `key=value` fields separated by whitespace.
//! `id`, `class`, `level` are required. `parent` and `edge` are required
//! together on every non-root node. A parent must be declared on an
//! earlier line. `class` is one of `hyperbolic`, `seifert`, `sol`,
//! `reducible`, `jsj`; `edge` is `mnh:<multislope>`, `prime`, or `jsj`;
//! `volume` is a positive decimal, stored exactly; `tori` is the number
//! of boundary tori (default 0).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::fillings::Multislope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Hyperbolic,
    SeifertFibered,
    Sol,
    Reducible,
    Jsj,
}

impl NodeClass {
    /// Required residue of `level` mod 3.
    pub fn level_residue(self) -> u64 {
        match self {
            NodeClass::Hyperbolic | NodeClass::SeifertFibered | NodeClass::Sol => 0,
            NodeClass::Reducible => 1,
            NodeClass::Jsj => 2,
        }
    }

    pub fn is_leaf_class(self) -> bool {
        matches!(self, NodeClass::SeifertFibered | NodeClass::Sol)
    }
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NodeClass::Hyperbolic => "hyperbolic",
            NodeClass::SeifertFibered => "seifert",
            NodeClass::Sol => "sol",
            NodeClass::Reducible => "reducible",
            NodeClass::Jsj => "jsj",
        };
        write!(f, "{}", s)
    }
}

/// Label on the edge into a node, dictated by the parent's class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Filling along a minimally-non-hyperbolic multislope.
    Mnh(Multislope),
    /// Factor of a prime decomposition.
    PrimeFactor,
    /// Component of a torus decomposition.
    TorusDecomposition,
}

impl EdgeLabel {
    fn kind_name(&self) -> &'static str {
        match self {
            EdgeLabel::Mnh(_) => "mnh",
            EdgeLabel::PrimeFactor => "prime",
            EdgeLabel::TorusDecomposition => "jsj",
        }
    }
}

/// An exact positive decimal volume, stored as a fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    num: BigInt,
    den: BigInt,
}

impl Volume {
    pub fn parse(s: &str) -> Option<Volume> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits: String = alloc::format!("{}{}", int_part, frac_part);
        let num: BigInt = digits.parse().ok()?;
        let mut den = BigInt::from(1);
        for _ in 0..frac_part.len() {
            den *= 10;
        }
        if !num.is_positive() {
            return None;
        }
        Some(Volume { num, den })
    }

    pub fn lt(&self, other: &Volume) -> bool {
        &self.num * &other.den < &other.num * &self.den
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TXNode {
    pub id: String,
    pub class: NodeClass,
    pub level: u64,
    pub volume: Option<Volume>,
    pub boundary_tori: u64,
    /// Label on the edge from the parent; `None` on the root.
    pub edge_label: Option<EdgeLabel>,
}

/// A rooted, leveled, labeled tree. Nodes keep document order; edges are
/// parent links fixed at parse time, so the structure is acyclic and
/// single-rooted by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TXTree {
    nodes: Vec<TXNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl TXTree {
    pub fn nodes(&self) -> &[TXNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TXNode {
        &self.nodes[self.root]
    }

    pub fn parent_of(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children_of(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }
}

/// Parses a `txtree v1` document. All schema errors are collected.
pub fn parse_tree(text: &str) -> Result<TXTree, Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut nodes: Vec<TXNode> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line == "txtree v1" {
                saw_header = true;
            } else {
                errors.push(ParseError {
                    line: lineno,
                    message: "expected header `txtree v1`".to_string(),
                });
            }
            continue;
        }
        let mut err = |msg: String| errors.push(ParseError { line: lineno, message: msg });
        let Some(rest) = line.strip_prefix("node ") else {
            err(alloc::format!("expected a `node` record, got `{}`", line));
            continue;
        };
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        let mut bad_field = false;
        for tok in rest.split_whitespace() {
            match tok.split_once('=') {
                Some((k, v)) => {
                    if fields.insert(k, v).is_some() {
                        err(alloc::format!("duplicate field `{}`", k));
                        bad_field = true;
                    }
                }
                None => {
                    err(alloc::format!("malformed field `{}` (expected key=value)", tok));
                    bad_field = true;
                }
            }
        }
        if bad_field {
            continue;
        }
        let Some(id) = fields.get("id").map(|s| s.to_string()) else {
            err("missing `id`".to_string());
            continue;
        };
        if index.contains_key(&id) {
            err(alloc::format!("duplicate node id `{}`", id));
            continue;
        }
        let class = match fields.get("class") {
            Some(&"hyperbolic") => NodeClass::Hyperbolic,
            Some(&"seifert") => NodeClass::SeifertFibered,
            Some(&"sol") => NodeClass::Sol,
            Some(&"reducible") => NodeClass::Reducible,
            Some(&"jsj") => NodeClass::Jsj,
            Some(other) => {
                err(alloc::format!("unknown class `{}`", other));
                continue;
            }
            None => {
                err("missing `class`".to_string());
                continue;
            }
        };
        let level = match fields.get("level").map(|s| s.parse::<u64>()) {
            Some(Ok(l)) => l,
            Some(Err(_)) => {
                err(alloc::format!("malformed level `{}`", fields["level"]));
                continue;
            }
            None => {
                err("missing `level`".to_string());
                continue;
            }
        };
        let volume = match fields.get("volume") {
            Some(v) => match Volume::parse(v) {
                Some(vol) => Some(vol),
                None => {
                    err(alloc::format!("malformed volume `{}`", v));
                    continue;
                }
            },
            None => None,
        };
        let boundary_tori = match fields.get("tori").map(|s| s.parse::<u64>()) {
            Some(Ok(t)) => t,
            Some(Err(_)) => {
                err(alloc::format!("malformed tori `{}`", fields["tori"]));
                continue;
            }
            None => 0,
        };
        let edge_label = match fields.get("edge") {
            Some(&"prime") => Some(EdgeLabel::PrimeFactor),
            Some(&"jsj") => Some(EdgeLabel::TorusDecomposition),
            Some(v) => match v.strip_prefix("mnh:") {
                Some(ms) => match ms.parse::<Multislope>() {
                    Ok(m) => Some(EdgeLabel::Mnh(m)),
                    Err(e) => {
                        err(alloc::format!("malformed mnh edge label: {}", e));
                        continue;
                    }
                },
                None => {
                    err(alloc::format!("unknown edge label `{}`", v));
                    continue;
                }
            },
            None => None,
        };
        let parent_idx = match fields.get("parent") {
            Some(pid) => match index.get(*pid) {
                Some(&i) => Some(i),
                None => {
                    err(alloc::format!(
                        "parent `{}` not declared on an earlier line",
                        pid
                    ));
                    continue;
                }
            },
            None => None,
        };
        match (parent_idx, &edge_label) {
            (Some(_), None) => {
                err("non-root node needs an `edge` label".to_string());
                continue;
            }
            (None, Some(_)) => {
                err("root node must not carry an `edge` label".to_string());
                continue;
            }
            _ => {}
        }
        if parent_idx.is_none() && nodes.iter().zip(&parent).any(|(_, p)| p.is_none()) {
            err(alloc::format!("second root `{}` (only one node may omit `parent`)", id));
            continue;
        }
        index.insert(id.clone(), nodes.len());
        nodes.push(TXNode { id, class, level, volume, boundary_tori, edge_label });
        parent.push(parent_idx);
    }

    if !saw_header && errors.is_empty() {
        errors.push(ParseError { line: 1, message: "empty document".to_string() });
    }
    if nodes.is_empty() && errors.is_empty() {
        errors.push(ParseError { line: 1, message: "document has no nodes".to_string() });
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let root = parent.iter().position(|p| p.is_none()).expect("first node is the root");
    let mut children = alloc::vec![Vec::new(); nodes.len()];
    for (i, p) in parent.iter().enumerate() {
        if let Some(pi) = p {
            children[*pi].push(i);
        }
    }
    Ok(TXTree { nodes, parent, children, root })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// Node class does not match its level residue mod 3.
    LevelCongruence,
    /// Root level is not 0, 1, or 2.
    RootLevel,
    /// Seifert-fibered or sol node with a child.
    LeafRule,
    /// Child edge label kind does not match the parent class.
    EdgeLabelKind,
    /// Child level not strictly greater, or beyond the parent's block end.
    EdgeLevel,
    /// Volume present on a non-hyperbolic node.
    VolumeOnNonHyperbolic,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::LevelCongruence => "level-congruence",
            ViolationKind::RootLevel => "root-level",
            ViolationKind::LeafRule => "leaf-rule",
            ViolationKind::EdgeLabelKind => "edge-label-kind",
            ViolationKind::EdgeLevel => "edge-level",
            ViolationKind::VolumeOnNonHyperbolic => "volume-on-non-hyperbolic",
        };
        write!(f, "{}", s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node_id: String,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn kinds(&self) -> Vec<ViolationKind> {
        self.violations.iter().map(|v| v.kind).collect()
    }
}

/// Checks every structural rule; violations are reported as data, in node
/// order, never asserted.
pub fn validate(t: &TXTree) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |node_id: &str, kind: ViolationKind, message: String| {
        violations.push(Violation { node_id: node_id.to_string(), kind, message });
    };

    let root = t.root();
    if root.level > 2 {
        push(
            &root.id,
            ViolationKind::RootLevel,
            alloc::format!("root level {} is not 0, 1, or 2", root.level),
        );
    }

    for (i, n) in t.nodes.iter().enumerate() {
        if n.level % 3 != n.class.level_residue() {
            push(
                &n.id,
                ViolationKind::LevelCongruence,
                alloc::format!(
                    "class {} requires level ≡ {} (mod 3), found level {}",
                    n.class,
                    n.class.level_residue(),
                    n.level
                ),
            );
        }
        if n.volume.is_some() && n.class != NodeClass::Hyperbolic {
            push(
                &n.id,
                ViolationKind::VolumeOnNonHyperbolic,
                alloc::format!("volume recorded on a {} node", n.class),
            );
        }
        if n.class.is_leaf_class() && !t.children[i].is_empty() {
            push(
                &n.id,
                ViolationKind::LeafRule,
                alloc::format!("{} node must be a leaf but has {} children", n.class, t.children[i].len()),
            );
        }
        for &ci in &t.children[i] {
            let c = &t.nodes[ci];
            let expected = match n.class {
                NodeClass::Hyperbolic => Some("mnh"),
                NodeClass::Reducible => Some("prime"),
                NodeClass::Jsj => Some("jsj"),
                NodeClass::SeifertFibered | NodeClass::Sol => None,
            };
            if let Some(want) = expected {
                let got = c.edge_label.as_ref().map(|l| l.kind_name());
                if got != Some(want) {
                    push(
                        &c.id,
                        ViolationKind::EdgeLabelKind,
                        alloc::format!(
                            "edge from {} parent {} must carry a {} label, found {}",
                            n.class,
                            n.id,
                            want,
                            got.unwrap_or("none")
                        ),
                    );
                }
            }
            let block_end = 3 * (n.level / 3) + 3;
            if c.level <= n.level || c.level > block_end {
                push(
                    &c.id,
                    ViolationKind::EdgeLevel,
                    alloc::format!(
                        "child level {} must lie strictly above parent level {} and at most {}",
                        c.level,
                        n.level,
                        block_end
                    ),
                );
            }
        }
    }

    ValidationReport { violations }
}

/// Number of vertices.
pub fn tree_size(t: &TXTree) -> usize {
    t.nodes.len()
}

/// Number of vertices in the subtree rooted at `node`; strictly smaller
/// than the whole tree for any non-root node (the induction measure).
pub fn subtree_size(t: &TXTree, node: usize) -> usize {
    let mut count = 1;
    for &c in &t.children[node] {
        count += subtree_size(t, c);
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingVolume {
    pub node_ids: Vec<String>,
}

impl fmt::Display for MissingVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hyperbolic nodes missing volumes: {}", self.node_ids.join(", "))
    }
}

/// A non-decreasing step in a branch's hyperbolic volume chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeChainViolation {
    pub earlier_id: String,
    pub later_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VolumeChainReport {
    pub violations: Vec<VolumeChainViolation>,
}

/// Verifies strict volume decrease along the successive hyperbolic nodes
/// of every root-to-leaf branch. Branches with fewer than two hyperbolic
/// nodes are vacuously valid. Errors if a compared hyperbolic node lacks
/// a volume.
pub fn check_volume_chain(t: &TXTree) -> Result<VolumeChainReport, MissingVolume> {
    let mut missing = Vec::new();
    let mut violations = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = alloc::vec![(t.root, Vec::new())];
    while let Some((i, mut hyp_chain)) = stack.pop() {
        if t.nodes[i].class == NodeClass::Hyperbolic {
            hyp_chain.push(i);
        }
        if t.children[i].is_empty() {
            // leaf: audit this branch's chain
            if hyp_chain.len() >= 2 {
                for &h in &hyp_chain {
                    if t.nodes[h].volume.is_none() && !missing.contains(&t.nodes[h].id) {
                        missing.push(t.nodes[h].id.clone());
                    }
                }
                for w in hyp_chain.windows(2) {
                    let (a, b) = (&t.nodes[w[0]], &t.nodes[w[1]]);
                    if let (Some(va), Some(vb)) = (&a.volume, &b.volume) {
                        if !vb.lt(va) {
                            let dup = violations.iter().any(|v: &VolumeChainViolation| {
                                v.earlier_id == a.id && v.later_id == b.id
                            });
                            if !dup {
                                violations.push(VolumeChainViolation {
                                    earlier_id: a.id.clone(),
                                    later_id: b.id.clone(),
                                });
                            }
                        }
                    }
                }
            }
        } else {
            for &c in t.children[i].iter().rev() {
                stack.push((c, hyp_chain.clone()));
            }
        }
    }
    if !missing.is_empty() {
        return Err(MissingVolume { node_ids: missing });
    }
    Ok(VolumeChainReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The worked example: hyperbolic root, one mnh edge to a JSJ node,
    /// two torus-decomposition edges to hyperbolic leaves. Size 4.
    pub(crate) const WORKED_EXAMPLE: &str = "\
txtree v1
node id=X0 class=hyperbolic level=0 tori=3 volume=5.33
node id=X2 class=jsj level=2 parent=X0 edge=mnh:1/0,inf,inf tori=2
node id=X3a class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03
node id=X3b class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03
";

    #[test]
    fn parses_singleton() {
        let t = parse_tree("txtree v1\nnode id=R class=hyperbolic level=0\n").unwrap();
        assert_eq!(tree_size(&t), 1);
        assert!(validate(&t).is_valid());
    }

    #[test]
    fn parses_worked_example() {
        let t = parse_tree(WORKED_EXAMPLE).unwrap();
        assert_eq!(tree_size(&t), 4);
        assert!(validate(&t).is_valid());
        assert_eq!(subtree_size(&t, t.node_index("X2").unwrap()), 3);
    }

    #[test]
    fn rejects_malformed_level() {
        let doc = "txtree v1\nnode id=R class=hyperbolic level=abc\n";
        let errs = parse_tree(doc).unwrap_err();
        assert!(errs[0].message.contains("level"));
    }

    #[test]
    fn rejects_unknown_parent_and_second_root() {
        let errs =
            parse_tree("txtree v1\nnode id=A class=hyperbolic level=0 parent=Z edge=prime\n")
                .unwrap_err();
        assert!(errs[0].message.contains("parent"));

        let errs = parse_tree(
            "txtree v1\nnode id=A class=hyperbolic level=0\nnode id=B class=hyperbolic level=0\n",
        )
        .unwrap_err();
        assert!(errs[0].message.contains("second root"));
    }

    #[test]
    fn leaf_rule_violation() {
        let doc = "\
txtree v1
node id=R class=seifert level=0
node id=C class=reducible level=1 parent=R edge=prime
";
        let t = parse_tree(doc).unwrap();
        let report = validate(&t);
        assert!(report.kinds().contains(&ViolationKind::LeafRule));
    }

    #[test]
    fn congruence_violation() {
        let doc = "txtree v1\nnode id=R class=hyperbolic level=1\n";
        let t = parse_tree(doc).unwrap();
        assert_eq!(validate(&t).kinds(), alloc::vec![ViolationKind::LevelCongruence]);
    }

    #[test]
    fn volume_chain_examples() {
        let t = parse_tree(WORKED_EXAMPLE).unwrap();
        assert!(check_volume_chain(&t).unwrap().violations.is_empty());

        let bad = WORKED_EXAMPLE.replace("volume=5.33", "volume=2.03");
        let t = parse_tree(&bad).unwrap();
        let report = check_volume_chain(&t).unwrap();
        assert_eq!(report.violations.len(), 2); // both branches hit the equal pair

        let nodeless = WORKED_EXAMPLE.replace(" volume=5.33", "");
        let t = parse_tree(&nodeless).unwrap();
        assert_eq!(
            check_volume_chain(&t).unwrap_err().node_ids,
            alloc::vec!["X0".to_string()]
        );
    }

    #[test]
    fn volume_chain_vacuous_without_two_hyperbolic() {
        let doc = "\
txtree v1
node id=R class=hyperbolic level=0
node id=S class=seifert level=3 parent=R edge=mnh:1/0
";
        let t = parse_tree(doc).unwrap();
        assert!(check_volume_chain(&t).unwrap().violations.is_empty());
    }

    #[test]
    fn subtree_strictly_smaller() {
        let t = parse_tree(WORKED_EXAMPLE).unwrap();
        for i in 0..tree_size(&t) {
            if t.parent_of(i).is_some() {
                assert!(subtree_size(&t, i) < tree_size(&t));
            }
        }
    }
}
