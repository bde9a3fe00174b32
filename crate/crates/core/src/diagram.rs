//! Syntax diagrams: connected labeled multigraphs with sorted, optionally
//! directed edges, plus the global shape conditions a language may impose.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Violation};

/// Finite ordered set of node symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet(Vec<String>);

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet(symbols.into_iter().map(Into::into).collect())
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.0.iter().any(|s| s == symbol)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_name_set(&self.0, "alphabet")
    }
}

/// Finite ordered set of edge sorts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SortSet(Vec<String>);

impl SortSet {
    pub fn new<I, S>(sorts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SortSet(sorts.into_iter().map(Into::into).collect())
    }

    pub fn sorts(&self) -> &[String] {
        &self.0
    }

    pub fn contains(&self, sort: &str) -> bool {
        self.0.iter().any(|s| s == sort)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_name_set(&self.0, "sorts")
    }
}

fn validate_name_set(names: &[String], what: &'static str) -> ValidationReport {
    let mut report = ValidationReport::default();
    if names.is_empty() {
        report.push(Violation::new(what, "", "must not be empty"));
    }
    let mut seen = BTreeSet::new();
    for name in names {
        if name.is_empty() {
            report.push(Violation::new(what, "", "contains an empty name"));
        } else if !seen.insert(name.as_str()) {
            report.push(Violation::new(what, name.clone(), "duplicate entry"));
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub label: String,
}

impl Node {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: String,
    pub a: String,
    pub b: String,
    pub sort: String,
    #[serde(default)]
    pub directed: bool,
}

impl Edge {
    pub fn new(
        id: impl Into<String>,
        a: impl Into<String>,
        b: impl Into<String>,
        sort: impl Into<String>,
        directed: bool,
    ) -> Self {
        Edge {
            id: id.into(),
            a: a.into(),
            b: b.into(),
            sort: sort.into(),
            directed,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

/// On-disk form of a diagram, before structural checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    #[serde(default)]
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

/// A syntax diagram. Nodes and edges are kept sorted by id; positions in
/// those sorted vectors are the indices used by embeddings.
///
/// Construction enforces only the local structure (unique ids, resolvable
/// endpoints). Connectivity, labels, sorts and shape are checked by
/// [`validate_diagram`], which reports instead of failing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    ends: Vec<(usize, usize)>,
}

impl Diagram {
    pub fn new(mut nodes: Vec<Node>, mut edges: Vec<Edge>) -> Result<Self, ValidationReport> {
        nodes.sort();
        edges.sort();
        let mut report = ValidationReport::default();
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                report.push(Violation::new(
                    "duplicate-node-id",
                    pair[0].id.clone(),
                    "node id used twice",
                ));
            }
        }
        for pair in edges.windows(2) {
            if pair[0].id == pair[1].id {
                report.push(Violation::new(
                    "duplicate-edge-id",
                    pair[0].id.clone(),
                    "edge id used twice",
                ));
            }
        }
        let find = |id: &str| nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok();
        let mut ends = Vec::with_capacity(edges.len());
        for e in &edges {
            match (find(&e.a), find(&e.b)) {
                (Some(a), Some(b)) => ends.push((a, b)),
                (a, b) => {
                    for (missing, end) in [(a.is_none(), &e.a), (b.is_none(), &e.b)] {
                        if missing {
                            report.push(Violation::new(
                                "dangling-endpoint",
                                e.id.clone(),
                                format!("endpoint `{end}` is not a node"),
                            ));
                        }
                    }
                }
            }
        }
        if report.is_ok() {
            Ok(Diagram { nodes, edges, ends })
        } else {
            Err(report)
        }
    }

    pub fn empty() -> Self {
        Diagram {
            nodes: Vec::new(),
            edges: Vec::new(),
            ends: Vec::new(),
        }
    }

    pub fn from_file(file: DiagramFile) -> Result<Self, ValidationReport> {
        Diagram::new(file.nodes, file.edges)
    }

    /// Canonical serialized form: arrays sorted by id.
    pub fn to_file(&self) -> DiagramFile {
        DiagramFile {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.nodes[node].label
    }

    /// Endpoint indices `(a, b)` of an edge.
    pub fn ends(&self, edge: usize) -> (usize, usize) {
        self.ends[edge]
    }

    /// Indices of edges incident to `node`, ascending; a loop is listed once.
    pub fn star_of(&self, node: usize) -> Vec<usize> {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == node || b == node)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .zip(&self.ends)
            .filter(|(e, &(_, b))| e.directed && b == node)
            .count()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .zip(&self.ends)
            .filter(|(e, &(a, _))| e.directed && a == node)
            .count()
    }

    /// Whether the underlying undirected multigraph is connected. The empty
    /// diagram counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return true;
        }
        let mut adjacent = vec![Vec::new(); n];
        for &(a, b) in &self.ends {
            adjacent[a].push(b);
            adjacent[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacent[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The set of edge ids incident to node `v`; a loop is counted once.
pub fn star(d: &Diagram, v: &str) -> Result<BTreeSet<String>> {
    let node = d
        .node_index(v)
        .ok_or_else(|| Error::UnknownNode(v.to_string()))?;
    Ok(d.star_of(node)
        .into_iter()
        .map(|e| d.edges[e].id.clone())
        .collect())
}

/// A global condition on the shape of admissible diagrams.
#[derive(Clone)]
pub enum ShapeCondition {
    None,
    Chain,
    Custom {
        name: String,
        accepts: fn(&Diagram) -> bool,
    },
}

impl ShapeCondition {
    pub fn name(&self) -> &str {
        match self {
            ShapeCondition::None => "none",
            ShapeCondition::Chain => "chain",
            ShapeCondition::Custom { name, .. } => name,
        }
    }

    pub fn accepts(&self, d: &Diagram) -> bool {
        self.check(d).is_ok()
    }

    /// `Err` carries the reason the diagram is rejected.
    pub fn check(&self, d: &Diagram) -> Result<(), String> {
        match self {
            ShapeCondition::None => Ok(()),
            ShapeCondition::Chain => check_chain(d),
            ShapeCondition::Custom { name, accepts } => {
                if accepts(d) {
                    Ok(())
                } else {
                    Err(format!("rejected by shape predicate `{name}`"))
                }
            }
        }
    }
}

impl fmt::Debug for ShapeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShapeCondition({})", self.name())
    }
}

impl PartialEq for ShapeCondition {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

fn check_chain(d: &Diagram) -> Result<(), String> {
    let n = d.node_count();
    if n == 0 {
        return if d.edge_count() == 0 {
            Ok(())
        } else {
            Err("empty chain has edges".into())
        };
    }
    if d.edge_count() != n - 1 {
        return Err(format!(
            "{} nodes need {} edges, found {}",
            n,
            n - 1,
            d.edge_count()
        ));
    }
    if n == 1 {
        return Ok(());
    }
    if let Some(e) = d.edges().iter().find(|e| !e.directed) {
        return Err(format!("edge `{}` is undirected", e.id));
    }
    let sort = &d.edges()[0].sort;
    if let Some(e) = d.edges().iter().find(|e| &e.sort != sort) {
        return Err(format!(
            "edge `{}` has sort `{}`, expected `{sort}`",
            e.id, e.sort
        ));
    }
    let (mut heads, mut tails) = (0, 0);
    for v in 0..n {
        match (d.in_degree(v), d.out_degree(v)) {
            (0, 1) => heads += 1,
            (1, 0) => tails += 1,
            (1, 1) => {}
            (i, o) => {
                return Err(format!(
                    "node `{}` has in-degree {i} and out-degree {o}",
                    d.nodes()[v].id
                ))
            }
        }
    }
    if heads != 1 || tails != 1 {
        return Err(format!(
            "expected one start and one end node, found {heads} and {tails}"
        ));
    }
    if !d.is_connected() {
        return Err("not a single path".into());
    }
    Ok(())
}

/// Checks connectivity, labels, sorts and the shape condition. Never aborts.
pub fn validate_diagram(
    d: &Diagram,
    alphabet: &Alphabet,
    sorts: &SortSet,
    cond: &ShapeCondition,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for node in d.nodes() {
        if !alphabet.contains(&node.label) {
            report.push(Violation::new(
                "unknown-symbol",
                node.id.clone(),
                format!("label `{}` is not in the alphabet", node.label),
            ));
        }
    }
    for edge in d.edges() {
        if !sorts.contains(&edge.sort) {
            report.push(Violation::new(
                "unknown-sort",
                edge.id.clone(),
                format!("sort `{}` is not a declared sort", edge.sort),
            ));
        }
    }
    if !d.is_connected() {
        report.push(Violation::new("not-connected", "", "not connected"));
    }
    if let Err(reason) = cond.check(d) {
        report.push(Violation::new("shape", cond.name().to_string(), reason));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::encode_chain;

    fn ab() -> (Alphabet, SortSet) {
        (Alphabet::new(["a", "b"]), SortSet::new(["next"]))
    }

    #[test]
    fn empty_diagram_is_a_valid_chain() {
        let (a, s) = ab();
        assert!(validate_diagram(&Diagram::empty(), &a, &s, &ShapeCondition::Chain).is_ok());
    }

    #[test]
    fn aba_chain_validates() {
        let (a, s) = ab();
        let d = encode_chain("aba").unwrap();
        assert!(validate_diagram(&d, &a, &s, &ShapeCondition::Chain).is_ok());
    }

    #[test]
    fn disconnected_nodes_are_reported() {
        let (a, s) = ab();
        let d = Diagram::new(vec![Node::new("1", "a"), Node::new("2", "a")], vec![]).unwrap();
        let report = validate_diagram(&d, &a, &s, &ShapeCondition::None);
        assert!(report.has_kind("not-connected"));
        assert_eq!(report.violations[0].detail, "not connected");
    }

    #[test]
    fn unknown_label_and_sort_are_reported_with_ids() {
        let (a, s) = ab();
        let d = Diagram::new(
            vec![Node::new("1", "a"), Node::new("2", "c")],
            vec![Edge::new("e", "1", "2", "prev", true)],
        )
        .unwrap();
        let report = validate_diagram(&d, &a, &s, &ShapeCondition::None);
        assert_eq!(report.violations.len(), 2);
        assert_eq!(report.violations[0].subject, "2");
        assert_eq!(report.violations[1].subject, "e");
    }

    #[test]
    fn structural_errors_are_collected() {
        let err = Diagram::new(
            vec![Node::new("1", "a"), Node::new("1", "b")],
            vec![Edge::new("e", "1", "9", "next", true)],
        )
        .unwrap_err();
        assert!(err.has_kind("duplicate-node-id"));
        assert!(err.has_kind("dangling-endpoint"));
    }

    #[test]
    fn chain_rejects_branching_and_cycles() {
        let (a, s) = ab();
        let fork = Diagram::new(
            vec![
                Node::new("1", "a"),
                Node::new("2", "b"),
                Node::new("3", "b"),
            ],
            vec![
                Edge::new("e1", "1", "2", "next", true),
                Edge::new("e2", "1", "3", "next", true),
            ],
        )
        .unwrap();
        assert!(!validate_diagram(&fork, &a, &s, &ShapeCondition::Chain).is_ok());
        let undirected = Diagram::new(
            vec![Node::new("1", "a"), Node::new("2", "b")],
            vec![Edge::new("e1", "1", "2", "next", false)],
        )
        .unwrap();
        assert!(!ShapeCondition::Chain.accepts(&undirected));
        let looped = Diagram::new(
            vec![Node::new("1", "a")],
            vec![Edge::new("e1", "1", "1", "next", true)],
        )
        .unwrap();
        assert!(!ShapeCondition::Chain.accepts(&looped));
    }

    #[test]
    fn custom_shape_predicate() {
        fn at_most_two(d: &Diagram) -> bool {
            d.node_count() <= 2
        }
        let cond = ShapeCondition::Custom {
            name: "small".into(),
            accepts: at_most_two,
        };
        assert!(cond.accepts(&encode_chain("ab").unwrap()));
        assert!(!cond.accepts(&encode_chain("aba").unwrap()));
    }

    #[test]
    fn star_sizes() {
        let d = encode_chain("aba").unwrap();
        assert_eq!(star(&d, "2").unwrap().len(), 2);
        assert_eq!(star(&d, "1").unwrap().len(), 1);
        assert_eq!(star(&d, "3").unwrap().len(), 1);
        let single = encode_chain("a").unwrap();
        assert!(star(&single, "1").unwrap().is_empty());
        assert!(matches!(star(&d, "7"), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn loop_is_counted_once_in_star() {
        let d = Diagram::new(
            vec![Node::new("x", "a"), Node::new("y", "a")],
            vec![
                Edge::new("l", "x", "x", "s", false),
                Edge::new("m", "x", "y", "s", false),
            ],
        )
        .unwrap();
        assert_eq!(star(&d, "x").unwrap().len(), 2);
        assert_eq!(star(&d, "y").unwrap().len(), 1);
    }
}
