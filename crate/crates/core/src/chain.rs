//! Linear words as chain diagrams: `s1 -> s2 -> ... -> sn` along `next` edges.

use crate::diagram::{Diagram, Edge, Node, ShapeCondition};
use crate::error::{Error, Result};

pub const NEXT_SORT: &str = "next";

/// Node `i` gets id `i` (1-based) and edge `i` joins node `i` to `i + 1`.
/// Ids are zero-padded to a common width so id order matches position.
pub fn encode_chain(s: &str) -> Result<Diagram> {
    let symbols: Vec<char> = s.chars().collect();
    if symbols.is_empty() {
        return Err(Error::EmptyChain);
    }
    let width = symbols.len().to_string().len();
    let node_id = |i: usize| format!("{i:0width$}");
    let nodes = symbols
        .iter()
        .enumerate()
        .map(|(i, c)| Node::new(node_id(i + 1), c.to_string()))
        .collect();
    let edges = (1..symbols.len())
        .map(|i| {
            Edge::new(
                format!("e{}", node_id(i)),
                node_id(i),
                node_id(i + 1),
                NEXT_SORT,
                true,
            )
        })
        .collect();
    Ok(Diagram::new(nodes, edges).expect("chain construction yields unique ids"))
}

/// Reads the word back by walking the path from its start node.
pub fn decode_chain(d: &Diagram) -> Result<String> {
    ShapeCondition::Chain.check(d).map_err(Error::NotAChain)?;
    if d.is_empty() {
        return Err(Error::NotAChain("empty diagram".into()));
    }
    let start = (0..d.node_count())
        .find(|&v| d.in_degree(v) == 0)
        .expect("a chain has a start node");
    let mut next = vec![None; d.node_count()];
    for e in 0..d.edge_count() {
        let (a, b) = d.ends(e);
        next[a] = Some(b);
    }
    let mut word = String::new();
    let mut cursor = Some(start);
    while let Some(v) = cursor {
        word.push_str(d.label(v));
        cursor = next[v];
    }
    Ok(word)
}
