//! Inclusion mappings between diagrams and their enumeration.

use crate::diagram::Diagram;
use crate::error::{Error, Result};

/// An injective, label- and structure-preserving map of one diagram into
/// another, stored as index maps over the sorted node and edge lists.
///
/// The derived ordering is lexicographic by node map, then edge map, which
/// is the order [`enumerate_embeddings`] produces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    node_map: Vec<usize>,
    edge_map: Vec<usize>,
    target_nodes: usize,
    target_edges: usize,
}

impl Embedding {
    pub fn from_maps(node_map: Vec<usize>, edge_map: Vec<usize>, target: &Diagram) -> Self {
        Embedding {
            node_map,
            edge_map,
            target_nodes: target.node_count(),
            target_edges: target.edge_count(),
        }
    }

    pub fn identity(d: &Diagram) -> Self {
        Embedding::from_maps(
            (0..d.node_count()).collect(),
            (0..d.edge_count()).collect(),
            d,
        )
    }

    pub fn node_map(&self) -> &[usize] {
        &self.node_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn node(&self, source_node: usize) -> usize {
        self.node_map[source_node]
    }

    pub fn edge(&self, source_edge: usize) -> usize {
        self.edge_map[source_edge]
    }

    pub fn is_identity(&self) -> bool {
        self.node_map.len() == self.target_nodes
            && self.edge_map.len() == self.target_edges
            && self.node_map.iter().enumerate().all(|(i, &t)| i == t)
            && self.edge_map.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// Whether the map hits every node and edge of the target.
    pub fn is_bijective(&self) -> bool {
        self.node_map.len() == self.target_nodes && self.edge_map.len() == self.target_edges
    }

    /// Canonical textual form `src:tgt,...|src:tgt,...` over the ids of the
    /// two diagrams.
    pub fn describe(&self, source: &Diagram, target: &Diagram) -> String {
        let nodes: Vec<String> = self
            .node_map
            .iter()
            .enumerate()
            .map(|(i, &t)| format!("{}:{}", source.nodes()[i].id, target.nodes()[t].id))
            .collect();
        let edges: Vec<String> = self
            .edge_map
            .iter()
            .enumerate()
            .map(|(i, &t)| format!("{}:{}", source.edges()[i].id, target.edges()[t].id))
            .collect();
        format!("{}|{}", nodes.join(","), edges.join(","))
    }
}

/// Whether target edge `t` is a legal image of source edge `s` given the node map.
fn edge_fits(a: &Diagram, b: &Diagram, s: usize, t: usize, node_map: &[usize]) -> bool {
    let (se, te) = (&a.edges()[s], &b.edges()[t]);
    if se.sort != te.sort || se.directed != te.directed {
        return false;
    }
    let (x, y) = a.ends(s);
    let (fx, fy) = (node_map[x], node_map[y]);
    let (p, q) = b.ends(t);
    if se.directed {
        p == fx && q == fy
    } else {
        (p == fx && q == fy) || (p == fy && q == fx)
    }
}

/// Structural check of all embedding invariants.
pub fn is_embedding(a: &Diagram, b: &Diagram, e: &Embedding) -> bool {
    if e.node_map.len() != a.node_count()
        || e.edge_map.len() != a.edge_count()
        || e.target_nodes != b.node_count()
        || e.target_edges != b.edge_count()
    {
        return false;
    }
    let injective = |map: &[usize], bound: usize| {
        let mut seen = vec![false; bound];
        map.iter()
            .all(|&t| t < bound && !std::mem::replace(&mut seen[t], true))
    };
    injective(&e.node_map, b.node_count())
        && injective(&e.edge_map, b.edge_count())
        && (0..a.node_count()).all(|v| a.label(v) == b.label(e.node_map[v]))
        && (0..a.edge_count()).all(|s| edge_fits(a, b, s, e.edge_map[s], &e.node_map))
}

struct Search<'d> {
    a: &'d Diagram,
    b: &'d Diagram,
    pin: Option<(usize, usize)>,
    // source edges whose later endpoint (in node order) is the index
    closing: Vec<Vec<usize>>,
    a_star: Vec<usize>,
    b_star: Vec<usize>,
    node_used: Vec<bool>,
    edge_used: Vec<bool>,
    node_map: Vec<usize>,
    edge_map: Vec<usize>,
    out: Vec<Embedding>,
}

impl<'d> Search<'d> {
    fn new(a: &'d Diagram, b: &'d Diagram, pin: Option<(usize, usize)>) -> Self {
        let mut closing = vec![Vec::new(); a.node_count()];
        for e in 0..a.edge_count() {
            let (x, y) = a.ends(e);
            closing[x.max(y)].push(e);
        }
        let mut node_used = vec![false; b.node_count()];
        if let Some((_, t)) = pin {
            node_used[t] = true;
        }
        Search {
            a,
            b,
            pin,
            closing,
            a_star: (0..a.node_count()).map(|v| a.star_of(v).len()).collect(),
            b_star: (0..b.node_count()).map(|v| b.star_of(v).len()).collect(),
            node_used,
            edge_used: vec![false; b.edge_count()],
            node_map: vec![usize::MAX; a.node_count()],
            edge_map: vec![usize::MAX; a.edge_count()],
            out: Vec::new(),
        }
    }

    fn admissible(&self, v: usize, t: usize) -> bool {
        if self.a.label(v) != self.b.label(t) || self.a_star[v] > self.b_star[t] {
            return false;
        }
        self.closing[v].iter().all(|&s| {
            (0..self.b.edge_count()).any(|u| edge_fits(self.a, self.b, s, u, &self.node_map))
        })
    }

    fn nodes(&mut self, v: usize) {
        if v == self.a.node_count() {
            self.edges(0);
            return;
        }
        match self.pin {
            Some((p, t)) if p == v => {
                self.node_map[v] = t;
                if self.admissible(v, t) {
                    self.nodes(v + 1);
                }
            }
            _ => {
                for t in 0..self.b.node_count() {
                    if self.node_used[t] {
                        continue;
                    }
                    self.node_map[v] = t;
                    if self.admissible(v, t) {
                        self.node_used[t] = true;
                        self.nodes(v + 1);
                        self.node_used[t] = false;
                    }
                }
            }
        }
        self.node_map[v] = usize::MAX;
    }

    fn edges(&mut self, s: usize) {
        if s == self.a.edge_count() {
            self.out.push(Embedding::from_maps(
                self.node_map.clone(),
                self.edge_map.clone(),
                self.b,
            ));
            return;
        }
        for u in 0..self.b.edge_count() {
            if !self.edge_used[u] && edge_fits(self.a, self.b, s, u, &self.node_map) {
                self.edge_used[u] = true;
                self.edge_map[s] = u;
                self.edges(s + 1);
                self.edge_used[u] = false;
            }
        }
    }
}

/// All embeddings `a -> b`, ordered lexicographically by node map then edge
/// map. For `a == b` the identity comes first.
pub fn enumerate_embeddings(a: &Diagram, b: &Diagram) -> Vec<Embedding> {
    let mut search = Search::new(a, b, None);
    search.nodes(0);
    search.out
}

/// Embeddings `a -> b` sending source node `from` to target node `to`, in
/// the same order as [`enumerate_embeddings`].
pub fn enumerate_embeddings_fixing(
    a: &Diagram,
    b: &Diagram,
    from: usize,
    to: usize,
) -> Vec<Embedding> {
    let mut search = Search::new(a, b, Some((from, to)));
    search.nodes(0);
    search.out
}

/// `f ∘ g`: first `g`, then `f`.
pub fn compose_embeddings(f: &Embedding, g: &Embedding) -> Result<Embedding> {
    if g.target_nodes != f.node_map.len() || g.target_edges != f.edge_map.len() {
        return Err(Error::NotComposable(format!(
            "inner map lands in a diagram with {} nodes/{} edges, outer map starts from {}/{}",
            g.target_nodes,
            g.target_edges,
            f.node_map.len(),
            f.edge_map.len()
        )));
    }
    Ok(Embedding {
        node_map: g.node_map.iter().map(|&v| f.node_map[v]).collect(),
        edge_map: g.edge_map.iter().map(|&e| f.edge_map[e]).collect(),
        target_nodes: f.target_nodes,
        target_edges: f.target_edges,
    })
}

/// Whether the embedding maps the star of `center` bijectively onto the star
/// of its image.
pub fn is_star_saturated(source: &Diagram, target: &Diagram, e: &Embedding, center: usize) -> bool {
    let image = e.node(center);
    let target_star = target.star_of(image);
    let mapped: Vec<usize> = source
        .star_of(center)
        .into_iter()
        .map(|s| e.edge(s))
        .collect();
    mapped.len() == target_star.len() && mapped.iter().all(|t| target_star.contains(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::encode_chain;
    use crate::diagram::{Edge, Node};

    #[test]
    fn empty_diagram_embeds_once() {
        let aba = encode_chain("aba").unwrap();
        let all = enumerate_embeddings(&Diagram::empty(), &aba);
        assert_eq!(all.len(), 1);
        assert!(all[0].node_map().is_empty());
    }

    #[test]
    fn single_node_into_aba() {
        let aba = encode_chain("aba").unwrap();
        let a = encode_chain("a").unwrap();
        let all = enumerate_embeddings(&a, &aba);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].node_map(), &[0]);
        assert_eq!(all[1].node_map(), &[2]);
    }

    #[test]
    fn aba_has_only_the_identity() {
        let aba = encode_chain("aba").unwrap();
        let all = enumerate_embeddings(&aba, &aba);
        assert_eq!(all.len(), 1);
        assert!(all[0].is_identity());
    }

    #[test]
    fn identity_first_with_automorphisms() {
        let tri = Diagram::new(
            vec![
                Node::new("x", "a"),
                Node::new("y", "a"),
                Node::new("z", "a"),
            ],
            vec![
                Edge::new("p", "x", "y", "s", false),
                Edge::new("q", "y", "z", "s", false),
                Edge::new("r", "z", "x", "s", false),
            ],
        )
        .unwrap();
        let all = enumerate_embeddings(&tri, &tri);
        assert_eq!(all.len(), 6);
        assert!(all[0].is_identity());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parallel_edges_multiply_edge_maps() {
        let two = Diagram::new(
            vec![Node::new("x", "a"), Node::new("y", "b")],
            vec![
                Edge::new("p", "x", "y", "s", true),
                Edge::new("q", "x", "y", "s", true),
            ],
        )
        .unwrap();
        let one = Diagram::new(
            vec![Node::new("x", "a"), Node::new("y", "b")],
            vec![Edge::new("p", "x", "y", "s", true)],
        )
        .unwrap();
        assert_eq!(enumerate_embeddings(&one, &two).len(), 2);
        assert_eq!(enumerate_embeddings(&two, &two).len(), 2);
        assert!(enumerate_embeddings(&two, &one).is_empty());
    }

    #[test]
    fn orientation_is_preserved() {
        let ab = encode_chain("ab").unwrap();
        let ba = encode_chain("ba").unwrap();
        assert!(enumerate_embeddings(&ab, &ba).is_empty());
    }

    #[test]
    fn identity_laws() {
        let ab = encode_chain("ab").unwrap();
        let aba = encode_chain("aba").unwrap();
        let g = enumerate_embeddings(&ab, &aba).remove(0);
        let id_aba = Embedding::identity(&aba);
        let id_ab = Embedding::identity(&ab);
        assert_eq!(compose_embeddings(&id_aba, &g).unwrap(), g);
        assert_eq!(compose_embeddings(&g, &id_ab).unwrap(), g);
    }

    #[test]
    fn composing_a_then_ab_then_aba() {
        let a = encode_chain("a").unwrap();
        let ab = encode_chain("ab").unwrap();
        let aba = encode_chain("aba").unwrap();
        let into_ab = enumerate_embeddings(&a, &ab).remove(0);
        let ab_into_aba = enumerate_embeddings(&ab, &aba).remove(0);
        assert_eq!(ab_into_aba.node_map(), &[0, 1]);
        let composite = compose_embeddings(&ab_into_aba, &into_ab).unwrap();
        assert!(is_embedding(&a, &aba, &composite));
        assert_eq!(composite, enumerate_embeddings(&a, &aba)[0]);
        assert_eq!(composite.describe(&a, &aba), "1:1|");
    }

    #[test]
    fn composition_checks_shapes() {
        let ab = encode_chain("ab").unwrap();
        let aba = encode_chain("aba").unwrap();
        let g = enumerate_embeddings(&ab, &aba).remove(0);
        assert!(matches!(
            compose_embeddings(&g, &g),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn star_saturation() {
        let aba = encode_chain("aba").unwrap();
        let ababa = encode_chain("ababa").unwrap();
        // b -> a centered at the a
        let right = encode_chain("ba").unwrap();
        let at_end = enumerate_embeddings_fixing(&right, &aba, 1, 2);
        assert_eq!(at_end.len(), 1);
        assert!(is_star_saturated(&right, &aba, &at_end[0], 1));
        // a -> b centered at the a, placed on an interior a
        let left = encode_chain("ab").unwrap();
        let interior = enumerate_embeddings_fixing(&left, &ababa, 0, 2);
        assert_eq!(interior.len(), 1);
        assert!(!is_star_saturated(&left, &ababa, &interior[0], 0));
        let lone = encode_chain("a").unwrap();
        let e = enumerate_embeddings(&lone, &lone).remove(0);
        assert!(is_star_saturated(&lone, &lone, &e, 0));
    }
}
