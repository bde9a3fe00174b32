//! Recognition: a diagram is correct when every node admits a star-saturated
//! embedding of some neighbourhood of its symbol, centered at that node.

use serde::Serialize;

use crate::chain::encode_chain;
use crate::diagram::{Diagram, ShapeCondition};
use crate::embedding::{enumerate_embeddings_fixing, is_star_saturated, Embedding};
use crate::error::{Error, Result};
use crate::grammar::Grammar;

/// One node's choice: which neighbourhood, embedded how.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverEntry {
    pub node: usize,
    pub neighbourhood: usize,
    pub embedding: Embedding,
}

/// One cover entry per node, indexed by node position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyntaxCover {
    entries: Vec<CoverEntry>,
}

impl SyntaxCover {
    pub fn new(entries: Vec<CoverEntry>) -> Self {
        SyntaxCover { entries }
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    pub fn entry(&self, node: usize) -> &CoverEntry {
        &self.entries[node]
    }

    /// Structural check against the diagram and grammar.
    pub fn is_valid_for(&self, d: &Diagram, g: &Grammar) -> bool {
        self.entries.len() == d.node_count()
            && self.entries.iter().enumerate().all(|(v, entry)| {
                let n = g.neighbourhood(entry.neighbourhood);
                let Some(center) = n.center_index() else {
                    return false;
                };
                entry.node == v
                    && n.symbol == d.label(v)
                    && crate::embedding::is_embedding(&n.diagram, d, &entry.embedding)
                    && entry.embedding.node(center) == v
                    && is_star_saturated(&n.diagram, d, &entry.embedding, center)
            })
    }
}

/// A diagram paired with one of its syntax covers.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectDiagram {
    pub name: String,
    pub diagram: Diagram,
    pub cover: SyntaxCover,
    pub index: usize,
}

impl CorrectDiagram {
    pub fn object_id(&self) -> String {
        format!("{}#{}", self.name, self.index)
    }
}

pub(crate) fn candidates_at(d: &Diagram, v: usize, g: &Grammar) -> Vec<CoverEntry> {
    let mut out = Vec::new();
    for (index, n) in g.family(d.label(v)) {
        let Some(center) = n.center_index() else {
            continue;
        };
        for embedding in enumerate_embeddings_fixing(&n.diagram, d, center, v) {
            if is_star_saturated(&n.diagram, d, &embedding, center) {
                out.push(CoverEntry {
                    node: v,
                    neighbourhood: index,
                    embedding,
                });
            }
        }
    }
    out
}

/// Cover entries available at node `v`: family order, then embedding order.
pub fn candidate_entries(d: &Diagram, v: &str, g: &Grammar) -> Result<Vec<CoverEntry>> {
    let node = d
        .node_index(v)
        .ok_or_else(|| Error::UnknownNode(v.to_string()))?;
    Ok(candidates_at(d, node, g))
}

fn all_candidates(d: &Diagram, g: &Grammar) -> Vec<Vec<CoverEntry>> {
    (0..d.node_count())
        .map(|v| candidates_at(d, v, g))
        .collect()
}

/// All syntax covers in product order (node order, last node varying
/// fastest), truncated at `limit`. Position in this list is the cover index.
pub fn find_covers(d: &Diagram, g: &Grammar, limit: Option<usize>) -> Vec<SyntaxCover> {
    let candidates = all_candidates(d, g);
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    if candidates.iter().any(Vec::is_empty) {
        return out;
    }
    let mut choice = vec![0usize; candidates.len()];
    while out.len() < limit {
        out.push(SyntaxCover::new(
            choice
                .iter()
                .zip(&candidates)
                .map(|(&i, c)| c[i].clone())
                .collect(),
        ));
        // odometer step
        let mut pos = candidates.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
    out
}

/// The cover at a given index without materializing the earlier ones.
pub fn cover_at(d: &Diagram, g: &Grammar, index: usize) -> Option<SyntaxCover> {
    let candidates = all_candidates(d, g);
    let mut rest = index;
    let mut choice = vec![0usize; candidates.len()];
    for pos in (0..candidates.len()).rev() {
        let size = candidates[pos].len();
        if size == 0 {
            return None;
        }
        choice[pos] = rest % size;
        rest /= size;
    }
    if rest != 0 {
        return None;
    }
    Some(SyntaxCover::new(
        choice
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| c[i].clone())
            .collect(),
    ))
}

pub fn is_correct(d: &Diagram, g: &Grammar) -> bool {
    (0..d.node_count()).all(|v| !candidates_at(d, v, g).is_empty())
}

/// Product of candidate-set sizes, saturating.
pub fn cover_count(d: &Diagram, g: &Grammar) -> u128 {
    (0..d.node_count())
        .map(|v| candidates_at(d, v, g).len() as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

/// Ids of nodes with no candidate entry.
pub fn uncovered_nodes(d: &Diagram, g: &Grammar) -> Vec<String> {
    (0..d.node_count())
        .filter(|&v| candidates_at(d, v, g).is_empty())
        .map(|v| d.nodes()[v].id.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recognition {
    pub correct: bool,
    pub covers: u128,
    pub uncovered: Vec<String>,
}

/// Encodes `s` as a chain and recognizes it.
pub fn recognize_string(s: &str, g: &Grammar) -> Result<Recognition> {
    if g.shape != ShapeCondition::Chain {
        return Err(Error::NotAChainGrammar);
    }
    if let Some(c) = s.chars().find(|c| !g.alphabet.contains(&c.to_string())) {
        return Err(Error::UnknownSymbol(c.to_string()));
    }
    let d = encode_chain(s)?;
    let covers = cover_count(&d, g);
    Ok(Recognition {
        correct: covers > 0,
        covers,
        uncovered: uncovered_nodes(&d, g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &Grammar, entries: &[CoverEntry]) -> Vec<String> {
        entries
            .iter()
            .map(|e| g.neighbourhood(e.neighbourhood).name.clone())
            .collect()
    }

    #[test]
    fn candidates_on_aba() {
        let g = fixtures::g_alt();
        let aba = encode_chain("aba").unwrap();
        assert_eq!(
            names(&g, &candidate_entries(&aba, "1", &g).unwrap()),
            ["L_a"]
        );
        assert_eq!(
            names(&g, &candidate_entries(&aba, "2", &g).unwrap()),
            ["M_b"]
        );
        assert_eq!(
            names(&g, &candidate_entries(&aba, "3", &g).unwrap()),
            ["R_a"]
        );
        let a = encode_chain("a").unwrap();
        assert!(candidate_entries(&a, "1", &g).unwrap().is_empty());
        assert!(matches!(
            candidate_entries(&aba, "x", &g),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn aba_has_one_cover() {
        let g = fixtures::g_alt();
        let aba = encode_chain("aba").unwrap();
        let covers = find_covers(&aba, &g, None);
        assert_eq!(covers.len(), 1);
        assert_eq!(names(&g, covers[0].entries()), ["L_a", "M_b", "R_a"]);
        assert!(covers[0].is_valid_for(&aba, &g));
        assert!(is_correct(&aba, &g));
        assert_eq!(cover_count(&aba, &g), 1);
    }

    #[test]
    fn ab_is_not_correct() {
        let g = fixtures::g_alt();
        let ab = encode_chain("ab").unwrap();
        assert!(find_covers(&ab, &g, None).is_empty());
        assert_eq!(uncovered_nodes(&ab, &g), ["2"]);
    }

    #[test]
    fn empty_diagram_is_vacuously_correct() {
        let g = fixtures::g_alt();
        let e = Diagram::empty();
        assert!(is_correct(&e, &g));
        assert_eq!(cover_count(&e, &g), 1);
        let covers = find_covers(&e, &g, None);
        assert_eq!(covers.len(), 1);
        assert!(covers[0].entries().is_empty());
    }

    #[test]
    fn ambiguity_multiplies() {
        let g = fixtures::g_amb();
        let d = encode_chain("ababa").unwrap();
        assert_eq!(cover_count(&d, &g), 4);
        let covers = find_covers(&d, &g, None);
        assert_eq!(covers.len(), 4);
        assert!(covers.iter().all(|c| c.is_valid_for(&d, &g)));
        assert_eq!(find_covers(&d, &g, Some(3)).len(), 3);
        for (k, c) in covers.iter().enumerate() {
            assert_eq!(cover_at(&d, &g, k).as_ref(), Some(c));
        }
        assert_eq!(cover_at(&d, &g, 4), None);
    }

    #[test]
    fn recognize_strings() {
        let g = fixtures::g_alt();
        assert_eq!(recognize_string("aba", &g).unwrap().covers, 1);
        assert!(!recognize_string("ab", &g).unwrap().correct);
        assert!(!recognize_string("a", &g).unwrap().correct);
        assert!(matches!(
            recognize_string("abc", &g),
            Err(Error::UnknownSymbol(_))
        ));
    }
}
