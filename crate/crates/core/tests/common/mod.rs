//! Brute-force oracles shared by the integration tests. None of them reuse
//! the library's search code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use syntop::diagram::Diagram;
use syntop::site::{Arrow, ExtObject, Obj, Workspace};

/// Every tuple over `0..base` of length `len`, in lexicographic order.
pub fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn injective(t: &[usize]) -> bool {
    t.iter().collect::<BTreeSet<_>>().len() == t.len()
}

fn node_pos(d: &Diagram, id: &str) -> usize {
    d.nodes().iter().position(|n| n.id == id).unwrap()
}

/// Exhaustive injective assignments of nodes and edges preserving labels,
/// sorts, orientation and incidence, as sorted `(node_map, edge_map)` pairs.
pub fn brute_embeddings(a: &Diagram, b: &Diagram) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for nm in tuples(b.nodes().len(), a.nodes().len()) {
        if !injective(&nm) || (0..nm.len()).any(|v| a.nodes()[v].label != b.nodes()[nm[v]].label) {
            continue;
        }
        for em in tuples(b.edges().len(), a.edges().len()) {
            if !injective(&em) {
                continue;
            }
            let ok = a.edges().iter().zip(&em).all(|(s, &t)| {
                let t = &b.edges()[t];
                let (x, y) = (nm[node_pos(a, &s.a)], nm[node_pos(a, &s.b)]);
                let (p, q) = (node_pos(b, &t.a), node_pos(b, &t.b));
                s.sort == t.sort
                    && s.directed == t.directed
                    && ((x, y) == (p, q) || (!s.directed && (y, x) == (p, q)))
            });
            if ok {
                out.push((nm.clone(), em));
            }
        }
    }
    out.sort();
    out
}

/// Every target edge touching the center's image is hit by a source edge.
pub fn brute_saturated(b: &Diagram, nm: &[usize], em: &[usize], center: usize) -> bool {
    let c = nm[center];
    let image: BTreeSet<usize> = em.iter().copied().collect();
    b.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| node_pos(b, &e.a) == c || node_pos(b, &e.b) == c)
        .all(|(i, _)| image.contains(&i))
}

/// Scan oracle for `a(ba)^n`, `n >= 1`.
pub fn is_alternating(s: &str) -> bool {
    s.len() >= 3
        && s.len() % 2 == 1
        && s.chars()
            .enumerate()
            .all(|(i, c)| c == if i % 2 == 0 { 'a' } else { 'b' })
}

/// Number of covers by direct counting of candidates per node.
pub fn brute_cover_count(d: &Diagram, g: &syntop::grammar::Grammar) -> u128 {
    let mut total: u128 = 1;
    for v in 0..d.nodes().len() {
        let mut here = 0u128;
        for n in g.neighbourhoods() {
            if n.symbol != d.nodes()[v].label {
                continue;
            }
            let center = node_pos(&n.diagram, &n.center);
            here += brute_embeddings(&n.diagram, d)
                .iter()
                .filter(|(nm, em)| nm[center] == v && brute_saturated(d, nm, em, center))
                .count() as u128;
        }
        total *= here;
    }
    total
}

/// All strings over `alphabet` with length in `lengths`.
pub fn words(alphabet: &[char], lengths: std::ops::RangeInclusive<usize>) -> Vec<String> {
    let mut out = Vec::new();
    for len in lengths {
        for t in tuples(alphabet.len(), len) {
            out.push(t.iter().map(|&i| alphabet[i]).collect());
        }
    }
    out
}

/// Sieves on `d` found by testing every subset of the arrows into it for
/// closure under precomposition.
pub fn brute_sieves(d: Obj, w: &Workspace) -> Vec<BTreeSet<Arrow>> {
    let into: Vec<Arrow> = w.arrows().filter(|&a| w.target(a) == d).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << into.len()) {
        let s: BTreeSet<Arrow> = (0..into.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| into[i])
            .collect();
        let closed = s.iter().all(|&f| {
            w.arrows()
                .filter(|&g| w.target(g) == w.source(f))
                .all(|g| w.try_compose(f, g).is_none_or(|fg| s.contains(&fg)))
        });
        if closed {
            out.push(s);
        }
    }
    out
}

/// `f ∘ g` on raw maps.
pub fn compose_maps(
    f: &(Vec<usize>, Vec<usize>),
    g: &(Vec<usize>, Vec<usize>),
) -> (Vec<usize>, Vec<usize>) {
    (
        g.0.iter().map(|&x| f.0[x]).collect(),
        g.1.iter().map(|&x| f.1[x]).collect(),
    )
}

/// Hom-set by definition: for a neighbourhood source, the cover entries of
/// the target that use it; between correct objects, brute embeddings whose
/// cover entries commute.
pub fn brute_hom(w: &Workspace, s: Obj, t: Obj) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    match (w.object(s), w.object(t)) {
        (ExtObject::Nbhd(a), ExtObject::Nbhd(b)) => {
            if a == b {
                let d = w.diagram(s);
                [(
                    (0..d.nodes().len()).collect(),
                    (0..d.edges().len()).collect(),
                )]
                .into()
            } else {
                BTreeSet::new()
            }
        }
        (ExtObject::Correct(_), ExtObject::Nbhd(_)) => BTreeSet::new(),
        (ExtObject::Nbhd(n), ExtObject::Correct(c)) => brute_embeddings(w.diagram(s), w.diagram(t))
            .into_iter()
            .filter(|(nm, em)| {
                c.cover.entries().iter().any(|e| {
                    e.neighbourhood == *n
                        && e.embedding.node_map() == &nm[..]
                        && e.embedding.edge_map() == &em[..]
                })
            })
            .collect(),
        (ExtObject::Correct(a), ExtObject::Correct(b)) => {
            brute_embeddings(w.diagram(s), w.diagram(t))
                .into_iter()
                .filter(|e| {
                    a.cover.entries().iter().enumerate().all(|(v, entry)| {
                        let image = b.cover.entry(e.0[v]);
                        let own = (
                            entry.embedding.node_map().to_vec(),
                            entry.embedding.edge_map().to_vec(),
                        );
                        image.neighbourhood == entry.neighbourhood
                            && compose_maps(e, &own)
                                == (
                                    image.embedding.node_map().to_vec(),
                                    image.embedding.edge_map().to_vec(),
                                )
                    })
                })
                .collect()
        }
    }
}
