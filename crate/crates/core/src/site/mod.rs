//! The extended category of correct diagrams over a finite workspace.
//!
//! Objects are the grammar's neighbourhood diagrams plus correct diagrams
//! (a diagram together with one of its syntax covers). Arrows follow four
//! cases by source/target kind:
//!
//! * correct to correct: embeddings whose target cover agrees with the
//!   source cover at every node (see [`CoverCompat`]);
//! * neighbourhood to correct: the cover-entry embeddings of that
//!   neighbourhood;
//! * correct to neighbourhood: none;
//! * neighbourhood to neighbourhood: the identity only.
//!
//! Every nonempty correct diagram that maps into a correct diagram `D` maps
//! onto all of `D`: cover entries are star-saturated, so the image of each
//! node carries its whole star and the image is a union of components. The
//! workspace therefore needs no closure step beyond the listed diagrams.

mod sieve;
mod topology;
mod verify;

pub use sieve::{
    all_morphisms_into, cover_sieve, enumerate_sieves, generate_sieve, is_sieve, maximal_sieve,
    pullback_sieve, Sieve,
};
pub use topology::{close_sieve, in_topology, is_closed, kg_families, Base, TopologyVariant};
pub use verify::{
    verify_base, verify_base_axioms, verify_category, verify_topology_axioms, AxiomReport,
    Counterexample, TopologyCheck,
};

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::cover::{cover_at, find_covers, uncovered_nodes, CorrectDiagram};
use crate::diagram::{validate_diagram, Diagram};
use crate::embedding::{compose_embeddings, enumerate_embeddings, Embedding};
use crate::error::{Error, Result};
use crate::grammar::{validate_grammar, Grammar};
use crate::report::{ValidationReport, Violation};

/// Index of an object in a workspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Obj(pub usize);

/// Index of an arrow in a workspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Arrow(pub usize);

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtObject {
    Correct(CorrectDiagram),
    /// Index into the grammar's neighbourhood list.
    Nbhd(usize),
}

impl ExtObject {
    pub fn is_correct(&self) -> bool {
        matches!(self, ExtObject::Correct(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub source: Obj,
    pub target: Obj,
    pub embedding: Embedding,
}

/// How strictly a correct-to-correct embedding must respect covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum CoverCompat {
    /// Same neighbourhood at every node, and the cover embeddings commute
    /// with the map.
    #[default]
    Strict,
    /// Same neighbourhood at every node only.
    Lax,
}

/// A diagram to be placed in a workspace. `cover: None` admits every cover.
#[derive(Debug, Clone)]
pub struct DiagramSpec {
    pub name: String,
    pub diagram: Diagram,
    pub cover: Option<usize>,
}

impl DiagramSpec {
    pub fn new(name: impl Into<String>, diagram: Diagram) -> Self {
        DiagramSpec {
            name: name.into(),
            diagram,
            cover: None,
        }
    }

    pub fn with_cover(mut self, index: usize) -> Self {
        self.cover = Some(index);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Workspace {
    grammar: Grammar,
    compat: CoverCompat,
    objects: Vec<ExtObject>,
    ids: Vec<String>,
    arrows: Vec<Morphism>,
    arrow_ids: Vec<String>,
    into: Vec<Vec<Arrow>>,
    homs: HashMap<(Obj, Obj), Vec<Arrow>>,
    identities: Vec<Arrow>,
    lookup: HashMap<(Obj, Obj, Embedding), Arrow>,
    composites: HashMap<(Arrow, Arrow), Option<Arrow>>,
    base: Base,
}

impl Workspace {
    /// Builds the workspace: every neighbourhood of the grammar, then each
    /// listed diagram with all (or the selected) covers, in listing order.
    pub fn build(
        grammar: Grammar,
        specs: Vec<DiagramSpec>,
        compat: CoverCompat,
    ) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::default();
        report.extend_scoped("grammar", validate_grammar(&grammar));
        if !report.is_ok() {
            return Err(report);
        }
        let mut objects: Vec<ExtObject> = (0..grammar.neighbourhoods().len())
            .map(ExtObject::Nbhd)
            .collect();
        let mut names = std::collections::BTreeSet::new();
        for spec in specs {
            let scope = format!("diagram {}", spec.name);
            if spec.name.is_empty() || spec.name.contains('#') {
                report.push(Violation::new(
                    "diagram-name",
                    spec.name.clone(),
                    "names must be nonempty and must not contain `#`",
                ));
                continue;
            }
            if !names.insert(spec.name.clone()) {
                report.push(Violation::new(
                    "duplicate-diagram",
                    spec.name.clone(),
                    "name used twice",
                ));
                continue;
            }
            let checked = validate_diagram(
                &spec.diagram,
                &grammar.alphabet,
                &grammar.sorts,
                &grammar.shape,
            );
            if !checked.is_ok() {
                report.extend_scoped(&scope, checked);
                continue;
            }
            let covers: Vec<(usize, _)> = match spec.cover {
                Some(k) => match cover_at(&spec.diagram, &grammar, k) {
                    Some(c) => vec![(k, c)],
                    None => {
                        report.push(Violation::new(
                            "cover-index",
                            spec.name.clone(),
                            format!("diagram has no cover with index {k}"),
                        ));
                        continue;
                    }
                },
                None => find_covers(&spec.diagram, &grammar, None)
                    .into_iter()
                    .enumerate()
                    .collect(),
            };
            if covers.is_empty() {
                report.push(Violation::new(
                    "not-correct",
                    spec.name.clone(),
                    format!(
                        "no neighbourhood covers node(s) {}",
                        uncovered_nodes(&spec.diagram, &grammar).join(", ")
                    ),
                ));
                continue;
            }
            for (index, cover) in covers {
                objects.push(ExtObject::Correct(CorrectDiagram {
                    name: spec.name.clone(),
                    diagram: spec.diagram.clone(),
                    cover,
                    index,
                }));
            }
        }
        if !report.is_ok() {
            return Err(report);
        }
        Ok(Workspace::assemble(grammar, objects, compat))
    }

    fn assemble(grammar: Grammar, objects: Vec<ExtObject>, compat: CoverCompat) -> Self {
        let ids = objects
            .iter()
            .map(|o| match o {
                ExtObject::Correct(c) => c.object_id(),
                ExtObject::Nbhd(n) => grammar.neighbourhood(*n).name.clone(),
            })
            .collect();
        let mut w = Workspace {
            grammar,
            compat,
            objects,
            ids,
            arrows: Vec::new(),
            arrow_ids: Vec::new(),
            into: Vec::new(),
            homs: HashMap::new(),
            identities: Vec::new(),
            lookup: HashMap::new(),
            composites: HashMap::new(),
            base: Base::default(),
        };
        let n = w.objects.len();
        w.into = vec![Vec::new(); n];
        for s in 0..n {
            for t in 0..n {
                let (s, t) = (Obj(s), Obj(t));
                let mut hom = Vec::new();
                for embedding in w.compute_hom(s, t) {
                    let a = Arrow(w.arrows.len());
                    w.lookup.insert((s, t, embedding.clone()), a);
                    w.arrow_ids.push(format!(
                        "{}->{}[{}]",
                        w.ids[s.0],
                        w.ids[t.0],
                        embedding.describe(w.diagram(s), w.diagram(t))
                    ));
                    w.arrows.push(Morphism {
                        source: s,
                        target: t,
                        embedding,
                    });
                    hom.push(a);
                }
                if !hom.is_empty() {
                    w.homs.insert((s, t), hom);
                }
            }
        }
        for (i, m) in w.arrows.iter().enumerate() {
            w.into[m.target.0].push(Arrow(i));
        }
        w.identities = (0..n)
            .map(|o| {
                let o = Obj(o);
                let id = Embedding::identity(w.diagram(o));
                w.lookup[&(o, o, id)]
            })
            .collect();
        let mut composites = HashMap::new();
        for g in 0..w.arrows.len() {
            let mid = w.arrows[g].target;
            let from = w.arrows[g].source;
            for f in w.arrows_from(mid) {
                let to = w.arrows[f.0].target;
                let e = compose_embeddings(&w.arrows[f.0].embedding, &w.arrows[g].embedding)
                    .expect("arrows meeting at an object have matching shapes");
                composites.insert((f, Arrow(g)), w.lookup.get(&(from, to, e)).copied());
            }
        }
        w.composites = composites;
        w.base = Base::from_workspace(&w);
        w
    }

    fn arrows_from(&self, source: Obj) -> Vec<Arrow> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == source)
            .map(Arrow)
            .collect()
    }

    /// The four-case hom-set rule, in embedding order.
    fn compute_hom(&self, s: Obj, t: Obj) -> Vec<Embedding> {
        match (&self.objects[s.0], &self.objects[t.0]) {
            (ExtObject::Nbhd(a), ExtObject::Nbhd(b)) => {
                if a == b {
                    vec![Embedding::identity(self.diagram(s))]
                } else {
                    Vec::new()
                }
            }
            (ExtObject::Correct(_), ExtObject::Nbhd(_)) => Vec::new(),
            (ExtObject::Nbhd(n), ExtObject::Correct(c)) => {
                let mut maps: Vec<Embedding> = c
                    .cover
                    .entries()
                    .iter()
                    .filter(|e| e.neighbourhood == *n)
                    .map(|e| e.embedding.clone())
                    .collect();
                maps.sort();
                maps.dedup();
                maps
            }
            (ExtObject::Correct(a), ExtObject::Correct(b)) => {
                enumerate_embeddings(&a.diagram, &b.diagram)
                    .into_iter()
                    .filter(|e| covers_agree(a, b, e, self.compat))
                    .collect()
            }
        }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    /// The grammar base on this workspace.
    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn compat(&self) -> CoverCompat {
        self.compat
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.objects.len()).map(Obj)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object(&self, o: Obj) -> &ExtObject {
        &self.objects[o.0]
    }

    pub fn object_id(&self, o: Obj) -> &str {
        &self.ids[o.0]
    }

    pub fn find_object(&self, id: &str) -> Result<Obj> {
        self.ids
            .iter()
            .position(|i| i == id)
            .map(Obj)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn is_correct(&self, o: Obj) -> bool {
        self.objects[o.0].is_correct()
    }

    pub fn correct(&self, o: Obj) -> Option<&CorrectDiagram> {
        match &self.objects[o.0] {
            ExtObject::Correct(c) => Some(c),
            ExtObject::Nbhd(_) => None,
        }
    }

    /// Underlying diagram of an object.
    pub fn diagram(&self, o: Obj) -> &Diagram {
        match &self.objects[o.0] {
            ExtObject::Correct(c) => &c.diagram,
            ExtObject::Nbhd(n) => &self.grammar.neighbourhood(*n).diagram,
        }
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> {
        (0..self.arrows.len()).map(Arrow)
    }

    pub fn morphism(&self, a: Arrow) -> &Morphism {
        &self.arrows[a.0]
    }

    pub fn source(&self, a: Arrow) -> Obj {
        self.arrows[a.0].source
    }

    pub fn target(&self, a: Arrow) -> Obj {
        self.arrows[a.0].target
    }

    /// Canonical id: `source->target[node pairs|edge pairs]`.
    pub fn arrow_id(&self, a: Arrow) -> &str {
        &self.arrow_ids[a.0]
    }

    pub fn find_arrow(&self, id: &str) -> Result<Arrow> {
        self.arrow_ids
            .iter()
            .position(|i| i == id)
            .map(Arrow)
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    /// Arrow with the given endpoints and embedding, if it is in the category.
    pub fn arrow_for(&self, source: Obj, target: Obj, embedding: &Embedding) -> Option<Arrow> {
        self.lookup
            .get(&(source, target, embedding.clone()))
            .copied()
    }

    pub fn identity(&self, o: Obj) -> Arrow {
        self.identities[o.0]
    }

    pub fn is_identity(&self, a: Arrow) -> bool {
        self.identities[self.source(a).0] == a
    }

    /// Arrows into `o`, grouped by source in object order, then embedding order.
    pub fn arrows_into(&self, o: Obj) -> &[Arrow] {
        &self.into[o.0]
    }

    /// The hom-set, in embedding order.
    pub fn hom(&self, a: Obj, b: Obj) -> &[Arrow] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `f ∘ g`: first `g`, then `f`. Errors on mismatched endpoints or when
    /// the composite embedding is not an arrow of the category (possible
    /// only under [`CoverCompat::Lax`]).
    pub fn compose(&self, f: Arrow, g: Arrow) -> Result<Arrow> {
        if self.target(g) != self.source(f) {
            return Err(Error::NotComposable(format!(
                "`{}` ends at {}, `{}` starts at {}",
                self.arrow_id(g),
                self.object_id(self.target(g)),
                self.arrow_id(f),
                self.object_id(self.source(f))
            )));
        }
        self.composites[&(f, g)].ok_or_else(|| {
            Error::NotComposable(format!(
                "composite of `{}` after `{}` is not an arrow of the category",
                self.arrow_id(f),
                self.arrow_id(g)
            ))
        })
    }

    /// Composite if defined, `None` when endpoints mismatch or the composite
    /// falls outside the category.
    pub fn try_compose(&self, f: Arrow, g: Arrow) -> Option<Arrow> {
        self.composites.get(&(f, g)).copied().flatten()
    }

    /// Whether some `k` satisfies `f ∘ k = h`.
    pub fn factors_through(&self, h: Arrow, f: Arrow) -> Option<Arrow> {
        if self.target(h) != self.target(f) {
            return None;
        }
        self.arrows_into(self.source(f))
            .iter()
            .copied()
            .find(|&k| self.source(k) == self.source(h) && self.try_compose(f, k) == Some(h))
    }

    /// Whether `a` has a two-sided inverse in the workspace.
    pub fn is_iso(&self, a: Arrow) -> bool {
        let (s, t) = (self.source(a), self.target(a));
        self.hom(t, s).iter().any(|&b| {
            self.try_compose(a, b) == Some(self.identity(t))
                && self.try_compose(b, a) == Some(self.identity(s))
        })
    }

    /// The cover-entry arrows of a correct object, in node order.
    pub fn cover_arrows(&self, o: Obj) -> Option<Vec<Arrow>> {
        let c = self.correct(o)?;
        Some(
            c.cover
                .entries()
                .iter()
                .map(|e| {
                    let n = self
                        .objects
                        .iter()
                        .position(|x| *x == ExtObject::Nbhd(e.neighbourhood))
                        .expect("every neighbourhood is an object");
                    self.arrow_for(Obj(n), o, &e.embedding)
                        .expect("cover entries are arrows")
                })
                .collect(),
        )
    }
}

/// Whether an embedding of correct diagrams respects their covers.
pub fn covers_agree(
    a: &CorrectDiagram,
    b: &CorrectDiagram,
    e: &Embedding,
    compat: CoverCompat,
) -> bool {
    a.cover.entries().iter().enumerate().all(|(v, entry)| {
        let image = b.cover.entry(e.node(v));
        if image.neighbourhood != entry.neighbourhood {
            return false;
        }
        match compat {
            CoverCompat::Lax => true,
            CoverCompat::Strict => {
                compose_embeddings(e, &entry.embedding).is_ok_and(|c| c == image.embedding)
            }
        }
    })
}
