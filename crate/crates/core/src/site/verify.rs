//! Exhaustive (and, for transitivity of sieves, sampled) checks of the
//! category laws, the base axioms and the topology axioms on a workspace.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sieve::{
    cover_sieve, enumerate_sieves, generate_sieve, maximal_sieve, pullback_sieve, Sieve,
};
use super::topology::{in_topology, Base, TopologyVariant};
use super::{Arrow, Obj, Workspace};

/// Combinations of sub-families tried per family in the transitivity check.
const MAX_TRANSITIVITY_CHOICES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub axiom: String,
    pub object: String,
    pub detail: String,
    pub arrows: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Number of instances checked, per axiom.
    pub checked: BTreeMap<String, usize>,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn failures(&self, axiom: &str) -> usize {
        self.counterexamples
            .iter()
            .filter(|c| c.axiom == axiom)
            .count()
    }

    fn tick(&mut self, axiom: &str) {
        *self.checked.entry(axiom.to_string()).or_default() += 1;
    }

    fn fail(
        &mut self,
        w: &Workspace,
        axiom: &str,
        object: Obj,
        detail: String,
        arrows: impl IntoIterator<Item = Arrow>,
    ) {
        self.counterexamples.push(Counterexample {
            axiom: axiom.to_string(),
            object: w.object_id(object).to_string(),
            detail,
            arrows: arrows
                .into_iter()
                .map(|a| w.arrow_id(a).to_string())
                .collect(),
        });
    }

    fn merge(&mut self, other: AxiomReport) {
        for (k, n) in other.checked {
            *self.checked.entry(k).or_default() += n;
        }
        self.counterexamples.extend(other.counterexamples);
        self.notes.extend(other.notes);
    }
}

/// Composition closure, identity laws and associativity.
pub fn verify_category(w: &Workspace) -> AxiomReport {
    let mut r = AxiomReport::default();
    for g in w.arrows() {
        let (s, t) = (w.source(g), w.target(g));
        r.tick("identity");
        if w.try_compose(g, w.identity(s)) != Some(g) || w.try_compose(w.identity(t), g) != Some(g)
        {
            r.fail(w, "identity", t, "identity is not neutral".into(), [g]);
        }
        for f in w.arrows().filter(|&f| w.source(f) == t) {
            r.tick("composition");
            let Some(fg) = w.try_compose(f, g) else {
                r.fail(
                    w,
                    "composition",
                    w.target(f),
                    "composite is not an arrow".into(),
                    [f, g],
                );
                continue;
            };
            for k in w.arrows().filter(|&k| w.source(k) == w.target(f)) {
                r.tick("associativity");
                let left = w.try_compose(k, fg);
                let right = w.try_compose(k, f).and_then(|kf| w.try_compose(kf, g));
                if left != right {
                    r.fail(
                        w,
                        "associativity",
                        w.target(k),
                        "(k f) g differs from k (f g)".into(),
                        [k, f, g],
                    );
                }
            }
        }
    }
    r
}

/// Category laws plus the base axioms for the workspace's grammar base.
pub fn verify_base_axioms(w: &Workspace) -> AxiomReport {
    let mut r = verify_category(w);
    r.merge(verify_base(w, w.base()));
    r
}

/// The three base axioms for an arbitrary assignment of families.
///
/// Stability asks, for each family `{f_i}` on `A` and each `g: B -> A`, for a
/// family `{h_j}` on `B` such that every `g ∘ h_j` factors through some `f_i`.
pub fn verify_base(w: &Workspace, base: &Base) -> AxiomReport {
    let mut r = AxiomReport::default();
    for a in w.objects() {
        // isomorphisms
        for &f in w.arrows_into(a) {
            if w.is_iso(f) {
                r.tick("base-isomorphism");
                if !base.contains_family(a, &[f]) {
                    r.fail(
                        w,
                        "base-isomorphism",
                        a,
                        "isomorphism is not a covering family".into(),
                        [f],
                    );
                }
            }
        }
        for family in base.families(a) {
            // stability
            for &g in w.arrows_into(a) {
                r.tick("base-stability");
                let b = w.source(g);
                let witness = base.families(b).iter().find(|h_family| {
                    h_family.iter().all(|&h| {
                        w.try_compose(g, h).is_some_and(|gh| {
                            family.iter().any(|&f| w.factors_through(gh, f).is_some())
                        })
                    })
                });
                if witness.is_none() {
                    r.fail(
                        w,
                        "base-stability",
                        a,
                        format!(
                            "no covering family on `{}` factors through the family of {} arrow(s) along g",
                            w.object_id(b),
                            family.len()
                        ),
                        std::iter::once(g).chain(family.iter().copied()),
                    );
                }
            }
            // transitivity
            let options: Vec<&[Vec<Arrow>]> =
                family.iter().map(|&f| base.families(w.source(f))).collect();
            let total = options
                .iter()
                .map(|o| o.len())
                .try_fold(1usize, |acc, n| acc.checked_mul(n))
                .unwrap_or(usize::MAX);
            if total > MAX_TRANSITIVITY_CHOICES {
                r.notes.push(format!(
                    "transitivity on `{}` checked on {MAX_TRANSITIVITY_CHOICES} of {total} refinements",
                    w.object_id(a)
                ));
            }
            let mut choice = vec![0usize; options.len()];
            for _ in 0..total.min(MAX_TRANSITIVITY_CHOICES) {
                r.tick("base-transitivity");
                let mut composite = Vec::new();
                let mut undefined = None;
                for (i, &f) in family.iter().enumerate() {
                    for &g in &options[i][choice[i]] {
                        match w.try_compose(f, g) {
                            Some(fg) => composite.push(fg),
                            None => undefined = Some((f, g)),
                        }
                    }
                }
                if let Some((f, g)) = undefined {
                    r.fail(
                        w,
                        "base-transitivity",
                        a,
                        "refinement composite is not an arrow".into(),
                        [f, g],
                    );
                } else if !base.contains_family(a, &composite) {
                    r.fail(
                        w,
                        "base-transitivity",
                        a,
                        "composite family is not covering".into(),
                        composite.iter().copied(),
                    );
                }
                for pos in (0..choice.len()).rev() {
                    choice[pos] += 1;
                    if choice[pos] < options[pos].len() {
                        break;
                    }
                    choice[pos] = 0;
                }
            }
        }
    }
    r
}

/// Parameters of the topology check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopologyCheck {
    pub samples: usize,
    pub seed: u64,
    pub variant: TopologyVariant,
    /// Objects receiving more arrows than this are not enumerated
    /// exhaustively; only their maximal and cover sieves are used as covers.
    pub max_arrows: usize,
}

impl Default for TopologyCheck {
    fn default() -> Self {
        TopologyCheck {
            samples: 200,
            seed: 0,
            variant: TopologyVariant::Generated,
            max_arrows: 16,
        }
    }
}

/// Maximality and stability are checked over every covering sieve.
/// Transitivity is checked, per object, against the maximal and cover
/// sieves, the sieves generated by one arrow or by the cover plus one
/// arrow, and `samples` random sieves drawn from a seeded generator.
pub fn verify_topology_axioms(w: &Workspace, check: &TopologyCheck) -> AxiomReport {
    let mut r = AxiomReport::default();
    let variant = check.variant;
    let covering = |s: &Sieve| in_topology(s, w, variant);
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);

    let covering_sieves: Vec<Vec<Sieve>> = w
        .objects()
        .map(|a| match enumerate_sieves(a, w, check.max_arrows) {
            Ok(all) => all.into_iter().filter(|s| covering(s)).collect(),
            Err(_) => {
                r.notes.push(format!(
                    "covering sieves on `{}` not enumerated (more than {} arrows)",
                    w.object_id(a),
                    check.max_arrows
                ));
                std::iter::once(maximal_sieve(a, w))
                    .chain(cover_sieve(a, w))
                    .filter(|s| covering(s))
                    .collect()
            }
        })
        .collect();

    for a in w.objects() {
        r.tick("maximality");
        let max = maximal_sieve(a, w);
        if !covering(&max) {
            r.fail(
                w,
                "maximality",
                a,
                "maximal sieve is not covering".into(),
                max.arrows.iter().copied(),
            );
        }

        for s in &covering_sieves[a.0] {
            for &h in w.arrows_into(a) {
                r.tick("stability");
                let pulled = pullback_sieve(h, s, w);
                if !covering(&pulled) {
                    r.fail(
                        w,
                        "stability",
                        a,
                        format!(
                            "pullback along h of a covering sieve with {} arrow(s) is not covering on `{}`",
                            s.len(),
                            w.object_id(w.source(h))
                        ),
                        std::iter::once(h).chain(s.arrows.iter().copied()),
                    );
                }
            }
        }

        let into = w.arrows_into(a);
        let mut candidates: BTreeSet<Sieve> = BTreeSet::new();
        candidates.insert(max.clone());
        let cover = cover_sieve(a, w);
        if let Some(c) = &cover {
            candidates.insert(c.clone());
        }
        for &f in into {
            candidates.insert(generate_sieve(a, [f], w));
            if let Some(c) = &cover {
                candidates.insert(generate_sieve(a, c.arrows.iter().copied().chain([f]), w));
            }
        }
        for _ in 0..check.samples {
            let picked: Vec<Arrow> = into.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            candidates.insert(generate_sieve(a, picked, w));
        }
        for s in &covering_sieves[a.0] {
            for candidate in &candidates {
                r.tick("transitivity");
                let locally_covering = s
                    .arrows
                    .iter()
                    .all(|&h| covering(&pullback_sieve(h, candidate, w)));
                if locally_covering && !covering(candidate) {
                    r.fail(
                        w,
                        "transitivity",
                        a,
                        format!(
                            "sieve with {} arrow(s) is locally covering over a covering sieve with {} arrow(s) but is not covering",
                            candidate.len(),
                            s.len()
                        ),
                        candidate.arrows.iter().copied(),
                    );
                }
            }
        }
    }
    r
}
