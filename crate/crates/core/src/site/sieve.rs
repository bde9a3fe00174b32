use std::collections::BTreeSet;

use super::{Arrow, Obj, Workspace};
use crate::error::{Error, Result};

/// A set of arrows into one object, closed under precomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub on: Obj,
    pub arrows: BTreeSet<Arrow>,
}

impl Sieve {
    pub fn empty(on: Obj) -> Self {
        Sieve {
            on,
            arrows: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, a: Arrow) -> bool {
        self.arrows.contains(&a)
    }

    pub fn is_superset(&self, other: &Sieve) -> bool {
        self.on == other.on && self.arrows.is_superset(&other.arrows)
    }

    pub fn ids<'w>(&self, w: &'w Workspace) -> Vec<&'w str> {
        self.arrows.iter().map(|&a| w.arrow_id(a)).collect()
    }
}

/// Union of `hom(x, d)` over every object `x` of the workspace.
pub fn all_morphisms_into(d: Obj, w: &Workspace) -> Vec<Arrow> {
    w.arrows_into(d).to_vec()
}

pub fn maximal_sieve(d: Obj, w: &Workspace) -> Sieve {
    Sieve {
        on: d,
        arrows: w.arrows_into(d).iter().copied().collect(),
    }
}

/// Least precomposition-closed set containing the generators. Generators
/// not ending at `d` are ignored.
pub fn generate_sieve(d: Obj, generators: impl IntoIterator<Item = Arrow>, w: &Workspace) -> Sieve {
    let mut arrows = BTreeSet::new();
    let mut pending: Vec<Arrow> = generators
        .into_iter()
        .filter(|&a| w.target(a) == d)
        .collect();
    while let Some(f) = pending.pop() {
        if !arrows.insert(f) {
            continue;
        }
        for &g in w.arrows_into(w.source(f)) {
            if let Some(fg) = w.try_compose(f, g) {
                if !arrows.contains(&fg) {
                    pending.push(fg);
                }
            }
        }
    }
    Sieve { on: d, arrows }
}

/// The sieve generated by the cover-entry arrows; `None` on neighbourhood
/// objects.
pub fn cover_sieve(d: Obj, w: &Workspace) -> Option<Sieve> {
    w.cover_arrows(d).map(|gens| generate_sieve(d, gens, w))
}

/// `{f : Cod(f) = Dom(h), h ∘ f ∈ s}`.
pub fn pullback_sieve(h: Arrow, s: &Sieve, w: &Workspace) -> Sieve {
    debug_assert_eq!(w.target(h), s.on);
    let b = w.source(h);
    Sieve {
        on: b,
        arrows: w
            .arrows_into(b)
            .iter()
            .copied()
            .filter(|&f| w.try_compose(h, f).is_some_and(|hf| s.contains(hf)))
            .collect(),
    }
}

/// Structural check: every arrow ends at `s.on` and every precomposite that
/// exists in the category is present.
pub fn is_sieve(s: &Sieve, w: &Workspace) -> bool {
    s.arrows.iter().all(|&f| {
        w.target(f) == s.on
            && w.arrows_into(w.source(f))
                .iter()
                .all(|&g| w.try_compose(f, g).is_none_or(|fg| s.contains(fg)))
    })
}

/// Every sieve on `d`, ordered by size then arrow set. Refuses when `d`
/// receives more than `max_arrows` arrows.
pub fn enumerate_sieves(d: Obj, w: &Workspace, max_arrows: usize) -> Result<Vec<Sieve>> {
    let into = w.arrows_into(d);
    // masks are u64
    let bound = max_arrows.min(64);
    if into.len() > bound {
        return Err(Error::SizeBound {
            what: format!("object `{}`", w.object_id(d)),
            found: into.len(),
            bound,
        });
    }
    // principal closure of each arrow, as bit masks over `into`
    let position = |a: Arrow| {
        into.iter()
            .position(|&x| x == a)
            .expect("closure stays in the hom")
    };
    let closure: Vec<u64> = into
        .iter()
        .map(|&f| {
            generate_sieve(d, [f], w)
                .arrows
                .iter()
                .fold(0u64, |m, &a| m | 1 << position(a))
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut stack = vec![(0usize, 0u64, 0u64)];
    // (next arrow, included mask, excluded mask)
    while let Some((i, inc, exc)) = stack.pop() {
        if i == into.len() {
            found.insert(inc);
            continue;
        }
        if inc & 1 << i != 0 {
            stack.push((i + 1, inc, exc));
            continue;
        }
        stack.push((i + 1, inc, exc | 1 << i));
        let with = inc | closure[i];
        if with & exc == 0 {
            stack.push((i + 1, with, exc));
        }
    }
    let mut sieves: Vec<Sieve> = found
        .into_iter()
        .map(|mask| Sieve {
            on: d,
            arrows: (0..into.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| into[i])
                .collect(),
        })
        .collect();
    sieves.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.arrows.cmp(&b.arrows)));
    Ok(sieves)
}
