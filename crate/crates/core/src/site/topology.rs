use serde::Serialize;

use super::sieve::{generate_sieve, maximal_sieve, pullback_sieve, Sieve};
use super::{Arrow, Obj, Workspace};

/// Covering families per object.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Base {
    families: Vec<Vec<Vec<Arrow>>>,
    cover_family: Vec<Option<usize>>,
}

impl Base {
    /// The grammar base: every isomorphism into an object as a singleton
    /// family (identity first), plus the cover family of a correct object.
    pub fn from_workspace(w: &Workspace) -> Self {
        let mut base = Base::default();
        for o in w.objects() {
            let mut fams = vec![vec![w.identity(o)]];
            for &a in w.arrows_into(o) {
                if a != w.identity(o) && w.is_iso(a) {
                    fams.push(vec![a]);
                }
            }
            let cover = w.cover_arrows(o).map(|c| {
                fams.push(c);
                fams.len() - 1
            });
            base.families.push(fams);
            base.cover_family.push(cover);
        }
        base
    }

    pub fn families(&self, o: Obj) -> &[Vec<Arrow>] {
        &self.families[o.0]
    }

    /// Removes an arrow from the cover family of `o`. Used to build
    /// negative controls; returns false when there was nothing to remove.
    pub fn drop_from_cover(&mut self, o: Obj, arrow: Arrow) -> bool {
        let Some(i) = self.cover_family[o.0] else {
            return false;
        };
        let fam = &mut self.families[o.0][i];
        let before = fam.len();
        fam.retain(|&a| a != arrow);
        fam.len() != before
    }

    /// Whether `family` equals (as a set) some family of `K(o)`.
    pub fn contains_family(&self, o: Obj, family: &[Arrow]) -> bool {
        let as_set = |f: &[Arrow]| f.iter().copied().collect::<std::collections::BTreeSet<_>>();
        let wanted = as_set(family);
        self.families[o.0].iter().any(|f| as_set(f) == wanted)
    }
}

/// The covering families of the grammar base on `d`.
pub fn kg_families(d: Obj, w: &Workspace) -> &[Vec<Arrow>] {
    w.base().families(d)
}

/// Which sieves count as covering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum TopologyVariant {
    /// Sieves containing some base family.
    #[default]
    Generated,
    /// Exactly the maximal sieve and, on correct objects, the cover sieve.
    Literal,
}

pub fn in_topology(s: &Sieve, w: &Workspace, variant: TopologyVariant) -> bool {
    match variant {
        TopologyVariant::Generated => w
            .base()
            .families(s.on)
            .iter()
            .any(|fam| fam.iter().all(|&a| s.contains(a))),
        TopologyVariant::Literal => {
            *s == maximal_sieve(s.on, w)
                || w.cover_arrows(s.on)
                    .is_some_and(|c| *s == generate_sieve(s.on, c, w))
        }
    }
}

/// `s` is closed when every arrow `f` into `s.on` whose pullback of `s` is
/// covering already lies in `s`.
pub fn is_closed(s: &Sieve, w: &Workspace, variant: TopologyVariant) -> bool {
    w.arrows_into(s.on)
        .iter()
        .all(|&f| s.contains(f) || !in_topology(&pullback_sieve(f, s, w), w, variant))
}

/// Least closed sieve containing `s`.
pub fn close_sieve(s: &Sieve, w: &Workspace, variant: TopologyVariant) -> Sieve {
    let mut current = s.clone();
    loop {
        let forced: Vec<Arrow> = w
            .arrows_into(current.on)
            .iter()
            .copied()
            .filter(|&f| {
                !current.contains(f) && in_topology(&pullback_sieve(f, &current, w), w, variant)
            })
            .collect();
        if forced.is_empty() {
            return current;
        }
        current = generate_sieve(current.on, current.arrows.iter().copied().chain(forced), w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::site::{cover_sieve, enumerate_sieves};

    #[test]
    fn base_families() {
        let w = fixtures::ws_alt();
        let m_b = w.find_object("M_b").unwrap();
        let aba = w.find_object("D_ABA#0").unwrap();
        assert_eq!(kg_families(m_b, &w).len(), 1);
        let fams = kg_families(aba, &w);
        assert_eq!(fams.len(), 2);
        assert_eq!(fams[0], vec![w.identity(aba)]);
        assert_eq!(fams[1].len(), 3);
        let e = fixtures::ws_empty();
        let empty = e.find_object("EMPTY#0").unwrap();
        let fams = kg_families(empty, &e);
        assert_eq!(fams.len(), 2);
        assert!(fams[1].is_empty());
    }

    #[test]
    fn membership() {
        let w = fixtures::ws_alt();
        let aba = w.find_object("D_ABA#0").unwrap();
        for o in w.objects() {
            assert!(in_topology(
                &maximal_sieve(o, &w),
                &w,
                TopologyVariant::Generated
            ));
        }
        assert!(in_topology(
            &cover_sieve(aba, &w).unwrap(),
            &w,
            TopologyVariant::Generated
        ));
        assert!(!in_topology(
            &Sieve::empty(aba),
            &w,
            TopologyVariant::Generated
        ));
    }

    #[test]
    fn generated_membership_matches_the_cover_formula() {
        for w in [
            fixtures::ws_alt(),
            fixtures::ws_empty(),
            fixtures::ws_ring(),
        ] {
            for o in w.objects() {
                let max = maximal_sieve(o, &w);
                let cover = cover_sieve(o, &w);
                for s in enumerate_sieves(o, &w, 20).unwrap() {
                    let expected = s == max || cover.as_ref().is_some_and(|c| s.is_superset(c));
                    assert_eq!(in_topology(&s, &w, TopologyVariant::Generated), expected);
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let w = fixtures::ws_alt();
        let aba = w.find_object("D_ABA#0").unwrap();
        let m_b = w.find_object("M_b").unwrap();
        let g = TopologyVariant::Generated;
        assert!(is_closed(&maximal_sieve(aba, &w), &w, g));
        let cover = cover_sieve(aba, &w).unwrap();
        assert!(!is_closed(&cover, &w, g));
        assert_eq!(close_sieve(&cover, &w, g), maximal_sieve(aba, &w));
        assert!(is_closed(&Sieve::empty(m_b), &w, g));
        let e = fixtures::ws_empty();
        let empty = e.find_object("EMPTY#0").unwrap();
        assert!(!is_closed(&Sieve::empty(empty), &e, g));
        assert!(is_closed(&maximal_sieve(empty, &e), &e, g));
    }

    #[test]
    fn closure_is_extensive_and_idempotent() {
        let w = fixtures::ws_empty();
        for o in w.objects() {
            for s in enumerate_sieves(o, &w, 20).unwrap() {
                let c = close_sieve(&s, &w, TopologyVariant::Generated);
                assert!(c.is_superset(&s));
                assert_eq!(close_sieve(&c, &w, TopologyVariant::Generated), c);
                assert!(is_closed(&c, &w, TopologyVariant::Generated));
            }
        }
    }
}
