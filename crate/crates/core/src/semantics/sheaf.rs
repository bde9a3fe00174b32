use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::presheaf::Presheaf;
use crate::error::{Error, Result};
use crate::site::{cover_sieve, Arrow, Obj, Sieve, Workspace};

/// Largest product of sense sets the equalizer check will materialize.
pub const MAX_PRODUCT: u128 = 1 << 20;

/// A compatible choice of one sense per arrow of a sieve, in arrow order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MatchingFamily {
    pub arrows: Vec<Arrow>,
    pub senses: Vec<usize>,
}

impl MatchingFamily {
    pub fn describe(&self, f: &Presheaf, w: &Workspace) -> String {
        let parts: Vec<String> = self
            .arrows
            .iter()
            .zip(&self.senses)
            .map(|(&a, &x)| format!("{} = {}", w.arrow_id(a), f.senses(w.source(a))[x]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Pairs `(f, g, f∘g)` with `f` in the sieve; each forces
/// `x_{f∘g} = F(g)(x_f)`. Indices are positions in the sieve's arrow list.
fn constraints(s: &Sieve, w: &Workspace) -> (Vec<Arrow>, Vec<(usize, Arrow, usize)>) {
    let arrows: Vec<Arrow> = s.arrows.iter().copied().collect();
    let pos: BTreeMap<Arrow, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut out = Vec::new();
    for (i, &f) in arrows.iter().enumerate() {
        for &g in w.arrows_into(w.source(f)) {
            if let Some(fg) = w.try_compose(f, g) {
                if let Some(&j) = pos.get(&fg) {
                    out.push((i, g, j));
                }
            }
        }
    }
    (arrows, out)
}

/// Every matching family for `s`, in lexicographic order of sense choices.
pub fn matching_families(f: &Presheaf, s: &Sieve, w: &Workspace) -> Vec<MatchingFamily> {
    let (arrows, cons) = constraints(s, w);
    // constraints checkable once position `k` is assigned
    let mut due: Vec<Vec<(usize, Arrow, usize)>> = vec![Vec::new(); arrows.len()];
    for &(i, g, j) in &cons {
        due[i.max(j)].push((i, g, j));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(arrows.len());
    fn go(
        k: usize,
        f: &Presheaf,
        w: &Workspace,
        arrows: &[Arrow],
        due: &[Vec<(usize, Arrow, usize)>],
        current: &mut Vec<usize>,
        out: &mut Vec<MatchingFamily>,
    ) {
        if k == arrows.len() {
            out.push(MatchingFamily {
                arrows: arrows.to_vec(),
                senses: current.clone(),
            });
            return;
        }
        for x in 0..f.senses(w.source(arrows[k])).len() {
            current.push(x);
            if due[k]
                .iter()
                .all(|&(i, g, j)| f.restrict(g, current[i]) == Some(current[j]))
            {
                go(k + 1, f, w, arrows, due, current, out);
            }
            current.pop();
        }
    }
    go(0, f, w, &arrows, &due, &mut current, &mut out);
    out
}

/// The family `(F(f)(x))_f` induced by a sense `x` at the sieve's object.
pub fn induced_family(f: &Presheaf, s: &Sieve, x: usize) -> MatchingFamily {
    let arrows: Vec<Arrow> = s.arrows.iter().copied().collect();
    let senses = arrows.iter().map(|&a| f.apply(a, x)).collect();
    MatchingFamily { arrows, senses }
}

/// Verdict of the gluing condition on one cover sieve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingVerdict {
    pub object: String,
    pub senses: usize,
    pub matching_families: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Why injectivity or surjectivity fails, if it does.
    pub witnesses: Vec<String>,
}

impl GluingVerdict {
    pub fn passed(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Gluing verdict per correct object, in object order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SheafReport {
    pub verdicts: Vec<GluingVerdict>,
}

impl SheafReport {
    pub fn is_sheaf(&self) -> bool {
        self.verdicts.iter().all(GluingVerdict::passed)
    }

    pub fn failing(&self) -> impl Iterator<Item = &GluingVerdict> {
        self.verdicts.iter().filter(|v| !v.passed())
    }
}

/// Checks that each sense at `d` corresponds to exactly one matching family
/// on the cover sieve of `d`.
pub fn gluing_at(f: &Presheaf, d: Obj, s: &Sieve, w: &Workspace) -> GluingVerdict {
    let families = matching_families(f, s, w);
    let mut witnesses = Vec::new();
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut injective = true;
    let mut image = BTreeSet::new();
    for x in 0..f.senses(d).len() {
        let fam = induced_family(f, s, x);
        if let Some(&y) = seen.get(&fam.senses) {
            injective = false;
            witnesses.push(format!(
                "senses `{}` and `{}` restrict to the same family {}",
                f.senses(d)[y],
                f.senses(d)[x],
                fam.describe(f, w)
            ));
        } else {
            seen.insert(fam.senses.clone(), x);
        }
        image.insert(fam.senses);
    }
    let mut surjective = true;
    for fam in &families {
        if !image.contains(&fam.senses) {
            surjective = false;
            witnesses.push(format!(
                "matching family {} has no amalgamation",
                fam.describe(f, w)
            ));
        }
    }
    GluingVerdict {
        object: w.object_id(d).to_string(),
        senses: f.senses(d).len(),
        matching_families: families.len(),
        injective,
        surjective,
        witnesses,
    }
}

/// The gluing condition on the cover sieve of every correct object.
pub fn sheaf_check_local(f: &Presheaf, w: &Workspace) -> SheafReport {
    let verdicts = w
        .objects()
        .filter_map(|d| cover_sieve(d, w).map(|s| gluing_at(f, d, &s, w)))
        .collect();
    SheafReport { verdicts }
}

/// The equalizer form of the sheaf condition on one sieve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualizerVerdict {
    pub object: String,
    pub product_size: u128,
    pub equalizer_size: usize,
    /// `e` is injective.
    pub monic: bool,
    /// The image of `e` is exactly where `p` and `a` agree.
    pub exact: bool,
}

impl EqualizerVerdict {
    pub fn passed(&self) -> bool {
        self.monic && self.exact
    }
}

/// Materializes `F(d) -> prod F(dom f) => prod F(dom g)` for the sieve `s`
/// and checks that the first map is an equalizer of the pair.
pub fn sheaf_check_equalizer(f: &Presheaf, s: &Sieve, w: &Workspace) -> Result<EqualizerVerdict> {
    let (arrows, cons) = constraints(s, w);
    let sizes: Vec<usize> = arrows
        .iter()
        .map(|&a| f.senses(w.source(a)).len())
        .collect();
    let product = sizes
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
        .unwrap_or(u128::MAX);
    if product > MAX_PRODUCT {
        return Err(Error::SizeBound {
            what: format!("sense product over the sieve on `{}`", w.object_id(s.on)),
            found: usize::try_from(product).unwrap_or(usize::MAX),
            bound: MAX_PRODUCT as usize,
        });
    }
    let mut equalizer = BTreeSet::new();
    let mut tuple = vec![0usize; arrows.len()];
    if sizes.iter().all(|&n| n > 0) {
        'tuples: loop {
            // p picks the component at f∘g, a restricts the component at f along g
            if cons
                .iter()
                .all(|&(i, g, j)| tuple[j] == f.apply(g, tuple[i]))
            {
                equalizer.insert(tuple.clone());
            }
            let mut k = arrows.len();
            loop {
                if k == 0 {
                    break 'tuples;
                }
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < sizes[k] {
                    continue 'tuples;
                }
                tuple[k] = 0;
            }
        }
    }
    let images: Vec<Vec<usize>> = (0..f.senses(s.on).len())
        .map(|x| induced_family(f, s, x).senses)
        .collect();
    let distinct: BTreeSet<Vec<usize>> = images.iter().cloned().collect();
    Ok(EqualizerVerdict {
        object: w.object_id(s.on).to_string(),
        product_size: product,
        equalizer_size: equalizer.len(),
        monic: distinct.len() == images.len(),
        exact: distinct == equalizer,
    })
}

/// The equalizer check on the cover sieve of every correct object.
pub fn sheaf_check_equalizer_all(f: &Presheaf, w: &Workspace) -> Result<Vec<EqualizerVerdict>> {
    w.objects()
        .filter_map(|d| cover_sieve(d, w))
        .map(|s| sheaf_check_equalizer(f, &s, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semantics::{initial_presheaf, terminal_presheaf};
    use crate::site::maximal_sieve;

    #[test]
    fn f_alt_is_a_sheaf_and_the_mutant_is_not() {
        let w = fixtures::ws_alt();
        let good = sheaf_check_local(&fixtures::f_alt(&w), &w);
        assert!(good.is_sheaf(), "{good:?}");
        assert_eq!(good.verdicts.len(), 2);
        let bad = sheaf_check_local(&fixtures::f_alt_mutant(&w), &w);
        let failing: Vec<_> = bad.failing().collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].object, "D_ABA#0");
        assert!(!failing[0].injective);
        assert!(failing[0].witnesses[0].contains("restrict to the same family"));
    }

    #[test]
    fn terminal_is_a_sheaf_initial_fails_only_on_empty_covers() {
        let w = fixtures::ws_alt();
        assert!(sheaf_check_local(&terminal_presheaf(&w), &w).is_sheaf());
        assert!(sheaf_check_local(&initial_presheaf(&w), &w).is_sheaf());
        let w = fixtures::ws_empty();
        let report = sheaf_check_local(&initial_presheaf(&w), &w);
        let failing: Vec<_> = report.failing().map(|v| v.object.as_str()).collect();
        assert_eq!(failing, ["EMPTY#0"]);
    }

    #[test]
    fn maximal_sieve_families_are_the_senses() {
        let w = fixtures::ws_alt();
        let f = fixtures::f_alt(&w);
        for d in w.objects() {
            let s = maximal_sieve(d, &w);
            assert_eq!(matching_families(&f, &s, &w).len(), f.senses(d).len());
        }
    }

    #[test]
    fn equalizer_agrees_with_local_check() {
        let w = fixtures::ws_alt();
        for f in [
            fixtures::f_alt(&w),
            fixtures::f_alt_mutant(&w),
            terminal_presheaf(&w),
        ] {
            let local = sheaf_check_local(&f, &w);
            let eq = sheaf_check_equalizer_all(&f, &w).unwrap();
            let a: Vec<bool> = local.verdicts.iter().map(GluingVerdict::passed).collect();
            let b: Vec<bool> = eq.iter().map(EqualizerVerdict::passed).collect();
            assert_eq!(a, b);
        }
    }
}
