use serde::Serialize;

use super::presheaf::{validate_subpresheaf, Presheaf, SubPresheaf};
use super::sheaf::sheaf_check_local;
use crate::error::Result;
use crate::site::{
    enumerate_sieves, generate_sieve, is_closed, is_sieve, maximal_sieve, pullback_sieve, Obj,
    Sieve, TopologyVariant, Workspace,
};

/// `{f : Cod(f) = d, F(f)(x) ∈ S(Dom f)}`.
pub fn classify(f: &Presheaf, s: &SubPresheaf, d: Obj, x: usize, w: &Workspace) -> Sieve {
    Sieve {
        on: d,
        arrows: w
            .arrows_into(d)
            .iter()
            .copied()
            .filter(|&a| f.restrict(a, x).is_some_and(|y| s.contains(w.source(a), y)))
            .collect(),
    }
}

/// Whether `s` is generated by a single arrow.
pub fn is_principal(s: &Sieve, w: &Workspace) -> bool {
    s.arrows.iter().any(|&a| generate_sieve(s.on, [a], w) == *s)
}

/// The classifying sieve of one sense.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classified {
    pub object: String,
    pub sense: String,
    pub arrows: Vec<String>,
    pub in_subpresheaf: bool,
    pub maximal: bool,
    pub closed: bool,
    pub principal: bool,
}

pub fn classify_entry(
    f: &Presheaf,
    s: &SubPresheaf,
    d: Obj,
    x: usize,
    w: &Workspace,
) -> Classified {
    let sieve = classify(f, s, d, x, w);
    Classified {
        object: w.object_id(d).to_string(),
        sense: f.senses(d)[x].clone(),
        arrows: sieve.ids(w).into_iter().map(str::to_string).collect(),
        in_subpresheaf: s.contains(d, x),
        maximal: sieve == maximal_sieve(d, w),
        closed: is_closed(&sieve, w, TopologyVariant::Generated),
        principal: is_principal(&sieve, w),
    }
}

/// The four classifier properties, checked over every object and sense.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassifierReport {
    pub entries: Vec<Classified>,
    /// (i) every output is a sieve.
    pub sieve_failures: Vec<String>,
    /// (ii) classifying commutes with restriction and pullback.
    pub naturality_failures: Vec<String>,
    /// (iii) a sense lies in the subpresheaf iff its sieve is maximal.
    pub maximality_failures: Vec<String>,
    /// (iv) outputs that are not closed.
    pub non_closed: Vec<String>,
    pub f_is_sheaf: bool,
    pub s_is_subpresheaf: bool,
    pub s_is_sheaf: bool,
    /// Why closedness is not guaranteed, when a hypothesis fails.
    pub hypothesis_notes: Vec<String>,
}

impl ClassifierReport {
    /// Closedness is required only when `F` and `S` are both sheaves.
    pub fn closedness_required(&self) -> bool {
        self.f_is_sheaf && self.s_is_subpresheaf && self.s_is_sheaf
    }

    pub fn passed(&self) -> bool {
        self.sieve_failures.is_empty()
            && self.naturality_failures.is_empty()
            && self.maximality_failures.is_empty()
            && (!self.closedness_required() || self.non_closed.is_empty())
    }
}

pub fn verify_classifier(f: &Presheaf, s: &SubPresheaf, w: &Workspace) -> ClassifierReport {
    let mut report = ClassifierReport::default();
    let sub = validate_subpresheaf(s, f, w);
    report.s_is_subpresheaf = sub.is_ok();
    if !sub.is_ok() {
        report
            .hypothesis_notes
            .push(format!("S is not closed under restriction: {sub}"));
    }
    let f_sheaf = sheaf_check_local(f, w);
    report.f_is_sheaf = f_sheaf.is_sheaf();
    for v in f_sheaf.failing() {
        report.hypothesis_notes.push(format!(
            "F is not a sheaf at `{}`: {}",
            v.object,
            v.witnesses.join("; ")
        ));
    }
    if report.s_is_subpresheaf {
        let s_sheaf = sheaf_check_local(&f.restricted_to(w, s), w);
        report.s_is_sheaf = s_sheaf.is_sheaf();
        for v in s_sheaf.failing() {
            report.hypothesis_notes.push(format!(
                "S is not a sheaf at `{}`: {}",
                v.object,
                v.witnesses.join("; ")
            ));
        }
    }

    for d in w.objects() {
        for x in 0..f.senses(d).len() {
            let name = format!("{}@{}", f.senses(d)[x], w.object_id(d));
            let sieve = classify(f, s, d, x, w);
            if !is_sieve(&sieve, w) {
                report.sieve_failures.push(name.clone());
            }
            if (sieve == maximal_sieve(d, w)) != s.contains(d, x) {
                report.maximality_failures.push(name.clone());
            }
            let entry = classify_entry(f, s, d, x, w);
            if !entry.closed {
                report.non_closed.push(name.clone());
            }
            report.entries.push(entry);
            for &h in w.arrows_into(d) {
                let Some(y) = f.restrict(h, x) else {
                    continue;
                };
                if classify(f, s, w.source(h), y, w) != pullback_sieve(h, &sieve, w) {
                    report
                        .naturality_failures
                        .push(format!("{name} along `{}`", w.arrow_id(h)));
                }
            }
        }
    }
    report
}

/// All sieves on `d`: the classifier object at `d`.
pub fn omega_at(d: Obj, w: &Workspace, max_arrows: usize) -> Result<Vec<Sieve>> {
    enumerate_sieves(d, w, max_arrows)
}

/// Closed sieves on `d`: the sheaf classifier at `d`.
pub fn omega_sheaf_at(d: Obj, w: &Workspace, max_arrows: usize) -> Result<Vec<Sieve>> {
    Ok(enumerate_sieves(d, w, max_arrows)?
        .into_iter()
        .filter(|s| is_closed(s, w, TopologyVariant::Generated))
        .collect())
}
