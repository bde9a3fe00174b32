use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::io::{parse_json, InputError};
use crate::report::{ValidationReport, Violation};
use crate::site::{Arrow, Obj, Workspace};

/// On-disk presheaf: senses per object id, and per morphism id a map from
/// target sense to source sense.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafFile {
    pub senses: BTreeMap<String, Vec<String>>,
    pub restrictions: BTreeMap<String, BTreeMap<String, String>>,
}

/// A finite presheaf of senses, tabulated over a workspace. Senses are
/// referred to by their position in each object's sense list.
///
/// Restriction tables may be partial until [`validate_presheaf`] accepts
/// them; `None` marks a missing image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    senses: Vec<Vec<String>>,
    restrictions: Vec<Option<Vec<Option<usize>>>>,
}

impl Presheaf {
    pub fn new(senses: Vec<Vec<String>>, restrictions: Vec<Option<Vec<Option<usize>>>>) -> Self {
        Presheaf {
            senses,
            restrictions,
        }
    }

    /// Tabulates `restrict(arrow, sense of target)` over every arrow.
    pub fn from_fn(
        w: &Workspace,
        senses: Vec<Vec<String>>,
        restrict: impl Fn(Arrow, usize) -> usize,
    ) -> Self {
        let restrictions = w
            .arrows()
            .map(|a| {
                Some(
                    (0..senses[w.target(a).0].len())
                        .map(|x| Some(restrict(a, x)))
                        .collect(),
                )
            })
            .collect();
        Presheaf {
            senses,
            restrictions,
        }
    }

    pub fn senses(&self, o: Obj) -> &[String] {
        &self.senses[o.0]
    }

    pub fn sense_index(&self, o: Obj, label: &str) -> Option<usize> {
        self.senses[o.0].iter().position(|s| s == label)
    }

    /// Image of sense `x` of the target under the restriction along `a`.
    pub fn restrict(&self, a: Arrow, x: usize) -> Option<usize> {
        self.restrictions
            .get(a.0)?
            .as_ref()?
            .get(x)
            .copied()
            .flatten()
    }

    /// As [`Presheaf::restrict`], for presheaves that passed validation.
    pub fn apply(&self, a: Arrow, x: usize) -> usize {
        self.restrict(a, x)
            .expect("restriction is total on a validated presheaf")
    }

    pub fn from_json(w: &Workspace, text: &str, file: &str) -> Result<Self, InputError> {
        let raw: PresheafFile = parse_json(text, file)?;
        Presheaf::from_file(w, &raw, file)
    }

    /// Unknown ids and labels are input errors; missing entries are kept as
    /// gaps for [`validate_presheaf`] to report.
    pub fn from_file(w: &Workspace, raw: &PresheafFile, file: &str) -> Result<Self, InputError> {
        let mut problems = Vec::new();
        let mut senses = vec![Vec::new(); w.object_count()];
        for (id, labels) in &raw.senses {
            match w.find_object(id) {
                Ok(o) => senses[o.0] = labels.clone(),
                Err(e) => problems.push(format!("at `senses.{id}`: {e}")),
            }
        }
        let mut restrictions = vec![None; w.arrow_count()];
        for (id, table) in &raw.restrictions {
            let a = match w.find_arrow(id) {
                Ok(a) => a,
                Err(e) => {
                    problems.push(format!("at `restrictions.{id}`: {e}"));
                    continue;
                }
            };
            let (s, t) = (w.source(a), w.target(a));
            let mut map = vec![None; senses[t.0].len()];
            for (from, to) in table {
                let Some(x) = senses[t.0].iter().position(|l| l == from) else {
                    problems.push(format!(
                        "at `restrictions.{id}`: `{from}` is not a sense of `{}`",
                        w.object_id(t)
                    ));
                    continue;
                };
                match senses[s.0].iter().position(|l| l == to) {
                    Some(y) => map[x] = Some(y),
                    None => problems.push(format!(
                        "at `restrictions.{id}.{from}`: `{to}` is not a sense of `{}`",
                        w.object_id(s)
                    )),
                }
            }
            restrictions[a.0] = Some(map);
        }
        if problems.is_empty() {
            Ok(Presheaf {
                senses,
                restrictions,
            })
        } else {
            Err(InputError {
                file: file.to_string(),
                problems,
            })
        }
    }

    pub fn to_file(&self, w: &Workspace) -> PresheafFile {
        let senses = w
            .objects()
            .map(|o| (w.object_id(o).to_string(), self.senses[o.0].clone()))
            .collect();
        let restrictions = w
            .arrows()
            .filter_map(|a| {
                let table = self.restrictions[a.0].as_ref()?;
                let (s, t) = (w.source(a), w.target(a));
                let entries = table
                    .iter()
                    .enumerate()
                    .filter_map(|(x, y)| {
                        Some((self.senses[t.0][x].clone(), self.senses[s.0][(*y)?].clone()))
                    })
                    .collect();
                Some((w.arrow_id(a).to_string(), entries))
            })
            .collect();
        PresheafFile {
            senses,
            restrictions,
        }
    }

    /// The presheaf on the chosen senses, with restrictions inherited.
    /// Meaningful when `sub` is closed under restriction.
    pub fn restricted_to(&self, w: &Workspace, sub: &SubPresheaf) -> Presheaf {
        let keep: Vec<Vec<usize>> = w
            .objects()
            .map(|o| sub.members(o).iter().copied().collect())
            .collect();
        let senses = w
            .objects()
            .map(|o| {
                keep[o.0]
                    .iter()
                    .map(|&x| self.senses[o.0][x].clone())
                    .collect()
            })
            .collect();
        let restrictions = w
            .arrows()
            .map(|a| {
                let (s, t) = (w.source(a), w.target(a));
                Some(
                    keep[t.0]
                        .iter()
                        .map(|&x| {
                            let y = self.restrict(a, x)?;
                            keep[s.0].iter().position(|&k| k == y)
                        })
                        .collect(),
                )
            })
            .collect();
        Presheaf {
            senses,
            restrictions,
        }
    }
}

/// Every object gets no senses.
pub fn initial_presheaf(w: &Workspace) -> Presheaf {
    Presheaf::from_fn(w, vec![Vec::new(); w.object_count()], |_, _| {
        unreachable!("no senses to restrict")
    })
}

/// Every object gets the single sense `*`.
pub fn terminal_presheaf(w: &Workspace) -> Presheaf {
    Presheaf::from_fn(w, vec![vec!["*".to_string()]; w.object_count()], |_, _| 0)
}

/// A template listing every object and every morphism slot to fill in.
pub fn presheaf_skeleton(w: &Workspace) -> PresheafFile {
    PresheafFile {
        senses: w
            .objects()
            .map(|o| (w.object_id(o).to_string(), Vec::new()))
            .collect(),
        restrictions: w
            .arrows()
            .map(|a| (w.arrow_id(a).to_string(), BTreeMap::new()))
            .collect(),
    }
}

/// Totality, the identity law and contravariant composition.
pub fn validate_presheaf(f: &Presheaf, w: &Workspace) -> ValidationReport {
    let mut report = ValidationReport::default();
    if f.senses.len() != w.object_count() || f.restrictions.len() != w.arrow_count() {
        report.push(Violation::new(
            "shape",
            "",
            "presheaf was built for a different workspace",
        ));
        return report;
    }
    for o in w.objects() {
        let mut seen = BTreeSet::new();
        for label in f.senses(o) {
            if !seen.insert(label) {
                report.push(Violation::new(
                    "duplicate-sense",
                    w.object_id(o),
                    format!("`{label}` listed twice"),
                ));
            }
        }
    }
    let mut total = true;
    for a in w.arrows() {
        let (s, t) = (w.source(a), w.target(a));
        match &f.restrictions[a.0] {
            None => {
                report.push(Violation::new(
                    "totality",
                    w.arrow_id(a),
                    "missing restriction entry",
                ));
                total = false;
            }
            Some(map) => {
                for (x, y) in map.iter().enumerate() {
                    if !y.is_some_and(|y| y < f.senses(s).len()) {
                        report.push(Violation::new(
                            "totality",
                            w.arrow_id(a),
                            format!("sense `{}` has no image", f.senses(t)[x]),
                        ));
                        total = false;
                    }
                }
            }
        }
    }
    if !total {
        return report;
    }
    for o in w.objects() {
        let id = w.identity(o);
        for x in 0..f.senses(o).len() {
            if f.apply(id, x) != x {
                report.push(Violation::new(
                    "identity",
                    w.arrow_id(id),
                    format!("moves sense `{}`", f.senses(o)[x]),
                ));
            }
        }
    }
    for g in w.arrows() {
        for &f_arrow in w
            .arrows()
            .filter(|&h| w.source(h) == w.target(g))
            .collect::<Vec<_>>()
            .iter()
        {
            let Some(fg) = w.try_compose(f_arrow, g) else {
                continue;
            };
            let top = w.target(f_arrow);
            for x in 0..f.senses(top).len() {
                if f.apply(fg, x) != f.apply(g, f.apply(f_arrow, x)) {
                    report.push(Violation::new(
                        "composition",
                        w.arrow_id(fg),
                        format!(
                            "sense `{}` restricts differently along the composite of `{}` and `{}`",
                            f.senses(top)[x],
                            w.arrow_id(f_arrow),
                            w.arrow_id(g)
                        ),
                    ));
                }
            }
        }
    }
    report
}

/// A choice of senses `S(d) ⊆ F(d)` per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubPresheaf {
    members: Vec<BTreeSet<usize>>,
}

impl SubPresheaf {
    pub fn new(members: Vec<BTreeSet<usize>>) -> Self {
        SubPresheaf { members }
    }

    /// `S = F`.
    pub fn full(f: &Presheaf, w: &Workspace) -> Self {
        SubPresheaf {
            members: w
                .objects()
                .map(|o| (0..f.senses(o).len()).collect())
                .collect(),
        }
    }

    pub fn empty(w: &Workspace) -> Self {
        SubPresheaf {
            members: vec![BTreeSet::new(); w.object_count()],
        }
    }

    pub fn members(&self, o: Obj) -> &BTreeSet<usize> {
        &self.members[o.0]
    }

    pub fn contains(&self, o: Obj, x: usize) -> bool {
        self.members[o.0].contains(&x)
    }

    /// Reads `{object-id: [labels]}`; absent objects get no senses.
    pub fn from_json(
        w: &Workspace,
        f: &Presheaf,
        text: &str,
        file: &str,
    ) -> Result<Self, InputError> {
        let raw: BTreeMap<String, Vec<String>> = parse_json(text, file)?;
        let mut problems = Vec::new();
        let mut members = vec![BTreeSet::new(); w.object_count()];
        for (id, labels) in &raw {
            let o = match w.find_object(id) {
                Ok(o) => o,
                Err(e) => {
                    problems.push(format!("at `{id}`: {e}"));
                    continue;
                }
            };
            for label in labels {
                match f.sense_index(o, label) {
                    Some(x) => {
                        members[o.0].insert(x);
                    }
                    None => problems.push(format!(
                        "at `{id}`: `{label}` is not a sense of the presheaf"
                    )),
                }
            }
        }
        if problems.is_empty() {
            Ok(SubPresheaf { members })
        } else {
            Err(InputError {
                file: file.to_string(),
                problems,
            })
        }
    }
}

/// Closure under every restriction of `f`.
pub fn validate_subpresheaf(s: &SubPresheaf, f: &Presheaf, w: &Workspace) -> ValidationReport {
    let mut report = ValidationReport::default();
    for a in w.arrows() {
        let (src, tgt) = (w.source(a), w.target(a));
        for &x in s.members(tgt) {
            if let Some(y) = f.restrict(a, x) {
                if !s.contains(src, y) {
                    report.push(Violation::new(
                        "subpresheaf",
                        w.arrow_id(a),
                        format!(
                            "`{}` restricts outside the subpresheaf to `{}`",
                            f.senses(tgt)[x],
                            f.senses(src)[y]
                        ),
                    ));
                }
            }
        }
    }
    report
}
