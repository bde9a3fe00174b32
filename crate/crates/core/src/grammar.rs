//! Neighbourhood grammars: for each symbol, a finite family of centered
//! diagrams describing the legal local contexts of that symbol.

use std::collections::BTreeSet;

use crate::diagram::{validate_diagram, Alphabet, Diagram, ShapeCondition, SortSet};
use crate::report::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbourhood {
    pub name: String,
    pub symbol: String,
    pub center: String,
    pub diagram: Diagram,
}

impl Neighbourhood {
    pub fn new(
        name: impl Into<String>,
        symbol: impl Into<String>,
        center: impl Into<String>,
        diagram: Diagram,
    ) -> Self {
        Neighbourhood {
            name: name.into(),
            symbol: symbol.into(),
            center: center.into(),
            diagram,
        }
    }

    pub fn center_index(&self) -> Option<usize> {
        self.diagram.node_index(&self.center)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grammar {
    pub alphabet: Alphabet,
    pub sorts: SortSet,
    pub shape: ShapeCondition,
    neighbourhoods: Vec<Neighbourhood>,
}

impl Grammar {
    pub fn new(
        alphabet: Alphabet,
        sorts: SortSet,
        shape: ShapeCondition,
        neighbourhoods: Vec<Neighbourhood>,
    ) -> Self {
        Grammar {
            alphabet,
            sorts,
            shape,
            neighbourhoods,
        }
    }

    /// All neighbourhoods in declaration order; indices into this slice
    /// identify neighbourhoods throughout the crate.
    pub fn neighbourhoods(&self) -> &[Neighbourhood] {
        &self.neighbourhoods
    }

    pub fn neighbourhood(&self, index: usize) -> &Neighbourhood {
        &self.neighbourhoods[index]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.neighbourhoods.iter().position(|n| n.name == name)
    }

    /// The family of `symbol`, in declaration order.
    pub fn family<'g>(
        &'g self,
        symbol: &'g str,
    ) -> impl Iterator<Item = (usize, &'g Neighbourhood)> + 'g {
        self.neighbourhoods
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.symbol == symbol)
    }

    pub fn push(&mut self, n: Neighbourhood) {
        self.neighbourhoods.push(n);
    }

    /// Adds a renamed copy of an existing neighbourhood.
    pub fn with_copy_of(mut self, name: &str, copy_name: &str) -> Self {
        let mut copy = self.neighbourhoods[self.find(name).expect("neighbourhood exists")].clone();
        copy.name = copy_name.to_string();
        self.neighbourhoods.push(copy);
        self
    }
}

/// Checks the grammar's sets, every neighbourhood diagram (without the
/// global shape condition) and the family invariants.
pub fn validate_grammar(g: &Grammar) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.extend_scoped("alphabet", g.alphabet.validate());
    report.extend_scoped("sorts", g.sorts.validate());
    let mut names = BTreeSet::new();
    for n in &g.neighbourhoods {
        if n.name.is_empty() || n.name.contains('#') {
            report.push(Violation::new(
                "neighbourhood-name",
                n.name.clone(),
                "names must be nonempty and must not contain `#`",
            ));
        }
        if !names.insert(n.name.as_str()) {
            report.push(Violation::new(
                "duplicate-neighbourhood",
                n.name.clone(),
                "name used twice",
            ));
        }
        if !g.alphabet.contains(&n.symbol) {
            report.push(Violation::new(
                "unknown-symbol",
                n.name.clone(),
                format!("family symbol `{}` is not in the alphabet", n.symbol),
            ));
        }
        match n.center_index() {
            None => report.push(Violation::new(
                "missing-center",
                n.name.clone(),
                format!("center `{}` is not a node of the neighbourhood", n.center),
            )),
            Some(c) if n.diagram.label(c) != n.symbol => report.push(Violation::new(
                "center-label",
                n.name.clone(),
                format!(
                    "center is labeled `{}` but the neighbourhood is filed under `{}`",
                    n.diagram.label(c),
                    n.symbol
                ),
            )),
            Some(_) => {}
        }
        report.extend_scoped(
            &n.name,
            validate_diagram(&n.diagram, &g.alphabet, &g.sorts, &ShapeCondition::None),
        );
    }
    report
}
