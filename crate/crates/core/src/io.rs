//! JSON file formats: diagrams, grammars and workspace manifests.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagram::{Alphabet, Diagram, DiagramFile, ShapeCondition, SortSet};
use crate::grammar::{validate_grammar, Grammar, Neighbourhood};
use crate::report::ValidationReport;
use crate::site::{Base, CoverCompat, DiagramSpec, Workspace};

/// An input file that failed to read, parse or validate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub file: String,
    pub problems: Vec<String>,
}

impl InputError {
    pub fn new(file: impl Into<String>, problem: impl Into<String>) -> Self {
        InputError {
            file: file.into(),
            problems: vec![problem.into()],
        }
    }

    pub fn from_report(file: impl Into<String>, report: &ValidationReport) -> Self {
        InputError {
            file: file.into(),
            problems: report.violations.iter().map(ToString::to_string).collect(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {p}", self.file)?;
        }
        Ok(())
    }
}

impl std::error::Error for InputError {}

/// Parses JSON, reporting the JSON path of the first offending value.
pub fn parse_json<T: DeserializeOwned>(text: &str, file: &str) -> Result<T, InputError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        InputError::new(file, format!("at `{path}`: {inner}"))
    })
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError::new(path.display().to_string(), e.to_string()))
}

pub fn diagram_from_str(text: &str, file: &str) -> Result<Diagram, InputError> {
    let raw: DiagramFile = parse_json(text, file)?;
    Diagram::from_file(raw).map_err(|r| InputError::from_report(file, &r))
}

pub fn load_diagram(path: &Path) -> Result<Diagram, InputError> {
    diagram_from_str(&read_file(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeighbourhoodFile {
    pub name: String,
    pub symbol: String,
    pub center: String,
    pub diagram: DiagramFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeName {
    Chain,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarFile {
    pub alphabet: Vec<String>,
    pub sorts: Vec<String>,
    pub shape: ShapeName,
    pub neighbourhoods: Vec<NeighbourhoodFile>,
}

/// Parses and validates a grammar.
pub fn grammar_from_str(text: &str, file: &str) -> Result<Grammar, InputError> {
    let raw: GrammarFile = parse_json(text, file)?;
    let mut problems = Vec::new();
    let mut neighbourhoods = Vec::new();
    for (i, n) in raw.neighbourhoods.into_iter().enumerate() {
        match Diagram::from_file(n.diagram) {
            Ok(d) => neighbourhoods.push(Neighbourhood::new(n.name, n.symbol, n.center, d)),
            Err(report) => problems.extend(
                report
                    .violations
                    .iter()
                    .map(|v| format!("at `neighbourhoods[{i}].diagram` ({}): {v}", n.name)),
            ),
        }
    }
    if !problems.is_empty() {
        return Err(InputError {
            file: file.to_string(),
            problems,
        });
    }
    let shape = match raw.shape {
        ShapeName::Chain => ShapeCondition::Chain,
        ShapeName::None => ShapeCondition::None,
    };
    let grammar = Grammar::new(
        Alphabet::new(raw.alphabet),
        SortSet::new(raw.sorts),
        shape,
        neighbourhoods,
    );
    let report = validate_grammar(&grammar);
    if report.is_ok() {
        Ok(grammar)
    } else {
        Err(InputError::from_report(file, &report))
    }
}

pub fn load_grammar(path: &Path) -> Result<Grammar, InputError> {
    grammar_from_str(&read_file(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDiagram {
    pub name: String,
    /// Diagram file, relative to the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    /// Alternatively, a word encoded as a chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<usize>,
}

/// Removes the cover arrow at `node` from the cover family of `object`;
/// negative controls for the base check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseCorruption {
    pub object: String,
    pub node: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceManifest {
    pub grammar: String,
    #[serde(default)]
    pub diagrams: Vec<ManifestDiagram>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrupt_base: Vec<BaseCorruption>,
}

/// A workspace together with the base its checks should use.
#[derive(Debug, Clone)]
pub struct LoadedWorkspace {
    pub workspace: Workspace,
    pub base: Base,
}

/// Builds a workspace from a manifest, reading referenced files through
/// `read` (which receives the path as written in the manifest).
pub fn workspace_from_manifest(
    manifest: &WorkspaceManifest,
    file: &str,
    read: &dyn Fn(&str) -> Result<String, InputError>,
    compat: CoverCompat,
) -> Result<LoadedWorkspace, InputError> {
    let grammar = grammar_from_str(&read(&manifest.grammar)?, &manifest.grammar)?;
    let mut specs = Vec::new();
    for (i, entry) in manifest.diagrams.iter().enumerate() {
        let diagram = match (&entry.file, &entry.chain) {
            (Some(path), None) => diagram_from_str(&read(path)?, path)?,
            (None, Some(word)) => crate::chain::encode_chain(word)
                .map_err(|e| InputError::new(file, format!("at `diagrams[{i}].chain`: {e}")))?,
            _ => {
                return Err(InputError::new(
                    file,
                    format!("at `diagrams[{i}]`: give exactly one of `file` or `chain`"),
                ))
            }
        };
        specs.push(DiagramSpec {
            name: entry.name.clone(),
            diagram,
            cover: entry.cover,
        });
    }
    let workspace =
        Workspace::build(grammar, specs, compat).map_err(|r| InputError::from_report(file, &r))?;
    let mut base = workspace.base().clone();
    for (i, c) in manifest.corrupt_base.iter().enumerate() {
        let located = workspace.find_object(&c.object).ok().and_then(|o| {
            let node = workspace.diagram(o).node_index(&c.node)?;
            let arrow = *workspace.cover_arrows(o)?.get(node)?;
            Some((o, arrow))
        });
        match located {
            Some((o, arrow)) => {
                base.drop_from_cover(o, arrow);
            }
            None => {
                return Err(InputError::new(
                    file,
                    format!(
                        "at `corrupt_base[{i}]`: no cover arrow at node `{}` of `{}`",
                        c.node, c.object
                    ),
                ))
            }
        }
    }
    Ok(LoadedWorkspace { workspace, base })
}

/// Resolves a manifest path: a directory means `<dir>/workspace.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join("workspace.json")
    } else {
        path.to_path_buf()
    }
}

pub fn load_workspace(path: &Path, compat: CoverCompat) -> Result<LoadedWorkspace, InputError> {
    let path = manifest_path(path);
    let file = path.display().to_string();
    let manifest: WorkspaceManifest = parse_json(&read_file(&path)?, &file)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let read = |rel: &str| read_file(&dir.join(rel));
    workspace_from_manifest(&manifest, &file, &read, compat)
}
