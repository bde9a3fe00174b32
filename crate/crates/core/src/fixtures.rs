//! The bundled fixture corpus (the JSON files under `fixtures/`), exposed
//! for tests and the CLI.

use crate::diagram::Diagram;
use crate::grammar::Grammar;
use crate::io::{self, InputError, LoadedWorkspace, WorkspaceManifest};
use crate::semantics::{Presheaf, SubPresheaf};
use crate::site::{CoverCompat, Workspace};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` for every bundled fixture.
        pub const FILES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name)))),*
        ];
    };
}

corpus!(
    "g_alt.json",
    "g_amb.json",
    "g_amb3.json",
    "g_single.json",
    "g_ring.json",
    "d_a.json",
    "d_ab.json",
    "d_ba.json",
    "d_aba.json",
    "d_bab.json",
    "d_ababa.json",
    "d_empty.json",
    "d_tri.json",
    "d_par.json",
    "d_loop.json",
    "d_star.json",
    "d_disconnected.json",
    "ws_alt.json",
    "ws_empty.json",
    "ws_corrupt.json",
    "ws_nbhd_only.json",
    "ws_single.json",
    "ws_ring.json",
    "ws_amb.json",
    "f_alt.json",
    "f_alt_mutant.json",
    "f_terminal_alt.json",
    "s_cover_only.json",
    "s_alt_first.json",
);

pub fn read(name: &str) -> Result<String, InputError> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| InputError::new(name, "no such fixture"))
}

fn expect<T>(r: Result<T, InputError>) -> T {
    r.unwrap_or_else(|e| panic!("bundled fixture is invalid:\n{e}"))
}

pub fn grammar(name: &str) -> Grammar {
    expect(read(name).and_then(|t| io::grammar_from_str(&t, name)))
}

pub fn diagram(name: &str) -> Diagram {
    expect(read(name).and_then(|t| io::diagram_from_str(&t, name)))
}

pub fn load_workspace(name: &str, compat: CoverCompat) -> LoadedWorkspace {
    expect(read(name).and_then(|t| {
        let manifest: WorkspaceManifest = io::parse_json(&t, name)?;
        io::workspace_from_manifest(&manifest, name, &read, compat)
    }))
}

pub fn workspace(name: &str) -> Workspace {
    load_workspace(name, CoverCompat::Strict).workspace
}

/// Alternating chains `a(ba)^n`, `n >= 1`.
pub fn g_alt() -> Grammar {
    grammar("g_alt.json")
}

/// `g_alt` with a renamed copy of `M_b`.
pub fn g_amb() -> Grammar {
    grammar("g_amb.json")
}

/// `g_alt` with two renamed copies of `M_b`.
pub fn g_amb3() -> Grammar {
    grammar("g_amb3.json")
}

/// `D_ABA` and `D_ABABA` under `g_alt`.
pub fn ws_alt() -> Workspace {
    workspace("ws_alt.json")
}

/// `ws_alt` plus the empty diagram, a proper correct subdiagram of both.
pub fn ws_empty() -> Workspace {
    workspace("ws_empty.json")
}

/// The neighbourhoods of `g_alt` alone.
pub fn ws_nbhd_only() -> Workspace {
    workspace("ws_nbhd_only.json")
}

/// One undirected neighbourhood and all eight covers of a triangle.
pub fn ws_ring() -> Workspace {
    workspace("ws_ring.json")
}

pub fn presheaf(w: &Workspace, name: &str) -> Presheaf {
    expect(read(name).and_then(|t| Presheaf::from_json(w, &t, name)))
}

pub fn subpresheaf(w: &Workspace, f: &Presheaf, name: &str) -> SubPresheaf {
    expect(read(name).and_then(|t| SubPresheaf::from_json(w, f, &t, name)))
}

/// Senses on `ws_alt` where `L_a` has two senses and every correct diagram
/// is glued from its cover.
pub fn f_alt(w: &Workspace) -> Presheaf {
    presheaf(w, "f_alt.json")
}

/// `f_alt` with both senses of `D_ABA#0` restricting identically.
pub fn f_alt_mutant(w: &Workspace) -> Presheaf {
    presheaf(w, "f_alt_mutant.json")
}
