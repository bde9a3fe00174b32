use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syntop"))
        .current_dir(fixtures())
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

#[test]
fn recognize_examples() {
    let ok = run(&["recognize", "--string", "aba", "--grammar", "g_alt.json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "correct, covers=1\n");
    let bad = run(&["recognize", "--string", "ab", "--grammar", "g_alt.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("uncoverable nodes: 2"));
}

#[test]
fn exit_codes_over_the_corpus() {
    let cases: &[(&[&str], i32)] = &[
        (&["validate", "--grammar", "g_alt.json"], 0),
        (
            &[
                "validate",
                "--grammar",
                "g_alt.json",
                "--diagram",
                "d_ababa.json",
            ],
            0,
        ),
        (
            &[
                "validate",
                "--grammar",
                "g_alt.json",
                "--diagram",
                "d_disconnected.json",
            ],
            1,
        ),
        (
            &[
                "validate",
                "--workspace",
                "ws_alt.json",
                "--presheaf",
                "f_alt.json",
                "--subpresheaf",
                "s_alt_first.json",
            ],
            0,
        ),
        (&["validate", "--grammar", "missing.json"], 2),
        (
            &[
                "recognize",
                "--grammar",
                "g_alt.json",
                "--diagram",
                "d_ababa.json",
            ],
            0,
        ),
        (
            &[
                "recognize",
                "--grammar",
                "g_alt.json",
                "--diagram",
                "d_bab.json",
            ],
            1,
        ),
        (
            &["recognize", "--grammar", "g_alt.json", "--string", "abc"],
            2,
        ),
        (
            &["covers", "--grammar", "g_amb.json", "--string", "ababa"],
            0,
        ),
        (
            &["covers", "--grammar", "g_alt.json", "--string", "abab"],
            1,
        ),
        (&["hom", "--workspace", "ws_alt.json"], 0),
        (
            &[
                "hom",
                "--workspace",
                "ws_alt.json",
                "--from",
                "nope",
                "--to",
                "L_a",
            ],
            2,
        ),
        (
            &[
                "sieves",
                "--workspace",
                "ws_alt.json",
                "--object",
                "D_ABA#0",
            ],
            0,
        ),
        (
            &[
                "sieves",
                "--workspace",
                "ws_alt.json",
                "--object",
                "D_ABABA#0",
                "--max-arrows",
                "3",
            ],
            2,
        ),
        (&["check-base", "--workspace", "ws_alt.json"], 0),
        (&["check-base", "--workspace", "ws_corrupt.json"], 1),
        (
            &[
                "check-topology",
                "--workspace",
                "ws_alt.json",
                "--samples",
                "200",
                "--seed",
                "0",
            ],
            0,
        ),
        (
            &[
                "check-topology",
                "--workspace",
                "ws_empty.json",
                "--literal-paper",
            ],
            1,
        ),
        (
            &[
                "sheaf-check",
                "--workspace",
                "ws_alt.json",
                "--presheaf",
                "f_alt.json",
                "--equalizer",
            ],
            0,
        ),
        (
            &[
                "sheaf-check",
                "--workspace",
                "ws_alt.json",
                "--presheaf",
                "f_alt_mutant.json",
            ],
            1,
        ),
        (
            &["sheaf-check", "--workspace", "ws_ring.json", "--terminal"],
            0,
        ),
        (
            &[
                "sheaf-check",
                "--workspace",
                "ws_alt.json",
                "--presheaf",
                "g_alt.json",
            ],
            2,
        ),
        (
            &[
                "classify",
                "--workspace",
                "ws_alt.json",
                "--presheaf",
                "f_alt.json",
                "--subpresheaf",
                "s_alt_first.json",
            ],
            0,
        ),
        (
            &[
                "classify",
                "--workspace",
                "ws_alt.json",
                "--terminal",
                "--subpresheaf",
                "s_cover_only.json",
            ],
            0,
        ),
        (&["presheaf-skeleton", "--workspace", "ws_alt.json"], 0),
        (
            &[
                "export-dot",
                "--grammar",
                "g_alt.json",
                "--string",
                "ababa",
                "--cover",
                "0",
            ],
            0,
        ),
        (
            &[
                "export-dot",
                "--grammar",
                "g_alt.json",
                "--string",
                "aba",
                "--cover",
                "1",
            ],
            1,
        ),
        (&["bogus"], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn input_errors_name_the_file_and_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"nodes": [{"id": "1", "label": 7}]}"#).unwrap();
    let out = run(&[
        "recognize",
        "--grammar",
        "g_alt.json",
        "--diagram",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("bad.json") && err.contains("nodes[0].label"),
        "{err}"
    );
}

#[test]
fn workspace_directories_resolve_to_their_manifest() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["g_alt.json", "d_aba.json"] {
        std::fs::copy(fixtures().join(f), dir.path().join(f)).unwrap();
    }
    std::fs::write(
        dir.path().join("workspace.json"),
        r#"{"grammar": "g_alt.json", "diagrams": [{"name": "D", "file": "d_aba.json"}]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&[
            "check-topology",
            "--workspace",
            dir.path().to_str().unwrap()
        ]),
        0
    );
}

#[test]
fn output_is_deterministic() {
    let args: &[&[&str]] = &[
        &["check-topology", "--workspace", "ws_alt.json", "--json"],
        &[
            "sieves",
            "--workspace",
            "ws_alt.json",
            "--object",
            "D_ABABA#0",
        ],
        &[
            "classify",
            "--workspace",
            "ws_alt.json",
            "--terminal",
            "--subpresheaf",
            "s_cover_only.json",
            "--json",
        ],
        &["covers", "--grammar", "g_amb3.json", "--string", "ababa"],
    ];
    for a in args {
        assert_eq!(stdout(a), stdout(a), "{a:?}");
    }
}

#[test]
fn json_reparses() {
    let args: &[&[&str]] = &[
        &[
            "validate",
            "--grammar",
            "g_alt.json",
            "--diagram",
            "d_disconnected.json",
            "--json",
        ],
        &[
            "recognize",
            "--grammar",
            "g_alt.json",
            "--string",
            "ab",
            "--json",
        ],
        &[
            "covers",
            "--grammar",
            "g_amb.json",
            "--string",
            "ababa",
            "--json",
        ],
        &["hom", "--workspace", "ws_alt.json", "--json"],
        &[
            "sieves",
            "--workspace",
            "ws_alt.json",
            "--object",
            "D_ABA#0",
            "--json",
        ],
        &["check-base", "--workspace", "ws_corrupt.json", "--json"],
        &[
            "check-topology",
            "--workspace",
            "ws_empty.json",
            "--literal-paper",
            "--json",
        ],
        &[
            "sheaf-check",
            "--workspace",
            "ws_alt.json",
            "--presheaf",
            "f_alt_mutant.json",
            "--equalizer",
            "--json",
        ],
        &[
            "classify",
            "--workspace",
            "ws_alt.json",
            "--terminal",
            "--subpresheaf",
            "s_cover_only.json",
            "--json",
        ],
        &["presheaf-skeleton", "--workspace", "ws_alt.json", "--json"],
        &[
            "export-dot",
            "--grammar",
            "g_alt.json",
            "--string",
            "aba",
            "--json",
        ],
    ];
    for a in args {
        let v: serde_json::Value =
            serde_json::from_str(&stdout(a)).unwrap_or_else(|e| panic!("{a:?}: {e}"));
        assert!(v.is_object(), "{a:?}");
    }
    let base: serde_json::Value = serde_json::from_str(&stdout(args[5])).unwrap();
    assert!(!base["counterexamples"].as_array().unwrap().is_empty());
    let sheaf: serde_json::Value = serde_json::from_str(&stdout(args[7])).unwrap();
    assert_eq!(sheaf["sheaf"], false);
}

#[test]
fn skeleton_is_a_loadable_presheaf_template() {
    let text = stdout(&["presheaf-skeleton", "--workspace", "ws_alt.json"]);
    let file: syntop::semantics::PresheafFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.senses.len(), 6);
    assert_eq!(file.restrictions.len(), 14);
    let w = syntop::fixtures::ws_alt();
    let f = syntop::semantics::Presheaf::from_file(&w, &file, "skeleton").unwrap();
    assert!(syntop::semantics::validate_presheaf(&f, &w).is_ok());
}

#[test]
fn dot_export_shape() {
    let plain = stdout(&["export-dot", "--grammar", "g_alt.json", "--string", "aba"]);
    assert!(plain.starts_with("digraph \"aba\" {"));
    assert_eq!(plain.matches(" -> ").count(), 2);
    let tri = stdout(&[
        "export-dot",
        "--grammar",
        "g_ring.json",
        "--diagram",
        "d_tri.json",
    ]);
    assert_eq!(tri.matches("dir=none").count(), 3);
}
