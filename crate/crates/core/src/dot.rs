//! Graphviz DOT rendering of diagrams and covers.

use std::fmt::Write;

use crate::cover::SyntaxCover;
use crate::diagram::Diagram;
use crate::grammar::Grammar;

/// A DOT double-quoted string.
fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Node and edge statements of `d`, with every node id prefixed.
fn body(out: &mut String, d: &Diagram, prefix: &str, indent: &str) {
    for n in d.nodes() {
        let _ = writeln!(
            out,
            "{indent}{} [label={}];",
            quote(&format!("{prefix}{}", n.id)),
            quote(&n.label)
        );
    }
    for e in d.edges() {
        let dir = if e.directed { "" } else { ", dir=none" };
        let _ = writeln!(
            out,
            "{indent}{} -> {} [label={}{dir}];",
            quote(&format!("{prefix}{}", e.a)),
            quote(&format!("{prefix}{}", e.b)),
            quote(&e.sort)
        );
    }
}

/// Node labels are symbols, edge labels are sorts; undirected edges carry
/// no arrowhead.
pub fn diagram_to_dot(d: &Diagram, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    body(&mut out, d, "", "  ");
    out.push_str("}\n");
    out
}

/// The diagram, followed by one cluster per cover entry holding a copy of
/// that neighbourhood. Copied nodes link to their images with dotted edges.
pub fn cover_to_dot(d: &Diagram, cover: &SyntaxCover, g: &Grammar, name: &str) -> String {
    let mut out = format!("digraph {} {{\n  compound=true;\n", quote(name));
    out.push_str("  subgraph \"cluster_diagram\" {\n    label=\"diagram\";\n");
    body(&mut out, d, "", "    ");
    out.push_str("  }\n");
    for (v, entry) in cover.entries().iter().enumerate() {
        let n = g.neighbourhood(entry.neighbourhood);
        let center = &d.nodes()[v].id;
        let prefix = format!("{center}/");
        let _ = writeln!(
            out,
            "  subgraph {} {{\n    label={};\n    style=dashed;",
            quote(&format!("cluster_{center}")),
            quote(&format!("{} at {center}", n.name))
        );
        body(&mut out, &n.diagram, &prefix, "    ");
        out.push_str("  }\n");
        for (i, node) in n.diagram.nodes().iter().enumerate() {
            let image = &d.nodes()[entry.embedding.node(i)].id;
            let _ = writeln!(
                out,
                "  {} -> {} [style=dotted, arrowhead=none];",
                quote(&format!("{prefix}{}", node.id)),
                quote(image)
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::encode_chain;
    use crate::cover::cover_at;
    use crate::fixtures;

    #[test]
    fn chain_rendering() {
        let d = encode_chain("ab").unwrap();
        assert_eq!(
            diagram_to_dot(&d, "ab"),
            "digraph \"ab\" {\n  \"1\" [label=\"a\"];\n  \"2\" [label=\"b\"];\n  \"1\" -> \"2\" [label=\"next\"];\n}\n"
        );
    }

    #[test]
    fn undirected_edges_have_no_arrowhead() {
        let dot = diagram_to_dot(&fixtures::diagram("d_tri.json"), "tri");
        assert_eq!(dot.matches("dir=none").count(), 3);
    }

    #[test]
    fn quoting() {
        assert_eq!(quote(r#"a"b\c"#), r#""a\"b\\c""#);
    }

    #[test]
    fn cover_has_one_cluster_per_node() {
        let g = fixtures::g_alt();
        let d = encode_chain("aba").unwrap();
        let cover = cover_at(&d, &g, 0).unwrap();
        let dot = cover_to_dot(&d, &cover, &g, "aba");
        assert_eq!(dot.matches("subgraph").count(), 4);
        assert!(dot.contains("\"M_b at 2\""));
        // 2 + 3 + 2 copied nodes, each tied to its image
        assert_eq!(dot.matches("style=dotted").count(), 7);
    }
}
