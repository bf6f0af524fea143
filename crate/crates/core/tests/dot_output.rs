//! The DOT text of a reversing grid parses back as the same graph.

use std::collections::BTreeMap;

use dot_parser::{ast, canonical};

use cubecheck::reversing::{build_grid, grid_to_dot, left_reverse, right_reverse, EdgeKind, ReversingGrid};
use cubecheck::{catalog_load, DEFAULT_FUEL};

struct Parsed {
    nodes: usize,
    /// (from, to, attributes) per edge, in file order.
    edges: Vec<(String, String, BTreeMap<String, String>)>,
}

fn parse(dot: &str) -> Parsed {
    let graph = ast::Graph::try_from(dot).expect("valid DOT");
    let graph = canonical::Graph::from(graph);
    assert!(graph.is_digraph);
    let edges = graph
        .edges
        .set
        .into_iter()
        .map(|e| {
            let attrs = e
                .attr
                .elems
                .into_iter()
                .map(|(k, v)| {
                    let (k, v): (String, String) = (k.into(), v.into());
                    (k, v)
                })
                .collect();
            (e.from, e.to, attrs)
        })
        .collect();
    Parsed {
        nodes: graph.nodes.set.len(),
        edges,
    }
}

fn round_trip(grid: &ReversingGrid) -> Parsed {
    let parsed = parse(&grid_to_dot(grid));
    assert_eq!(parsed.nodes, grid.vertices.len());
    assert_eq!(parsed.edges.len(), grid.edges.len());
    for (edge, (from, to, attrs)) in grid.edges.iter().zip(&parsed.edges) {
        assert_eq!(from, &format!("v{}", edge.from));
        assert_eq!(to, &format!("v{}", edge.to));
        match edge.kind {
            EdgeKind::Horizontal(g) => {
                assert_eq!(attrs.get("label"), Some(&g.to_string()));
                assert_eq!(attrs.get("style"), None);
            }
            EdgeKind::Vertical(g) => {
                assert_eq!(attrs.get("label"), Some(&g.to_string()));
                assert_eq!(attrs.get("style").map(String::as_str), Some("bold"));
            }
            EdgeKind::Epsilon => {
                assert_eq!(attrs.get("label"), None);
                assert_eq!(attrs.get("style").map(String::as_str), Some("dashed"));
                assert_eq!(attrs.get("dir").map(String::as_str), Some("none"));
            }
        }
    }
    parsed
}

fn style_count(p: &Parsed, style: &str) -> usize {
    p.edges.iter().filter(|(_, _, a)| a.get("style").map(String::as_str) == Some(style)).count()
}

#[test]
fn worked_example_round_trips() {
    let p = catalog_load("d4:new").unwrap();
    let trace = right_reverse(&p.parse_word("t(2)^-1 s3 s3").unwrap(), &p, DEFAULT_FUEL).unwrap();
    let grid = build_grid(&trace).unwrap();
    let parsed = round_trip(&grid);
    assert_eq!(parsed.edges.len(), 12);
    assert_eq!(style_count(&parsed, "dashed"), 1);
    let labels: Vec<&str> = parsed.edges.iter().filter_map(|(_, _, a)| a.get("label").map(String::as_str)).collect();
    assert_eq!(labels.len(), 11);
    assert!(labels.iter().all(|l| *l == "s3" || *l == "t(2)"), "{labels:?}");
    // bold marks the negative letters
    assert_eq!(style_count(&parsed, "bold"), grid.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Vertical(_))).count());
}

#[test]
fn other_grids_round_trip() {
    let d4 = catalog_load("d4:new").unwrap();
    let e8 = catalog_load("e8:new").unwrap();
    for (p, text, left) in [
        (&d4, "s2^-1 s2", false),
        (&d4, "s1 s2^-1", true),
        (&d4, "t(0)^-1 t(1) s1^-1 s4", false),
        (&e8, "s7^-1 t(2) t(2)^-1 s8", false),
        (&e8, "s5 s6 t(1)^-1 s4^-1", true),
    ] {
        let w = p.parse_word(text).unwrap();
        let trace = if left { left_reverse(&w, p, DEFAULT_FUEL) } else { right_reverse(&w, p, DEFAULT_FUEL) }.unwrap();
        let grid = build_grid(&trace).unwrap();
        let parsed = round_trip(&grid);
        assert_eq!(style_count(&parsed, "dashed"), grid.epsilon_arcs(), "{text}");
    }
}
