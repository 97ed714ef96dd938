#![allow(dead_code)]

use std::path::PathBuf;

use edgeideal::digraph::DirectedGraph;
use edgeideal::embedding::{parse_embedding, PlaneEmbedding};
use edgeideal::graph::{parse_graph, BipartiteGraph};
use edgeideal::matching::{find_perfect_matching, MatchedBipartiteGraph};

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn graph_fixture(name: &str) -> BipartiteGraph {
    parse_graph(&fixture(name)).unwrap()
}

pub fn seven_vertex_cm() -> MatchedBipartiteGraph {
    find_perfect_matching(&graph_fixture("seven_vertex_cm.json")).unwrap()
}

pub fn seven_vertex_embedding() -> PlaneEmbedding {
    parse_embedding(
        &fixture("seven_vertex_cm_embedding.json"),
        seven_vertex_cm().x_labels(),
    )
    .unwrap()
}

pub fn complete_digraph(n: usize) -> DirectedGraph {
    DirectedGraph::new(
        n,
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))),
    )
}

/// All linear extensions of a poset on at most 8 vertices, as position maps.
pub fn linear_extensions(p: &DirectedGraph) -> Vec<Vec<usize>> {
    let n = p.vertex_count();
    let reach = p.reachability();
    let mut out = Vec::new();
    let mut order = Vec::new();
    let mut used = vec![false; n];
    fn go(
        n: usize,
        reach: &[Vec<bool>],
        order: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if order.len() == n {
            let mut pos = vec![0; n];
            for (k, &v) in order.iter().enumerate() {
                pos[v] = k;
            }
            out.push(pos);
            return;
        }
        for v in 0..n {
            if !used[v] && (0..n).all(|u| used[u] || !reach[u][v]) {
                used[v] = true;
                order.push(v);
                go(n, reach, order, used, out);
                order.pop();
                used[v] = false;
            }
        }
    }
    go(n, &reach, &mut order, &mut used, &mut out);
    out
}

/// Dimension at most two by brute force over pairs of linear extensions.
pub fn has_dimension_at_most_two(p: &DirectedGraph) -> bool {
    let n = p.vertex_count();
    let reach = p.reachability();
    let exts = linear_extensions(p);
    exts.iter().any(|a| {
        exts.iter().any(|b| {
            (0..n).all(|i| (0..n).all(|j| i == j || reach[i][j] == (a[i] < a[j] && b[i] < b[j])))
        })
    })
}
