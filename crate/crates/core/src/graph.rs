//! Labeled bipartite graphs, their JSON form, and the brute-force graph
//! quantities used as oracles: minimal vertex covers and maximum sets of
//! pairwise disconnected edges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on vertex and edge counts for the exponential enumerations.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Compare labels so that embedded digit runs sort numerically
/// (`x2 < x10`). Falls back to byte order on ties so the order is total.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        while start < bytes.len() {
            let digit = bytes[start].is_ascii_digit();
            let mut end = start + 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() == digit {
                end += 1;
            }
            out.push((digit, &s[start..end]));
            start = end;
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(cb.iter()) {
        let ord = match (da, db) {
            (true, true) => {
                let ta = sa.trim_start_matches('0');
                let tb = sb.trim_start_matches('0');
                ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
            }
            _ => sa.cmp(sb),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// A finite simple bipartite graph with labeled vertices.
///
/// Labels on each side are kept sorted under [`label_cmp`]; vertex indices
/// are positions in those sorted lists. Every vertex has at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    left: Vec<String>,
    right: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    left: Vec<String>,
    right: Vec<String>,
    edges: Vec<(String, String)>,
}

impl BipartiteGraph {
    /// Build a graph from label lists and `(left_index, right_index)` edges
    /// referring to positions in the given lists. Labels are re-sorted and
    /// the edges remapped accordingly.
    pub fn new(left: Vec<String>, right: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for l in left.iter().chain(right.iter()) {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lperm = sorted_permutation(&left);
        let rperm = sorted_permutation(&right);
        let mut set = BTreeSet::new();
        for &(i, j) in &edges {
            if i >= left.len() {
                return Err(Error::UnknownLabel(format!("left #{i}")));
            }
            if j >= right.len() {
                return Err(Error::UnknownLabel(format!("right #{j}")));
            }
            if !set.insert((lperm[i], rperm[j])) {
                return Err(Error::DuplicateEdge(left[i].clone(), right[j].clone()));
            }
        }
        if set.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut sorted_left = vec![String::new(); left.len()];
        for (old, l) in left.into_iter().enumerate() {
            sorted_left[lperm[old]] = l;
        }
        let mut sorted_right = vec![String::new(); right.len()];
        for (old, r) in right.into_iter().enumerate() {
            sorted_right[rperm[old]] = r;
        }
        let g = BipartiteGraph {
            left: sorted_left,
            right: sorted_right,
            edges: set,
        };
        for (i, l) in g.left.iter().enumerate() {
            if !g.edges.iter().any(|&(a, _)| a == i) {
                return Err(Error::IsolatedVertex(l.clone()));
            }
        }
        for (j, r) in g.right.iter().enumerate() {
            if !g.edges.iter().any(|&(_, b)| b == j) {
                return Err(Error::IsolatedVertex(r.clone()));
            }
        }
        Ok(g)
    }

    /// Build a graph from labels and label-pair edges `(left, right)`.
    pub fn from_labeled_edges<S: AsRef<str>>(
        left: Vec<String>,
        right: Vec<String>,
        edges: &[(S, S)],
    ) -> Result<Self> {
        let lpos: BTreeMap<&str, usize> = left
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let rpos: BTreeMap<&str, usize> = right
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = *lpos
                .get(a)
                .ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
            let j = *rpos
                .get(b)
                .ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
            idx.push((i, j));
        }
        Self::new(left, right, idx)
    }

    pub fn left_labels(&self) -> &[String] {
        &self.left
    }

    pub fn right_labels(&self) -> &[String] {
        &self.right
    }

    pub fn left_count(&self) -> usize {
        self.left.len()
    }

    pub fn right_count(&self) -> usize {
        self.right.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(left_index, right_index)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        self.edges.contains(&(left, right))
    }

    pub fn label(&self, side: Side, index: usize) -> &str {
        match side {
            Side::Left => &self.left[index],
            Side::Right => &self.right[index],
        }
    }

    pub fn left_index(&self, label: &str) -> Option<usize> {
        self.left.iter().position(|l| l == label)
    }

    pub fn right_index(&self, label: &str) -> Option<usize> {
        self.right.iter().position(|l| l == label)
    }

    /// Canonical JSON: sorted labels, edges sorted by index pair.
    pub fn to_json(&self) -> String {
        let doc = GraphDocument {
            left: self.left.clone(),
            right: self.right.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| (self.left[i].clone(), self.right[j].clone()))
                .collect(),
        };
        serde_json::to_string(&doc).expect("graph document serializes")
    }

    /// Bitmask adjacency over the combined vertex list (left first, then
    /// right). Caller guarantees at most 64 vertices.
    fn neighbour_masks(&self) -> Vec<u64> {
        let l = self.left.len();
        let mut nbr = vec![0u64; self.vertex_count()];
        for &(i, j) in &self.edges {
            nbr[i] |= 1 << (l + j);
            nbr[l + j] |= 1 << i;
        }
        nbr
    }
}

fn sorted_permutation(labels: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| label_cmp(&labels[a], &labels[b]));
    let mut pos = vec![0; labels.len()];
    for (rank, &old) in order.iter().enumerate() {
        pos[old] = rank;
    }
    pos
}

/// Parse the graph JSON document `{"left": [...], "right": [...], "edges": [[l, r], ...]}`.
pub fn parse_graph(document: &str) -> Result<BipartiteGraph> {
    let doc: GraphDocument =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    BipartiteGraph::from_labeled_edges(doc.left, doc.right, &doc.edges)
}

/// A set of vertices given by indices on each side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexCover {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_cover(&self, g: &BipartiteGraph) -> bool {
        g.edges()
            .all(|(i, j)| self.left.contains(&i) || self.right.contains(&j))
    }

    /// Cover with no removable member.
    pub fn is_minimal_cover(&self, g: &BipartiteGraph) -> bool {
        if !self.is_cover(g) {
            return false;
        }
        let left_ok = self.left.iter().all(|&i| {
            let mut smaller = self.clone();
            smaller.left.remove(&i);
            !smaller.is_cover(g)
        });
        left_ok
            && self.right.iter().all(|&j| {
                let mut smaller = self.clone();
                smaller.right.remove(&j);
                !smaller.is_cover(g)
            })
    }

    /// Sorted label lists `(left, right)`.
    pub fn labels(&self, g: &BipartiteGraph) -> (Vec<String>, Vec<String>) {
        (
            self.left.iter().map(|&i| g.left[i].clone()).collect(),
            self.right.iter().map(|&j| g.right[j].clone()).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverEnumeration {
    pub covers: Vec<VertexCover>,
    /// Minimum cover size, i.e. the height of the edge ideal.
    pub height: usize,
}

/// All minimal vertex covers, sorted, plus the minimum size.
pub fn minimal_vertex_covers(g: &BipartiteGraph, cap: usize) -> Result<CoverEnumeration> {
    let n = g.vertex_count();
    if n > cap.min(64) {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            cap: cap.min(64),
        });
    }
    let nbr = g.neighbour_masks();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut found = Vec::new();

    // Branch on the lowest unassigned vertex: leave it out (forcing all its
    // neighbours in) or put it in. Every leaf is a cover; keep the minimal ones.
    fn walk(inc: u64, exc: u64, all: u64, nbr: &[u64], found: &mut Vec<u64>) {
        let free = all & !inc & !exc;
        if free == 0 {
            let mut rest = inc;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if nbr[v] & exc == 0 {
                    return;
                }
            }
            found.push(inc);
            return;
        }
        let v = free.trailing_zeros() as usize;
        let bit = 1u64 << v;
        if nbr[v] & exc == 0 {
            walk(inc | nbr[v], exc | bit, all, nbr, found);
        }
        walk(inc | bit, exc, all, nbr, found);
    }
    walk(0, 0, all, &nbr, &mut found);

    let l = g.left_count();
    let mut covers: Vec<VertexCover> = found
        .into_iter()
        .map(|mask| {
            let mut c = VertexCover::default();
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    if v < l {
                        c.left.insert(v);
                    } else {
                        c.right.insert(v - l);
                    }
                }
            }
            c
        })
        .collect();
    covers.sort();
    covers.dedup();
    let height = covers.iter().map(VertexCover::len).min().unwrap_or(0);
    Ok(CoverEnumeration { covers, height })
}

/// True iff all minimal vertex covers have the same size.
pub fn is_unmixed_oracle(g: &BipartiteGraph, cap: usize) -> Result<bool> {
    let e = minimal_vertex_covers(g, cap)?;
    Ok(e.covers.iter().all(|c| c.len() == e.height))
}

/// A set of pairwise disconnected edges: the subgraph induced on their
/// endpoints consists of exactly these edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisconnectedEdgeSet {
    pub edges: Vec<(usize, usize)>,
}

impl DisconnectedEdgeSet {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn is_valid(&self, g: &BipartiteGraph) -> bool {
        let lefts: BTreeSet<usize> = self.edges.iter().map(|e| e.0).collect();
        let rights: BTreeSet<usize> = self.edges.iter().map(|e| e.1).collect();
        if lefts.len() != self.edges.len() || rights.len() != self.edges.len() {
            return false;
        }
        if !self.edges.iter().all(|&(i, j)| g.has_edge(i, j)) {
            return false;
        }
        let induced = g
            .edges()
            .filter(|(i, j)| lefts.contains(i) && rights.contains(j))
            .count();
        induced == self.edges.len()
    }
}

/// Largest set of pairwise disconnected edges (the quantity r(I)), by
/// branch and bound over the edge-conflict graph.
pub fn max_pairwise_disconnected(g: &BipartiteGraph, cap: usize) -> Result<DisconnectedEdgeSet> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let m = edges.len();
    if m > cap.min(128) {
        return Err(Error::TooLarge {
            what: "edge count",
            size: m,
            cap: cap.min(128),
        });
    }
    let mut conflict = vec![0u128; m];
    for (p, &(a, b)) in edges.iter().enumerate() {
        for (q, &(c, d)) in edges.iter().enumerate() {
            if p != q && (a == c || b == d || g.has_edge(a, d) || g.has_edge(c, b)) {
                conflict[p] |= 1 << q;
            }
        }
    }

    fn search(cand: u128, cur: &mut Vec<usize>, best: &mut Vec<usize>, conflict: &[u128]) {
        if cur.len() + cand.count_ones() as usize <= best.len() {
            return;
        }
        if cand == 0 {
            *best = cur.clone();
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u128 << v;
        cur.push(v);
        search(cand & !bit & !conflict[v], cur, best, conflict);
        cur.pop();
        search(cand & !bit, cur, best, conflict);
    }

    let all = if m == 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    };
    let mut best = Vec::new();
    search(all, &mut Vec::new(), &mut best, &conflict);
    Ok(DisconnectedEdgeSet {
        edges: best.into_iter().map(|p| edges[p]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(left: &[&str], right: &[&str], edges: &[(&str, &str)]) -> BipartiteGraph {
        BipartiteGraph::from_labeled_edges(
            left.iter().map(|s| s.to_string()).collect(),
            right.iter().map(|s| s.to_string()).collect(),
            edges,
        )
        .unwrap()
    }

    fn brute_minimal_covers(g: &BipartiteGraph) -> Vec<VertexCover> {
        let (l, n) = (g.left_count(), g.vertex_count());
        let mut out: Vec<VertexCover> = (0u64..1 << n)
            .map(|mask| {
                let mut c = VertexCover::default();
                for v in 0..n {
                    if mask >> v & 1 == 1 {
                        if v < l {
                            c.left.insert(v);
                        } else {
                            c.right.insert(v - l);
                        }
                    }
                }
                c
            })
            .filter(|c| c.is_minimal_cover(g))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn parse_single_edge_and_complete() {
        let k2 = parse_graph(r#"{"left":["x1"],"right":["y1"],"edges":[["x1","y1"]]}"#).unwrap();
        assert_eq!(k2.edge_count(), 1);
        let k22 = parse_graph(
            r#"{"left":["x1","x2"],"right":["y1","y2"],"edges":[["x1","y1"],["x1","y2"],["x2","y1"],["x2","y2"]]}"#,
        )
        .unwrap();
        assert_eq!(k22.edge_count(), 4);
        assert_eq!(k22.left_labels(), ["x1", "x2"]);
    }

    #[test]
    fn parse_errors_name_the_culprit() {
        let e = parse_graph(r#"{"left":["x1","x3"],"right":["y1"],"edges":[["x1","y1"]]}"#)
            .unwrap_err();
        assert_eq!(e, Error::IsolatedVertex("x3".into()));
        let e = parse_graph(r#"{"left":["x1"],"right":["y1"],"edges":[["x1","y1"],["x1","y1"]]}"#)
            .unwrap_err();
        assert_eq!(e, Error::DuplicateEdge("x1".into(), "y1".into()));
        let e = parse_graph(r#"{"left":["x1"],"right":["y1"],"edges":[["x1","y9"]]}"#).unwrap_err();
        assert_eq!(e, Error::UnknownLabel("y9".into()));
        let e = parse_graph(r#"{"left":[],"right":[],"edges":[]}"#).unwrap_err();
        assert_eq!(e, Error::EmptyGraph);
        assert!(matches!(parse_graph("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn labels_sort_numerically() {
        let g = g(
            &["x10", "x2", "x1"],
            &["y1"],
            &[("x10", "y1"), ("x2", "y1"), ("x1", "y1")],
        );
        assert_eq!(g.left_labels(), ["x1", "x2", "x10"]);
        assert_eq!(label_cmp("a", "b"), Ordering::Less);
        assert_eq!(label_cmp("x01", "x1"), Ordering::Less);
    }

    #[test]
    fn serializer_is_canonical() {
        let doc = r#"{"left":["x2","x1"],"right":["y1"],"edges":[["x2","y1"],["x1","y1"]]}"#;
        let g = parse_graph(doc).unwrap();
        let s = g.to_json();
        assert_eq!(
            s,
            r#"{"left":["x1","x2"],"right":["y1"],"edges":[["x1","y1"],["x2","y1"]]}"#
        );
        assert_eq!(parse_graph(&s).unwrap().to_json(), s);
    }

    #[test]
    fn covers_of_small_graphs() {
        let k2 = g(&["x1"], &["y1"], &[("x1", "y1")]);
        let e = minimal_vertex_covers(&k2, 24).unwrap();
        assert_eq!(e.height, 1);
        assert_eq!(e.covers.len(), 2);

        let k22 = g(
            &["x1", "x2"],
            &["y1", "y2"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
        );
        let e = minimal_vertex_covers(&k22, 24).unwrap();
        assert_eq!(e.height, 2);
        let labels: Vec<_> = e.covers.iter().map(|c| c.labels(&k22)).collect();
        assert!(labels.contains(&(vec!["x1".into(), "x2".into()], vec![])));
        assert!(labels.contains(&(vec![], vec!["y1".into(), "y2".into()])));
        assert_eq!(e.covers, brute_minimal_covers(&k22));

        let path = g(
            &["x1", "x2"],
            &["y1", "y2"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y2")],
        );
        let e = minimal_vertex_covers(&path, 24).unwrap();
        assert_eq!(e.height, 2);
        assert_eq!(e.covers, brute_minimal_covers(&path));
        let labels: BTreeSet<_> = e.covers.iter().map(|c| c.labels(&path)).collect();
        let expected: BTreeSet<(Vec<String>, Vec<String>)> = [
            (vec!["x1".into(), "x2".into()], vec![]),
            (vec!["x1".into()], vec!["y2".into()]),
            (vec![], vec!["y1".into(), "y2".into()]),
        ]
        .into_iter()
        .collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn unmixed_oracle_examples() {
        let k22 = g(
            &["x1", "x2"],
            &["y1", "y2"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
        );
        assert!(is_unmixed_oracle(&k22, 24).unwrap());
        let star = g(&["x1"], &["y1", "y2"], &[("x1", "y1"), ("x1", "y2")]);
        assert!(!is_unmixed_oracle(&star, 24).unwrap());
        let k2 = g(&["x1"], &["y1"], &[("x1", "y1")]);
        assert!(is_unmixed_oracle(&k2, 24).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let k22 = g(&["x1", "x2"], &["y1", "y2"], &[("x1", "y1"), ("x2", "y2")]);
        assert!(matches!(
            minimal_vertex_covers(&k22, 3),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            max_pairwise_disconnected(&k22, 1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn eight_cycle_has_two_disconnected_edges() {
        let c8 = g(
            &["x1", "x2", "x3", "x4"],
            &["y1", "y2", "y3", "y4"],
            &[
                ("x1", "y1"),
                ("x2", "y1"),
                ("x2", "y2"),
                ("x3", "y2"),
                ("x3", "y3"),
                ("x4", "y3"),
                ("x4", "y4"),
                ("x1", "y4"),
            ],
        );
        let d = max_pairwise_disconnected(&c8, 24).unwrap();
        assert_eq!(d.size(), 2);
        assert!(d.is_valid(&c8));
        let k2 = g(&["x1"], &["y1"], &[("x1", "y1")]);
        assert_eq!(max_pairwise_disconnected(&k2, 24).unwrap().size(), 1);
    }

    #[test]
    fn sides_are_covers_and_bound_height() {
        let path = g(
            &["x1", "x2"],
            &["y1", "y2", "y3"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y2"), ("x2", "y3")],
        );
        let e = minimal_vertex_covers(&path, 24).unwrap();
        assert!(e.height <= path.left_count() && e.height <= path.right_count());
        let left = VertexCover {
            left: (0..path.left_count()).collect(),
            right: BTreeSet::new(),
        };
        assert!(left.is_cover(&path));
        for c in &e.covers {
            assert!(c.is_minimal_cover(&path));
        }
    }
}
