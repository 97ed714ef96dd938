//! Perfect matchings, the associated directed graph of a matched bipartite
//! graph, classification into unmixed / Cohen-Macaulay, the acyclic
//! reduction and the associated primes it determines.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use serde::Serialize;

use crate::digraph::DirectedGraph;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Cap on the number of strong components when enumerating antichains of
/// the quotient poset.
pub const ANTICHAIN_ENUMERATION_CAP: usize = 20;

/// Maximum matching by Hopcroft-Karp. `adj[u]` lists right neighbours of
/// left vertex `u`; neighbours are tried in the given order, so the result
/// is deterministic. Returns the partner of every left vertex.
pub fn hopcroft_karp(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let mut match_l: Vec<Option<usize>> = vec![None; n_left];
    let mut match_r: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![INF; n_left];

    loop {
        // BFS from free left vertices builds the layered graph.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_l[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_r[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }

        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            match_l: &mut [Option<usize>],
            match_r: &mut [Option<usize>],
            next: &mut [usize],
        ) -> bool {
            while next[u] < adj[u].len() {
                let v = adj[u][next[u]];
                next[u] += 1;
                let ok = match match_r[v] {
                    None => true,
                    Some(w) => {
                        dist[w] == dist[u].wrapping_add(1)
                            && augment(w, adj, dist, match_l, match_r, next)
                    }
                };
                if ok {
                    match_l[u] = Some(v);
                    match_r[v] = Some(u);
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }

        let mut next = vec![0; n_left];
        for u in 0..n_left {
            if match_l[u].is_none() {
                augment(u, adj, &mut dist, &mut match_l, &mut match_r, &mut next);
            }
        }
    }
    match_l
}

/// A bipartite graph on `x_1..x_c`, `y_1..y_c` (0-based here) in which
/// every `x_i y_i` is an edge. An edge `(i, j)` stands for `x_i y_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchedBipartiteGraph {
    c: usize,
    edges: BTreeSet<(usize, usize)>,
    x_labels: Vec<String>,
    y_labels: Vec<String>,
}

impl MatchedBipartiteGraph {
    /// Build from the off-diagonal edges; the diagonal is always added.
    /// Labels default to `x1..xc`, `y1..yc`.
    pub fn from_arcs(c: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: BTreeSet<(usize, usize)> = (0..c).map(|i| (i, i)).collect();
        for (i, j) in arcs {
            assert!(i < c && j < c, "edge ({i}, {j}) out of range");
            edges.insert((i, j));
        }
        MatchedBipartiteGraph {
            c,
            edges,
            x_labels: (1..=c).map(|i| format!("x{i}")).collect(),
            y_labels: (1..=c).map(|i| format!("y{i}")).collect(),
        }
    }

    /// The matched graph whose associated directed graph is `d`.
    pub fn from_digraph(d: &DirectedGraph) -> Self {
        Self::from_arcs(d.vertex_count(), d.arcs())
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// All edges `(i, j)` meaning `x_i y_j`, diagonal included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn x_label(&self, i: usize) -> &str {
        &self.x_labels[i]
    }

    pub fn y_label(&self, j: usize) -> &str {
        &self.y_labels[j]
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    /// Associated directed graph: arc `i -> j` iff `i != j` and `x_i y_j` is an edge.
    pub fn digraph(&self) -> DirectedGraph {
        build_digraph(self)
    }

    pub fn to_bipartite_graph(&self) -> BipartiteGraph {
        BipartiteGraph::from_labeled_edges(
            self.x_labels.clone(),
            self.y_labels.clone(),
            &self
                .edges
                .iter()
                .map(|&(i, j)| (self.x_labels[i].as_str(), self.y_labels[j].as_str()))
                .collect::<Vec<_>>(),
        )
        .expect("matched graph is a valid bipartite graph")
    }
}

/// Find a perfect matching and relabel so matched pairs share an index.
/// Left vertices keep their order; the right partner of `x_i` becomes `y_i`.
pub fn find_perfect_matching(g: &BipartiteGraph) -> Option<MatchedBipartiteGraph> {
    let c = g.left_count();
    if c != g.right_count() {
        return None;
    }
    let mut adj = vec![Vec::new(); c];
    for (i, j) in g.edges() {
        adj[i].push(j);
    }
    let m = hopcroft_karp(c, c, &adj);
    let partner: Vec<usize> = m.into_iter().collect::<Option<Vec<_>>>()?;
    let mut new_index_of_right = vec![0; c];
    for (i, &j) in partner.iter().enumerate() {
        new_index_of_right[j] = i;
    }
    let edges = g.edges().map(|(i, j)| (i, new_index_of_right[j])).collect();
    Some(MatchedBipartiteGraph {
        c,
        edges,
        x_labels: g.left_labels().to_vec(),
        y_labels: partner
            .iter()
            .map(|&j| g.right_labels()[j].clone())
            .collect(),
    })
}

pub fn build_digraph(mg: &MatchedBipartiteGraph) -> DirectedGraph {
    DirectedGraph::new(
        mg.c,
        mg.edges
            .iter()
            .copied()
            .filter(|&(i, j)| i != j)
            .collect::<Vec<_>>(),
    )
}

pub fn is_transitively_closed(d: &DirectedGraph) -> bool {
    d.is_transitively_closed()
}

pub fn is_acyclic(d: &DirectedGraph) -> bool {
    d.is_acyclic()
}

/// Where a bipartite graph sits in the chain
/// perfectly matched ⊇ unmixed ⊇ Cohen-Macaulay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Classification {
    NoPerfectMatching,
    PerfectlyMatchedOnly,
    Unmixed,
    CohenMacaulay,
}

impl Classification {
    pub fn is_unmixed(self) -> bool {
        matches!(
            self,
            Classification::Unmixed | Classification::CohenMacaulay
        )
    }
}

pub fn classify_matched(mg: &MatchedBipartiteGraph) -> Classification {
    let d = mg.digraph();
    if !d.is_transitively_closed() {
        Classification::PerfectlyMatchedOnly
    } else if d.is_acyclic() {
        Classification::CohenMacaulay
    } else {
        Classification::Unmixed
    }
}

pub fn classify(g: &BipartiteGraph) -> Classification {
    match find_perfect_matching(g) {
        None => Classification::NoPerfectMatching,
        Some(mg) => classify_matched(&mg),
    }
}

/// Strong components of a directed graph, their sizes, and the quotient
/// graph on components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcyclicReduction {
    /// Components in topological order (ties by smallest member), each sorted.
    pub components: Vec<Vec<usize>>,
    pub zeta: Vec<usize>,
    /// Arc `a -> b` iff some vertex of component `a` reaches some vertex of `b`.
    pub quotient: DirectedGraph,
    pub component_of: Vec<usize>,
}

impl AcyclicReduction {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Weight of a multiset of component indices: the sum of their sizes.
    pub fn weight(&self, components: &[usize]) -> usize {
        components.iter().map(|&a| self.zeta[a]).sum()
    }

    /// The acyclic reduction as a Cohen-Macaulay matched graph.
    pub fn reduced_graph(&self) -> MatchedBipartiteGraph {
        MatchedBipartiteGraph::from_digraph(&self.quotient)
    }
}

pub fn acyclic_reduction(d: &DirectedGraph) -> AcyclicReduction {
    let raw = d.strong_components();
    let reach = d.reachability();
    let t = raw.len();
    let mut raw_quot = vec![vec![false; t]; t];
    for a in 0..t {
        for b in 0..t {
            if a != b {
                raw_quot[a][b] = raw[a].iter().any(|&i| raw[b].iter().any(|&j| reach[i][j]));
            }
        }
    }
    // Kahn's algorithm; among ready components pick the smallest member.
    let mut indeg: Vec<usize> = (0..t)
        .map(|b| (0..t).filter(|&a| raw_quot[a][b]).count())
        .collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..t)
        .filter(|&a| indeg[a] == 0)
        .map(|a| Reverse((raw[a][0], a)))
        .collect();
    let mut order = Vec::with_capacity(t);
    while let Some(Reverse((_, a))) = heap.pop() {
        order.push(a);
        for b in 0..t {
            if raw_quot[a][b] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    heap.push(Reverse((raw[b][0], b)));
                }
            }
        }
    }
    debug_assert_eq!(order.len(), t, "condensation is acyclic");
    let mut new_index = vec![0; t];
    for (pos, &a) in order.iter().enumerate() {
        new_index[a] = pos;
    }
    let components: Vec<Vec<usize>> = order.iter().map(|&a| raw[a].clone()).collect();
    let zeta = components.iter().map(Vec::len).collect();
    let mut component_of = vec![0; d.vertex_count()];
    for (a, comp) in components.iter().enumerate() {
        for &i in comp {
            component_of[i] = a;
        }
    }
    let arcs: Vec<(usize, usize)> = (0..t)
        .flat_map(|a| (0..t).map(move |b| (a, b)))
        .filter(|&(a, b)| raw_quot[a][b])
        .map(|(a, b)| (new_index[a], new_index[b]))
        .collect();
    AcyclicReduction {
        components,
        zeta,
        quotient: DirectedGraph::new(t, arcs),
        component_of,
    }
}

/// All antichains of `d` (sets with no directed path between any two
/// members), the empty set included, in include-first lexicographic order.
pub fn antichains(d: &DirectedGraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = d.vertex_count();
    if n > cap {
        return Err(Error::TooLarge {
            what: "vertex count for antichain enumeration",
            size: n,
            cap,
        });
    }
    let reach = d.reachability();
    let comparable: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| reach[i][j] || reach[j][i]).collect())
        .collect();
    let mut out = Vec::new();
    fn rec(v: usize, cur: &mut Vec<usize>, cmp: &[Vec<bool>], out: &mut Vec<Vec<usize>>) {
        if v == cmp.len() {
            out.push(cur.clone());
            return;
        }
        if !cmp[v][v] && cur.iter().all(|&u| !cmp[u][v]) {
            cur.push(v);
            rec(v + 1, cur, cmp, out);
            cur.pop();
        }
        rec(v + 1, cur, cmp, out);
    }
    rec(0, &mut Vec::new(), &comparable, &mut out);
    Ok(out)
}

/// A minimal prime of the edge ideal, `(x_i : i in x) + (y_j : j in y)`,
/// in matched indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssociatedPrime {
    pub x: BTreeSet<usize>,
    pub y: BTreeSet<usize>,
}

impl AssociatedPrime {
    /// Sorted label lists `(x_part, y_part)`.
    pub fn labels(&self, mg: &MatchedBipartiteGraph) -> (Vec<String>, Vec<String>) {
        let mut xs: Vec<String> = self.x.iter().map(|&i| mg.x_labels[i].clone()).collect();
        let mut ys: Vec<String> = self.y.iter().map(|&j| mg.y_labels[j].clone()).collect();
        xs.sort_by(|a, b| crate::graph::label_cmp(a, b));
        ys.sort_by(|a, b| crate::graph::label_cmp(a, b));
        (xs, ys)
    }
}

/// One prime per antichain `A` of the quotient poset: the y-part is the
/// union of components lying over `A`, the x-part its complement.
pub fn associated_primes(mg: &MatchedBipartiteGraph) -> Result<Vec<AssociatedPrime>> {
    let d = mg.digraph();
    if !d.is_transitively_closed() {
        return Err(Error::NotUnmixed);
    }
    let ar = acyclic_reduction(&d);
    let reach = ar.quotient.reachability();
    let mut primes = Vec::new();
    for a in antichains(&ar.quotient, ANTICHAIN_ENUMERATION_CAP)? {
        let over: Vec<usize> = (0..ar.component_count())
            .filter(|&b| a.iter().any(|&m| m == b || reach[m][b]))
            .collect();
        let y: BTreeSet<usize> = over
            .iter()
            .flat_map(|&b| ar.components[b].iter().copied())
            .collect();
        let x = (0..mg.c).filter(|i| !y.contains(i)).collect();
        primes.push(AssociatedPrime { x, y });
    }
    primes.sort();
    Ok(primes)
}
