//! Explicit generators of an ideal whose radical is the edge ideal, one
//! per unit of projective dimension.
//!
//! For a Cohen-Macaulay graph the quadrics come from the connected
//! components of a grid graph built from a plane embedding of the poset.
//! For an unmixed graph the strong components are first cut down to chains
//! and the discarded edges are grouped along a chain cover.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::digraph::DirectedGraph;
use crate::embedding::{canonicalize, embed_poset_2d, validate_embedding, PlaneEmbedding};
use crate::error::{violation, Error, Result};
use crate::graph::BipartiteGraph;
use crate::invariants::projective_dimension;
use crate::matching::{
    acyclic_reduction, classify_matched, find_perfect_matching, hopcroft_karp,
    MatchedBipartiteGraph,
};

/// The maximal acyclic transitively closed subgraph keeping, inside each
/// strong component, only arcs from smaller to larger index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreveData {
    pub digraph: DirectedGraph,
    /// Arcs `(j, i)` of the input that were dropped; always `j > i`.
    pub removed: Vec<(usize, usize)>,
}

impl BreveData {
    /// `j ⊳ i` with `j != i`.
    pub fn above(&self, j: usize, i: usize) -> bool {
        self.digraph.has_arc(i, j)
    }
}

pub fn breve_subgraph(d: &DirectedGraph) -> Result<BreveData> {
    if !d.is_transitively_closed() {
        return Err(Error::NotTransitivelyClosed);
    }
    let mut comp = vec![0; d.vertex_count()];
    for (k, members) in d.strong_components().iter().enumerate() {
        for &v in members {
            comp[v] = k;
        }
    }
    let (kept, removed): (Vec<_>, Vec<_>) =
        d.arcs().partition(|&(i, j)| comp[i] != comp[j] || i < j);
    Ok(BreveData {
        digraph: DirectedGraph::new(d.vertex_count(), kept),
        removed,
    })
}

/// Column and row linearizations, as 1-based ranks per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearizationPair {
    pub gamma: Vec<usize>,
    pub rho: Vec<usize>,
}

fn linearize(p: &DirectedGraph, phi: &PlaneEmbedding, from_top: bool) -> Result<Vec<usize>> {
    if !validate_embedding(p, phi) {
        return Err(Error::InvalidEmbedding("map is not order-faithful".into()));
    }
    let n = p.vertex_count();
    let reach = p.reachability();
    let mut rank = vec![0; n];
    let mut left: BTreeSet<usize> = (0..n).collect();
    for step in 1..=n {
        let extreme = |v: usize| {
            left.iter()
                .all(|&u| u == v || !(if from_top { reach[v][u] } else { reach[u][v] }))
        };
        let pick = left
            .iter()
            .copied()
            .filter(|&v| extreme(v))
            .min_by_key(|&v| (phi.coords[v].0, v))
            .expect("a finite poset has extreme elements");
        rank[pick] = step;
        left.remove(&pick);
    }
    Ok(rank)
}

/// Repeatedly take the minimal element furthest left.
pub fn column_linearization(p: &DirectedGraph, phi: &PlaneEmbedding) -> Result<Vec<usize>> {
    linearize(p, phi, false)
}

/// Repeatedly take the maximal element furthest left.
pub fn row_linearization(p: &DirectedGraph, phi: &PlaneEmbedding) -> Result<Vec<usize>> {
    linearize(p, phi, true)
}

pub fn linearization_pair(p: &DirectedGraph, phi: &PlaneEmbedding) -> Result<LinearizationPair> {
    Ok(LinearizationPair {
        gamma: column_linearization(p, phi)?,
        rho: row_linearization(p, phi)?,
    })
}

/// Comparable pairs go up in columns and down in rows; incomparable pairs
/// keep the same relative order in both.
pub fn is_compatible_pair(p: &DirectedGraph, pair: &LinearizationPair) -> bool {
    let n = p.vertex_count();
    let reach = p.reachability();
    let (g, r) = (&pair.gamma, &pair.rho);
    (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                true
            } else if reach[i][j] {
                g[j] > g[i] && r[j] < r[i]
            } else if reach[j][i] {
                true
            } else {
                (g[j] > g[i]) == (r[j] > r[i])
            }
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaPoint {
    /// 1-based column `gamma(i)`.
    pub col: usize,
    /// 1-based row `rho(j)`, counted from the bottom.
    pub row: usize,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    n: usize,
    points: Vec<GammaPoint>,
    edges: Vec<(usize, usize)>,
    /// All connected components, each sorted, ordered by first point.
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

impl GammaGraph {
    fn assemble(n: usize, points: Vec<GammaPoint>, edges: Vec<(usize, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..points.len()).collect();
        for &(a, b) in &edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; points.len()];
        let mut component_of = vec![0; points.len()];
        for p in 0..points.len() {
            let root = find(&mut parent, p);
            if slot[root] == usize::MAX {
                slot[root] = components.len();
                components.push(Vec::new());
            }
            components[slot[root]].push(p);
            component_of[p] = slot[root];
        }
        GammaGraph {
            n,
            points,
            edges,
            components,
            component_of,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[GammaPoint] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, point: usize) -> usize {
        self.component_of[point]
    }

    pub fn point_at(&self, col: usize, row: usize) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.col == col && p.row == row)
    }

    /// Leftmost point of row `t` (1-based).
    pub fn row_leader(&self, t: usize) -> Option<usize> {
        (0..self.points.len())
            .filter(|&p| self.points[p].row == t)
            .min_by_key(|&p| self.points[p].col)
    }

    /// Component containing the leftmost point of row `t`, for `t = 1..=n`.
    pub fn row_components(&self) -> Vec<Option<usize>> {
        (1..=self.n)
            .map(|t| self.row_leader(t).map(|p| self.component_of[p]))
            .collect()
    }

    /// The same points with one edge removed; components are recomputed.
    pub fn drop_edge(&self, k: usize) -> GammaGraph {
        let mut edges = self.edges.clone();
        edges.remove(k);
        GammaGraph::assemble(self.n, self.points.clone(), edges)
    }

    /// Structural checks: component count, diagonal, first column
    /// contiguity, top-left leaders and the row-to-component bijection.
    pub fn check_invariants(&self) -> Result<()> {
        if self.components.len() != self.n {
            return Err(violation(format!(
                "grid graph has {} components for {} vertices",
                self.components.len(),
                self.n
            )));
        }
        let diagonal = self.points.iter().filter(|p| p.i == p.j).count();
        if diagonal != self.n {
            return Err(violation("diagonal points missing from grid graph"));
        }
        let mut first: Vec<usize> = self
            .points
            .iter()
            .filter(|p| p.col == 1)
            .map(|p| p.row)
            .collect();
        first.sort_unstable();
        if !first.iter().copied().eq(1..=first.len()) {
            return Err(violation("first column rows are not contiguous from row 1"));
        }
        for comp in &self.components {
            let top_left = comp
                .iter()
                .copied()
                .min_by_key(|&p| (self.points[p].col, std::cmp::Reverse(self.points[p].row)))
                .expect("components are non-empty");
            if self.row_leader(self.points[top_left].row) != Some(top_left) {
                return Err(violation(
                    "top-left point of a component is not leftmost in its row",
                ));
            }
        }
        let rows: BTreeSet<Option<usize>> = self.row_components().into_iter().collect();
        if rows.len() != self.n || rows.contains(&None) {
            return Err(violation("rows and components are not in bijection"));
        }
        Ok(())
    }

    /// A text picture: rows from the top, one cell per column, showing the
    /// row index of the component a point belongs to.
    pub fn render(&self) -> String {
        let mut label = vec![0; self.components.len()];
        for (t, c) in self.row_components().into_iter().enumerate() {
            if let Some(c) = c {
                label[c] = t + 1;
            }
        }
        let width = self.n.to_string().len() + 1;
        let mut out = String::new();
        for row in (1..=self.n).rev() {
            let _ = write!(out, "{row:>width$} |");
            for col in 1..=self.n {
                match self.point_at(col, row) {
                    Some(p) => {
                        let _ = write!(out, "{:>width$}", label[self.component_of[p]]);
                    }
                    None => {
                        let _ = write!(out, "{:>width$}", ".");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Build the grid graph of a poset from its pair of linearizations.
pub fn build_gamma_graph(p: &DirectedGraph, pair: &LinearizationPair) -> Result<GammaGraph> {
    let n = p.vertex_count();
    let reach = p.reachability();
    let mut points = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || reach[i][j] {
                points.push(GammaPoint {
                    col: pair.gamma[i],
                    row: pair.rho[j],
                    i,
                    j,
                });
            }
        }
    }
    points.sort_by_key(|q| (q.col, q.row));
    let mut grid = vec![vec![None; n + 2]; n + 2];
    for (k, q) in points.iter().enumerate() {
        grid[q.col][q.row] = Some(k);
    }
    let mut edges = Vec::new();
    for (k, q) in points.iter().enumerate() {
        let Some(below) = (1..q.row).rev().find(|&r| grid[q.col][r].is_some()) else {
            continue;
        };
        let right = (q.col + 1..=n)
            .find_map(|c| grid[c][below])
            .ok_or_else(|| violation(format!("no right neighbour in row {below}")))?;
        edges.push((k, right));
    }
    let gg = GammaGraph::assemble(n, points, edges);
    gg.check_invariants()?;
    Ok(gg)
}

/// A sum of distinct edge monomials `x_i y_j`, each with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadraticForm {
    /// Terms `(i, j)`, sorted by descending `i` then descending `j`.
    pub terms: Vec<(usize, usize)>,
}

impl QuadraticForm {
    pub fn new(terms: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_unstable_by(|a, b| b.cmp(a));
        terms.dedup();
        QuadraticForm { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `"x6*y6 + x4*y7"` style, using the graph's labels.
    pub fn render(&self, mg: &MatchedBipartiteGraph) -> String {
        self.terms
            .iter()
            .map(|&(i, j)| format!("{}*{}", mg.x_label(i), mg.y_label(j)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `g_t` is the sum over the component holding the leftmost point of row `t`.
pub fn component_generators(gg: &GammaGraph) -> Vec<QuadraticForm> {
    gg.row_components()
        .into_iter()
        .map(|c| {
            let comp = &gg.components()[c.expect("row components checked at build time")];
            QuadraticForm::new(comp.iter().map(|&p| (gg.points()[p].i, gg.points()[p].j)))
        })
        .collect()
}

/// The edges dropped from the breve subgraph, ordered by `x_j y_i >
/// x_j' y_i'` iff `j ⊳ j'` and `i ⊳ i'`, both strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraEdgePoset {
    /// Edges `(j, i)`, meaning `x_j y_i`.
    pub elements: Vec<(usize, usize)>,
    /// `greater[a][b]` iff element `a` is above element `b`.
    pub greater: Vec<Vec<bool>>,
}

impl ExtraEdgePoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn max_matching(&self) -> Vec<Option<usize>> {
        let adj: Vec<Vec<usize>> = (0..self.len())
            .map(|a| (0..self.len()).filter(|&b| self.greater[a][b]).collect())
            .collect();
        hopcroft_karp(self.len(), self.len(), &adj)
    }

    /// Width, via the minimum chain cover.
    pub fn width(&self) -> usize {
        self.len() - self.max_matching().iter().flatten().count()
    }
}

pub fn extra_edge_poset(d: &DirectedGraph, bd: &BreveData) -> Result<ExtraEdgePoset> {
    if !d.is_transitively_closed() {
        return Err(Error::NotUnmixed);
    }
    let elements = bd.removed.clone();
    let greater = elements
        .iter()
        .map(|&(j, i)| {
            elements
                .iter()
                .map(|&(j2, i2)| bd.above(j, j2) && bd.above(i, i2))
                .collect()
        })
        .collect();
    Ok(ExtraEdgePoset { elements, greater })
}

/// Partition into a minimum number of chains, each listed from the top.
pub fn chain_cover(p: &ExtraEdgePoset) -> Vec<Vec<usize>> {
    let next = p.max_matching();
    let mut has_prev = vec![false; p.len()];
    for b in next.iter().flatten() {
        has_prev[*b] = true;
    }
    (0..p.len())
        .filter(|&a| !has_prev[a])
        .map(|start| {
            let mut chain = vec![start];
            while let Some(b) = next[*chain.last().expect("non-empty")] {
                chain.push(b);
            }
            chain
        })
        .collect()
}

/// Generators for the edge ideal up to radical, with the data that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub graph: MatchedBipartiteGraph,
    pub breve: BreveData,
    pub embedding: PlaneEmbedding,
    pub linearizations: LinearizationPair,
    pub gamma_graph: GammaGraph,
    pub extra: ExtraEdgePoset,
    pub chains: Vec<Vec<usize>>,
    pub g_list: Vec<QuadraticForm>,
    pub h_list: Vec<QuadraticForm>,
}

impl GeneratorSet {
    pub fn total_count(&self) -> usize {
        self.g_list.len() + self.h_list.len()
    }

    pub fn xi(&self) -> usize {
        self.h_list.len()
    }

    pub fn all(&self) -> impl Iterator<Item = &QuadraticForm> {
        self.g_list.iter().chain(self.h_list.iter())
    }

    pub fn rendered(&self) -> Vec<String> {
        self.all().map(|f| f.render(&self.graph)).collect()
    }
}

/// Embedding of the breve poset obtained by blowing each point of a
/// quotient embedding up into a short diagonal run, one step per member.
pub fn refine_quotient_embedding(
    components: &[Vec<usize>],
    quotient_phi: &PlaneEmbedding,
) -> Result<PlaneEmbedding> {
    let n: usize = components.iter().map(Vec::len).sum();
    let z = components.iter().map(Vec::len).max().unwrap_or(1);
    let mut coords = vec![(0, 0); n];
    for (a, members) in components.iter().enumerate() {
        let (p, q) = quotient_phi.coords[a];
        for (k, &v) in members.iter().enumerate() {
            coords[v] = (p * z + k, q * z + k);
        }
    }
    canonicalize(&PlaneEmbedding::new(coords))
}

pub fn arank_generators(g: &BipartiteGraph) -> Result<GeneratorSet> {
    let mg = find_perfect_matching(g).ok_or(Error::NotUnmixed)?;
    arank_generators_matched(&mg, None)
}

/// As [`arank_generators`], optionally with a caller-supplied embedding of
/// the breve poset instead of the search.
pub fn arank_generators_matched(
    mg: &MatchedBipartiteGraph,
    embedding: Option<&PlaneEmbedding>,
) -> Result<GeneratorSet> {
    if !classify_matched(mg).is_unmixed() {
        return Err(Error::NotUnmixed);
    }
    let d = mg.digraph();
    let breve = breve_subgraph(&d)?;
    let embedding = match embedding {
        Some(phi) => {
            if !validate_embedding(&breve.digraph, phi) {
                return Err(Error::InvalidEmbedding(
                    "supplied map is not order-faithful on the breve poset".into(),
                ));
            }
            canonicalize(phi)?
        }
        None => {
            let ar = acyclic_reduction(&d);
            let quotient_phi = embed_poset_2d(&ar.quotient)?;
            refine_quotient_embedding(&ar.components, &quotient_phi)?
        }
    };
    if !validate_embedding(&breve.digraph, &embedding) {
        return Err(violation("refined embedding is not order-faithful"));
    }
    let linearizations = linearization_pair(&breve.digraph, &embedding)?;
    if !is_compatible_pair(&breve.digraph, &linearizations) {
        return Err(violation("linearizations are not compatible"));
    }
    let gamma_graph = build_gamma_graph(&breve.digraph, &linearizations)?;
    let g_list = component_generators(&gamma_graph);
    let extra = extra_edge_poset(&d, &breve)?;
    let chains = chain_cover(&extra);
    let h_list: Vec<QuadraticForm> = chains
        .iter()
        .map(|chain| QuadraticForm::new(chain.iter().map(|&a| extra.elements[a])))
        .collect();

    let xi = projective_dimension(mg)? - mg.c();
    if chains.len() != xi || extra.width() != xi {
        return Err(violation(format!(
            "chain cover has {} chains but projdim - height = {xi}",
            chains.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for f in g_list.iter().chain(&h_list) {
        for &t in &f.terms {
            if !mg.has_edge(t.0, t.1) || !seen.insert(t) {
                return Err(violation("generator terms do not partition the edges"));
            }
        }
    }
    if seen.len() != mg.edge_count() {
        return Err(violation("generator terms do not cover every edge"));
    }
    Ok(GeneratorSet {
        graph: mg.clone(),
        breve,
        embedding,
        linearizations,
        gamma_graph,
        extra,
        chains,
        g_list,
        h_list,
    })
}
