//! Regularity, depth and projective dimension of unmixed bipartite edge
//! ideals, read off the associated directed graph and its acyclic
//! reduction.

use serde::Serialize;

use crate::digraph::DirectedGraph;
use crate::error::{violation, Error, Result};
use crate::graph::{max_pairwise_disconnected, BipartiteGraph, DEFAULT_ENUMERATION_CAP};
use crate::matching::{
    acyclic_reduction, antichains, find_perfect_matching, AcyclicReduction, MatchedBipartiteGraph,
    ANTICHAIN_ENUMERATION_CAP,
};

/// A maximum antichain with its (lexicographically smallest) witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Antichain {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// Maximum independent set of the graph given by `conflict` bitmasks,
/// lexicographically smallest among those of maximum size.
fn max_independent_set(conflict: &[u64]) -> Vec<usize> {
    fn search(cand: u64, cur: &mut Vec<usize>, best: &mut Vec<usize>, conflict: &[u64]) {
        if cur.len() + cand.count_ones() as usize <= best.len() {
            return;
        }
        if cand == 0 {
            *best = cur.clone();
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        cur.push(v);
        search(cand & !bit & !conflict[v], cur, best, conflict);
        cur.pop();
        search(cand & !bit, cur, best, conflict);
    }
    let n = conflict.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = Vec::new();
    search(all, &mut Vec::new(), &mut best, conflict);
    best
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    let cap = cap.min(64);
    if n > cap {
        return Err(Error::TooLarge { what, size: n, cap });
    }
    Ok(())
}

/// Largest set with no directed path between any two members.
pub fn max_antichain(d: &DirectedGraph, cap: usize) -> Result<Antichain> {
    let n = d.vertex_count();
    check_cap(n, cap, "vertex count for antichain search")?;
    let reach = d.reachability();
    let conflict: Vec<u64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && (reach[i][j] || reach[j][i]))
                .fold(0u64, |m, j| m | 1 << j)
        })
        .collect();
    let witness = max_independent_set(&conflict);
    Ok(Antichain {
        size: witness.len(),
        witness,
    })
}

/// Largest coclique of the underlying undirected graph.
pub fn coclique_number(d: &DirectedGraph, cap: usize) -> Result<usize> {
    let n = d.vertex_count();
    check_cap(n, cap, "vertex count for coclique search")?;
    let und = d.undirected_adjacency();
    let conflict: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| und[i][j]).fold(0u64, |m, j| m | 1 << j))
        .collect();
    Ok(max_independent_set(&conflict).len())
}

fn unmixed_digraph(mg: &MatchedBipartiteGraph) -> Result<DirectedGraph> {
    let d = mg.digraph();
    if !d.is_transitively_closed() {
        return Err(Error::NotUnmixed);
    }
    Ok(d)
}

/// Regularity of `R/I` with an antichain witness. Computed on the
/// directed graph and on its acyclic reduction; the two must agree.
pub fn regularity_with_witness(mg: &MatchedBipartiteGraph) -> Result<Antichain> {
    let d = unmixed_digraph(mg)?;
    let on_graph = max_antichain(&d, DEFAULT_ENUMERATION_CAP)?;
    let ar = acyclic_reduction(&d);
    let on_quotient = max_antichain(&ar.quotient, DEFAULT_ENUMERATION_CAP)?;
    if on_graph.size != on_quotient.size {
        return Err(violation(format!(
            "max antichain {} on the directed graph but {} on its acyclic reduction",
            on_graph.size, on_quotient.size
        )));
    }
    Ok(on_graph)
}

pub fn regularity(mg: &MatchedBipartiteGraph) -> Result<usize> {
    Ok(regularity_with_witness(mg)?.size)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Deficiency {
    pub value: usize,
    /// Antichain of the quotient (component indices) attaining the value.
    pub witness: Vec<usize>,
}

/// Maximum over antichains `B` of the quotient of `sum_{a in B} zeta_a - |B|`.
pub fn max_weight_antichain_deficiency(ar: &AcyclicReduction) -> Result<Deficiency> {
    let mut best: Option<Deficiency> = None;
    for b in antichains(&ar.quotient, ANTICHAIN_ENUMERATION_CAP)? {
        let value = ar.weight(&b) - b.len();
        let better = match &best {
            None => true,
            Some(cur) => value > cur.value || (value == cur.value && b < cur.witness),
        };
        if better {
            best = Some(Deficiency { value, witness: b });
        }
    }
    Ok(best.expect("the empty antichain always exists"))
}

/// Depth of `R/I`: `c` minus the maximum weighted antichain deficiency.
pub fn depth(mg: &MatchedBipartiteGraph) -> Result<usize> {
    let d = unmixed_digraph(mg)?;
    let def = max_weight_antichain_deficiency(&acyclic_reduction(&d))?;
    Ok(mg.c() - def.value)
}

/// `2c - depth`, by Auslander-Buchsbaum over the `2c`-variable ring.
pub fn projective_dimension(mg: &MatchedBipartiteGraph) -> Result<usize> {
    Ok(2 * mg.c() - depth(mg)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub height: usize,
    pub regularity: usize,
    /// x-labels of a maximum antichain of the directed graph.
    pub regularity_witness: Vec<String>,
    pub depth: usize,
    /// Components (as x-label lists) of an antichain attaining the depth.
    pub depth_witness: Vec<Vec<String>>,
    pub projdim: usize,
    pub kappa: usize,
    pub scc_count: usize,
    /// Brute-forced maximum number of pairwise disconnected edges, when the
    /// edge count is within the cap.
    pub r_lower: Option<usize>,
}

/// Aggregate every invariant of an unmixed graph and cross-check the
/// relations that must hold between them.
pub fn invariants_report(g: &BipartiteGraph, edge_cap: usize) -> Result<InvariantsReport> {
    let mg = find_perfect_matching(g).ok_or(Error::NotUnmixed)?;
    invariants_report_matched(&mg, edge_cap)
}

pub fn invariants_report_matched(
    mg: &MatchedBipartiteGraph,
    edge_cap: usize,
) -> Result<InvariantsReport> {
    let d = unmixed_digraph(mg)?;
    let c = mg.c();
    let reg = regularity_with_witness(mg)?;
    let ar = acyclic_reduction(&d);
    let def = max_weight_antichain_deficiency(&ar)?;
    let depth = c - def.value;
    let projdim = 2 * c - depth;
    let kappa = coclique_number(&d, DEFAULT_ENUMERATION_CAP)?;
    let r_lower = if mg.edge_count() <= edge_cap {
        Some(max_pairwise_disconnected(&mg.to_bipartite_graph(), edge_cap)?.size())
    } else {
        None
    };
    let report = InvariantsReport {
        height: c,
        regularity: reg.size,
        regularity_witness: reg
            .witness
            .iter()
            .map(|&i| mg.x_label(i).to_string())
            .collect(),
        depth,
        depth_witness: def
            .witness
            .iter()
            .map(|&a| {
                ar.components[a]
                    .iter()
                    .map(|&i| mg.x_label(i).to_string())
                    .collect()
            })
            .collect(),
        projdim,
        kappa,
        scc_count: ar.component_count(),
        r_lower,
    };
    check_report(&report)?;
    Ok(report)
}

fn check_report(r: &InvariantsReport) -> Result<()> {
    if r.depth + r.projdim != 2 * r.height {
        return Err(violation("depth + projdim != 2c"));
    }
    if r.depth < r.scc_count {
        return Err(violation(format!(
            "depth {} below strong component count {}",
            r.depth, r.scc_count
        )));
    }
    if r.regularity > r.height {
        return Err(violation("regularity exceeds height"));
    }
    if r.kappa < r.regularity {
        return Err(violation("coclique number below max antichain"));
    }
    if let Some(rl) = r.r_lower {
        if rl < r.kappa {
            return Err(violation("r(I) below coclique number"));
        }
        if rl != r.regularity {
            return Err(violation(format!(
                "r(I) = {rl} but max antichain = {}",
                r.regularity
            )));
        }
    }
    Ok(())
}
