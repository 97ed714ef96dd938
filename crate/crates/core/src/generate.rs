//! Instance generators: posets blown up into unmixed graphs, seeded random
//! posets, random two-dimensional posets and small exhaustive enumeration.
//!
//! Randomness comes from ChaCha8 so a seed reproduces on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::DirectedGraph;
use crate::embedding::PlaneEmbedding;
use crate::error::{Error, Result};
use crate::matching::MatchedBipartiteGraph;

/// Largest `c` accepted by [`enumerate_unmixed`].
pub const ENUMERATION_CAP: usize = 4;

fn check_poset(d: &DirectedGraph) -> Result<()> {
    if !d.is_acyclic() {
        return Err(Error::NotAPoset("contains a directed cycle".into()));
    }
    if !d.is_transitively_closed() {
        return Err(Error::NotAPoset("not transitively closed".into()));
    }
    Ok(())
}

/// Replace vertex `a` of the poset by a directed cycle on `zeta[a]`
/// consecutive labels and take the transitive closure.
pub fn expand_poset(dhat: &DirectedGraph, zeta: &[usize]) -> Result<MatchedBipartiteGraph> {
    check_poset(dhat)?;
    if zeta.len() != dhat.vertex_count() {
        return Err(Error::BadWeights(format!(
            "{} weights for {} vertices",
            zeta.len(),
            dhat.vertex_count()
        )));
    }
    if let Some(a) = zeta.iter().position(|&z| z == 0) {
        return Err(Error::BadWeights(format!(
            "weight of vertex {} is zero",
            a + 1
        )));
    }
    let mut start = Vec::with_capacity(zeta.len());
    let mut c = 0;
    for &z in zeta {
        start.push(c);
        c += z;
    }
    let mut arcs = Vec::new();
    for (a, &z) in zeta.iter().enumerate() {
        if z > 1 {
            for k in 0..z {
                arcs.push((start[a] + k, start[a] + (k + 1) % z));
            }
        }
    }
    for (a, b) in dhat.arcs() {
        arcs.push((start[a], start[b]));
    }
    Ok(MatchedBipartiteGraph::from_digraph(
        &DirectedGraph::new(c, arcs).transitive_closure(),
    ))
}

/// Coin flips on pairs `i < j` with probability `density`, then closure.
pub fn random_poset(n: usize, density: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = density.clamp(0.0, 1.0);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((i, j));
            }
        }
    }
    DirectedGraph::new(n, arcs).transitive_closure()
}

/// The intersection of the identity order with a random permutation order,
/// together with the embedding that defines it.
pub fn random_2d_poset(n: usize, seed: u64) -> (DirectedGraph, PlaneEmbedding) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut second: Vec<usize> = (0..n).collect();
    second.shuffle(&mut rng);
    poset_from_permutation(&second)
}

/// `i < j` iff `i < j` and `second[i] < second[j]`.
pub fn poset_from_permutation(second: &[usize]) -> (DirectedGraph, PlaneEmbedding) {
    let n = second.len();
    let arcs: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| second[i] < second[j])
        .collect();
    (
        DirectedGraph::new(n, arcs),
        PlaneEmbedding::new((0..n).map(|i| (i, second[i])).collect()),
    )
}

/// Every transitively closed loopless digraph on `c` labeled vertices, as
/// matched graphs.
pub fn enumerate_unmixed(c: usize) -> Result<Vec<MatchedBipartiteGraph>> {
    if c > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            what: "vertex count for exhaustive enumeration",
            size: c,
            cap: ENUMERATION_CAP,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..c)
        .flat_map(|i| (0..c).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    Ok((0u64..1 << pairs.len())
        .map(|bits| {
            DirectedGraph::new(
                c,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| bits >> k & 1 == 1)
                    .map(|(_, &p)| p),
            )
        })
        .filter(DirectedGraph::is_transitively_closed)
        .map(|d| MatchedBipartiteGraph::from_digraph(&d))
        .collect())
}

/// Weights that make the depth of the blown-up graph equal to the number of
/// poset vertices `t`: weight 1 off the antichain `b`, and the surplus
/// `c - t` added to the first element of `b`.
pub fn sharp_weights(dhat: &DirectedGraph, b: &[usize], c: usize) -> Result<Vec<usize>> {
    let t = dhat.vertex_count();
    if c < t {
        return Err(Error::BadWeights(format!("c = {c} is below t = {t}")));
    }
    let reach = dhat.reachability();
    if b.iter().any(|&u| u >= t) || b.iter().any(|&u| b.iter().any(|&v| u != v && reach[u][v])) {
        return Err(Error::BadWeights("chosen set is not an antichain".into()));
    }
    let mut zeta = vec![1; t];
    match b.first() {
        Some(&first) => zeta[first] += c - t,
        None if c == t => {}
        None => {
            return Err(Error::BadWeights(
                "an empty antichain cannot absorb c - t".into(),
            ))
        }
    }
    Ok(zeta)
}

pub fn sharp_depth_instance(
    dhat: &DirectedGraph,
    b: &[usize],
    c: usize,
) -> Result<MatchedBipartiteGraph> {
    expand_poset(dhat, &sharp_weights(dhat, b, c)?)
}

/// A sharp instance on a chain of `t` vertices, surplus on the bottom.
pub fn sharp_depth_chain(t: usize, c: usize) -> Result<MatchedBipartiteGraph> {
    let chain = DirectedGraph::new(t, (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))));
    sharp_depth_instance(&chain, if t > 0 { &[0] } else { &[] }, c)
}

/// A random unmixed instance: a random poset on `t` vertices expanded by a
/// random composition of `c` into `t` positive parts.
pub fn random_unmixed(
    t: usize,
    c: usize,
    density: f64,
    seed: u64,
) -> Result<MatchedBipartiteGraph> {
    if t == 0 || c < t {
        return Err(Error::BadWeights(format!(
            "cannot split {c} into {t} positive parts"
        )));
    }
    let dhat = random_poset(t, density, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut zeta = vec![1; t];
    for _ in 0..c - t {
        zeta[rng.gen_range(0..t)] += 1;
    }
    expand_poset(&dhat, &zeta)
}

/// A poset written with 1-based vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub n: usize,
    /// Pairs `[lower, upper]`; the closure is taken.
    #[serde(default)]
    pub arcs: Vec<(usize, usize)>,
}

impl PosetSpec {
    pub fn to_digraph(&self) -> Result<DirectedGraph> {
        for &(a, b) in &self.arcs {
            if a == 0 || b == 0 || a > self.n || b > self.n || a == b {
                return Err(Error::Parse(format!(
                    "bad poset arc [{a}, {b}] for n = {}",
                    self.n
                )));
            }
        }
        let d = DirectedGraph::new(self.n, self.arcs.iter().map(|&(a, b)| (a - 1, b - 1)));
        if !d.is_acyclic() {
            return Err(Error::NotAPoset("contains a directed cycle".into()));
        }
        Ok(d.transitive_closure())
    }
}

/// What to generate; accepted as JSON by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Expand {
        poset: PosetSpec,
        zeta: Vec<usize>,
    },
    RandomPoset {
        n: usize,
        density: f64,
        seed: u64,
    },
    Random2d {
        n: usize,
        seed: u64,
    },
    Enumerate {
        c: usize,
    },
    SharpDepth {
        t: usize,
        c: usize,
        /// Defaults to a chain on `t` vertices.
        #[serde(default)]
        poset: Option<PosetSpec>,
        /// 1-based antichain; defaults to the first vertex.
        #[serde(default)]
        antichain: Option<Vec<usize>>,
    },
    RandomUnmixed {
        t: usize,
        c: usize,
        density: f64,
        seed: u64,
    },
}

/// One generated graph, with the embedding that produced it when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub graph: MatchedBipartiteGraph,
    pub embedding: Option<PlaneEmbedding>,
}

impl From<MatchedBipartiteGraph> for GeneratedInstance {
    fn from(graph: MatchedBipartiteGraph) -> Self {
        GeneratedInstance {
            graph,
            embedding: None,
        }
    }
}

impl GeneratorSpec {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn run(&self) -> Result<Vec<GeneratedInstance>> {
        Ok(match self {
            GeneratorSpec::Expand { poset, zeta } => {
                vec![expand_poset(&poset.to_digraph()?, zeta)?.into()]
            }
            GeneratorSpec::RandomPoset { n, density, seed } => {
                vec![MatchedBipartiteGraph::from_digraph(&random_poset(*n, *density, *seed)).into()]
            }
            GeneratorSpec::Random2d { n, seed } => {
                let (p, phi) = random_2d_poset(*n, *seed);
                vec![GeneratedInstance {
                    graph: MatchedBipartiteGraph::from_digraph(&p),
                    embedding: Some(phi),
                }]
            }
            GeneratorSpec::Enumerate { c } => {
                enumerate_unmixed(*c)?.into_iter().map(Into::into).collect()
            }
            GeneratorSpec::SharpDepth {
                t,
                c,
                poset,
                antichain,
            } => {
                let dhat = match poset {
                    Some(p) => {
                        if p.n != *t {
                            return Err(Error::BadWeights(format!(
                                "poset has {} vertices, t = {t}",
                                p.n
                            )));
                        }
                        p.to_digraph()?
                    }
                    None => DirectedGraph::new(
                        *t,
                        (0..*t).flat_map(|i| (i + 1..*t).map(move |j| (i, j))),
                    ),
                };
                let b: Vec<usize> = match antichain {
                    Some(b) if b.contains(&0) => {
                        return Err(Error::BadWeights("antichain labels are 1-based".into()))
                    }
                    Some(b) => b.iter().map(|v| v - 1).collect(),
                    None if *t > 0 => vec![0],
                    None => vec![],
                };
                vec![sharp_depth_instance(&dhat, &b, *c)?.into()]
            }
            GeneratorSpec::RandomUnmixed {
                t,
                c,
                density,
                seed,
            } => {
                vec![random_unmixed(*t, *c, *density, *seed)?.into()]
            }
        })
    }
}
