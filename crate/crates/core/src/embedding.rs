//! Embeddings of finite posets into the product order on `N x N`.
//!
//! A poset embeds iff its incomparability graph has a transitive
//! orientation `T`; the two linear extensions `P ∪ T` and `P ∪ T⁻¹` then
//! give the coordinates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::digraph::DirectedGraph;
use crate::error::{Error, Obstruction, Result};

/// Cap on poset size for the orientation search.
pub const EMBEDDING_CAP: usize = 64;

/// A map from vertices `0..n` to points of `N x N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PlaneEmbedding {
    pub coords: Vec<(usize, usize)>,
}

impl PlaneEmbedding {
    pub fn new(coords: Vec<(usize, usize)>) -> Self {
        PlaneEmbedding { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Componentwise `phi(j) >= phi(i)`.
    pub fn dominates(&self, j: usize, i: usize) -> bool {
        let (a, b) = self.coords[j];
        let (c, d) = self.coords[i];
        a >= c && b >= d
    }

    /// Both coordinate lists are permutations of `0..n`.
    pub fn is_canonical(&self) -> bool {
        let n = self.coords.len();
        let mut first: Vec<usize> = self.coords.iter().map(|p| p.0).collect();
        let mut second: Vec<usize> = self.coords.iter().map(|p| p.1).collect();
        first.sort_unstable();
        second.sort_unstable();
        first.iter().copied().eq(0..n) && second.iter().copied().eq(0..n)
    }
}

/// Parse `{"label": [a, b], ...}` against the given vertex labels.
pub fn parse_embedding(document: &str, labels: &[String]) -> Result<PlaneEmbedding> {
    let map: BTreeMap<String, (usize, usize)> =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(unknown) = map.keys().find(|k| !labels.contains(k)) {
        return Err(Error::UnknownLabel(unknown.clone()));
    }
    let coords = labels
        .iter()
        .map(|l| {
            map.get(l)
                .copied()
                .ok_or_else(|| Error::InvalidEmbedding(format!("no point for {l}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlaneEmbedding { coords })
}

/// The inverse of [`parse_embedding`], keys in label order.
pub fn embedding_to_json(phi: &PlaneEmbedding, labels: &[String]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = labels
        .iter()
        .zip(&phi.coords)
        .map(|(l, &(a, b))| (l.clone(), serde_json::json!([a, b])))
        .collect();
    serde_json::Value::Object(map)
}

/// Order fidelity: `j ≽ i` in `p` iff `phi(j) >= phi(i)`, for all pairs.
pub fn validate_embedding(p: &DirectedGraph, phi: &PlaneEmbedding) -> bool {
    let n = p.vertex_count();
    if phi.len() != n {
        return false;
    }
    let reach = p.reachability();
    (0..n).all(|i| (0..n).all(|j| i == j || reach[i][j] == phi.dominates(j, i)))
}

/// Replace every coordinate by its rank. Equal first coordinates are
/// ordered by the second and vice versa, which keeps order fidelity.
pub fn canonicalize(phi: &PlaneEmbedding) -> Result<PlaneEmbedding> {
    let n = phi.len();
    let mut by_first: Vec<usize> = (0..n).collect();
    by_first.sort_by_key(|&v| (phi.coords[v].0, phi.coords[v].1));
    for w in by_first.windows(2) {
        if phi.coords[w[0]] == phi.coords[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::CoordinateTie(a, b));
        }
    }
    let mut by_second: Vec<usize> = (0..n).collect();
    by_second.sort_by_key(|&v| (phi.coords[v].1, phi.coords[v].0));
    let mut coords = vec![(0, 0); n];
    for (rank, &v) in by_first.iter().enumerate() {
        coords[v].0 = rank;
    }
    for (rank, &v) in by_second.iter().enumerate() {
        coords[v].1 = rank;
    }
    Ok(PlaneEmbedding { coords })
}

/// Orientation state of the incomparability graph: `dir[i][j] = 1` means
/// `i` before `j` in the first linear extension, `-1` the reverse, `0` unset.
#[derive(Clone)]
struct Orientation {
    dir: Vec<Vec<i8>>,
}

struct Search<'a> {
    n: usize,
    incomparable: &'a [Vec<bool>],
}

impl Search<'_> {
    /// Set `a -> b` and propagate forced orientations. Returns false on conflict.
    fn assign(&self, o: &mut Orientation, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            match o.dir[a][b] {
                1 => continue,
                -1 => return false,
                _ => {}
            }
            o.dir[a][b] = 1;
            o.dir[b][a] = -1;
            for c in 0..self.n {
                if c == a || c == b {
                    continue;
                }
                // a -> b forces a -> c when ac is an edge but bc is not.
                if self.incomparable[a][c] && !self.incomparable[b][c] {
                    queue.push((a, c));
                }
                // ... and c -> b when cb is an edge but ac is not.
                if self.incomparable[c][b] && !self.incomparable[a][c] {
                    queue.push((c, b));
                }
                // transitivity through existing arcs
                if o.dir[b][c] == 1 && self.incomparable[a][c] {
                    queue.push((a, c));
                }
                if o.dir[c][a] == 1 && self.incomparable[c][b] {
                    queue.push((c, b));
                }
            }
        }
        true
    }

    fn first_unset(&self, o: &Orientation) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.incomparable[i][j] && o.dir[i][j] == 0)
    }

    fn solve(&self, o: Orientation) -> Option<Orientation> {
        let Some((i, j)) = self.first_unset(&o) else {
            return Some(o);
        };
        for (a, b) in [(i, j), (j, i)] {
            let mut next = o.clone();
            if self.assign(&mut next, a, b) {
                if let Some(done) = self.solve(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Find a canonical plane embedding of a poset, or certify that none exists.
pub fn embed_poset_2d(p: &DirectedGraph) -> Result<PlaneEmbedding> {
    let n = p.vertex_count();
    if n > EMBEDDING_CAP {
        return Err(Error::TooLarge {
            what: "poset size for embedding search",
            size: n,
            cap: EMBEDDING_CAP,
        });
    }
    if !p.is_acyclic() {
        return Err(Error::NotAPoset("contains a directed cycle".into()));
    }
    if !p.is_transitively_closed() {
        return Err(Error::NotAPoset("not transitively closed".into()));
    }
    let reach = p.reachability();
    let incomparable: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && !reach[i][j] && !reach[j][i])
                .collect()
        })
        .collect();
    let search = Search {
        n,
        incomparable: &incomparable,
    };
    let start = Orientation {
        dir: vec![vec![0; n]; n],
    };
    let Some(o) = search.solve(start.clone()) else {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| incomparable[i][j])
            .collect();
        return Err(Error::NotTwoDimensional(Obstruction {
            conflict_pair: search.first_unset(&start).unwrap_or((0, 0)),
            incomparable_pairs: pairs,
        }));
    };

    // rank in P ∪ T and in P ∪ T⁻¹
    let below = |v: usize, flip: i8| -> usize {
        (0..n)
            .filter(|&u| u != v && (reach[u][v] || (incomparable[u][v] && o.dir[u][v] == flip)))
            .count()
    };
    let phi = PlaneEmbedding {
        coords: (0..n).map(|v| (below(v, 1), below(v, -1))).collect(),
    };
    if !phi.is_canonical() || !validate_embedding(p, &phi) {
        return Err(crate::error::violation(
            "orientation search produced a non-linear extension",
        ));
    }
    Ok(phi)
}
