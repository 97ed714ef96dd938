//! Simple loopless directed graphs on `0..n`, with the closure, acyclicity
//! and strong-component machinery the rest of the crate is built on.

use std::collections::BTreeSet;

/// A simple loopless directed graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl DirectedGraph {
    /// Panics on loops or out-of-range endpoints.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for (i, j) in arcs {
            assert!(
                i < n && j < n,
                "arc ({i}, {j}) out of range for {n} vertices"
            );
            assert_ne!(i, j, "loop at {i}");
            adj[i][j] = true;
        }
        DirectedGraph { n, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, std::iter::empty())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n)
                .filter(move |&j| self.adj[i][j])
                .map(move |j| (i, j))
        })
    }

    pub fn arc_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .sum()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adj[i][j])
    }

    /// `reach[i][j]` iff there is a directed path of length >= 1 from i to j.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let mut r = self.adj.clone();
        for k in 0..self.n {
            for i in 0..self.n {
                if r[i][k] {
                    let (row_k, row_i) = if i < k {
                        let (a, b) = r.split_at_mut(k);
                        (&b[0], &mut a[i])
                    } else if i > k {
                        let (a, b) = r.split_at_mut(i);
                        (&a[k], &mut b[0])
                    } else {
                        continue;
                    };
                    for j in 0..self.n {
                        if row_k[j] {
                            row_i[j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    /// Transitive closure without loops.
    pub fn transitive_closure(&self) -> DirectedGraph {
        let r = self.reachability();
        let arcs = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && r[i][j]);
        DirectedGraph::new(self.n, arcs.collect::<Vec<_>>())
    }

    /// For all arcs ij, jk with i != k, the arc ik is present.
    pub fn is_transitively_closed(&self) -> bool {
        for i in 0..self.n {
            for j in self.successors(i) {
                for k in self.successors(j) {
                    if k != i && !self.adj[i][k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_acyclic(&self) -> bool {
        let r = self.reachability();
        (0..self.n).all(|i| !r[i][i])
    }

    /// Acyclic and transitively closed.
    pub fn is_poset(&self) -> bool {
        self.is_acyclic() && self.is_transitively_closed()
    }

    /// Restriction to `vertices`, relabeled to `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> DirectedGraph {
        let arcs: Vec<_> = vertices
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| vertices.iter().enumerate().map(move |(b, &j)| (a, b, i, j)))
            .filter(|&(_, _, i, j)| i != j && self.adj[i][j])
            .map(|(a, b, _, _)| (a, b))
            .collect();
        DirectedGraph::new(vertices.len(), arcs)
    }

    /// Underlying undirected adjacency.
    pub fn undirected_adjacency(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.adj[i][j] || self.adj[j][i])
                    .collect()
            })
            .collect()
    }

    /// Strong components via Tarjan's algorithm (iterative). Each component
    /// is sorted; components come out in reverse topological order.
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let n = self.n;
        let succ: Vec<Vec<usize>> = (0..n).map(|i| self.successors(i).collect()).collect();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut out = Vec::new();
        let mut next = 0;
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(top) = call.len().checked_sub(1) {
                let (v, pos) = call[top];
                if pos < succ[v].len() {
                    let w = succ[v][pos];
                    call[top].1 += 1;
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        out.push(comp);
                    }
                }
            }
        }
        out
    }
}

/// Collect a set of arcs into a sorted set; handy for comparisons in tests.
pub fn arc_set(d: &DirectedGraph) -> BTreeSet<(usize, usize)> {
    d.arcs().collect()
}
