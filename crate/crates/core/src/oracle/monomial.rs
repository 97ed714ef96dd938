//! Square-free monomial ideals, stored as bitmasks over at most 64 variables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::matching::MatchedBipartiteGraph;

/// Cap on the number of minimal transversals kept while dualizing.
pub const DUAL_GENERATOR_CAP: usize = 200_000;

/// An ideal generated by square-free monomials; each generator is the set
/// of variables it uses. The unit ideal is the single empty generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SquareFreeMonomialIdeal {
    vars: Vec<String>,
    gens: Vec<u64>,
}

/// Drop every set that contains another one, then sort.
pub fn minimalize(sets: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = sets
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    v.sort_by_key(|m| (m.count_ones(), *m));
    let mut out: Vec<u64> = Vec::with_capacity(v.len());
    for m in v {
        if !out.iter().any(|&g| g & !m == 0) {
            out.push(m);
        }
    }
    out.sort_unstable();
    out
}

impl SquareFreeMonomialIdeal {
    /// Panics if there are more than 64 variables or a generator uses an
    /// unknown variable.
    pub fn new(vars: Vec<String>, gens: impl IntoIterator<Item = u64>) -> Self {
        assert!(vars.len() <= 64, "at most 64 variables");
        let full = full_mask(vars.len());
        let gens = minimalize(gens);
        assert!(
            gens.iter().all(|&g| g & !full == 0),
            "generator outside variable set"
        );
        SquareFreeMonomialIdeal { vars, gens }
    }

    /// Variables named `v1..vn`.
    pub fn with_default_names(n: usize, gens: impl IntoIterator<Item = u64>) -> Self {
        Self::new((1..=n).map(|i| format!("v{i}")).collect(), gens)
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.contains(&0)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// The monomial with support `mask` lies in the ideal.
    pub fn contains(&self, mask: u64) -> bool {
        self.gens.iter().any(|&g| g & !mask == 0)
    }

    /// `(I : x^sigma)`.
    pub fn colon(&self, sigma: u64) -> Self {
        SquareFreeMonomialIdeal {
            vars: self.vars.clone(),
            gens: minimalize(self.gens.iter().map(|&g| g & !sigma)),
        }
    }

    pub fn mask_labels(&self, mask: u64) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| self.vars[v].clone())
            .collect()
    }

    /// Generators as `"x1*y2"` strings, `"1"` for the empty monomial.
    pub fn render(&self) -> Vec<String> {
        self.gens
            .iter()
            .map(|&g| {
                if g == 0 {
                    "1".to_string()
                } else {
                    self.mask_labels(g).join("*")
                }
            })
            .collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Variable order `x1, y1, x2, y2, ...`; `x_i` is variable `2i`, `y_j` is `2j + 1`.
pub fn edge_ideal(mg: &MatchedBipartiteGraph) -> SquareFreeMonomialIdeal {
    let vars = (0..mg.c())
        .flat_map(|i| [mg.x_label(i).to_string(), mg.y_label(i).to_string()])
        .collect();
    SquareFreeMonomialIdeal::new(
        vars,
        mg.edges()
            .map(|(i, j)| 1u64 << (2 * i) | 1u64 << (2 * j + 1)),
    )
}

/// Left vertices first, then right vertices.
pub fn edge_ideal_of_graph(g: &BipartiteGraph) -> SquareFreeMonomialIdeal {
    let l = g.left_count();
    let vars = g
        .left_labels()
        .iter()
        .chain(g.right_labels())
        .cloned()
        .collect();
    SquareFreeMonomialIdeal::new(vars, g.edges().map(|(a, b)| 1u64 << a | 1u64 << (l + b)))
}

/// The intersection of the primes generated by the supports of the
/// generators, i.e. the minimal transversals, built incrementally.
pub fn alexander_dual(ideal: &SquareFreeMonomialIdeal) -> Result<SquareFreeMonomialIdeal> {
    let mut transversals: Vec<u64> = vec![0];
    for &g in ideal.gens() {
        let mut next = Vec::new();
        for &t in &transversals {
            if t & g != 0 {
                next.push(t);
            } else {
                let mut bits = g;
                while bits != 0 {
                    let v = bits & bits.wrapping_neg();
                    next.push(t | v);
                    bits &= bits - 1;
                }
            }
        }
        transversals = minimalize(next);
        if transversals.len() > DUAL_GENERATOR_CAP {
            return Err(Error::TooLarge {
                what: "Alexander dual generators",
                size: transversals.len(),
                cap: DUAL_GENERATOR_CAP,
            });
        }
    }
    Ok(SquareFreeMonomialIdeal {
        vars: ideal.vars.clone(),
        gens: transversals,
    })
}
