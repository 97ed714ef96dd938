//! Multigraded Betti numbers of square-free monomial quotients via
//! Hochster's formula, with exact ranks over the rationals or a prime field.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::monomial::{alexander_dual, edge_ideal, full_mask, SquareFreeMonomialIdeal};
use crate::error::{violation, Error, Result};
use crate::matching::{
    antichains, classify_matched, Classification, MatchedBipartiteGraph, ANTICHAIN_ENUMERATION_CAP,
};

/// Hard cap on variables for a full Betti table.
pub const BETTI_VARIABLE_CAP: usize = 16;
/// Cap for computations that only walk the faces of one complex.
pub const FACE_WALK_VARIABLE_CAP: usize = 24;
pub const DEFAULT_PRIME: u64 = 32003;

/// Coefficient field for homology and Gröbner computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rationals,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    /// `q` for the rationals, `p:<prime>` for a prime field.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let p: u64 = s
            .strip_prefix("p:")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}, expected q or p:<prime>")))?;
        if !is_odd_prime(p) || p > u32::MAX as u64 {
            return Err(Error::Parse(format!("{p} is not an odd prime below 2^32")));
        }
        Ok(Field::Prime(p))
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    p > 2
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| p % d != 0)
}

type SparseRow = Vec<(usize, i64)>;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rank_mod_p(rows: &[SparseRow], ncols: usize, p: u64) -> usize {
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut r: Vec<(usize, u64)> = row
            .iter()
            .map(|&(c, v)| (c, v.rem_euclid(p as i64) as u64))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some(&(lead, v)) = r.first() {
            match &pivots[lead] {
                Some(piv) => {
                    // r -= v * piv, piv is monic
                    let mut out = Vec::with_capacity(r.len() + piv.len());
                    let (mut a, mut b) = (0, 0);
                    while a < r.len() || b < piv.len() {
                        let ca = r.get(a).map_or(usize::MAX, |e| e.0);
                        let cb = piv.get(b).map_or(usize::MAX, |e| e.0);
                        if ca < cb {
                            out.push(r[a]);
                            a += 1;
                        } else if cb < ca {
                            out.push((cb, (p - v * piv[b].1 % p) % p));
                            b += 1;
                        } else {
                            let x = (r[a].1 + p - v * piv[b].1 % p) % p;
                            if x != 0 {
                                out.push((ca, x));
                            }
                            a += 1;
                            b += 1;
                        }
                    }
                    r = out;
                }
                None => {
                    let inv = pow_mod(v, p - 2, p);
                    pivots[lead] = Some(r.iter().map(|&(c, x)| (c, x * inv % p)).collect());
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn gcd_row(r: &mut [(usize, i128)]) {
    let g = r.iter().fold(0i128, |g, e| g.gcd(&e.1));
    let g = if r.first().is_some_and(|e| e.1 < 0) {
        -g
    } else {
        g
    };
    if g != 0 && g != 1 {
        for e in r.iter_mut() {
            e.1 /= g;
        }
    }
}

/// Integer elimination with content removal; `None` on overflow.
fn rank_i128(rows: &[SparseRow], ncols: usize) -> Option<usize> {
    let mut pivots: Vec<Option<Vec<(usize, i128)>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut r: Vec<(usize, i128)> = row
            .iter()
            .filter(|e| e.1 != 0)
            .map(|&(c, v)| (c, v as i128))
            .collect();
        gcd_row(&mut r);
        while let Some(&(lead, v)) = r.first() {
            match &pivots[lead] {
                Some(piv) => {
                    let a = piv[0].1;
                    let mut out = Vec::with_capacity(r.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    while i < r.len() || j < piv.len() {
                        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
                        let cj = piv.get(j).map_or(usize::MAX, |e| e.0);
                        let x = if ci < cj {
                            i += 1;
                            (ci, a.checked_mul(r[i - 1].1)?)
                        } else if cj < ci {
                            j += 1;
                            (cj, v.checked_mul(piv[j - 1].1)?.checked_neg()?)
                        } else {
                            i += 1;
                            j += 1;
                            (
                                ci,
                                a.checked_mul(r[i - 1].1)?
                                    .checked_sub(v.checked_mul(piv[j - 1].1)?)?,
                            )
                        };
                        if x.1 != 0 {
                            out.push(x);
                        }
                    }
                    gcd_row(&mut out);
                    r = out;
                }
                None => {
                    pivots[lead] = Some(r);
                    rank += 1;
                    break;
                }
            }
        }
    }
    Some(rank)
}

fn rank_big_rational(rows: &[SparseRow], ncols: usize) -> usize {
    let mut pivots: Vec<Option<Vec<(usize, BigRational)>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut r: Vec<(usize, BigRational)> = row
            .iter()
            .filter(|e| e.1 != 0)
            .map(|&(c, v)| (c, BigRational::from_integer(BigInt::from(v))))
            .collect();
        while let Some((lead, v)) = r.first().cloned() {
            match &pivots[lead] {
                Some(piv) => {
                    let mut acc: BTreeMap<usize, BigRational> = r.into_iter().collect();
                    for (c, x) in piv {
                        let e = acc.entry(*c).or_insert_with(BigRational::zero);
                        *e -= &v * x;
                    }
                    r = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                }
                None => {
                    let inv = v.recip();
                    pivots[lead] = Some(r.iter().map(|(c, x)| (*c, x * &inv)).collect());
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn rank(rows: &[SparseRow], ncols: usize, field: Field) -> usize {
    match field {
        Field::Prime(p) => rank_mod_p(rows, ncols, p),
        Field::Rationals => {
            rank_i128(rows, ncols).unwrap_or_else(|| rank_big_rational(rows, ncols))
        }
    }
}

/// Faces of the complex on `vertices` whose non-faces are generated by
/// `gens`, grouped by size (index 0 holds the empty face). `None` if the
/// complex is void, i.e. the ideal is the unit ideal on these vertices.
pub fn faces(vertices: u64, gens: &[u64]) -> Option<Vec<Vec<u64>>> {
    let relevant: Vec<u64> = gens
        .iter()
        .copied()
        .filter(|&g| g & !vertices == 0)
        .collect();
    if relevant.contains(&0) {
        return None;
    }
    let verts: Vec<u64> = (0..64)
        .filter(|&v| vertices >> v & 1 == 1)
        .map(|v| 1u64 << v)
        .collect();
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); verts.len() + 1];
    let mut stack = vec![(0u64, 0usize)];
    while let Some((face, from)) = stack.pop() {
        by_size[face.count_ones() as usize].push(face);
        for (k, &v) in verts.iter().enumerate().skip(from) {
            let f = face | v;
            if !relevant.iter().any(|&g| g & !f == 0) {
                stack.push((f, k + 1));
            }
        }
    }
    while by_size.len() > 1 && by_size.last().is_some_and(Vec::is_empty) {
        by_size.pop();
    }
    for level in &mut by_size {
        level.sort_unstable();
    }
    Some(by_size)
}

/// Reduced homology dimensions; entry `k + 1` is `dim H~_k` for `k >= -1`.
/// Empty for the void complex.
pub fn reduced_homology(vertices: u64, gens: &[u64], field: Field) -> Vec<usize> {
    let Some(levels) = faces(vertices, gens) else {
        return Vec::new();
    };
    // ranks[s] = rank of the boundary from faces of size s to size s - 1
    let mut ranks = vec![0; levels.len() + 1];
    for s in 1..levels.len() {
        let index: HashMap<u64, usize> = levels[s - 1]
            .iter()
            .enumerate()
            .map(|(k, &f)| (f, k))
            .collect();
        let rows: Vec<SparseRow> = levels[s]
            .iter()
            .map(|&f| {
                let mut row: SparseRow = Vec::with_capacity(s);
                let mut bits = f;
                let mut pos = 0;
                while bits != 0 {
                    let v = bits & bits.wrapping_neg();
                    row.push((index[&(f & !v)], if pos % 2 == 0 { 1 } else { -1 }));
                    bits &= bits - 1;
                    pos += 1;
                }
                row.sort_unstable();
                row
            })
            .collect();
        ranks[s] = rank(&rows, levels[s - 1].len(), field);
    }
    let h: Vec<usize> = (0..levels.len())
        .map(|s| levels[s].len() - ranks[s] - ranks[s + 1])
        .collect();
    debug_assert_eq!(euler_characteristic(&levels), reduced_euler(&h));
    h
}

/// Reduced Euler characteristic from face counts (empty face included).
pub fn euler_characteristic(levels: &[Vec<u64>]) -> i64 {
    levels
        .iter()
        .enumerate()
        .map(|(s, l)| {
            if s % 2 == 1 {
                l.len() as i64
            } else {
                -(l.len() as i64)
            }
        })
        .sum()
}

/// The same quantity from reduced homology.
pub fn reduced_euler(h: &[usize]) -> i64 {
    h.iter()
        .enumerate()
        .map(|(s, &d)| if s % 2 == 1 { d as i64 } else { -(d as i64) })
        .sum()
}

/// `beta_{l,sigma}(R/I)` for one multidegree.
pub fn betti_at(ideal: &SquareFreeMonomialIdeal, l: usize, sigma: u64, field: Field) -> usize {
    let size = sigma.count_ones() as usize;
    if l > size {
        return 0;
    }
    let h = reduced_homology(sigma, ideal.gens(), field);
    // H~_{|sigma| - l - 1} sits at index |sigma| - l
    h.get(size - l).copied().unwrap_or(0)
}

/// Multigraded Betti numbers of `R/I`, keyed by `(l, sigma)`; zeros omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub field: Field,
    vars: Vec<String>,
    entries: BTreeMap<(usize, u64), usize>,
}

impl BettiTable {
    pub fn get(&self, l: usize, sigma: u64) -> usize {
        self.entries.get(&(l, sigma)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u64, usize)> + '_ {
        self.entries.iter().map(|(&(l, s), &v)| (l, s, v))
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// `(l, j) -> beta_{l,j}`.
    pub fn graded(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (l, s, v) in self.entries() {
            *out.entry((l, s.count_ones() as usize)).or_insert(0) += v;
        }
        out
    }

    /// `None` when the quotient is zero.
    pub fn projdim(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn regularity(&self) -> Option<usize> {
        self.entries()
            .map(|(l, s, _)| s.count_ones() as usize - l)
            .max()
    }
}

#[derive(Serialize)]
struct BettiEntry {
    l: usize,
    sigma: Vec<String>,
    value: usize,
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<BettiEntry> = self
            .entries()
            .map(|(l, sigma, value)| BettiEntry {
                l,
                sigma: (0..self.vars.len())
                    .filter(|&v| sigma >> v & 1 == 1)
                    .map(|v| self.vars[v].clone())
                    .collect(),
                value,
            })
            .collect();
        rows.serialize(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BettiOptions {
    pub field: Field,
    pub max_vars: usize,
    /// Skip multidegrees that are not unions of generators (cones).
    pub prune_cones: bool,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions {
            field: Field::Rationals,
            max_vars: BETTI_VARIABLE_CAP,
            prune_cones: true,
        }
    }
}

fn check_vars(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooLarge {
            what: "variables for Hochster's formula",
            size: n,
            cap,
        });
    }
    Ok(())
}

pub fn betti_table(ideal: &SquareFreeMonomialIdeal, field: Field) -> Result<BettiTable> {
    betti_table_with(
        ideal,
        BettiOptions {
            field,
            ..BettiOptions::default()
        },
    )
}

pub fn betti_table_with(ideal: &SquareFreeMonomialIdeal, opts: BettiOptions) -> Result<BettiTable> {
    let n = ideal.var_count();
    check_vars(n, opts.max_vars.min(BETTI_VARIABLE_CAP))?;
    let gens = ideal.gens();
    let entries: BTreeMap<(usize, u64), usize> = (0..1u64 << n)
        .into_par_iter()
        .filter(|&sigma| {
            !opts.prune_cones
                || gens
                    .iter()
                    .filter(|&&g| g & !sigma == 0)
                    .fold(0, |acc, &g| acc | g)
                    == sigma
        })
        .flat_map_iter(|sigma| {
            let size = sigma.count_ones() as usize;
            reduced_homology(sigma, gens, opts.field)
                .into_iter()
                .enumerate()
                .filter(|&(_, d)| d != 0)
                .map(move |(idx, d)| ((size - idx, sigma), d))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(BettiTable {
        field: opts.field,
        vars: ideal.vars().to_vec(),
        entries,
    })
}

/// `beta_{l,sigma}(I*)` read off links: `H~_{l-1}(lk(complement of sigma))`.
pub fn dual_betti_via_links(
    ideal: &SquareFreeMonomialIdeal,
    field: Field,
) -> Result<BTreeMap<(usize, u64), usize>> {
    let n = ideal.var_count();
    check_vars(n, FACE_WALK_VARIABLE_CAP)?;
    let full = full_mask(n);
    let Some(levels) = faces(full, ideal.gens()) else {
        return Ok(BTreeMap::new());
    };
    let all: Vec<u64> = levels.into_iter().flatten().collect();
    let colon_gens = |f: u64| ideal.colon(f).gens().to_vec();
    Ok(all
        .into_par_iter()
        .flat_map_iter(|f| {
            let sigma = full & !f;
            reduced_homology(sigma, &colon_gens(f), field)
                .into_iter()
                .enumerate()
                .filter(|&(_, d)| d != 0)
                .map(move |(idx, d)| ((idx, sigma), d))
                .collect::<Vec<_>>()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleInvariants {
    pub regularity: usize,
    pub projdim: usize,
    pub depth: usize,
}

pub fn oracle_invariants(
    ideal: &SquareFreeMonomialIdeal,
    field: Field,
) -> Result<OracleInvariants> {
    invariants_from_table(&betti_table(ideal, field)?)
}

pub fn invariants_from_table(t: &BettiTable) -> Result<OracleInvariants> {
    let (Some(projdim), Some(regularity)) = (t.projdim(), t.regularity()) else {
        return Err(violation("quotient by the unit ideal has no Betti numbers"));
    };
    Ok(OracleInvariants {
        regularity,
        projdim,
        depth: t.var_count() - projdim,
    })
}

/// `projdim R/I = reg I*`, with `reg I* = reg R/I* + 1`. The zero and unit
/// ideals satisfy it trivially.
pub fn terai_check(ideal: &SquareFreeMonomialIdeal, field: Field) -> Result<bool> {
    if ideal.is_zero() || ideal.is_unit() {
        return Ok(true);
    }
    let dual = alexander_dual(ideal)?;
    let lhs = betti_table(ideal, field)?.projdim();
    let rhs = betti_table(&dual, field)?.regularity().map(|r| r + 1);
    Ok(lhs.is_some() && lhs == rhs)
}

/// For all `l, sigma`: `beta_{l,sigma}(I*) = beta_{|sigma|-l,sigma}(R/(I : complement))`.
/// The left side comes from a direct table of `R/I*`, the right from colon complexes.
pub fn dual_betti_relation_check(ideal: &SquareFreeMonomialIdeal, field: Field) -> Result<bool> {
    let n = ideal.var_count();
    check_vars(n, BETTI_VARIABLE_CAP)?;
    let full = full_mask(n);
    let dual = alexander_dual(ideal)?;
    let direct = betti_table(&dual, field)?;
    let ok = (0..1u64 << n).into_par_iter().all(|sigma| {
        let size = sigma.count_ones() as usize;
        let colon = ideal.colon(full & !sigma);
        (0..=size).all(|l| {
            // betti numbers of the ideal I* sit one step below those of R/I*
            let lhs = if sigma == 0 && l == 0 {
                usize::from(dual.is_unit())
            } else {
                direct.get(l + 1, sigma)
            };
            lhs == betti_at(&colon, size - l, sigma, field)
        })
    });
    Ok(ok)
}

/// The multidegrees `(|B|, sigma_{A,B})` over antichains `B ⊆ A` of the digraph.
pub fn dual_shape_multidegrees(mg: &MatchedBipartiteGraph) -> Result<BTreeSet<(usize, u64)>> {
    let d = mg.digraph();
    let reach = d.reachability();
    let c = mg.c();
    let mut out = BTreeSet::new();
    for a in antichains(&d, ANTICHAIN_ENUMERATION_CAP)? {
        let up: Vec<bool> = (0..c)
            .map(|i| a.iter().any(|&m| m == i || reach[m][i]))
            .collect();
        let base: u64 = (0..c)
            .map(|i| {
                if up[i] {
                    1u64 << (2 * i + 1)
                } else {
                    1u64 << (2 * i)
                }
            })
            .fold(0, |x, y| x | y);
        for bits in 0u64..1 << a.len() {
            let b: Vec<usize> = (0..a.len())
                .filter(|&k| bits >> k & 1 == 1)
                .map(|k| a[k])
                .collect();
            let sigma = b.iter().fold(base, |s, &i| s | 1u64 << (2 * i));
            out.insert((b.len(), sigma));
        }
    }
    Ok(out)
}

/// Every nonzero `beta_{l,sigma}(I*)` is 1 and sits at some `sigma_{A,B}` with `|B| = l`.
pub fn dual_shape_check(mg: &MatchedBipartiteGraph, field: Field) -> Result<bool> {
    if classify_matched(mg) != Classification::CohenMacaulay {
        return Err(Error::NotCohenMacaulay);
    }
    let expected = dual_shape_multidegrees(mg)?;
    let got = dual_betti_via_links(&edge_ideal(mg), field)?;
    Ok(got.iter().all(|(k, &v)| v == 1 && expected.contains(k)))
}
