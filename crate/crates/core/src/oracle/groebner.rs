//! Buchberger's algorithm with the normal selection strategy and the
//! product and chain criteria, plus radical membership via an auxiliary
//! variable.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use super::poly::{Coefficients, Monomial, Polynomial, MAX_VARS};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(300);

#[derive(Debug, Clone, Copy)]
pub struct GroebnerOptions {
    pub budget: Option<Duration>,
    /// Return `{1}` as soon as a nonzero constant shows up.
    pub stop_on_unit: bool,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions {
            budget: Some(DEFAULT_BUDGET),
            stop_on_unit: true,
        }
    }
}

/// A reduced Gröbner basis, sorted by increasing leading monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis<E> {
    pub polys: Vec<Polynomial<E>>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> GroebnerBasis<E> {
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(Polynomial::is_unit)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .filter_map(|p| p.leading_monomial().copied())
            .collect()
    }

    pub fn reduce<F: Coefficients<Elem = E>>(&self, f: &F, p: &Polynomial<E>) -> Polynomial<E> {
        let refs: Vec<&Polynomial<E>> = self.polys.iter().collect();
        normal_form(f, p, &refs, None).expect("no deadline")
    }

    pub fn contains<F: Coefficients<Elem = E>>(&self, f: &F, p: &Polynomial<E>) -> bool {
        self.reduce(f, p).is_zero()
    }
}

struct Clock {
    start: Instant,
    budget: Option<Duration>,
}

impl Clock {
    fn check(&self) -> Result<()> {
        match self.budget {
            Some(b) if self.start.elapsed() > b => Err(Error::Timeout {
                budget_millis: b.as_millis() as u64,
            }),
            _ => Ok(()),
        }
    }
}

/// Full reduction of `p` by monic `basis`.
fn normal_form<F: Coefficients>(
    f: &F,
    p: &Polynomial<F::Elem>,
    basis: &[&Polynomial<F::Elem>],
    clock: Option<&Clock>,
) -> Result<Polynomial<F::Elem>> {
    let mut rest = p.clone();
    let mut done: Vec<(Monomial, F::Elem)> = Vec::new();
    let mut steps = 0u64;
    while let Some((m, c)) = rest.terms().first().cloned() {
        steps += 1;
        if steps % 256 == 0 {
            if let Some(clock) = clock {
                clock.check()?;
            }
        }
        match basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)))
        {
            Some(g) => {
                let lm = g.leading_monomial().expect("nonzero");
                rest = rest.sub_scaled(f, &c, &lm.quotient_of(&m), g);
            }
            None => {
                done.push((m, c));
                rest.pop_lead();
            }
        }
    }
    Ok(Polynomial::from_terms(f, done))
}

fn s_polynomial<F: Coefficients>(
    f: &F,
    a: &Polynomial<F::Elem>,
    b: &Polynomial<F::Elem>,
) -> Polynomial<F::Elem> {
    let (la, lb) = (
        a.leading_monomial().expect("nonzero"),
        b.leading_monomial().expect("nonzero"),
    );
    let l = la.lcm(lb);
    a.mul_term(f, &f.one(), &la.quotient_of(&l))
        .sub_scaled(f, &f.one(), &lb.quotient_of(&l), b)
}

/// Reduced Gröbner basis of the ideal generated by `gens` (monic inputs not required).
pub fn buchberger<F: Coefficients>(
    f: &F,
    gens: &[Polynomial<F::Elem>],
    opts: GroebnerOptions,
) -> Result<GroebnerBasis<F::Elem>> {
    let clock = Clock {
        start: Instant::now(),
        budget: opts.budget,
    };
    let unit = || GroebnerBasis {
        polys: vec![Polynomial::constant(f, f.one())],
    };
    let mut basis: Vec<Polynomial<F::Elem>> = Vec::new();
    // pending pairs keyed by (lcm, j, i) so the smallest lcm comes first
    let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |basis: &mut Vec<Polynomial<F::Elem>>,
               queue: &mut BTreeSet<(Monomial, usize, usize)>,
               pending: &mut HashSet<(usize, usize)>,
               h: Polynomial<F::Elem>| {
        let t = basis.len();
        let lt = *h.leading_monomial().expect("nonzero");
        for (i, g) in basis.iter().enumerate() {
            let l = g.leading_monomial().expect("nonzero").lcm(&lt);
            queue.insert((l, t, i));
            pending.insert((i, t));
        }
        basis.push(h);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let h = g.monic(f);
        if h.is_unit() && opts.stop_on_unit {
            return Ok(unit());
        }
        add(&mut basis, &mut queue, &mut pending, h);
    }

    while let Some((l, j, i)) = queue.pop_first() {
        clock.check()?;
        pending.remove(&(i, j));
        let (li, lj) = (
            *basis[i].leading_monomial().expect("nonzero"),
            *basis[j].leading_monomial().expect("nonzero"),
        );
        if li.is_coprime(&lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().is_some_and(|lk| lk.divides(&l))
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(f, &basis[i], &basis[j]);
        let refs: Vec<&Polynomial<F::Elem>> = basis.iter().collect();
        let r = normal_form(f, &s, &refs, Some(&clock))?;
        if r.is_zero() {
            continue;
        }
        let r = r.monic(f);
        if r.is_unit() && opts.stop_on_unit {
            return Ok(unit());
        }
        add(&mut basis, &mut queue, &mut pending, r);
    }

    // minimize, then reduce tails
    let mut keep: Vec<Polynomial<F::Elem>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.leading_monomial().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            let lh = h.leading_monomial().expect("nonzero");
            m != k && lh.divides(lg) && (lh != lg || m < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<&Polynomial<F::Elem>> = keep
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, p)| p)
            .collect();
        let lead = Polynomial::from_terms(f, keep[k].terms()[..1].iter().cloned());
        let tail = Polynomial::from_terms(f, keep[k].terms()[1..].iter().cloned());
        let tail = normal_form(f, &tail, &others, Some(&clock))?;
        reduced.push(lead.add(f, &tail).monic(f));
    }
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    Ok(GroebnerBasis { polys: reduced })
}

/// `p` lies in the radical of `(gens)` iff `1 ∈ (gens, 1 - z*p)`, where `z`
/// is a fresh variable placed after every variable in use.
pub fn radical_membership<F: Coefficients>(
    f: &F,
    p: &Polynomial<F::Elem>,
    gens: &[Polynomial<F::Elem>],
    opts: GroebnerOptions,
) -> Result<bool> {
    let z = gens
        .iter()
        .map(Polynomial::var_span)
        .chain([p.var_span()])
        .max()
        .unwrap_or(0);
    if z >= MAX_VARS {
        return Err(Error::TooLarge {
            what: "variables for radical membership",
            size: z + 1,
            cap: MAX_VARS,
        });
    }
    let zp = p.mul_term(f, &f.one(), &Monomial::var(z));
    let aux = Polynomial::constant(f, f.one()).sub_scaled(f, &f.one(), &Monomial::one(), &zp);
    let mut all = gens.to_vec();
    all.push(aux);
    let gb = buchberger(
        f,
        &all,
        GroebnerOptions {
            stop_on_unit: true,
            ..opts
        },
    )?;
    Ok(gb.is_unit())
}
