//! Checks that a generator set defines the edge ideal up to radical.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::groebner::{radical_membership, GroebnerOptions, DEFAULT_BUDGET};
use super::homology::{Field, DEFAULT_PRIME};
use super::poly::{Coefficients, Fp, Monomial, Polynomial, Qq, MAX_VARS};
use crate::error::{Error, Result};
use crate::matching::MatchedBipartiteGraph;
use crate::stci::{GeneratorSet, QuadraticForm};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub field: Field,
    /// Budget for each membership test.
    pub budget: Duration,
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            field: Field::Prime(DEFAULT_PRIME),
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    Member,
    NotMember,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub edge: String,
    pub status: MembershipStatus,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub field: Field,
    pub generator_count: usize,
    /// Every generator term is an edge monomial.
    pub containment: bool,
    pub checks: Vec<EdgeCheck>,
    pub total_millis: u64,
    pub verified: bool,
}

impl VerificationReport {
    pub fn unverified(&self) -> impl Iterator<Item = &EdgeCheck> {
        self.checks
            .iter()
            .filter(|c| c.status != MembershipStatus::Member)
    }
}

fn edge_monomial(i: usize, j: usize) -> Monomial {
    Monomial::from_exponents(&[(2 * i, 1), (2 * j + 1, 1)])
}

/// Variables `x1, y1, x2, y2, ...` as indices `0, 1, 2, 3, ...`.
pub fn form_to_polynomial<F: Coefficients>(f: &F, q: &QuadraticForm) -> Polynomial<F::Elem> {
    Polynomial::from_terms(
        f,
        q.terms.iter().map(|&(i, j)| (edge_monomial(i, j), f.one())),
    )
}

fn run<F: Coefficients>(
    f: &F,
    mg: &MatchedBipartiteGraph,
    forms: &[QuadraticForm],
    opts: VerifyOptions,
) -> Vec<EdgeCheck> {
    let gens: Vec<Polynomial<F::Elem>> = forms.iter().map(|q| form_to_polynomial(f, q)).collect();
    let gopts = GroebnerOptions {
        budget: Some(opts.budget),
        stop_on_unit: true,
    };
    let check = |&(i, j): &(usize, usize)| {
        let start = Instant::now();
        let p = Polynomial::from_terms(f, [(edge_monomial(i, j), f.one())]);
        let status = match radical_membership(f, &p, &gens, gopts) {
            Ok(true) => MembershipStatus::Member,
            Ok(false) => MembershipStatus::NotMember,
            Err(_) => MembershipStatus::Timeout,
        };
        EdgeCheck {
            edge: format!("{}*{}", mg.x_label(i), mg.y_label(j)),
            status,
            millis: start.elapsed().as_millis() as u64,
        }
    };
    let edges: Vec<(usize, usize)> = mg.edges().collect();
    if opts.parallel {
        edges.par_iter().map(check).collect()
    } else {
        edges.iter().map(check).collect()
    }
}

/// Check that the generators only use edge monomials and that every edge
/// monomial lies in the radical of the ideal they generate.
pub fn verify_forms(
    mg: &MatchedBipartiteGraph,
    forms: &[QuadraticForm],
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    let vars = 2 * mg.c() + 1;
    if vars > MAX_VARS {
        return Err(Error::TooLarge {
            what: "variables for radical verification",
            size: vars,
            cap: MAX_VARS,
        });
    }
    let start = Instant::now();
    let containment = forms
        .iter()
        .all(|q| q.terms.iter().all(|&(i, j)| mg.has_edge(i, j)));
    let checks = match opts.field {
        Field::Rationals => run(&Qq, mg, forms, opts),
        Field::Prime(p) => run(&Fp::new(p), mg, forms, opts),
    };
    let verified = containment && checks.iter().all(|c| c.status == MembershipStatus::Member);
    Ok(VerificationReport {
        field: opts.field,
        generator_count: forms.len(),
        containment,
        checks,
        total_millis: start.elapsed().as_millis() as u64,
        verified,
    })
}

pub fn verify_arank_generators(
    gs: &GeneratorSet,
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    let forms: Vec<QuadraticForm> = gs.all().cloned().collect();
    verify_forms(&gs.graph, &forms, opts)
}
