//! Batch cross-checks of the closed formulas against the brute-force
//! oracles, over an exhaustive or a seeded random family of instances.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{enumerate_unmixed, random_2d_poset, random_unmixed, ENUMERATION_CAP};
use crate::graph::{max_pairwise_disconnected, minimal_vertex_covers, DEFAULT_ENUMERATION_CAP};
use crate::invariants::invariants_report_matched;
use crate::matching::{associated_primes, classify_matched, Classification, MatchedBipartiteGraph};
use crate::oracle::homology::{
    betti_table_with, dual_betti_relation_check, dual_shape_check, invariants_from_table,
    terai_check, BettiOptions, Field,
};
use crate::oracle::monomial::{edge_ideal, SquareFreeMonomialIdeal};
use crate::oracle::verify::{verify_arank_generators, MembershipStatus, VerifyOptions};
use crate::stci::{
    arank_generators_matched, build_gamma_graph, is_compatible_pair, linearization_pair, GammaGraph,
};

pub const FORMULAS: &str = "formulas_vs_oracle";
pub const TERAI: &str = "terai";
pub const DUAL_RELATION: &str = "dual_betti_relation";
pub const DUAL_SHAPE: &str = "dual_shape";
pub const GRID: &str = "grid_structure";
pub const COMPLETE_INTERSECTION: &str = "complete_intersection";
pub const DEPTH_BOUND: &str = "depth_bound";
pub const PRIMES: &str = "primes_vs_covers";
pub const DISCONNECTED: &str = "pairwise_disconnected";
pub const ARANK: &str = "arank_count";
pub const RADICAL: &str = "radical_verification";

const CHECK_ORDER: [&str; 11] = [
    FORMULAS,
    TERAI,
    DUAL_RELATION,
    DUAL_SHAPE,
    GRID,
    COMPLETE_INTERSECTION,
    DEPTH_BOUND,
    PRIMES,
    DISCONNECTED,
    ARANK,
    RADICAL,
];

/// The colon-complex comparison walks all `2^n` multidegrees.
pub const DUAL_RELATION_VARIABLE_CAP: usize = 10;
const PAIRWISE_EDGE_CAP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    /// Every unmixed instance with `c <= max_c`.
    Exhaustive,
    /// Seeded random unmixed instances, 2-dimensional posets and
    /// square-free ideals.
    Random,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub kind: SuiteKind,
    pub max_c: usize,
    pub random_count: usize,
    pub seed: u64,
    pub field: Field,
    pub max_oracle_vars: usize,
    /// Run radical membership for the generators of each instance.
    pub verify: bool,
    pub verify_opts: VerifyOptions,
    /// Drop one edge from every grid graph before checking it.
    pub mutate: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            kind: SuiteKind::Exhaustive,
            max_c: 3,
            random_count: 50,
            seed: 0,
            field: Field::Rationals,
            max_oracle_vars: 14,
            verify: false,
            verify_opts: VerifyOptions::default(),
            mutate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub skipped: usize,
    pub timeouts: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.timeouts == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub instances: usize,
    pub outcomes: Vec<CheckOutcome>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.failures.len()).sum()
    }

    pub fn timeouts(&self) -> usize {
        self.outcomes.iter().map(|o| o.timeouts).sum()
    }
}

enum Verdict {
    Pass,
    Fail(String),
    Skip,
    Timeout(String),
}

type Findings = Vec<(&'static str, Verdict)>;

fn verdict(ok: bool, msg: impl FnOnce() -> String) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail(msg())
    }
}

fn from_result(r: Result<Verdict>) -> Verdict {
    match r {
        Ok(v) => v,
        Err(Error::TooLarge { .. }) => Verdict::Skip,
        Err(Error::Timeout { budget_millis }) => {
            Verdict::Timeout(format!("budget {budget_millis} ms"))
        }
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn check_grid(gg: &GammaGraph, mutate: bool) -> Verdict {
    if mutate {
        if gg.edges().is_empty() {
            return Verdict::Skip;
        }
        return from_result(gg.drop_edge(0).check_invariants().map(|_| Verdict::Pass));
    }
    from_result(gg.check_invariants().map(|_| Verdict::Pass))
}

fn instance_checks(mg: &MatchedBipartiteGraph, opts: &SuiteOptions) -> Findings {
    let mut out: Findings = Vec::new();
    let c = mg.c();
    let class = classify_matched(mg);
    let report = match invariants_report_matched(mg, PAIRWISE_EDGE_CAP) {
        Ok(r) => r,
        Err(e) => {
            out.push((FORMULAS, Verdict::Fail(e.to_string())));
            return out;
        }
    };

    let ideal = edge_ideal(mg);
    let oracle_vars = opts
        .max_oracle_vars
        .min(crate::oracle::homology::BETTI_VARIABLE_CAP);
    if 2 * c <= oracle_vars {
        let bopts = BettiOptions {
            field: opts.field,
            max_vars: oracle_vars,
            prune_cones: true,
        };
        out.push((
            FORMULAS,
            from_result(
                betti_table_with(&ideal, bopts)
                    .and_then(|t| invariants_from_table(&t))
                    .map(|inv| {
                        let formula = (report.regularity, report.depth, report.projdim);
                        let oracle = (inv.regularity, inv.depth, inv.projdim);
                        verdict(formula == oracle, || {
                            format!("(reg, depth, projdim) formula {formula:?}, oracle {oracle:?}")
                        })
                    }),
            ),
        ));
        out.push((
            TERAI,
            from_result(
                terai_check(&ideal, opts.field)
                    .map(|ok| verdict(ok, || "projdim and dual regularity differ".into())),
            ),
        ));
    } else {
        out.push((FORMULAS, Verdict::Skip));
        out.push((TERAI, Verdict::Skip));
    }
    if 2 * c <= DUAL_RELATION_VARIABLE_CAP.min(oracle_vars) {
        out.push((
            DUAL_RELATION,
            from_result(
                dual_betti_relation_check(&ideal, opts.field)
                    .map(|ok| verdict(ok, || "dual Betti relation fails".into())),
            ),
        ));
    } else {
        out.push((DUAL_RELATION, Verdict::Skip));
    }
    if class == Classification::CohenMacaulay && 2 * c <= oracle_vars {
        out.push((
            DUAL_SHAPE,
            from_result(dual_shape_check(mg, opts.field).map(|ok| {
                verdict(ok, || {
                    "dual Betti numbers off the expected multidegrees".into()
                })
            })),
        ));
    }
    if class == Classification::CohenMacaulay {
        let isolated = mg.edges().all(|(i, j)| i == j);
        out.push((
            COMPLETE_INTERSECTION,
            verdict((report.regularity == c) == isolated, || {
                format!(
                    "regularity {} with c = {c}, isolated edges only: {isolated}",
                    report.regularity
                )
            }),
        ));
    }
    out.push((
        DEPTH_BOUND,
        verdict(report.depth >= report.scc_count, || {
            format!(
                "depth {} below {} strong components",
                report.depth, report.scc_count
            )
        }),
    ));

    let g = mg.to_bipartite_graph();
    out.push((
        PRIMES,
        from_result(
            minimal_vertex_covers(&g, DEFAULT_ENUMERATION_CAP).and_then(|covers| {
                let covers: BTreeSet<_> = covers.covers.iter().map(|c| c.labels(&g)).collect();
                let primes: BTreeSet<_> = associated_primes(mg)?
                    .iter()
                    .map(|p| p.labels(mg))
                    .collect();
                Ok(verdict(covers == primes, || {
                    format!("{} primes but {} covers", primes.len(), covers.len())
                }))
            }),
        ),
    ));
    out.push((
        DISCONNECTED,
        from_result(max_pairwise_disconnected(&g, PAIRWISE_EDGE_CAP).map(|r| {
            verdict(r.size() == report.regularity, || {
                format!("r(I) = {} but regularity {}", r.size(), report.regularity)
            })
        })),
    ));

    match arank_generators_matched(mg, None) {
        Ok(gs) => {
            let compatible = is_compatible_pair(&gs.breve.digraph, &gs.linearizations);
            out.push((
                GRID,
                if compatible {
                    check_grid(&gs.gamma_graph, opts.mutate)
                } else {
                    Verdict::Fail("linearizations are not compatible".into())
                },
            ));
            let mut terms: Vec<(usize, usize)> =
                gs.all().flat_map(|f| f.terms.iter().copied()).collect();
            terms.sort_unstable();
            let edges: Vec<(usize, usize)> = mg.edges().collect();
            out.push((
                ARANK,
                verdict(gs.total_count() == report.projdim && terms == edges, || {
                    format!(
                        "{} generators for projdim {}",
                        gs.total_count(),
                        report.projdim
                    )
                }),
            ));
            if opts.verify {
                let vopts = VerifyOptions {
                    parallel: false,
                    ..opts.verify_opts
                };
                out.push((
                    RADICAL,
                    from_result(verify_arank_generators(&gs, vopts).map(|r| {
                        if r.checks
                            .iter()
                            .any(|c| c.status == MembershipStatus::Timeout)
                        {
                            Verdict::Timeout(format!(
                                "{} memberships timed out",
                                r.unverified().count()
                            ))
                        } else {
                            verdict(r.verified, || {
                                let bad: Vec<&str> =
                                    r.unverified().map(|c| c.edge.as_str()).collect();
                                format!("not in the radical: {}", bad.join(", "))
                            })
                        }
                    })),
                ));
            }
        }
        Err(Error::NotTwoDimensional(_)) => {
            out.push((GRID, Verdict::Skip));
            out.push((ARANK, Verdict::Skip));
        }
        Err(e) => out.push((ARANK, Verdict::Fail(e.to_string()))),
    }
    out
}

fn poset_checks(n: usize, seed: u64, mutate: bool) -> Findings {
    let (p, phi) = random_2d_poset(n, seed);
    let v = from_result(linearization_pair(&p, &phi).and_then(|pair| {
        if !is_compatible_pair(&p, &pair) {
            return Ok(Verdict::Fail("linearizations are not compatible".into()));
        }
        Ok(check_grid(&build_gamma_graph(&p, &pair)?, mutate))
    }));
    vec![(GRID, v)]
}

fn ideal_checks(ideal: &SquareFreeMonomialIdeal, field: Field) -> Findings {
    vec![
        (
            TERAI,
            from_result(
                terai_check(ideal, field)
                    .map(|ok| verdict(ok, || "projdim and dual regularity differ".into())),
            ),
        ),
        (
            DUAL_RELATION,
            from_result(
                dual_betti_relation_check(ideal, field)
                    .map(|ok| verdict(ok, || "dual Betti relation fails".into())),
            ),
        ),
    ]
}

struct Job {
    name: String,
    run: Box<dyn Fn() -> Findings + Send + Sync>,
}

fn jobs(opts: &SuiteOptions) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    match opts.kind {
        SuiteKind::Exhaustive => {
            if opts.max_c > ENUMERATION_CAP {
                return Err(Error::TooLarge {
                    what: "vertex count for exhaustive enumeration",
                    size: opts.max_c,
                    cap: ENUMERATION_CAP,
                });
            }
            for c in 1..=opts.max_c {
                for (k, mg) in enumerate_unmixed(c)?.into_iter().enumerate() {
                    let o = *opts;
                    jobs.push(Job {
                        name: format!("c={c} #{k}"),
                        run: Box::new(move || instance_checks(&mg, &o)),
                    });
                }
            }
        }
        SuiteKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for k in 0..opts.random_count {
                let t = rng.gen_range(1..=5);
                let c = rng.gen_range(t..=(t + 2).min(7));
                let density = rng.gen_range(0.0..1.0);
                let seed: u64 = rng.gen();
                let mg = random_unmixed(t, c, density, seed)?;
                let o = *opts;
                jobs.push(Job {
                    name: format!("random #{k} t={t} c={c} seed={seed}"),
                    run: Box::new(move || instance_checks(&mg, &o)),
                });
                let n = rng.gen_range(1..=10);
                let pseed: u64 = rng.gen();
                let mutate = opts.mutate;
                jobs.push(Job {
                    name: format!("2d poset #{k} n={n} seed={pseed}"),
                    run: Box::new(move || poset_checks(n, pseed, mutate)),
                });
                let vars = rng.gen_range(1..=8);
                let count = rng.gen_range(1..=6);
                let gens: Vec<u64> = (0..count).map(|_| rng.gen_range(1..1u64 << vars)).collect();
                let ideal = SquareFreeMonomialIdeal::with_default_names(vars, gens);
                let field = opts.field;
                jobs.push(Job {
                    name: format!("ideal #{k} {:?}", ideal.render()),
                    run: Box::new(move || ideal_checks(&ideal, field)),
                });
            }
        }
    }
    Ok(jobs)
}

/// Run every check over the suite's instances. Instances run in parallel;
/// the report is independent of scheduling.
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let jobs = jobs(opts)?;
    let results: Vec<Findings> = jobs.par_iter().map(|j| (j.run)()).collect();
    let mut outcomes: Vec<CheckOutcome> = CHECK_ORDER
        .iter()
        .map(|&name| CheckOutcome {
            name,
            checked: 0,
            skipped: 0,
            timeouts: 0,
            failures: Vec::new(),
        })
        .collect();
    for (job, findings) in jobs.iter().zip(results) {
        for (name, v) in findings {
            let o = outcomes
                .iter_mut()
                .find(|o| o.name == name)
                .expect("known check");
            match v {
                Verdict::Pass => o.checked += 1,
                Verdict::Skip => o.skipped += 1,
                Verdict::Fail(msg) => {
                    o.checked += 1;
                    o.failures.push(format!("{}: {msg}", job.name));
                }
                Verdict::Timeout(msg) => {
                    o.checked += 1;
                    o.timeouts += 1;
                    o.failures.push(format!("{}: {msg}", job.name));
                }
            }
        }
    }
    outcomes.retain(|o| o.checked + o.skipped > 0);
    let passed = outcomes.iter().all(CheckOutcome::passed);
    Ok(SuiteReport {
        suite: opts.kind,
        seed: opts.seed,
        instances: jobs.len(),
        outcomes,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_small_suite_passes() {
        let report = run_suite(&SuiteOptions {
            max_c: 2,
            ..SuiteOptions::default()
        })
        .unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.instances, 5);
    }

    #[test]
    fn mutation_is_caught_by_grid_check() {
        let report = run_suite(&SuiteOptions {
            max_c: 2,
            mutate: true,
            ..SuiteOptions::default()
        })
        .unwrap();
        assert!(!report.passed);
        let failed: Vec<&str> = report
            .outcomes
            .iter()
            .filter(|o| !o.passed())
            .map(|o| o.name)
            .collect();
        assert_eq!(failed, vec![GRID]);
        let grid = report.outcomes.iter().find(|o| o.name == GRID).unwrap();
        assert!(grid.failures.iter().all(|f| f.contains("components")));
    }

    #[test]
    fn random_suite_is_deterministic() {
        let opts = SuiteOptions {
            kind: SuiteKind::Random,
            random_count: 6,
            seed: 9,
            ..SuiteOptions::default()
        };
        let a = run_suite(&opts).unwrap();
        assert!(a.passed, "{a:?}");
        assert_eq!(a, run_suite(&opts).unwrap());
    }
}
