//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::collections::{BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use edgeideal::digraph::DirectedGraph;
use edgeideal::generate::{
    enumerate_unmixed, random_2d_poset, random_unmixed, sharp_depth_chain, sharp_depth_instance,
};
use edgeideal::graph::{max_pairwise_disconnected, minimal_vertex_covers, DEFAULT_ENUMERATION_CAP};
use edgeideal::invariants::{depth, projective_dimension, regularity};
use edgeideal::matching::{
    acyclic_reduction, associated_primes, classify, classify_matched, Classification,
    MatchedBipartiteGraph,
};
use edgeideal::oracle::homology::{
    betti_table, dual_betti_relation_check, dual_shape_check, invariants_from_table, terai_check,
};
use edgeideal::oracle::monomial::{edge_ideal, edge_ideal_of_graph, SquareFreeMonomialIdeal};
use edgeideal::oracle::verify::{verify_arank_generators, VerifyOptions};
use edgeideal::oracle::Field;
use edgeideal::stci::{arank_generators_matched, build_gamma_graph, linearization_pair};
use edgeideal::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LINEARIZATION_LIMIT: Duration = Duration::from_millis(1);
const GENERATOR_LIMIT: Duration = Duration::from_millis(10);
const MEMBERSHIP_BUDGET: Duration = Duration::from_secs(300);
const SMALL_SWEEP_LIMIT: Duration = Duration::from_secs(60);
const GRID_LIMIT: Duration = Duration::from_secs(60);
const GRID_POSETS: u64 = 500;
const RANDOM_IDEALS: u64 = 100;
const PAIRWISE_EDGE_CAP: usize = 128;

/// `(t, c, density, seed)` for the pinned random part of the sweep.
const RANDOM_SAMPLE: [(usize, usize, f64, u64); 12] = [
    (4, 4, 0.5, 11),
    (3, 4, 0.5, 12),
    (2, 4, 0.5, 13),
    (5, 5, 0.4, 21),
    (4, 5, 0.5, 22),
    (3, 5, 0.6, 23),
    (6, 6, 0.4, 31),
    (4, 6, 0.5, 32),
    (3, 6, 0.3, 33),
    (7, 7, 0.4, 41),
    (5, 7, 0.5, 42),
    (3, 7, 0.5, 43),
];

struct Instance {
    name: String,
    graph: MatchedBipartiteGraph,
}

fn small_sweep() -> Vec<Instance> {
    (1..=3)
        .flat_map(|c| {
            enumerate_unmixed(c)
                .unwrap()
                .into_iter()
                .enumerate()
                .map(move |(k, graph)| Instance {
                    name: format!("enumerated c={c} #{k}"),
                    graph,
                })
        })
        .collect()
}

fn random_sample() -> Vec<Instance> {
    RANDOM_SAMPLE
        .iter()
        .map(|&(t, c, density, seed)| Instance {
            name: format!("random t={t} c={c} density={density} seed={seed}"),
            graph: random_unmixed(t, c, density, seed).unwrap(),
        })
        .collect()
}

fn sweep() -> Vec<Instance> {
    let mut all = small_sweep();
    all.extend(random_sample());
    all
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(what: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn seven_vertex_poset() -> DirectedGraph {
    common::seven_vertex_cm().digraph()
}

fn linearizations_golden() -> Result<String, String> {
    let p = seven_vertex_poset();
    let phi = common::seven_vertex_embedding();
    let start = Instant::now();
    let pair = linearization_pair(&p, &phi).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(pair.gamma == [1, 2, 3, 4, 6, 5, 7], || {
        format!("gamma = {:?}", pair.gamma)
    })?;
    ensure(pair.rho == [5, 7, 2, 4, 6, 1, 3], || {
        format!("rho = {:?}", pair.rho)
    })?;
    within("linearizations", elapsed, LINEARIZATION_LIMIT)?;
    Ok(format!("{elapsed:?}"))
}

fn term_sets(forms: &[Vec<(usize, usize)>]) -> Vec<BTreeSet<(usize, usize)>> {
    forms.iter().map(|f| f.iter().copied().collect()).collect()
}

fn generators_golden() -> Result<String, String> {
    let mg = common::seven_vertex_cm();
    let phi = common::seven_vertex_embedding();
    let start = Instant::now();
    let gs = arank_generators_matched(&mg, Some(&phi)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    // (x index, y index), 1-based, read off the worked example
    let expected: Vec<Vec<(usize, usize)>> = vec![
        vec![(1, 6)],
        vec![(2, 6), (1, 3)],
        vec![(3, 6), (2, 3), (1, 7)],
        vec![(4, 6), (3, 3), (2, 7), (1, 4)],
        vec![(6, 6), (4, 7), (2, 4), (1, 1)],
        vec![(5, 7), (4, 4), (2, 5)],
        vec![(7, 7), (5, 5), (2, 2)],
    ];
    let expected = term_sets(
        &expected
            .into_iter()
            .map(|f| f.into_iter().map(|(i, j)| (i - 1, j - 1)).collect())
            .collect::<Vec<_>>(),
    );
    let got = term_sets(
        &gs.g_list
            .iter()
            .map(|f| f.terms.clone())
            .collect::<Vec<_>>(),
    );
    ensure(got == expected, || {
        format!("generators {:?}", gs.rendered())
    })?;
    ensure(gs.h_list.is_empty(), || {
        "unexpected chain generators".into()
    })?;
    within("generator synthesis", elapsed, GENERATOR_LIMIT)?;
    Ok(format!("{elapsed:?}"))
}

fn radical_verification_golden() -> Result<String, String> {
    let mg = common::seven_vertex_cm();
    let gs = arank_generators_matched(&mg, Some(&common::seven_vertex_embedding()))
        .map_err(|e| e.to_string())?;
    let opts = VerifyOptions {
        budget: MEMBERSHIP_BUDGET,
        ..VerifyOptions::default()
    };
    let report = verify_arank_generators(&gs, opts).map_err(|e| e.to_string())?;
    ensure(report.checks.len() == 20, || {
        format!("{} edge checks", report.checks.len())
    })?;
    ensure(report.containment, || {
        "a generator term is not an edge".into()
    })?;
    let bad: Vec<String> = report
        .unverified()
        .map(|c| format!("{} {:?}", c.edge, c.status))
        .collect();
    ensure(bad.is_empty(), || format!("not verified: {bad:?}"))?;
    let slowest = report.checks.iter().map(|c| c.millis).max().unwrap_or(0);
    Ok(format!(
        "20 memberships over {}, slowest {slowest} ms",
        report.field
    ))
}

fn oracle_row(mg: &MatchedBipartiteGraph) -> Result<(usize, usize, usize), String> {
    let table = betti_table(&edge_ideal(mg), Field::Rationals).map_err(|e| e.to_string())?;
    let inv = invariants_from_table(&table).map_err(|e| e.to_string())?;
    Ok((inv.regularity, inv.depth, inv.projdim))
}

fn formula_row(mg: &MatchedBipartiteGraph) -> Result<(usize, usize, usize), String> {
    let reg = regularity(mg).map_err(|e| e.to_string())?;
    let dep = depth(mg).map_err(|e| e.to_string())?;
    let pd = projective_dimension(mg).map_err(|e| e.to_string())?;
    Ok((reg, dep, pd))
}

fn compare_formulas(instances: &[Instance]) -> Result<(), String> {
    for inst in instances {
        let f = formula_row(&inst.graph)?;
        let o = oracle_row(&inst.graph)?;
        ensure(f == o, || {
            format!(
                "{}: formula (reg, depth, pd) {f:?}, oracle {o:?}",
                inst.name
            )
        })?;
    }
    Ok(())
}

fn formulas_against_oracle() -> Result<String, String> {
    let small = small_sweep();
    let start = Instant::now();
    compare_formulas(&small)?;
    let small_time = start.elapsed();
    within("c <= 3 sweep", small_time, SMALL_SWEEP_LIMIT)?;
    let sample = random_sample();
    compare_formulas(&sample)?;
    Ok(format!(
        "{} exhaustive in {small_time:?}, {} sampled with c = 4..7",
        small.len(),
        sample.len()
    ))
}

fn pairwise_disconnected() -> Result<String, String> {
    let all = sweep();
    for inst in &all {
        let r = max_pairwise_disconnected(&inst.graph.to_bipartite_graph(), PAIRWISE_EDGE_CAP)
            .map_err(|e| e.to_string())?
            .size();
        let reg = regularity(&inst.graph).map_err(|e| e.to_string())?;
        ensure(r == reg, || {
            format!("{}: r(I) = {r}, regularity {reg}", inst.name)
        })?;
    }
    let cycle = common::graph_fixture("eight_cycle.json");
    ensure(!classify(&cycle).is_unmixed(), || {
        "eight-cycle classified unmixed".into()
    })?;
    let r = max_pairwise_disconnected(&cycle, PAIRWISE_EDGE_CAP)
        .map_err(|e| e.to_string())?
        .size();
    let table =
        betti_table(&edge_ideal_of_graph(&cycle), Field::Rationals).map_err(|e| e.to_string())?;
    let reg = table.regularity();
    ensure(r == 2 && reg == Some(3), || {
        format!("eight-cycle r(I) = {r}, reg = {reg:?}")
    })?;
    Ok(format!(
        "{} instances; eight-cycle r(I) = 2 < reg = 3",
        all.len()
    ))
}

fn antichain_poset(t: usize) -> DirectedGraph {
    DirectedGraph::empty(t)
}

fn depth_bound_and_sharpness() -> Result<String, String> {
    for inst in sweep() {
        let d = depth(&inst.graph).map_err(|e| e.to_string())?;
        let sccs = acyclic_reduction(&inst.graph.digraph()).component_count();
        ensure(d >= sccs, || {
            format!("{}: depth {d} below {sccs} components", inst.name)
        })?;
    }
    let mut checked = 0;
    for (t, c) in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5)] {
        let all: Vec<usize> = (0..t).collect();
        let variants = [
            ("chain", sharp_depth_chain(t, c)),
            (
                "antichain",
                sharp_depth_instance(&antichain_poset(t), &all, c),
            ),
        ];
        for (shape, mg) in variants {
            let mg = mg.map_err(|e| e.to_string())?;
            let sccs = acyclic_reduction(&mg.digraph()).component_count();
            let d = depth(&mg).map_err(|e| e.to_string())?;
            let (_, oracle_depth, _) = oracle_row(&mg)?;
            ensure(mg.c() == c && sccs == t, || {
                format!("{shape} ({t}, {c}): c = {}, {sccs} components", mg.c())
            })?;
            ensure(d == t && oracle_depth == t, || {
                format!("{shape} ({t}, {c}): depth {d}, oracle depth {oracle_depth}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} sharp instances"))
}

fn primes_are_covers() -> Result<String, String> {
    let all = sweep();
    for inst in &all {
        let mg = &inst.graph;
        let g = mg.to_bipartite_graph();
        let covers: BTreeSet<_> = minimal_vertex_covers(&g, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?
            .covers
            .iter()
            .map(|c| c.labels(&g))
            .collect();
        let primes: BTreeSet<_> = associated_primes(mg)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|p| p.labels(mg))
            .collect();
        ensure(covers == primes, || {
            format!("{}: primes {primes:?}, covers {covers:?}", inst.name)
        })?;
    }
    Ok(format!("{} instances", all.len()))
}

fn components(point_count: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); point_count];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; point_count];
    let mut count = 0;
    for s in 0..point_count {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

fn grid_structure() -> Result<String, String> {
    let start = Instant::now();
    for seed in 0..GRID_POSETS {
        let n = 1 + (seed % 10) as usize;
        let (p, phi) = random_2d_poset(n, seed);
        let reach = p.reachability();
        let pair = linearization_pair(&p, &phi).map_err(|e| format!("seed {seed}: {e}"))?;
        let (g, r) = (&pair.gamma, &pair.rho);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let ok = if reach[i][j] {
                    g[j] > g[i] && r[j] < r[i]
                } else if reach[j][i] {
                    true
                } else {
                    (g[j] > g[i]) == (r[j] > r[i])
                };
                ensure(ok, || {
                    format!("seed {seed}: linearization condition fails on ({i}, {j})")
                })?;
            }
        }
        let gg = build_gamma_graph(&p, &pair).map_err(|e| format!("seed {seed}: {e}"))?;
        let expected: BTreeSet<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i == j || reach[i][j])
            .map(|(i, j)| (g[i], r[j]))
            .collect();
        let points: BTreeSet<(usize, usize)> = gg.points().iter().map(|q| (q.col, q.row)).collect();
        ensure(points == expected, || {
            format!("seed {seed}: grid points differ")
        })?;
        let count = components(gg.points().len(), gg.edges());
        ensure(count == n, || {
            format!("seed {seed}: {count} components for {n} vertices")
        })?;
        let mut first_rows: Vec<usize> = gg
            .points()
            .iter()
            .filter(|q| q.col == 1)
            .map(|q| q.row)
            .collect();
        first_rows.sort_unstable();
        ensure(
            first_rows.iter().enumerate().all(|(k, &row)| row == k + 1),
            || format!("seed {seed}: first column rows {first_rows:?}"),
        )?;
    }
    let elapsed = start.elapsed();
    within("grid sweep", elapsed, GRID_LIMIT)?;
    Ok(format!("{GRID_POSETS} posets in {elapsed:?}"))
}

fn random_ideal(rng: &mut ChaCha8Rng) -> SquareFreeMonomialIdeal {
    let n = rng.gen_range(1..=8);
    let count = rng.gen_range(1..=6);
    let gens: Vec<u64> = (0..count).map(|_| rng.gen_range(1..1u64 << n)).collect();
    SquareFreeMonomialIdeal::with_default_names(n, gens)
}

fn oracle_self_consistency() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..RANDOM_IDEALS {
        let ideal = random_ideal(&mut rng);
        let gens = ideal.render();
        ensure(
            terai_check(&ideal, Field::Rationals).map_err(|e| e.to_string())?,
            || format!("ideal #{k} {gens:?}: projdim and dual regularity disagree"),
        )?;
        ensure(
            dual_betti_relation_check(&ideal, Field::Rationals).map_err(|e| e.to_string())?,
            || format!("ideal #{k} {gens:?}: dual Betti relation fails"),
        )?;
    }
    let mut cm = 0;
    for inst in sweep() {
        if classify_matched(&inst.graph) != Classification::CohenMacaulay {
            continue;
        }
        cm += 1;
        ensure(
            dual_shape_check(&inst.graph, Field::Rationals).map_err(|e| e.to_string())?,
            || {
                format!(
                    "{}: dual Betti numbers off the expected multidegrees",
                    inst.name
                )
            },
        )?;
    }
    Ok(format!(
        "{RANDOM_IDEALS} random ideals, {cm} Cohen-Macaulay instances"
    ))
}

fn arithmetic_rank_count() -> Result<String, String> {
    let (mut built, mut skipped) = (0, 0);
    for inst in sweep() {
        let mg = &inst.graph;
        let gs = match arank_generators_matched(mg, None) {
            Ok(gs) => gs,
            Err(Error::NotTwoDimensional(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(format!("{}: {e}", inst.name)),
        };
        built += 1;
        let pd = projective_dimension(mg).map_err(|e| e.to_string())?;
        ensure(gs.total_count() == pd, || {
            format!(
                "{}: {} generators, projdim {pd}",
                inst.name,
                gs.total_count()
            )
        })?;
        let mut terms: Vec<(usize, usize)> =
            gs.all().flat_map(|f| f.terms.iter().copied()).collect();
        terms.sort_unstable();
        let edges: Vec<(usize, usize)> = mg.edges().collect();
        ensure(terms == edges, || {
            format!("{}: terms do not partition the edges", inst.name)
        })?;
    }
    let mut verified = 0;
    let k22 =
        edgeideal::matching::find_perfect_matching(&common::graph_fixture("k22.json")).unwrap();
    let targets = small_sweep()
        .into_iter()
        .map(|i| (i.name, i.graph))
        .chain([("K22".to_string(), k22)]);
    for (name, mg) in targets {
        let gs = arank_generators_matched(&mg, None).map_err(|e| format!("{name}: {e}"))?;
        let report =
            verify_arank_generators(&gs, VerifyOptions::default()).map_err(|e| e.to_string())?;
        ensure(report.verified, || {
            let bad: Vec<_> = report
                .unverified()
                .map(|c| (c.edge.clone(), c.status))
                .collect();
            format!("{name}: unverified {bad:?}")
        })?;
        verified += 1;
    }
    Ok(format!(
        "{built} instances counted ({skipped} not embeddable), {verified} radicals verified"
    ))
}

fn complete_intersection() -> Result<String, String> {
    let mut seen = 0;
    for inst in small_sweep() {
        let mg = &inst.graph;
        if classify_matched(mg) != Classification::CohenMacaulay {
            continue;
        }
        seen += 1;
        let reg = regularity(mg).map_err(|e| e.to_string())?;
        let (oracle_reg, _, _) = oracle_row(mg)?;
        let isolated = mg.edges().all(|(i, j)| i == j);
        ensure((reg == mg.c()) == isolated && reg == oracle_reg, || {
            format!(
                "{}: regularity {reg}, oracle {oracle_reg}, c = {}",
                inst.name,
                mg.c()
            )
        })?;
    }
    Ok(format!("{seen} Cohen-Macaulay instances"))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 11] = [
        (
            "linearizations of the seven-vertex poset",
            linearizations_golden,
        ),
        (
            "grid generators of the seven-vertex poset",
            generators_golden,
        ),
        (
            "radical of the seven-vertex generators",
            radical_verification_golden,
        ),
        (
            "formulas against the Hochster oracle",
            formulas_against_oracle,
        ),
        (
            "pairwise disconnected edges against regularity",
            pairwise_disconnected,
        ),
        (
            "depth lower bound and sharp instances",
            depth_bound_and_sharpness,
        ),
        ("associated primes against vertex covers", primes_are_covers),
        (
            "grid graph structure on random two-dimensional posets",
            grid_structure,
        ),
        ("oracle self-consistency", oracle_self_consistency),
        ("generator count and edge partition", arithmetic_rank_count),
        (
            "regularity equals c only for isolated edges",
            complete_intersection,
        ),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{detail}] ({secs:.3} s)", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.3} s)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
