//! One function per subcommand, each producing a JSON report, its text
//! rendering and an exit code.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use edgeideal::embedding::{embedding_to_json, parse_embedding};
use edgeideal::generate::GeneratorSpec;
use edgeideal::graph::{
    minimal_vertex_covers, parse_graph, BipartiteGraph, DEFAULT_ENUMERATION_CAP,
};
use edgeideal::invariants::invariants_report_matched;
use edgeideal::matching::{
    acyclic_reduction, associated_primes, classify, find_perfect_matching, MatchedBipartiteGraph,
};
use edgeideal::oracle::homology::{
    betti_table_with, invariants_from_table, BettiOptions, DEFAULT_PRIME,
};
use edgeideal::oracle::monomial::edge_ideal_of_graph;
use edgeideal::oracle::verify::{verify_arank_generators, MembershipStatus, VerifyOptions};
use edgeideal::oracle::Field;
use edgeideal::stci::arank_generators_matched;
use edgeideal::suite::{run_suite, SuiteKind, SuiteOptions};
use edgeideal::Error;
use serde_json::{json, Value};

use crate::pretty::{list, pairs, table};
use crate::Common;

const SCHEMA: &str = "v1";
const EXIT_TIMEOUT: u8 = 5;
const EXIT_VIOLATION: u8 = 6;

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

fn header(command: &str) -> Value {
    json!({ "schema": SCHEMA, "command": command })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn unmixed_graph(doc: &str) -> Result<(BipartiteGraph, MatchedBipartiteGraph)> {
    let g = parse_graph(doc)?;
    let mg = find_perfect_matching(&g).ok_or(Error::NotUnmixed)?;
    if !classify(&g).is_unmixed() {
        return Err(Error::NotUnmixed.into());
    }
    Ok((g, mg))
}

fn x_names(mg: &MatchedBipartiteGraph, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
    vs.into_iter().map(|i| mg.x_label(i).to_string()).collect()
}

pub fn classify_report(doc: &str) -> Result<Outcome> {
    let g = parse_graph(doc)?;
    let class = classify(&g);
    let mut out = merge(
        header("classify"),
        json!({
            "classification": class,
            "left": g.left_count(),
            "right": g.right_count(),
            "edges": g.edge_count(),
        }),
    );
    let mut summary = vec![
        ("classification", format!("{class:?}")),
        (
            "vertices",
            format!("{} + {}", g.left_count(), g.right_count()),
        ),
        ("edges", g.edge_count().to_string()),
    ];
    let mut components = String::new();
    if let Some(mg) = find_perfect_matching(&g) {
        let matching: Vec<(String, String)> = (0..mg.c())
            .map(|i| (mg.x_label(i).to_string(), mg.y_label(i).to_string()))
            .collect();
        let d = mg.digraph();
        let arcs: Vec<(String, String)> = d
            .arcs()
            .map(|(i, j)| (mg.x_label(i).to_string(), mg.x_label(j).to_string()))
            .collect();
        out["c"] = json!(mg.c());
        out["matching"] = json!(matching);
        out["digraph_arcs"] = json!(arcs);
        summary.push((
            "matching",
            list(
                &matching
                    .iter()
                    .map(|(x, y)| format!("{x}-{y}"))
                    .collect::<Vec<_>>(),
            ),
        ));
        summary.push((
            "digraph arcs",
            list(
                &arcs
                    .iter()
                    .map(|(a, b)| format!("{a}->{b}"))
                    .collect::<Vec<_>>(),
            ),
        ));
        if class.is_unmixed() {
            let ar = acyclic_reduction(&d);
            let comps: Vec<Vec<String>> = ar
                .components
                .iter()
                .map(|c| x_names(&mg, c.iter().copied()))
                .collect();
            let quotient: Vec<(usize, usize)> =
                ar.quotient.arcs().map(|(a, b)| (a + 1, b + 1)).collect();
            out["acyclic_reduction"] = json!({
                "t": ar.component_count(),
                "components": comps,
                "zeta": ar.zeta,
                "quotient_arcs": quotient,
            });
            components = "\n".to_string()
                + &table(
                    &["component", "members", "zeta", "covers"],
                    &(0..ar.component_count())
                        .map(|a| {
                            let above: Vec<String> = quotient
                                .iter()
                                .filter(|q| q.0 == a + 1)
                                .map(|q| q.1.to_string())
                                .collect();
                            vec![
                                (a + 1).to_string(),
                                comps[a].join(" "),
                                ar.zeta[a].to_string(),
                                above.join(" "),
                            ]
                        })
                        .collect::<Vec<_>>(),
                );
        }
    }
    Ok(Outcome {
        json: out,
        text: pairs(&summary) + &components,
        code: 0,
    })
}

fn field_or(common: &Common, default: Field) -> Field {
    common.field.unwrap_or(default)
}

fn betti_options(common: &Common, field: Field) -> BettiOptions {
    BettiOptions {
        field,
        max_vars: common.max_oracle_vars,
        ..BettiOptions::default()
    }
}

pub fn invariants(doc: &str, oracle: bool, common: &Common) -> Result<Outcome> {
    let (_, mg) = unmixed_graph(doc)?;
    let report = invariants_report_matched(&mg, DEFAULT_ENUMERATION_CAP)?;
    let mut out = merge(header("invariants"), serde_json::to_value(&report)?);
    let mut rows = vec![
        vec![
            "height".to_string(),
            report.height.to_string(),
            String::new(),
        ],
        vec![
            "regularity".to_string(),
            report.regularity.to_string(),
            String::new(),
        ],
        vec!["depth".to_string(), report.depth.to_string(), String::new()],
        vec![
            "projdim".to_string(),
            report.projdim.to_string(),
            String::new(),
        ],
    ];
    let mut code = 0;
    let mut extra = vec![
        ("strong components", report.scc_count.to_string()),
        ("kappa", report.kappa.to_string()),
        (
            "r(I)",
            report.r_lower.map_or("skipped".into(), |r| r.to_string()),
        ),
        ("regularity witness", list(&report.regularity_witness)),
        (
            "depth witness",
            list(
                &report
                    .depth_witness
                    .iter()
                    .map(|c| format!("{{{}}}", c.join(" ")))
                    .collect::<Vec<_>>(),
            ),
        ),
    ];
    if oracle {
        let field = field_or(common, Field::Rationals);
        let ideal = edgeideal::oracle::monomial::edge_ideal(&mg);
        let inv = invariants_from_table(&betti_table_with(&ideal, betti_options(common, field))?)?;
        let agrees = (inv.regularity, inv.depth, inv.projdim)
            == (report.regularity, report.depth, report.projdim);
        out["oracle"] = json!({
            "field": field,
            "regularity": inv.regularity,
            "depth": inv.depth,
            "projdim": inv.projdim,
            "agrees": agrees,
        });
        rows[1][2] = inv.regularity.to_string();
        rows[2][2] = inv.depth.to_string();
        rows[3][2] = inv.projdim.to_string();
        extra.push(("oracle field", field.to_string()));
        extra.push(("oracle agrees", agrees.to_string()));
        if !agrees {
            code = EXIT_VIOLATION;
        }
    }
    let headers: &[&str] = if oracle {
        &["invariant", "formula", "oracle"]
    } else {
        &["invariant", "formula"]
    };
    let rows: Vec<Vec<String>> = rows
        .into_iter()
        .map(|mut r| {
            r.truncate(headers.len());
            r
        })
        .collect();
    let text = table(headers, &rows) + "\n" + &pairs(&extra);
    Ok(Outcome {
        json: out,
        text,
        code,
    })
}

pub fn primes(doc: &str) -> Result<Outcome> {
    let (g, mg) = unmixed_graph(doc)?;
    let primes = associated_primes(&mg)?;
    let labelled: Vec<(Vec<String>, Vec<String>)> = primes.iter().map(|p| p.labels(&mg)).collect();
    let covers_agree = match minimal_vertex_covers(&g, DEFAULT_ENUMERATION_CAP) {
        Ok(e) => {
            let covers: BTreeSet<_> = e.covers.iter().map(|c| c.labels(&g)).collect();
            Some(covers == labelled.iter().cloned().collect::<BTreeSet<_>>())
        }
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let json_primes: Vec<Value> = labelled
        .iter()
        .map(|(x, y)| json!({ "x": x, "y": y }))
        .collect();
    let out = merge(
        header("primes"),
        json!({ "count": primes.len(), "primes": json_primes, "covers_agree": covers_agree }),
    );
    let rows: Vec<Vec<String>> = labelled
        .iter()
        .enumerate()
        .map(|(k, (x, y))| vec![(k + 1).to_string(), x.join(" "), y.join(" ")])
        .collect();
    let text = table(&["#", "x part", "y part"], &rows)
        + "\n"
        + &pairs(&[(
            "covers agree",
            covers_agree.map_or("skipped".into(), |b| b.to_string()),
        )]);
    Ok(Outcome {
        json: out,
        text,
        code: if covers_agree == Some(false) {
            EXIT_VIOLATION
        } else {
            0
        },
    })
}

fn rank_map(mg: &MatchedBipartiteGraph, ranks: &[usize]) -> Value {
    Value::Object(
        ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (mg.x_label(i).to_string(), json!(r)))
            .collect(),
    )
}

pub fn stci(
    doc: &str,
    embedding: Option<&str>,
    verify: bool,
    budget: Duration,
    common: &Common,
) -> Result<Outcome> {
    let (_, mg) = unmixed_graph(doc)?;
    let phi = embedding
        .map(|e| parse_embedding(e, mg.x_labels()))
        .transpose()?;
    let gs = arank_generators_matched(&mg, phi.as_ref())?;
    let render = |fs: &[edgeideal::stci::QuadraticForm]| {
        fs.iter().map(|f| f.render(&mg)).collect::<Vec<_>>()
    };
    let gg = &gs.gamma_graph;
    let mut out = merge(
        header("stci"),
        json!({
            "count": gs.total_count(),
            "xi": gs.xi(),
            "generators": gs.rendered(),
            "g": render(&gs.g_list),
            "h": render(&gs.h_list),
            "embedding": embedding_to_json(&gs.embedding, mg.x_labels()),
            "gamma": rank_map(&mg, &gs.linearizations.gamma),
            "rho": rank_map(&mg, &gs.linearizations.rho),
            "grid": {
                "points": gg.points().len(),
                "edges": gg.edges().len(),
                "components": gg.components().len(),
            },
        }),
    );
    let mut text = pairs(&[
        ("generators", gs.total_count().to_string()),
        ("chain generators", gs.xi().to_string()),
    ]);
    text += "\n";
    text += &table(
        &["vertex", "point", "gamma", "rho"],
        &(0..mg.c())
            .map(|i| {
                let (a, b) = gs.embedding.coords[i];
                vec![
                    mg.x_label(i).to_string(),
                    format!("({a}, {b})"),
                    gs.linearizations.gamma[i].to_string(),
                    gs.linearizations.rho[i].to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    text += "\ngrid graph (cells show the row whose component holds the point)\n";
    text += &gg.render();
    text += "\n";
    let mut rows: Vec<Vec<String>> = gs
        .g_list
        .iter()
        .enumerate()
        .map(|(k, f)| vec![format!("g{}", k + 1), f.render(&mg)])
        .collect();
    rows.extend(
        gs.h_list
            .iter()
            .enumerate()
            .map(|(k, f)| vec![format!("h{}", k + 1), f.render(&mg)]),
    );
    text += &table(&["name", "polynomial"], &rows);
    let mut code = 0;
    if verify {
        let opts = VerifyOptions {
            field: field_or(common, Field::Prime(DEFAULT_PRIME)),
            budget,
            parallel: true,
        };
        let report = verify_arank_generators(&gs, opts)?;
        if !report.verified {
            code = if report
                .checks
                .iter()
                .any(|c| c.status == MembershipStatus::Timeout)
            {
                EXIT_TIMEOUT
            } else {
                EXIT_VIOLATION
            };
        }
        text += "\n";
        text += &pairs(&[
            ("verification field", report.field.to_string()),
            ("generator terms are edges", report.containment.to_string()),
            ("radical equals edge ideal", report.verified.to_string()),
        ]);
        let bad: Vec<String> = report
            .unverified()
            .map(|c| format!("{} ({:?})", c.edge, c.status))
            .collect();
        if !bad.is_empty() {
            text += &pairs(&[("unverified", list(&bad))]);
        }
        out["verification"] = serde_json::to_value(&report)?;
    }
    Ok(Outcome {
        json: out,
        text,
        code,
    })
}

pub fn oracle(doc: &str, common: &Common) -> Result<Outcome> {
    let g = parse_graph(doc)?;
    let field = field_or(common, Field::Rationals);
    let ideal = edge_ideal_of_graph(&g);
    let t = betti_table_with(&ideal, betti_options(common, field))?;
    let inv = invariants_from_table(&t)?;
    let graded = t.graded();
    let graded_json: Vec<Value> = graded
        .iter()
        .map(|(&(l, j), &v)| json!({ "l": l, "degree": j, "value": v }))
        .collect();
    let out = merge(
        header("oracle"),
        json!({
            "field": field,
            "variables": ideal.vars(),
            "generators": ideal.render(),
            "regularity": inv.regularity,
            "projdim": inv.projdim,
            "depth": inv.depth,
            "graded": graded_json,
            "multigraded": t,
        }),
    );
    // Betti diagram: column l, row j - l
    let mut headers: Vec<String> = vec![String::new()];
    headers.extend((0..=inv.projdim).map(|l| l.to_string()));
    let rows: Vec<Vec<String>> = (0..=inv.regularity)
        .map(|r| {
            let mut row = vec![format!("{r}:")];
            row.extend((0..=inv.projdim).map(|l| {
                graded
                    .get(&(l, l + r))
                    .map_or("-".into(), |v| v.to_string())
            }));
            row
        })
        .collect();
    let hdr: Vec<&str> = headers.iter().map(String::as_str).collect();
    let text = pairs(&[
        ("field", field.to_string()),
        ("regularity", inv.regularity.to_string()),
        ("projdim", inv.projdim.to_string()),
        ("depth", inv.depth.to_string()),
    ]) + "\n"
        + &table(&hdr, &rows);
    Ok(Outcome {
        json: out,
        text,
        code: 0,
    })
}

const SEEDED_MODES: [&str; 3] = ["random_poset", "random2d", "random_unmixed"];

pub fn generate(doc: &str, seed: Option<u64>, out_dir: Option<&Path>) -> Result<Outcome> {
    let mut v: Value = serde_json::from_str(doc).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(seed) = seed {
        if v["mode"]
            .as_str()
            .is_some_and(|m| SEEDED_MODES.contains(&m))
        {
            v["seed"] = json!(seed);
        }
    }
    let spec = GeneratorSpec::parse(&v.to_string())?;
    let instances = spec.run()?;
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for (k, inst) in instances.iter().enumerate() {
        let graph: Value = serde_json::from_str(&inst.graph.to_bipartite_graph().to_json())?;
        let embedding = inst
            .embedding
            .as_ref()
            .map(|phi| embedding_to_json(phi, inst.graph.x_labels()));
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            crate::write_json(&dir.join(format!("instance_{k}.json")), &graph)?;
            if let Some(e) = &embedding {
                crate::write_json(&dir.join(format!("instance_{k}_embedding.json")), e)?;
            }
        }
        rows.push(vec![
            k.to_string(),
            inst.graph.c().to_string(),
            inst.graph.edge_count().to_string(),
            format!("{:?}", edgeideal::matching::classify_matched(&inst.graph)),
        ]);
        items.push(json!({ "graph": graph, "embedding": embedding }));
    }
    let out = merge(
        header("gen"),
        json!({ "spec": spec, "count": items.len(), "instances": items }),
    );
    let text = table(&["#", "c", "edges", "classification"], &rows);
    Ok(Outcome {
        json: out,
        text,
        code: 0,
    })
}

pub fn check(
    kind: SuiteKind,
    max_c: usize,
    count: usize,
    verify: bool,
    mutate: bool,
    budget: Duration,
    common: &Common,
) -> Result<Outcome> {
    let opts = SuiteOptions {
        kind,
        max_c,
        random_count: count,
        seed: common.seed.unwrap_or(0),
        field: field_or(common, Field::Rationals),
        max_oracle_vars: common.max_oracle_vars,
        verify,
        verify_opts: VerifyOptions {
            field: field_or(common, Field::Prime(DEFAULT_PRIME)),
            budget,
            parallel: false,
        },
        mutate,
    };
    let report = run_suite(&opts)?;
    let code = if report.passed {
        0
    } else if report.failures() > report.timeouts() {
        EXIT_VIOLATION
    } else {
        EXIT_TIMEOUT
    };
    let out = merge(header("check"), serde_json::to_value(&report)?);
    let rows: Vec<Vec<String>> = report
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.name.to_string(),
                if o.passed() { "PASS" } else { "FAIL" }.to_string(),
                o.checked.to_string(),
                o.skipped.to_string(),
                o.failures.len().to_string(),
            ]
        })
        .collect();
    let mut text = table(
        &["check", "result", "checked", "skipped", "failures"],
        &rows,
    );
    for o in report.outcomes.iter().filter(|o| !o.passed()) {
        for f in o.failures.iter().take(5) {
            text += &format!("{}: {f}\n", o.name);
        }
    }
    text += &format!(
        "{} instances, {}\n",
        report.instances,
        if report.passed {
            "all checks passed"
        } else {
            "FAILED"
        }
    );
    Ok(Outcome {
        json: out,
        text,
        code,
    })
}
