mod common;

use edgeideal::digraph::arc_set;
use edgeideal::generate::{random_2d_poset, random_poset, GeneratorSpec};
use edgeideal::graph::parse_graph;
use edgeideal::invariants::invariants_report;
use edgeideal::matching::{classify, Classification};
use edgeideal::Error;
use serde_json::Value;

fn one_based_arcs(v: &Value) -> Vec<(usize, usize)> {
    serde_json::from_value(v["arcs"].clone()).unwrap()
}

#[test]
fn random_poset_regression() {
    let fx: Value = serde_json::from_str(&common::fixture("random_poset_n7_seed42.json")).unwrap();
    let p = random_poset(7, 0.4, 42);
    let got: Vec<(usize, usize)> = arc_set(&p)
        .into_iter()
        .map(|(a, b)| (a + 1, b + 1))
        .collect();
    assert_eq!(got, one_based_arcs(&fx));
}

#[test]
fn random_2d_poset_regression() {
    let fx: Value = serde_json::from_str(&common::fixture("random_2d_n7_seed7.json")).unwrap();
    let (p, phi) = random_2d_poset(7, 7);
    let got: Vec<(usize, usize)> = arc_set(&p)
        .into_iter()
        .map(|(a, b)| (a + 1, b + 1))
        .collect();
    assert_eq!(got, one_based_arcs(&fx));
    let coords: Vec<(usize, usize)> = serde_json::from_value(fx["embedding"].clone()).unwrap();
    assert_eq!(phi.coords, coords);
}

#[test]
fn seven_vertex_graph_is_cohen_macaulay() {
    let g = common::graph_fixture("seven_vertex_cm.json");
    assert_eq!(g.edge_count(), 20);
    assert_eq!(classify(&g), Classification::CohenMacaulay);
    let r = invariants_report(&g, 24).unwrap();
    assert_eq!((r.height, r.scc_count, r.depth, r.projdim), (7, 7, 7, 7));
    assert_eq!(r.r_lower, Some(r.regularity));
}

#[test]
fn k22_is_unmixed_with_one_component() {
    let g = common::graph_fixture("k22.json");
    assert_eq!(classify(&g), Classification::Unmixed);
    let r = invariants_report(&g, 24).unwrap();
    assert_eq!(
        (r.regularity, r.depth, r.projdim, r.scc_count),
        (1, 1, 3, 1)
    );
}

#[test]
fn eight_cycle_is_not_unmixed() {
    let g = common::graph_fixture("eight_cycle.json");
    assert!(!classify(&g).is_unmixed());
    assert!(matches!(invariants_report(&g, 24), Err(Error::NotUnmixed)));
}

#[test]
fn graph_json_round_trips() {
    for name in ["seven_vertex_cm.json", "k22.json", "eight_cycle.json"] {
        let g = common::graph_fixture(name);
        assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }
}

#[test]
fn generator_spec_modes() {
    let spec = GeneratorSpec::parse(r#"{"mode":"random2d","n":7,"seed":7}"#).unwrap();
    let out = spec.run().unwrap();
    assert_eq!(out.len(), 1);
    assert!(out[0].embedding.is_some());
    let spec = GeneratorSpec::parse(r#"{"mode":"enumerate","c":3}"#).unwrap();
    assert_eq!(spec.run().unwrap().len(), 29);
    let spec =
        GeneratorSpec::parse(r#"{"mode":"expand","poset":{"n":2,"arcs":[[1,2]]},"zeta":[2,1]}"#)
            .unwrap();
    assert_eq!(spec.run().unwrap()[0].graph.c(), 3);
    assert!(matches!(
        GeneratorSpec::parse(r#"{"mode":"enumerate","c":3,"x":1}"#),
        Err(Error::Parse(_))
    ));
    assert!(matches!(
        GeneratorSpec::parse(r#"{"mode":"enumerate","c":5}"#)
            .unwrap()
            .run(),
        Err(Error::TooLarge { .. })
    ));
}
