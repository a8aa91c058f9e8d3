//! Differential tests of the construction-tree dynamic program against the
//! exhaustive orientation oracle, over randomly grown trees of K3/K4 nodes.

use oor_core::graph::Edge;
use oor_core::orient::{
    at_most_one_fully_chorded_k4, enumerate_exists, greedy_outerplanar, solve_dp,
    validate_orientation,
};
use oor_core::recognize::{build_construction_tree, recognize, NodeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::random_tree_graph;

#[test]
fn dp_matches_exhaustive_oracle_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut solvable = 0;
    let mut unsolvable = 0;
    for round in 0..220 {
        let nodes = rng.gen_range(1..=10);
        let bias = if round % 2 == 0 { 0.85 } else { 0.35 };
        let g = random_tree_graph(nodes, bias, &mut rng);
        let ic = recognize(&g).expect("generated tree graphs are accepted");
        let t = build_construction_tree(&ic);
        let dp = solve_dp(&t);
        let oracle = enumerate_exists(&ic, 20).expect("chord count within oracle bound");
        assert_eq!(
            dp.is_some(),
            oracle,
            "solver and oracle disagree on {:?}",
            g.edges()
        );
        if let Some(o) = dp {
            validate_orientation(&ic, &o).expect("solver witness must validate");
            solvable += 1;
        } else {
            unsolvable += 1;
        }
    }
    // the family must exercise both outcomes
    assert!(solvable > 50, "only {solvable} solvable instances");
    assert!(unsolvable > 5, "only {unsolvable} unsolvable instances");
}

#[test]
fn single_constrained_k4_instances_always_solve() {
    // whenever at most one K4 node has all triangle edges as chords, an
    // orientation must exist
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    for _ in 0..200 {
        let nodes = rng.gen_range(1..=9);
        let g = random_tree_graph(nodes, 0.4, &mut rng);
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        if at_most_one_fully_chorded_k4(&t) {
            let o = solve_dp(&t).expect("admissible tree did not solve");
            validate_orientation(&ic, &o).unwrap();
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn fully_chorded_k4_chords_form_cycles_in_every_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut seen = 0;
    for _ in 0..300 {
        let nodes = rng.gen_range(2..=9);
        let g = random_tree_graph(nodes, 0.5, &mut rng);
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        let Some(o) = solve_dp(&t) else { continue };
        validate_orientation(&ic, &o).unwrap();
        for (i, node) in t.nodes.iter().enumerate() {
            if node.kind == NodeKind::K4 && t.node_degree(i) == 3 {
                // three chords on one triangle with in-degree <= 1 per
                // corner force a directed cycle
                let tri = node.triangle;
                let mut indeg = std::collections::BTreeMap::new();
                for a in 0..3 {
                    let e = Edge::new(tri[a], tri[(a + 1) % 3]);
                    let target = o[&e];
                    *indeg.entry(target).or_insert(0usize) += 1;
                }
                assert!(
                    indeg.values().all(|&c| c == 1),
                    "chords of a fully chorded K4 are not a cycle: {o:?}"
                );
                seen += 1;
            }
        }
    }
    assert!(seen > 10, "family never produced a fully chorded K4");
}

#[test]
fn greedy_and_dp_agree_on_outerplanar_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for _ in 0..60 {
        let nodes = rng.gen_range(1..=12);
        let g = random_tree_graph(nodes, 0.0, &mut rng);
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        let dp = solve_dp(&t).expect("chordal outerplanar graphs always orient");
        validate_orientation(&ic, &dp).unwrap();
        let greedy = greedy_outerplanar(&ic).unwrap();
        validate_orientation(&ic, &greedy).unwrap();
    }
}

#[test]
fn generator_round_trip_preserves_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for _ in 0..50 {
        let nodes = rng.gen_range(1..=9);
        let g = random_tree_graph(nodes, 0.5, &mut rng);
        let ic = recognize(&g).unwrap();
        let t = build_construction_tree(&ic);
        let merged = oor_core::recognize::merge_construction_tree(&t);
        assert_eq!(merged.edges(), g.edges());
        assert_eq!(t.nodes.len(), nodes);
    }
}
