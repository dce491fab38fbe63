mod common;

use std::collections::BTreeSet;

use gmech::complexity::{influential_edges, pi_profile, special_complexity, tau_profile, InfluenceMethod};
use gmech::sampling::connected_graph;
use gmech::search::{enumerate_mechanisms, sweep, SearchConfig};
use gmech::structure::MechanismClass;
use gmech::{DirectedGraph, Edge};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn exact_set(g: &DirectedGraph, i: usize, j: usize) -> BTreeSet<Edge> {
    influential_edges(g, i, j, InfluenceMethod::Exact).unwrap().influential.into_iter().collect()
}

#[test]
fn exact_influence_matches_polynomial_oracle() {
    let mut graphs: Vec<DirectedGraph> = (2..=3).flat_map(labeled_connected).collect();
    graphs.extend(enumerate_mechanisms(4).unwrap().iter().map(|c| c.graph()));
    for g in graphs {
        for (i, j) in pairs(g.vertex_count()) {
            assert_eq!(exact_set(&g, i, j), oracle_influential(&g, i, j), "{g} pair ({}, {})", i + 1, j + 1);
        }
    }
}

#[test]
fn influence_on_random_five_vertex_graphs_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..25 {
        let g = connected_graph(&mut rng, 5);
        let i = rng.gen_range(0..5);
        let j = (i + rng.gen_range(1..5)) % 5;
        assert_eq!(exact_set(&g, i, j), oracle_influential(&g, i, j), "{g}");
    }
}

#[test]
fn screened_and_exact_agree_on_every_small_graph() {
    for m in 2..=4 {
        for (k, g) in labeled_connected(m).iter().enumerate() {
            let exact = pi_profile(g, InfluenceMethod::Exact).unwrap();
            let screened = pi_profile(g, InfluenceMethod::randomized(k as u64)).unwrap();
            assert_eq!(exact.pi_ij, screened.pi_ij, "{g}");
        }
    }
}

#[test]
fn screened_and_exact_agree_on_ten_thousand_five_vertex_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let graphs: Vec<DirectedGraph> = (0..10_000).map(|_| connected_graph(&mut rng, 5)).collect();
    let disagreements: Vec<String> = graphs
        .iter()
        .enumerate()
        .filter(|(k, g)| {
            let exact = pi_profile(g, InfluenceMethod::Exact).unwrap();
            let screened = pi_profile(g, InfluenceMethod::randomized(*k as u64)).unwrap();
            exact.pi_ij != screened.pi_ij
        })
        .map(|(_, g)| g.to_string())
        .collect();
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

#[test]
fn profile_bounds() {
    for c in enumerate_mechanisms(4).unwrap() {
        let g = c.graph();
        let tau = tau_profile(&g).unwrap();
        let pi = pi_profile(&g, InfluenceMethod::Exact).unwrap();
        let mut tau_max = 0;
        let mut pi_max = 0;
        for (i, j) in pairs(4) {
            assert!(tau.tau_ij[i][j] >= 1);
            assert!(pi.pi_ij[i][j] as usize <= g.edge_count());
            tau_max = tau_max.max(tau.tau_ij[i][j]);
            pi_max = pi_max.max(pi.pi_ij[i][j]);
        }
        assert_eq!((tau.tau, pi.pi), (tau_max, pi_max));
        assert_eq!(pi.pi, oracle_pi(&g));
    }
}

fn contains_chorded_triangle(g: &DirectedGraph) -> bool {
    let t0 = [(0, 2), (2, 0), (0, 1), (1, 2)];
    let m = g.vertex_count();
    (0..m).any(|a| {
        (0..m).any(|b| {
            (0..m).any(|c| a != b && b != c && a != c && {
                let map = [a, b, c];
                t0.iter().all(|&(x, y)| g.has_edge(map[x], map[y]))
            })
        })
    })
}

#[test]
fn anything_properly_containing_the_chorded_triangle_has_pi_at_least_five() {
    let mut checked = 0;
    for m in 3..=4 {
        for r in sweep(m, SearchConfig::exact()).unwrap().records {
            let is_t0 = m == 3 && r.graph.edge_count() == 4 && r.class == MechanismClass::ChordedCycle;
            if contains_chorded_triangle(&r.graph) && !is_t0 {
                assert!(r.pi >= 5, "{}", r.graph);
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn low_price_complexity_characterizes_cycles_chorded_cycles_and_roses() {
    for m in 2..=5 {
        for r in sweep(m, SearchConfig::exact()).unwrap().records {
            let simple = matches!(r.class, MechanismClass::Cycle | MechanismClass::ChordedCycle | MechanismClass::Rose(_) | MechanismClass::Star);
            assert_eq!(r.pi <= 4, simple, "{} ({})", r.graph, r.class);
            if r.class != MechanismClass::Cycle {
                let p = pi_profile(&r.graph, InfluenceMethod::Exact).unwrap();
                assert!(p.pi_ij.iter().flatten().any(|&x| x >= 4), "{}", r.graph);
            }
        }
    }
}

#[test]
fn closed_forms_match_direct_computation() {
    for m in 2..=7 {
        for (class, g) in [
            (MechanismClass::Star, DirectedGraph::star(m, m - 1).unwrap()),
            (MechanismClass::Cycle, DirectedGraph::cycle(m).unwrap()),
            (MechanismClass::Complete, DirectedGraph::complete(m).unwrap()),
        ] {
            let closed = special_complexity(class, m).unwrap();
            let method = if m <= 5 { InfluenceMethod::Exact } else { InfluenceMethod::randomized(m as u64) };
            let pi = pi_profile(&g, method).unwrap().pi as u64;
            let tau = tau_profile(&g).unwrap().tau as u64;
            assert_eq!((closed.tau, closed.pi), (tau, pi), "{class} m={m}");
        }
    }
}

fn arb_augmentation() -> impl Strategy<Value = (DirectedGraph, usize, usize)> {
    (1usize..=4, any::<u64>()).prop_flat_map(|(m, seed)| {
        let h = connected_graph(&mut ChaCha8Rng::seed_from_u64(seed), m);
        (Just(h), 0..m, 0..m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_edge_augmentation_adds_two_to_price_complexity((h, j, l) in arb_augmentation()) {
        let k_vertex = h.vertex_count();
        let mut edges = h.edges().to_vec();
        edges.push(Edge::new(j, k_vertex));
        edges.push(Edge::new(k_vertex, l));
        let k = DirectedGraph::new(k_vertex + 1, edges).unwrap();
        let ph = pi_profile(&h, InfluenceMethod::Exact).unwrap();
        let pk = pi_profile(&k, InfluenceMethod::Exact).unwrap();
        for i in 0..k_vertex {
            prop_assert_eq!(pk.pi_ij[i][k_vertex], ph.pi_ij[i][j] + 2);
        }
    }

    #[test]
    fn screened_influence_is_a_subset_of_exact(m in 3usize..=6, seed in any::<u64>(), trial in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = connected_graph(&mut rng, m);
        let i = rng.gen_range(0..m);
        let j = (i + rng.gen_range(1..m)) % m;
        let screened = influential_edges(&g, i, j, InfluenceMethod::randomized(trial)).unwrap().influential;
        let exact = exact_set(&g, i, j);
        prop_assert!(screened.iter().all(|e| exact.contains(e)));
    }
}
