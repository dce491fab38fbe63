mod common;

use gmech::arborescence::{count_arborescences, enumerate_arborescences};
use gmech::canon::canonical_key;
use gmech::sampling::connected_graph;
use gmech::search::enumerate_mechanisms;
use gmech::structure::{classify, collapse_with_map, collapsible_edges, find_augmenting_path, is_rigid, MechanismClass, Subgraph};
use gmech::{DirectedGraph, Edge};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn labeled_connected_counts() {
    let counts: Vec<usize> = (1..=4).map(|m| labeled_connected(m).len()).collect();
    assert_eq!(counts, vec![1, 1, 18, 1606]);
}

#[test]
fn arborescences_match_subset_enumeration_and_matrix_tree() {
    for m in 1..=4 {
        for g in labeled_connected(m) {
            for root in 0..m {
                let listed = enumerate_arborescences(&g, root).unwrap();
                let brute = brute_arborescences(&g, root);
                assert_eq!(listed.len(), brute.len(), "{g} root {root}");
                let mut listed_sets: Vec<Vec<Edge>> = listed.iter().map(|t| t.edges.clone()).collect();
                let mut brute_sets: Vec<Vec<Edge>> =
                    brute.iter().map(|t| t.iter().map(|&k| g.edges()[k]).collect()).collect();
                listed_sets.sort();
                brute_sets.sort();
                assert_eq!(listed_sets, brute_sets);
                let count = count_arborescences(&g, root).unwrap();
                assert_eq!(num_bigint::BigInt::from(count), matrix_tree_count(&g, root));
                assert!(listed.iter().all(|t| t.edges.len() + 1 == m && t.is_valid_in(&g)));
            }
        }
    }
}

#[test]
fn arborescence_counts_on_random_larger_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..60 {
        let g = connected_graph(&mut rng, 5 + k % 2);
        for root in 0..g.vertex_count() {
            let count = count_arborescences(&g, root).unwrap();
            assert_eq!(num_bigint::BigInt::from(count), matrix_tree_count(&g, root));
            assert_eq!(enumerate_arborescences(&g, root).unwrap().len() as u128, count);
        }
    }
}

#[test]
fn canonical_key_equality_is_isomorphism() {
    for m in 2..=4 {
        let graphs = labeled_connected(m);
        let keys: Vec<_> = graphs.iter().map(|g| canonical_key(g).unwrap()).collect();
        let brute: Vec<_> = graphs.iter().map(brute_canonical).collect();
        for a in 0..graphs.len() {
            for b in a..graphs.len() {
                assert_eq!(keys[a] == keys[b], brute[a] == brute[b], "{} vs {}", graphs[a], graphs[b]);
            }
        }
    }
}

#[test]
fn brute_force_class_counts_match_enumeration() {
    for m in 2..=4 {
        let mut classes: Vec<Vec<(usize, usize)>> = labeled_connected(m).iter().map(brute_canonical).collect();
        classes.sort();
        classes.dedup();
        let enumerated = enumerate_mechanisms(m).unwrap();
        assert_eq!(classes.len(), enumerated.len(), "m={m}");
        let labeled: u64 = enumerated.iter().map(|c| c.labeled_count).sum();
        assert_eq!(labeled as usize, labeled_connected(m).len());
    }
}

#[test]
fn circuit_rank_cases_and_rigid_rank_three_bound() {
    for m in 1..=5 {
        let graphs: Vec<DirectedGraph> = if m == 1 {
            vec![DirectedGraph::single_vertex()]
        } else {
            enumerate_mechanisms(m).unwrap().iter().map(|c| c.graph()).collect()
        };
        for g in graphs {
            let c = g.circuit_rank().unwrap();
            let class = classify(&g).unwrap();
            assert_eq!(c == 0, class == MechanismClass::SingleVertex, "{g}");
            assert_eq!(c == 1, class == MechanismClass::Cycle, "{g}");
            // a star with k petals is the most specific tag for a k-rose
            let two_rose = class == MechanismClass::Rose(2) || (class == MechanismClass::Star && m == 3);
            assert_eq!(c == 2, class == MechanismClass::ChordedCycle || two_rose, "{g}");
            if c == 3 && is_rigid(&g) {
                assert!(m <= 4, "{g}");
            }
        }
    }
}

#[test]
fn collapse_keeps_connectivity_and_out_degrees() {
    for m in 2..=5 {
        for c in enumerate_mechanisms(m).unwrap() {
            let g = c.graph();
            for e in collapsible_edges(&g) {
                let (h, map) = collapse_with_map(&g, e).unwrap();
                assert!(h.is_connected(), "{g} / {e}");
                for v in 0..m {
                    if let Some(w) = map[v] {
                        assert_eq!(h.out_degree(w), g.out_degree(v));
                    }
                }
            }
        }
    }
}

#[test]
fn augmentation_raises_circuit_rank_by_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 300 {
        let m = rng.gen_range(2..=6);
        let g = connected_graph(&mut rng, m);
        // a random closed walk's edges give a connected subgraph
        let start = rng.gen_range(0..m);
        let back = g.shortest_path(start, (start + 1) % m).unwrap();
        let forth = g.shortest_path((start + 1) % m, start).unwrap();
        let walk: Vec<Edge> = back.windows(2).chain(forth.windows(2)).map(|w| Edge::new(w[0], w[1])).collect();
        let h = Subgraph::from_edges(&g, &walk).unwrap();
        if h.vertex_set().count_ones() as usize == m && h.edges().len() == g.edge_count() {
            continue;
        }
        let path = find_augmenting_path(&g, &h).unwrap();
        let k = h.augmented(&g, &path).unwrap();
        let rank = |s: &Subgraph| s.to_graph(&g).unwrap().circuit_rank().unwrap();
        assert_eq!(rank(&k), rank(&h) + 1, "{g}");
        checked += 1;
    }
}

fn arb_connected() -> impl Strategy<Value = DirectedGraph> {
    (2usize..=6, any::<u64>()).prop_map(|(m, seed)| connected_graph(&mut ChaCha8Rng::seed_from_u64(seed), m))
}

fn arb_perm(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn classification_and_key_survive_relabeling((g, perm) in arb_connected().prop_flat_map(|g| {
        let m = g.vertex_count();
        (Just(g), arb_perm(m))
    })) {
        let h = relabel(&g, &perm);
        prop_assert_eq!(classify(&g).unwrap(), classify(&h).unwrap());
        prop_assert_eq!(canonical_key(&g).unwrap(), canonical_key(&h).unwrap());
        prop_assert_eq!(g.circuit_rank().unwrap(), h.circuit_rank().unwrap());
    }

    #[test]
    fn enumerated_arborescences_are_valid(g in arb_connected(), root in 0usize..6) {
        let root = root % g.vertex_count();
        for t in enumerate_arborescences(&g, root).unwrap() {
            prop_assert!(t.is_valid_in(&g));
            prop_assert_eq!(t.edges.len() + 1, g.vertex_count());
        }
    }

    #[test]
    fn diameter_matches_breadth_first_oracle(g in arb_connected()) {
        let tau = gmech::complexity::tau_profile(&g).unwrap().tau;
        prop_assert_eq!(tau, oracle_tau(&g));
    }
}
