//! Seeded random instances: connected graphs, positive rational weights.

use num_bigint::BigInt;
use rand::Rng;

use crate::graph::{slot_edge, DirectedGraph, Edge};
use crate::price::EdgeWeights;
use crate::rational::Rational;

/// Default bound on sampled numerators and denominators.
pub const DEFAULT_MAX_VALUE: i64 = 100;

/// Uniform `n/d` with `1 <= n, d <= max`.
pub fn positive_rational<R: Rng + ?Sized>(rng: &mut R, max: i64) -> Rational {
    let n = rng.gen_range(1..=max.max(1));
    let d = rng.gen_range(1..=max.max(1));
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A strongly connected digraph on `m` vertices, by rejection over random
/// edge sets with a random density.
pub fn connected_graph<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DirectedGraph {
    assert!((1..=8).contains(&m), "sampler supports 1..=8 vertices");
    if m == 1 {
        return DirectedGraph::single_vertex();
    }
    let slots = m * (m - 1);
    loop {
        let density: f64 = rng.gen_range(0.25..0.9);
        let edges: Vec<Edge> = (0..slots).filter(|_| rng.gen_bool(density)).map(|s| slot_edge(m, s)).collect();
        let g = DirectedGraph::new(m, edges).expect("slot edges are valid");
        if g.is_connected() {
            return g;
        }
    }
}

pub fn positive_weights<R: Rng + ?Sized>(rng: &mut R, g: &DirectedGraph, max: i64) -> EdgeWeights {
    let values = (0..g.edge_count()).map(|_| positive_rational(rng, max)).collect();
    EdgeWeights::new(g, values).expect("sampled weights are positive")
}
