//! Spanning arborescences oriented toward a root ("trees rooted at i").
//!
//! Enumeration backtracks over one outgoing edge per non-root vertex and
//! rejects choices that close a cycle. Counting goes through the directed
//! matrix-tree theorem instead, so the two serve as checks on each other.

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};
use crate::linalg::det_i128;

/// A spanning in-tree: every non-root vertex has exactly one outgoing edge
/// and following those edges always reaches the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arborescence {
    pub root: usize,
    /// Sorted; exactly `m - 1` edges.
    pub edges: Vec<Edge>,
}

impl Arborescence {
    /// Checks the defining property against `g`.
    pub fn is_valid_in(&self, g: &DirectedGraph) -> bool {
        let m = g.vertex_count();
        if self.edges.len() + 1 != m || self.root >= m {
            return false;
        }
        let mut succ = vec![None; m];
        for e in &self.edges {
            if !g.has_edge(e.from, e.to) || e.from == self.root || succ[e.from].is_some() {
                return false;
            }
            succ[e.from] = Some(e.to);
        }
        (0..m).all(|start| {
            let mut v = start;
            for _ in 0..m {
                if v == self.root {
                    return true;
                }
                match succ[v] {
                    Some(w) => v = w,
                    None => return false,
                }
            }
            v == self.root
        })
    }
}

/// Visits every arborescence rooted at `root` as a successor array.
fn for_each_tree(g: &DirectedGraph, root: usize, mut visit: impl FnMut(&[usize])) {
    let m = g.vertex_count();
    let order: Vec<usize> = (0..m).filter(|&v| v != root).collect();
    let mut succ = vec![usize::MAX; m];

    fn closes_cycle(succ: &[usize], from: usize, to: usize) -> bool {
        let mut v = to;
        loop {
            if v == from {
                return true;
            }
            let next = succ[v];
            if next == usize::MAX {
                return false;
            }
            v = next;
        }
    }

    fn go(g: &DirectedGraph, order: &[usize], depth: usize, succ: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        let Some(&v) = order.get(depth) else {
            visit(succ);
            return;
        };
        for w in g.successors(v) {
            if closes_cycle(succ, v, w) {
                continue;
            }
            succ[v] = w;
            go(g, order, depth + 1, succ, visit);
            succ[v] = usize::MAX;
        }
    }

    go(g, &order, 0, &mut succ, &mut visit);
}

pub fn enumerate_arborescences(g: &DirectedGraph, root: usize) -> Result<Vec<Arborescence>> {
    g.check_vertex(root)?;
    g.ensure_connected()?;
    let mut out = Vec::new();
    for_each_tree(g, root, |succ| {
        let mut edges: Vec<Edge> = succ
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != root)
            .map(|(v, &w)| Edge::new(v, w))
            .collect();
        edges.sort();
        out.push(Arborescence { root, edges });
    });
    out.sort();
    Ok(out)
}

/// Arborescences as bitmasks over `g`'s edge indices. Requires at most 64 edges.
pub fn arborescence_masks(g: &DirectedGraph, root: usize) -> Result<Vec<u64>> {
    g.check_vertex(root)?;
    g.ensure_connected()?;
    if g.edge_count() > 64 {
        return Err(Error::Invalid(format!("{} edges do not fit a 64-bit monomial", g.edge_count())));
    }
    let mut out = Vec::new();
    for_each_tree(g, root, |succ| {
        let mask = succ
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != root)
            .fold(0u64, |acc, (v, &w)| acc | 1u64 << g.edge_index(Edge::new(v, w)).expect("tree edge in graph"));
        out.push(mask);
    });
    out.sort_unstable();
    Ok(out)
}

/// Number of arborescences rooted at `root`, via the determinant of the
/// out-degree Laplacian with `root`'s row and column removed.
pub fn count_arborescences(g: &DirectedGraph, root: usize) -> Result<u128> {
    g.check_vertex(root)?;
    g.ensure_connected()?;
    let m = g.vertex_count();
    let keep: Vec<usize> = (0..m).filter(|&v| v != root).collect();
    let minor: Vec<Vec<i128>> = keep
        .iter()
        .map(|&r| {
            keep.iter()
                .map(|&c| {
                    if r == c {
                        g.out_degree(r) as i128
                    } else if g.has_edge(r, c) {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let det = det_i128(minor);
    u128::try_from(det).map_err(|_| Error::Invalid(format!("negative tree count {det}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: usize, pairs: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::from_labels(m, pairs).unwrap()
    }

    fn labelled(trees: &[Arborescence]) -> Vec<Vec<(usize, usize)>> {
        trees.iter().map(|t| t.edges.iter().map(|e| e.labels()).collect()).collect()
    }

    #[test]
    fn cycle_has_one_tree_per_root() {
        let c3 = DirectedGraph::cycle(3).unwrap();
        let trees = enumerate_arborescences(&c3, 0).unwrap();
        assert_eq!(labelled(&trees), vec![vec![(2, 3), (3, 1)]]);
        let c4 = DirectedGraph::cycle(4).unwrap();
        for r in 0..4 {
            assert_eq!(count_arborescences(&c4, r).unwrap(), 1);
        }
    }

    #[test]
    fn chorded_triangle_root_three() {
        let t0 = g(3, &[(1, 3), (3, 1), (1, 2), (2, 3)]);
        let trees = enumerate_arborescences(&t0, 2).unwrap();
        assert_eq!(labelled(&trees), vec![vec![(1, 2), (2, 3)], vec![(1, 3), (2, 3)]]);
        assert_eq!(count_arborescences(&t0, 2).unwrap(), 2);
    }

    #[test]
    fn star_has_a_single_tree_at_the_money() {
        let star = g(3, &[(1, 3), (3, 1), (2, 3), (3, 2)]);
        let trees = enumerate_arborescences(&star, 2).unwrap();
        assert_eq!(labelled(&trees), vec![vec![(1, 3), (2, 3)]]);
    }

    #[test]
    fn complete_triangle_has_three() {
        let k3 = DirectedGraph::complete(3).unwrap();
        assert_eq!(count_arborescences(&k3, 0).unwrap(), 3);
        assert_eq!(enumerate_arborescences(&k3, 0).unwrap().len(), 3);
    }

    #[test]
    fn every_tree_is_valid() {
        let k5 = DirectedGraph::complete(5).unwrap();
        let trees = enumerate_arborescences(&k5, 3).unwrap();
        assert_eq!(trees.len(), 125);
        assert!(trees.iter().all(|t| t.is_valid_in(&k5)));
    }

    #[test]
    fn disconnected_is_rejected() {
        let open = g(3, &[(1, 2), (2, 3)]);
        assert_eq!(enumerate_arborescences(&open, 2), Err(Error::Disconnected));
        assert_eq!(count_arborescences(&open, 2), Err(Error::Disconnected));
    }
}
