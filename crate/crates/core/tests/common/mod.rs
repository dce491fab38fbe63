//! Independent reference implementations. Nothing here calls the library's
//! price, arborescence, canonical-form or influence code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gmech::price::EdgeWeights;
use gmech::{DirectedGraph, Edge, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Plain edge-list strong connectivity by repeated relaxation.
pub fn strongly_connected(m: usize, edges: &[(usize, usize)]) -> bool {
    let reach = |forward: bool| {
        let mut seen = vec![false; m];
        seen[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in edges {
                let (s, t) = if forward { (a, b) } else { (b, a) };
                if seen[s] && !seen[t] {
                    seen[t] = true;
                    changed = true;
                }
            }
        }
        seen.into_iter().all(|x| x)
    };
    m == 1 || (reach(true) && reach(false))
}

/// Every ordered pair, listed lexicographically.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// All strongly connected labeled digraphs on `m` vertices.
pub fn labeled_connected(m: usize) -> Vec<DirectedGraph> {
    if m == 1 {
        return vec![DirectedGraph::single_vertex()];
    }
    let slots = pairs(m);
    (0u64..1 << slots.len())
        .filter_map(|mask| {
            let edges: Vec<(usize, usize)> = (0..slots.len()).filter(|k| mask >> k & 1 == 1).map(|k| slots[k]).collect();
            strongly_connected(m, &edges)
                .then(|| DirectedGraph::new(m, edges.iter().map(|&(a, b)| Edge::new(a, b))).unwrap())
        })
        .collect()
}

fn edge_pairs(g: &DirectedGraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.from, e.to)).collect()
}

/// Lexicographically least sorted edge list over all relabelings.
pub fn brute_canonical(g: &DirectedGraph) -> Vec<(usize, usize)> {
    let m = g.vertex_count();
    let mut best: Option<Vec<(usize, usize)>> = None;
    for perm in permutations(m) {
        let mut image: Vec<(usize, usize)> = edge_pairs(g).iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        image.sort();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    }
    best.unwrap_or_default()
}

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

pub fn relabel(g: &DirectedGraph, perm: &[usize]) -> DirectedGraph {
    DirectedGraph::new(g.vertex_count(), g.edges().iter().map(|e| Edge::new(perm[e.from], perm[e.to]))).unwrap()
}

/// Arborescences toward `root`, found by testing every `(m-1)`-subset of
/// edges. Returned as sorted lists of edge indices into `g.edges()`.
pub fn brute_arborescences(g: &DirectedGraph, root: usize) -> Vec<Vec<usize>> {
    let m = g.vertex_count();
    let edges = g.edges();
    let k = m - 1;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    fn rec(edges: &[Edge], m: usize, root: usize, k: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == k {
            let mut succ = vec![usize::MAX; m];
            for &c in chosen.iter() {
                let e = edges[c];
                if e.from == root || succ[e.from] != usize::MAX {
                    return;
                }
                succ[e.from] = e.to;
            }
            let reaches = (0..m).all(|v| {
                let mut cur = v;
                for _ in 0..m {
                    if cur == root {
                        return true;
                    }
                    cur = succ[cur];
                }
                cur == root
            });
            if reaches {
                out.push(chosen.clone());
            }
            return;
        }
        for c in start..edges.len() {
            chosen.push(c);
            rec(edges, m, root, k, c + 1, chosen, out);
            chosen.pop();
        }
    }
    rec(edges, m, root, k, 0, &mut chosen, &mut out);
    out
}

/// Determinant by rational Gaussian elimination with row swaps.
pub fn det_rational(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = &a[r][c] / &pivot;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

/// Matrix-tree count of arborescences toward `root`: the principal minor
/// of the out-degree Laplacian with `root` deleted.
pub fn matrix_tree_count(g: &DirectedGraph, root: usize) -> BigInt {
    let m = g.vertex_count();
    let keep: Vec<usize> = (0..m).filter(|&v| v != root).collect();
    let mut lap = vec![vec![Rational::zero(); m]; m];
    for e in g.edges() {
        lap[e.from][e.from] += Rational::one();
        lap[e.from][e.to] -= Rational::one();
    }
    let minor: Vec<Vec<Rational>> = keep.iter().map(|&r| keep.iter().map(|&c| lap[r][c].clone()).collect()).collect();
    let d = det_rational(minor);
    assert!(d.is_integer());
    d.to_integer()
}

/// Tree-sum prices normalized so the first is one.
pub fn oracle_prices(g: &DirectedGraph, b: &EdgeWeights) -> Vec<Rational> {
    let m = g.vertex_count();
    let raw: Vec<Rational> = (0..m)
        .map(|r| {
            brute_arborescences(g, r)
                .iter()
                .map(|t| t.iter().fold(Rational::one(), |acc, &k| acc * &b.values()[k]))
                .fold(Rational::zero(), |acc, x| acc + x)
        })
        .collect();
    raw.iter().map(|p| p / &raw[0]).collect()
}

/// Value inflow minus outflow at each commodity.
pub fn balance_residuals(b: &EdgeWeights, p: &[Rational]) -> Vec<Rational> {
    let g = b.graph();
    let mut res = vec![Rational::zero(); g.vertex_count()];
    for (e, w) in g.edges().iter().zip(b.values()) {
        let flow = &p[e.from] * w;
        res[e.to] += &flow;
        res[e.from] -= &flow;
    }
    res
}

/// Multilinear polynomial in edge indices with integer coefficients.
pub type Poly = BTreeMap<Vec<usize>, i64>;

pub fn tree_poly(g: &DirectedGraph, root: usize) -> Poly {
    let mut p = Poly::new();
    for t in brute_arborescences(g, root) {
        *p.entry(t).or_default() += 1;
    }
    p
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<usize> = ma.iter().chain(mb).copied().collect();
            m.sort_unstable();
            *out.entry(m).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `p = x * a + b` for the variable `x`.
fn split(p: &Poly, x: usize) -> (Poly, Poly) {
    let (mut a, mut b) = (Poly::new(), Poly::new());
    for (m, c) in p {
        if let Some(pos) = m.iter().position(|&v| v == x) {
            let mut rest = m.clone();
            rest.remove(pos);
            a.insert(rest, *c);
        } else {
            b.insert(m.clone(), *c);
        }
    }
    (a, b)
}

/// Edges whose weight can move `p_i / p_j`: the ratio is constant in `x`
/// exactly when `A_i B_j = A_j B_i`.
pub fn oracle_influential(g: &DirectedGraph, i: usize, j: usize) -> BTreeSet<Edge> {
    let (pi, pj) = (tree_poly(g, i), tree_poly(g, j));
    (0..g.edge_count())
        .filter(|&x| {
            let (ai, bi) = split(&pi, x);
            let (aj, bj) = split(&pj, x);
            mul(&ai, &bj) != mul(&aj, &bi)
        })
        .map(|x| g.edges()[x])
        .collect()
}

pub fn oracle_pi(g: &DirectedGraph) -> u32 {
    pairs(g.vertex_count()).into_iter().map(|(i, j)| oracle_influential(g, i, j).len() as u32).max().unwrap_or(0)
}

/// Diameter by breadth-first search from every vertex.
pub fn oracle_tau(g: &DirectedGraph) -> u32 {
    let m = g.vertex_count();
    let mut worst = 0;
    for s in 0..m {
        let mut dist = vec![u32::MAX; m];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for e in g.edges().iter().filter(|e| e.from == v) {
                if dist[e.to] == u32::MAX {
                    dist[e.to] = dist[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        worst = worst.max(*dist.iter().max().unwrap());
    }
    worst
}
