//! Simple loop-free digraphs on commodities.
//!
//! Vertices are `0..m` inside the library. Everything that crosses the
//! process boundary (JSON, `Display`) uses the 1-based labels `1..=m`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Adjacency rows are `u64` bitsets.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub const fn new(from: usize, to: usize) -> Self {
        Edge { from, to }
    }

    pub fn reversed(self) -> Self {
        Edge::new(self.to, self.from)
    }

    /// Builds an edge from 1-based labels.
    pub fn from_labels(from: usize, to: usize) -> Self {
        Edge::new(from - 1, to - 1)
    }

    pub fn labels(self) -> (usize, usize) {
        (self.from + 1, self.to + 1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from + 1, self.to + 1)
    }
}

/// A simple directed graph on `m` vertices: no loops, no parallel edges.
///
/// Edges are kept sorted lexicographically; an edge's position in that
/// order is its *edge index*, used by weights and tree polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    m: usize,
    out: Vec<u64>,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    pub fn new(m: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyGraph);
        }
        if m > MAX_VERTICES {
            return Err(Error::TooManyVertices { m, max: MAX_VERTICES });
        }
        let mut out = vec![0u64; m];
        for e in edges {
            for v in [e.from, e.to] {
                if v >= m {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, m });
                }
            }
            if e.from == e.to {
                return Err(Error::LoopEdge(e.from));
            }
            let bit = 1u64 << e.to;
            if out[e.from] & bit != 0 {
                return Err(Error::DuplicateEdge(e));
            }
            out[e.from] |= bit;
        }
        Ok(Self::from_rows(out))
    }

    /// Builds a graph from 1-based `(i, j)` pairs.
    pub fn from_labels(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(i, j) in pairs {
            for v in [i, j] {
                if v == 0 || v > m {
                    return Err(Error::VertexOutOfRange { vertex: v, m });
                }
            }
            edges.push(Edge::from_labels(i, j));
        }
        Self::new(m, edges)
    }

    fn from_rows(out: Vec<u64>) -> Self {
        let mut edges = Vec::new();
        for (i, &row) in out.iter().enumerate() {
            let mut r = row;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                edges.push(Edge::new(i, j));
                r &= r - 1;
            }
        }
        DirectedGraph { m: out.len(), out, edges }
    }

    /// Decodes a slot bitmask (see [`slot_index`]).
    pub fn from_slot_mask(m: usize, mask: u64) -> Self {
        let mut out = vec![0u64; m];
        let mut rest = mask;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            let e = slot_edge(m, s);
            out[e.from] |= 1 << e.to;
            rest &= rest - 1;
        }
        Self::from_rows(out)
    }

    pub fn slot_mask(&self) -> u64 {
        assert!(self.m <= 8, "slot masks need m <= 8");
        self.edges.iter().fold(0u64, |acc, &e| acc | (1u64 << slot_index(self.m, e)))
    }

    pub fn single_vertex() -> Self {
        Self::from_rows(vec![0])
    }

    /// Star with the money at vertex `money`: edges `money <-> i` for all other `i`.
    pub fn star(m: usize, money: usize) -> Result<Self> {
        if money >= m {
            return Err(Error::VertexOutOfRange { vertex: money + 1, m });
        }
        let edges = (0..m)
            .filter(|&i| i != money)
            .flat_map(|i| [Edge::new(i, money), Edge::new(money, i)]);
        Self::new(m, edges)
    }

    /// The cycle `1 -> 2 -> ... -> m -> 1`.
    pub fn cycle(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Invalid(format!("a cycle needs at least 2 vertices, got {m}")));
        }
        Self::new(m, (0..m).map(|i| Edge::new(i, (i + 1) % m)))
    }

    pub fn complete(m: usize) -> Result<Self> {
        Self::new(m, (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| Edge::new(i, j))))
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from < self.m && to < self.m && self.out[from] >> to & 1 == 1
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn out_row(&self, v: usize) -> u64 {
        self.out[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.out.iter().filter(|row| *row >> v & 1 == 1).count()
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.out[v])
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&u| self.out[u] >> v & 1 == 1)
    }

    fn all_vertices(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    fn reach_forward(&self, start: usize) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.out[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    fn reach_backward(&self, start: usize) -> u64 {
        let mut seen = 1u64 << start;
        loop {
            let mut grew = false;
            for u in 0..self.m {
                if seen >> u & 1 == 0 && self.out[u] & seen != 0 {
                    seen |= 1 << u;
                    grew = true;
                }
            }
            if !grew {
                return seen;
            }
        }
    }

    /// Strong connectivity: a directed path for every ordered pair of
    /// distinct vertices. A single vertex is connected.
    pub fn is_connected(&self) -> bool {
        let all = self.all_vertices();
        self.reach_forward(0) == all && self.reach_backward(0) == all
    }

    pub fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.m];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for v in self.successors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Number of edges on a shortest directed `i -> j` path.
    pub fn shortest_path_length(&self, i: usize, j: usize) -> Result<u32> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SameVertex(i));
        }
        self.ensure_connected()?;
        self.distances_from(i)[j].ok_or(Error::Disconnected)
    }

    /// Lexicographically least shortest `i -> j` path, as a vertex sequence.
    pub fn shortest_path(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        let len = self.shortest_path_length(i, j)? as usize;
        // distance-to-target lets us walk greedily, taking the smallest
        // successor that stays on some shortest path
        let to_target = self.reversed().distances_from(j);
        let mut path = vec![i];
        let mut cur = i;
        for step in 0..len {
            let remaining = (len - step - 1) as u32;
            let next = self
                .successors(cur)
                .find(|&v| to_target[v] == Some(remaining))
                .ok_or(Error::Disconnected)?;
            path.push(next);
            cur = next;
        }
        Ok(path)
    }

    pub fn reversed(&self) -> DirectedGraph {
        let mut out = vec![0u64; self.m];
        for e in &self.edges {
            out[e.to] |= 1 << e.from;
        }
        Self::from_rows(out)
    }

    /// Circuit rank `e - v + 1`.
    pub fn circuit_rank(&self) -> Result<usize> {
        self.ensure_connected()?;
        Ok(self.edges.len() + 1 - self.m)
    }

    /// Applies `perm` (old vertex -> new vertex).
    pub fn relabel(&self, perm: &[usize]) -> DirectedGraph {
        debug_assert_eq!(perm.len(), self.m);
        let mut out = vec![0u64; self.m];
        for e in &self.edges {
            out[perm[e.from]] |= 1 << perm[e.to];
        }
        Self::from_rows(out)
    }

    /// Subgraph on `vertices` (a bitset) using `edges`; vertices are
    /// renumbered in increasing order. Also returns the old-to-new map.
    pub fn restrict(&self, vertices: u64, edges: &[Edge]) -> Result<(DirectedGraph, Vec<Option<usize>>)> {
        let mut map = vec![None; self.m];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if vertices >> v & 1 == 1 {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut mapped = Vec::with_capacity(edges.len());
        for e in edges {
            if !self.has_edge(e.from, e.to) {
                return Err(Error::Invalid(format!("{e} is not an edge of the host graph")));
            }
            match (map[e.from], map[e.to]) {
                (Some(a), Some(b)) => mapped.push(Edge::new(a, b)),
                _ => return Err(Error::Invalid(format!("{e} leaves the chosen vertex set"))),
            }
        }
        Ok((DirectedGraph::new(next, mapped)?, map))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.m {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v + 1, m: self.m })
        }
    }

    /// 1-based edge pairs, the interchange representation.
    pub fn label_pairs(&self) -> Vec<[usize; 2]> {
        self.edges.iter().map(|e| [e.from + 1, e.to + 1]).collect()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { m: self.m, edges: self.label_pairs() }
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} {{", self.m)?;
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", e.from + 1, e.to + 1)?;
        }
        write!(f, "}}")
    }
}

/// `{"m": 3, "edges": [[1, 2], [2, 3], [3, 1]]}` with 1-based vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub m: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for DirectedGraph {
    type Error = Error;

    fn try_from(value: GraphJson) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = value.edges.iter().map(|p| (p[0], p[1])).collect();
        DirectedGraph::from_labels(value.m, &pairs)
    }
}

impl From<&DirectedGraph> for GraphJson {
    fn from(g: &DirectedGraph) -> Self {
        g.to_json()
    }
}

/// Position of edge `e` among the `m(m-1)` ordered pairs in lexicographic order.
pub fn slot_index(m: usize, e: Edge) -> usize {
    e.from * (m - 1) + if e.to > e.from { e.to - 1 } else { e.to }
}

pub fn slot_edge(m: usize, slot: usize) -> Edge {
    let from = slot / (m - 1);
    let r = slot % (m - 1);
    Edge::new(from, if r >= from { r + 1 } else { r })
}

pub(crate) fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(b)
        }
    })
}
