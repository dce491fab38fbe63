//! Structural machinery: classification, collapses, augmenting paths.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{CollapseFailure, Error, Result};
use crate::graph::{bits, DirectedGraph, Edge};

/// Most specific structural tag of a connected graph.
///
/// Precedence when tags overlap: Star, Rose, ChordedCycle, Cycle,
/// Complete, SingleVertex. A 1-rose is a Cycle, so the bidirected pair
/// on two vertices is a Cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MechanismClass {
    SingleVertex,
    Cycle,
    ChordedCycle,
    Rose(usize),
    Star,
    Complete,
    Other,
}

impl MechanismClass {
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MechanismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismClass::SingleVertex => write!(f, "single_vertex"),
            MechanismClass::Cycle => write!(f, "cycle"),
            MechanismClass::ChordedCycle => write!(f, "chorded_cycle"),
            MechanismClass::Rose(k) => write!(f, "rose({k})"),
            MechanismClass::Star => write!(f, "star"),
            MechanismClass::Complete => write!(f, "complete"),
            MechanismClass::Other => write!(f, "other"),
        }
    }
}

impl Serialize for MechanismClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Center and petal count if `g` is a k-rose with k >= 2.
fn rose_center(g: &DirectedGraph) -> Option<(usize, usize)> {
    let m = g.vertex_count();
    let mut center = None;
    for v in 0..m {
        let (o, i) = (g.out_degree(v), g.in_degree(v));
        if o == 1 && i == 1 {
            continue;
        }
        if o != i || o < 2 || center.is_some() {
            return None;
        }
        center = Some(v);
    }
    // strong connectivity forces every petal walk back through the center
    center.map(|c| (c, g.out_degree(c)))
}

pub fn classify(g: &DirectedGraph) -> Result<MechanismClass> {
    g.ensure_connected()?;
    let m = g.vertex_count();
    let e = g.edge_count();
    if m == 1 {
        return Ok(MechanismClass::SingleVertex);
    }
    if let Some((c, k)) = rose_center(g) {
        let is_star = e == 2 * (m - 1) && (0..m).filter(|&v| v != c).all(|v| g.has_edge(v, c) && g.has_edge(c, v));
        return Ok(if is_star { MechanismClass::Star } else { MechanismClass::Rose(k) });
    }
    let out_special: Vec<usize> = (0..m).filter(|&v| g.out_degree(v) != 1).collect();
    let in_special: Vec<usize> = (0..m).filter(|&v| g.in_degree(v) != 1).collect();
    if out_special.len() == 1
        && in_special.len() == 1
        && g.out_degree(out_special[0]) == 2
        && g.in_degree(in_special[0]) == 2
        && out_special[0] != in_special[0]
    {
        return Ok(MechanismClass::ChordedCycle);
    }
    if out_special.is_empty() && in_special.is_empty() {
        return Ok(MechanismClass::Cycle);
    }
    if e == m * (m - 1) {
        return Ok(MechanismClass::Complete);
    }
    Ok(MechanismClass::Other)
}

/// Checks the three collapsibility conditions for `e = ij`.
pub fn collapse_check(g: &DirectedGraph, e: Edge) -> std::result::Result<(), CollapseFailure> {
    if !g.has_edge(e.from, e.to) {
        return Err(CollapseFailure::NotAnEdge);
    }
    if g.out_degree(e.from) != 1 {
        return Err(CollapseFailure::SourceNotOrdinary);
    }
    if g.has_edge(e.to, e.from) {
        return Err(CollapseFailure::ReverseEdgePresent);
    }
    if let Some(k) = (0..g.vertex_count()).find(|&k| g.has_edge(k, e.from) && g.has_edge(k, e.to)) {
        return Err(CollapseFailure::CoveredBy(k));
    }
    Ok(())
}

pub fn is_collapsible(g: &DirectedGraph, e: Edge) -> bool {
    collapse_check(g, e).is_ok()
}

/// The `ij`-collapse: drop `i` and `ij`, redirect every `li` to `lj`.
/// Vertices above `i` shift down by one; the second value maps old
/// vertices to new ones.
pub fn collapse_with_map(g: &DirectedGraph, e: Edge) -> Result<(DirectedGraph, Vec<Option<usize>>)> {
    collapse_check(g, e).map_err(|reason| Error::NotCollapsible { edge: e, reason })?;
    let m = g.vertex_count();
    let map: Vec<Option<usize>> = (0..m)
        .map(|v| match v.cmp(&e.from) {
            std::cmp::Ordering::Less => Some(v),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(v - 1),
        })
        .collect();
    let mut edges = Vec::with_capacity(g.edge_count() - 1);
    for &x in g.edges() {
        if x.from == e.from {
            continue;
        }
        let to = if x.to == e.from { e.to } else { x.to };
        edges.push(Edge::new(map[x.from].expect("kept"), map[to].expect("kept")));
    }
    Ok((DirectedGraph::new(m - 1, edges)?, map))
}

pub fn collapse(g: &DirectedGraph, e: Edge) -> Result<DirectedGraph> {
    collapse_with_map(g, e).map(|(h, _)| h)
}

/// All collapsible edges; the graph is rigid when the list is empty.
pub fn collapsible_edges(g: &DirectedGraph) -> Vec<Edge> {
    g.edges().iter().copied().filter(|&e| is_collapsible(g, e)).collect()
}

pub fn is_rigid(g: &DirectedGraph) -> bool {
    collapsible_edges(g).is_empty()
}

/// A subgraph of a host graph, in the host's labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    vertices: u64,
    edges: Vec<Edge>,
}

impl Subgraph {
    /// Validates that every edge lies in `host` and inside `vertices`.
    pub fn new(host: &DirectedGraph, vertices: &[usize], edges: &[Edge]) -> Result<Self> {
        let mut set = 0u64;
        for &v in vertices {
            host.check_vertex(v)?;
            set |= 1 << v;
        }
        for e in edges {
            if !host.has_edge(e.from, e.to) {
                return Err(Error::NotProperSubgraph(format!("{e} is not an edge of the host")));
            }
            if set >> e.from & 1 == 0 || set >> e.to & 1 == 0 {
                return Err(Error::NotProperSubgraph(format!("{e} leaves the vertex set")));
            }
        }
        let mut edges = edges.to_vec();
        edges.sort();
        edges.dedup();
        Ok(Subgraph { vertices: set, edges })
    }

    /// Vertex set = endpoints of `edges`.
    pub fn from_edges(host: &DirectedGraph, edges: &[Edge]) -> Result<Self> {
        let vertices: Vec<usize> = edges.iter().flat_map(|e| [e.from, e.to]).collect();
        Self::new(host, &vertices, edges)
    }

    pub fn vertex_set(&self) -> u64 {
        self.vertices
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices >> v & 1 == 1
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> Vec<usize> {
        bits(self.vertices).collect()
    }

    /// Compact standalone copy, vertices renumbered increasingly.
    pub fn to_graph(&self, host: &DirectedGraph) -> Result<DirectedGraph> {
        host.restrict(self.vertices, &self.edges).map(|(g, _)| g)
    }

    pub fn is_connected(&self, host: &DirectedGraph) -> bool {
        self.vertices != 0 && self.to_graph(host).map(|g| g.is_connected()).unwrap_or(false)
    }

    /// `self ∪ path`, where `path` is a vertex sequence.
    pub fn augmented(&self, host: &DirectedGraph, path: &[usize]) -> Result<Subgraph> {
        let mut vertices = self.vertices();
        vertices.extend_from_slice(path);
        let mut edges = self.edges.clone();
        edges.extend(path.windows(2).map(|w| Edge::new(w[0], w[1])));
        Subgraph::new(host, &vertices, &edges)
    }
}

/// Shortest augmenting path of `h` in `g`: both endpoints in `h`, all
/// intermediate vertices and all edges outside `h`. Ties are broken by
/// the lexicographic order of the vertex sequence.
pub fn find_augmenting_path(g: &DirectedGraph, h: &Subgraph) -> Result<Vec<usize>> {
    g.ensure_connected()?;
    if !h.is_connected(g) {
        return Err(Error::NotProperSubgraph("subgraph is not connected".into()));
    }
    let m = g.vertex_count();
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if h.vertices == all && h.edges.len() == g.edge_count() {
        return Err(Error::NotProperSubgraph("subgraph equals the whole graph".into()));
    }
    let in_h = |e: Edge| h.edges.binary_search(&e).is_ok();

    fn extend(
        g: &DirectedGraph,
        h: &Subgraph,
        in_h: &dyn Fn(Edge) -> bool,
        path: &mut Vec<usize>,
        len: usize,
    ) -> bool {
        let cur = *path.last().expect("nonempty");
        let steps = path.len() - 1;
        for next in g.successors(cur) {
            let edge = Edge::new(cur, next);
            if in_h(edge) {
                continue;
            }
            if steps + 1 == len {
                if h.contains_vertex(next) {
                    path.push(next);
                    return true;
                }
            } else if !h.contains_vertex(next) && !path.contains(&next) {
                path.push(next);
                if extend(g, h, in_h, path, len) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }

    for len in 1..=m {
        for start in h.vertices() {
            let mut path = vec![start];
            if extend(g, h, &in_h, &mut path, len) {
                return Ok(path);
            }
        }
    }
    Err(Error::NotProperSubgraph("no augmenting path exists".into()))
}
