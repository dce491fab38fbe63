//! Prices of a G-mechanism.
//!
//! Two independent routes to the same ray: summing arborescence weights
//! per root (the tree formula), and solving the value-conservation system
//! `sum_i p_i b_ij = p_j sum_i b_ji` for its one-dimensional kernel. Both
//! run in exact rational arithmetic and normalise to `p_1 = 1`.
//!
//! A third, approximate-free but probabilistic, route evaluates prices
//! over the prime field via Laplacian minors; the complexity screen uses it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arborescence::arborescence_masks;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::graph::{bits, DirectedGraph, Edge};
use crate::linalg::{det_bigint, det_fp, rational_kernel};
use crate::rational::{format_rational, parse_rational, Rational};

/// Strictly positive weight on every edge of a graph (the aggregate offer `b`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeights {
    graph: DirectedGraph,
    // indexed by edge index
    weights: Vec<Rational>,
}

impl EdgeWeights {
    pub fn new(graph: &DirectedGraph, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != graph.edge_count() {
            return Err(Error::Invalid(format!(
                "expected {} weights, got {}",
                graph.edge_count(),
                weights.len()
            )));
        }
        for (e, w) in graph.edges().iter().zip(&weights) {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight(*e));
            }
        }
        Ok(EdgeWeights { graph: graph.clone(), weights })
    }

    pub fn from_map(graph: &DirectedGraph, map: &BTreeMap<Edge, Rational>) -> Result<Self> {
        for e in map.keys() {
            if graph.edge_index(*e).is_none() {
                return Err(Error::WeightOffGraph(*e));
            }
        }
        let weights = graph
            .edges()
            .iter()
            .map(|e| map.get(e).cloned().ok_or(Error::MissingWeight(*e)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, weights)
    }

    /// Every edge gets `value`.
    pub fn uniform(graph: &DirectedGraph, value: Rational) -> Result<Self> {
        Self::new(graph, vec![value; graph.edge_count()])
    }

    /// Weights from 1-based `(i, j, w)` triples.
    pub fn from_labels(graph: &DirectedGraph, entries: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, j, w) in entries {
            if *i == 0 || *j == 0 {
                return Err(Error::VertexOutOfRange { vertex: 0, m: graph.vertex_count() });
            }
            map.insert(Edge::from_labels(*i, *j), w.clone());
        }
        Self::from_map(graph, &map)
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn values(&self) -> &[Rational] {
        &self.weights
    }

    pub fn get(&self, e: Edge) -> Option<&Rational> {
        self.graph.edge_index(e).map(|k| &self.weights[k])
    }

    /// Out-weight `sum_j b_ij` of vertex `i`.
    pub fn out_weight(&self, i: usize) -> Rational {
        self.graph
            .edges()
            .iter()
            .zip(&self.weights)
            .filter(|(e, _)| e.from == i)
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        Self::new(&self.graph, self.weights.iter().map(|w| w * c).collect())
    }

    /// `b_ij -> lambda_i b_ij` for a positive diagonal `lambda`.
    pub fn row_scaled(&self, lambda: &[Rational]) -> Result<Self> {
        let weights = self
            .graph
            .edges()
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| w * &lambda[e.from])
            .collect();
        Self::new(&self.graph, weights)
    }

    pub fn with_weight(&self, e: Edge, value: Rational) -> Result<Self> {
        let k = self.graph.edge_index(e).ok_or(Error::WeightOffGraph(e))?;
        let mut weights = self.weights.clone();
        weights[k] = value;
        Self::new(&self.graph, weights)
    }

    pub fn to_json(&self) -> WeightsJson {
        WeightsJson {
            weights: self
                .graph
                .edges()
                .iter()
                .zip(&self.weights)
                .map(|(e, w)| (format!("{},{}", e.from + 1, e.to + 1), format_rational(w)))
                .collect(),
        }
    }
}

/// `{"weights": {"1,2": "3/4", ...}}`, 1-based edge keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsJson {
    pub weights: BTreeMap<String, String>,
}

impl WeightsJson {
    pub fn to_map(&self, m: usize) -> Result<BTreeMap<Edge, Rational>> {
        self.weights.iter().map(|(k, v)| Ok((parse_edge_key(k, m)?, parse_rational(v)?))).collect()
    }

    pub fn into_weights(&self, graph: &DirectedGraph) -> Result<EdgeWeights> {
        EdgeWeights::from_map(graph, &self.to_map(graph.vertex_count())?)
    }
}

/// Parses an `"i,j"` key with 1-based labels.
pub fn parse_edge_key(key: &str, m: usize) -> Result<Edge> {
    let bad = || Error::Invalid(format!("edge key {key:?} is not of the form \"i,j\""));
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    for v in [i, j] {
        if v == 0 || v > m {
            return Err(Error::VertexOutOfRange { vertex: v, m });
        }
    }
    if i == j {
        return Err(Error::LoopEdge(i - 1));
    }
    Ok(Edge::from_labels(i, j))
}

/// `p_i` as a sum of squarefree monomials, one per arborescence rooted at `i`.
/// Monomials are bitmasks over the graph's edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePolynomial {
    root: usize,
    variables: Vec<Edge>,
    terms: Vec<u64>,
}

impl TreePolynomial {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn variables(&self) -> &[Edge] {
        &self.variables
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Each term as its list of edges.
    pub fn monomials(&self) -> Vec<Vec<Edge>> {
        self.terms.iter().map(|&t| bits(t).map(|k| self.variables[k]).collect()).collect()
    }

    /// Evaluates at integer edge values (indexed like `variables`).
    pub fn eval_int(&self, values: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|&t| bits(t).fold(BigInt::one(), |acc, k| acc * &values[k]))
            .sum()
    }

    pub fn eval_fp(&self, values: &[Fp]) -> Fp {
        self.terms
            .iter()
            .fold(Fp::ZERO, |acc, &t| acc + bits(t).fold(Fp::ONE, |p, k| p * values[k]))
    }
}

impl fmt::Display for TreePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.variables.iter().any(|e| e.from >= 9 || e.to >= 9);
        for (n, mono) in self.monomials().iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            for (k, e) in mono.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                if wide {
                    write!(f, "b[{},{}]", e.from + 1, e.to + 1)?;
                } else {
                    write!(f, "b{}{}", e.from + 1, e.to + 1)?;
                }
            }
            if mono.is_empty() {
                write!(f, "1")?;
            }
        }
        Ok(())
    }
}

pub fn tree_price_polynomial(g: &DirectedGraph, root: usize) -> Result<TreePolynomial> {
    Ok(TreePolynomial { root, variables: g.edges().to_vec(), terms: arborescence_masks(g, root)? })
}

pub fn tree_price_polynomials(g: &DirectedGraph) -> Result<Vec<TreePolynomial>> {
    (0..g.vertex_count()).map(|r| tree_price_polynomial(g, r)).collect()
}

/// A representative of the price ray, normalised so that `p_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceVector {
    prices: Vec<Rational>,
}

impl PriceVector {
    /// Normalises any positive representative.
    pub fn from_ray(raw: Vec<Rational>) -> Result<Self> {
        if raw.is_empty() || raw.iter().any(|p| !p.is_positive()) {
            return Err(Error::Invalid("price ray must be strictly positive".into()));
        }
        let first = raw[0].clone();
        Ok(PriceVector { prices: raw.into_iter().map(|p| p / &first).collect() })
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.prices
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.prices[i]
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn ratio(&self, i: usize, j: usize) -> Rational {
        &self.prices[i] / &self.prices[j]
    }

    pub fn dot(&self, v: &[Rational]) -> Rational {
        self.prices.iter().zip(v).map(|(p, x)| p * x).sum()
    }

    /// `sum_i p_i b_ij - p_j sum_i b_ji` for every `j`; all zero at a solution.
    pub fn balance_residuals(&self, b: &EdgeWeights) -> Vec<Rational> {
        let m = self.prices.len();
        let mut inflow = vec![Rational::zero(); m];
        let mut outflow = vec![Rational::zero(); m];
        for (e, w) in b.graph().edges().iter().zip(b.values()) {
            inflow[e.to] += &self.prices[e.from] * w;
            outflow[e.from] += w.clone();
        }
        (0..m).map(|j| &inflow[j] - &self.prices[j] * &outflow[j]).collect()
    }

    pub fn to_json(&self) -> PricesJson {
        PricesJson {
            prices: self.prices.iter().map(format_rational).collect(),
            normalization: "p1=1".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PricesJson {
    pub prices: Vec<String>,
    pub normalization: String,
}

/// Integer edge values `b_e * D` for the common denominator `D`. Prices
/// are homogeneous of degree `m - 1`, so the factor cancels on normalising.
fn cleared_weights(b: &EdgeWeights) -> Vec<BigInt> {
    let d = b.values().iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    b.values().iter().map(|w| w.numer() * (&d / w.denom())).collect()
}

fn check_weights(g: &DirectedGraph, b: &EdgeWeights) -> Result<()> {
    if b.graph() != g {
        return Err(Error::GraphMismatch);
    }
    g.ensure_connected()
}

/// Prices from the tree formula `p_i = sum_{T rooted at i} prod_{e in T} b_e`.
pub fn prices_by_tree_formula(g: &DirectedGraph, b: &EdgeWeights) -> Result<PriceVector> {
    check_weights(g, b)?;
    let values = cleared_weights(b);
    let raw = tree_price_polynomials(g)?
        .iter()
        .map(|poly| Rational::from_integer(poly.eval_int(&values)))
        .collect();
    PriceVector::from_ray(raw)
}

/// Prices as the kernel of the value-conservation system.
pub fn prices_by_balance_solve(g: &DirectedGraph, b: &EdgeWeights) -> Result<PriceVector> {
    check_weights(g, b)?;
    let m = g.vertex_count();
    // row j: sum_i p_i b_ij - p_j * out(j)
    let mut rows = vec![vec![Rational::zero(); m]; m];
    for (e, w) in g.edges().iter().zip(b.values()) {
        rows[e.to][e.from] += w.clone();
        rows[e.from][e.from] -= w.clone();
    }
    let kernel = rational_kernel(&rows, m);
    if kernel.len() != 1 {
        return Err(Error::KernelDimension(kernel.len()));
    }
    let mut v = kernel.into_iter().next().expect("one vector");
    if v[0].is_negative() {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    PriceVector::from_ray(v).map_err(|_| Error::Invalid("balance kernel is not strictly positive".into()))
}

/// Prices as weighted in-arborescence counts, each read off a Laplacian
/// minor determinant. Exact and much cheaper than expanding the trees.
pub fn prices_by_minors(g: &DirectedGraph, b: &EdgeWeights) -> Result<PriceVector> {
    check_weights(g, b)?;
    let m = g.vertex_count();
    let values = cleared_weights(b);
    let mut lap = vec![vec![BigInt::zero(); m]; m];
    for (e, w) in g.edges().iter().zip(&values) {
        lap[e.from][e.from] += w;
        lap[e.from][e.to] -= w;
    }
    let raw = (0..m)
        .map(|r| {
            let minor: Vec<Vec<BigInt>> = (0..m)
                .filter(|&i| i != r)
                .map(|i| (0..m).filter(|&j| j != r).map(|j| lap[i][j].clone()).collect())
                .collect();
            Rational::from_integer(det_bigint(minor))
        })
        .collect();
    PriceVector::from_ray(raw)
}

/// `p_i / p_j`, independent of normalisation.
pub fn price_ratio(g: &DirectedGraph, b: &EdgeWeights, i: usize, j: usize) -> Result<Rational> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    if i == j {
        return Err(Error::SameVertex(i));
    }
    Ok(prices_by_minors(g, b)?.ratio(i, j))
}

/// Unnormalised prices over the prime field: `p_r` is the determinant of
/// the weighted out-Laplacian with row and column `r` removed.
pub fn prices_mod_p(g: &DirectedGraph, weights: &[Fp]) -> Vec<Fp> {
    let m = g.vertex_count();
    let mut lap = vec![vec![Fp::ZERO; m]; m];
    for (e, &w) in g.edges().iter().zip(weights) {
        lap[e.from][e.from] = lap[e.from][e.from] + w;
        lap[e.from][e.to] = lap[e.from][e.to] - w;
    }
    (0..m)
        .map(|r| {
            let minor: Vec<Vec<Fp>> = (0..m)
                .filter(|&i| i != r)
                .map(|i| (0..m).filter(|&j| j != r).map(|j| lap[i][j]).collect())
                .collect();
            det_fp(minor)
        })
        .collect()
}

/// A nonzero multiple of [`prices_mod_p`], found by one inverse-free
/// elimination on the balance system instead of `m` determinants. Only
/// ratios are meaningful.
pub fn price_ray_mod_p(g: &DirectedGraph, weights: &[Fp]) -> Vec<Fp> {
    let m = g.vertex_count();
    if m == 1 {
        return vec![Fp::ONE];
    }
    // row j: sum_i p_i b_ij - p_j out(j)
    let mut a = vec![vec![Fp::ZERO; m]; m];
    for (e, &w) in g.edges().iter().zip(weights) {
        a[e.to][e.from] = a[e.to][e.from] + w;
        a[e.from][e.from] = a[e.from][e.from] - w;
    }
    for k in 0..m - 1 {
        let Some(p) = (k..m).find(|&r| !a[r][k].is_zero()) else {
            return prices_mod_p(g, weights);
        };
        a.swap(k, p);
        for i in k + 1..m {
            if a[i][k].is_zero() {
                continue;
            }
            let (f, piv) = (a[i][k], a[k][k]);
            for j in k..m {
                a[i][j] = a[i][j] * piv - a[k][j] * f;
            }
        }
    }
    // back-substitute with the last coordinate free, clearing each pivot
    // by rescaling the partial solution
    let mut p = vec![Fp::ZERO; m];
    p[m - 1] = Fp::ONE;
    for k in (0..m - 1).rev() {
        let s = (k + 1..m).fold(Fp::ZERO, |acc, j| acc + a[k][j] * p[j]);
        let piv = a[k][k];
        for v in p.iter_mut().skip(k + 1) {
            *v = *v * piv;
        }
        p[k] = -s;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn chorded_triangle() -> DirectedGraph {
        DirectedGraph::from_labels(3, &[(1, 3), (3, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn prices(v: &PriceVector) -> Vec<Rational> {
        v.as_slice().to_vec()
    }

    #[test]
    fn chorded_triangle_polynomials() {
        let t0 = chorded_triangle();
        assert_eq!(tree_price_polynomial(&t0, 2).unwrap().to_string(), "b12*b23 + b13*b23");
        assert_eq!(tree_price_polynomial(&t0, 0).unwrap().to_string(), "b23*b31");
        assert_eq!(tree_price_polynomial(&t0, 1).unwrap().to_string(), "b12*b31");
        let c3 = DirectedGraph::cycle(3).unwrap();
        assert_eq!(tree_price_polynomial(&c3, 0).unwrap().to_string(), "b23*b31");
    }

    #[test]
    fn tree_formula_examples() {
        let t0 = chorded_triangle();
        let ones = EdgeWeights::uniform(&t0, int(1)).unwrap();
        assert_eq!(prices(&prices_by_tree_formula(&t0, &ones).unwrap()), vec![int(1), int(1), int(2)]);

        let b = EdgeWeights::from_labels(&t0, &[(1, 2, int(2)), (1, 3, int(1)), (2, 3, int(3)), (3, 1, int(1))]).unwrap();
        assert_eq!(prices(&prices_by_tree_formula(&t0, &b).unwrap()), vec![int(1), ratio(2, 3), int(3)]);

        let c3 = DirectedGraph::cycle(3).unwrap();
        let b = EdgeWeights::from_labels(&c3, &[(1, 2, int(2)), (2, 3, int(3)), (3, 1, int(6))]).unwrap();
        assert_eq!(prices(&prices_by_tree_formula(&c3, &b).unwrap()), vec![int(1), ratio(2, 3), ratio(1, 3)]);
    }

    #[test]
    fn balance_solve_examples() {
        let star = DirectedGraph::star(3, 2).unwrap();
        let b = EdgeWeights::from_labels(&star, &[(1, 3, int(1)), (3, 1, int(2)), (2, 3, int(4)), (3, 2, int(2))]).unwrap();
        let p = prices_by_balance_solve(&star, &b).unwrap();
        assert_eq!(prices(&p), vec![int(1), ratio(1, 4), ratio(1, 2)]);
        assert!(p.balance_residuals(&b).iter().all(Zero::is_zero));
        assert_eq!(p, prices_by_tree_formula(&star, &b).unwrap());

        let pair = DirectedGraph::cycle(2).unwrap();
        let b = EdgeWeights::from_labels(&pair, &[(1, 2, int(3)), (2, 1, int(5))]).unwrap();
        assert_eq!(prices(&prices_by_balance_solve(&pair, &b).unwrap()), vec![int(1), ratio(3, 5)]);
    }

    #[test]
    fn prime_field_ray_is_proportional_to_minors() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let graphs = [chorded_triangle(), DirectedGraph::complete(5).unwrap(), DirectedGraph::star(4, 1).unwrap()];
        for g in &graphs {
            for _ in 0..20 {
                let w: Vec<Fp> = (0..g.edge_count()).map(|_| Fp::random_nonzero(&mut rng)).collect();
                let full = prices_mod_p(g, &w);
                let ray = price_ray_mod_p(g, &w);
                for i in 0..full.len() {
                    assert_eq!(full[i] * ray[0], ray[i] * full[0]);
                }
                assert!(ray.iter().all(|v| !v.is_zero()));
            }
        }
    }

    #[test]
    fn both_routes_agree_on_examples() {
        let t0 = chorded_triangle();
        let b = EdgeWeights::from_labels(&t0, &[(1, 2, int(2)), (1, 3, int(1)), (2, 3, int(3)), (3, 1, int(1))]).unwrap();
        assert_eq!(prices_by_tree_formula(&t0, &b).unwrap(), prices_by_balance_solve(&t0, &b).unwrap());
        assert_eq!(prices_by_tree_formula(&t0, &b).unwrap(), prices_by_minors(&t0, &b).unwrap());
        let k4 = DirectedGraph::complete(4).unwrap();
        let w: Vec<Rational> = (0..12).map(|k| ratio(k + 1, 13 - k)).collect();
        let b = EdgeWeights::new(&k4, w).unwrap();
        assert_eq!(prices_by_tree_formula(&k4, &b).unwrap(), prices_by_minors(&k4, &b).unwrap());
    }

    #[test]
    fn ratio_examples() {
        let star = DirectedGraph::star(3, 2).unwrap();
        let b = EdgeWeights::from_labels(&star, &[(1, 3, int(1)), (3, 1, int(2)), (2, 3, int(4)), (3, 2, int(2))]).unwrap();
        // b31 b23 / (b13 b32) = 2*4 / (1*2)
        assert_eq!(price_ratio(&star, &b, 0, 1).unwrap(), int(4));

        let c3 = DirectedGraph::cycle(3).unwrap();
        let b = EdgeWeights::from_labels(&c3, &[(1, 2, int(2)), (2, 3, int(3)), (3, 1, int(6))]).unwrap();
        assert_eq!(price_ratio(&c3, &b, 0, 1).unwrap(), ratio(3, 2));
        let scaled = b.scaled(&int(7)).unwrap();
        assert_eq!(price_ratio(&c3, &scaled, 0, 1).unwrap(), ratio(3, 2));
        assert_eq!(price_ratio(&c3, &b, 1, 1), Err(Error::SameVertex(1)));
    }

    #[test]
    fn weights_validation() {
        let c3 = DirectedGraph::cycle(3).unwrap();
        assert_eq!(
            EdgeWeights::from_labels(&c3, &[(1, 2, int(0)), (2, 3, int(1)), (3, 1, int(1))]),
            Err(Error::NonPositiveWeight(Edge::from_labels(1, 2)))
        );
        assert_eq!(
            EdgeWeights::from_labels(&c3, &[(1, 2, int(1)), (2, 3, int(1))]),
            Err(Error::MissingWeight(Edge::from_labels(3, 1)))
        );
        assert_eq!(
            EdgeWeights::from_labels(&c3, &[(1, 2, int(1)), (2, 3, int(1)), (3, 1, int(1)), (2, 1, int(1))]),
            Err(Error::WeightOffGraph(Edge::from_labels(2, 1)))
        );
    }

    #[test]
    fn weights_json() {
        let c3 = DirectedGraph::cycle(3).unwrap();
        let json: WeightsJson = serde_json::from_str(r#"{"weights":{"1,2":"2","2,3":"0.5","3,1":"6/4"}}"#).unwrap();
        let b = json.into_weights(&c3).unwrap();
        assert_eq!(b.get(Edge::from_labels(2, 3)).unwrap(), &ratio(1, 2));
        assert_eq!(b.to_json().weights["3,1"], "3/2");
        let bad: WeightsJson = serde_json::from_str(r#"{"weights":{"1,1":"2"}}"#).unwrap();
        assert!(bad.to_map(3).is_err());
    }

    #[test]
    fn prime_field_prices_match_integer_trees() {
        let k4 = DirectedGraph::complete(4).unwrap();
        let ints: Vec<BigInt> = (1..=12).map(BigInt::from).collect();
        let fps: Vec<Fp> = (1..=12).map(|v| Fp::new(v as u64)).collect();
        let fp_prices = prices_mod_p(&k4, &fps);
        for (r, poly) in tree_price_polynomials(&k4).unwrap().iter().enumerate() {
            let exact = poly.eval_int(&ints);
            assert_eq!(fp_prices[r], Fp::from_i128(i128::try_from(exact).unwrap()));
        }
    }

    #[test]
    fn price_json_shape() {
        let t0 = chorded_triangle();
        let b = EdgeWeights::from_labels(&t0, &[(1, 2, int(2)), (1, 3, int(1)), (2, 3, int(3)), (3, 1, int(1))]).unwrap();
        let json = prices_by_tree_formula(&t0, &b).unwrap().to_json();
        assert_eq!(json.prices, vec!["1", "2/3", "3"]);
        assert_eq!(json.normalization, "p1=1");
    }
}
