//! Executing a mechanism on trader offers.
//!
//! Offers are placed on the edges of the opportunity graph. The aggregate
//! offer `b` fixes the prices; a trader offering `a` receives
//! `r_j = sum_i (p_i / p_j) a_ij` of each commodity `j`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};
use crate::price::{parse_edge_key, price_ratio, prices_by_minors, EdgeWeights, PriceVector};
use crate::rational::{format_rational, parse_rational, Rational};

/// One trader's offers: a nonnegative amount on each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfferMatrix {
    graph: DirectedGraph,
    // indexed by edge index
    offers: Vec<Rational>,
}

impl OfferMatrix {
    pub fn new(graph: &DirectedGraph, offers: Vec<Rational>) -> Result<Self> {
        if offers.len() != graph.edge_count() {
            return Err(Error::Invalid(format!("expected {} offers, got {}", graph.edge_count(), offers.len())));
        }
        if let Some(k) = offers.iter().position(|a| a.is_negative()) {
            return Err(Error::NegativeOffer(graph.edges()[k]));
        }
        Ok(OfferMatrix { graph: graph.clone(), offers })
    }

    pub fn zero(graph: &DirectedGraph) -> Self {
        OfferMatrix { graph: graph.clone(), offers: vec![Rational::zero(); graph.edge_count()] }
    }

    /// 1-based `(i, j, amount)` entries; unlisted edges are zero.
    pub fn from_labels(graph: &DirectedGraph, entries: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, j, a) in entries {
            let e = Edge::from_labels(*i, *j);
            graph.check_vertex(e.from)?;
            graph.check_vertex(e.to)?;
            map.insert(e, a.clone());
        }
        Self::from_map(graph, &map)
    }

    pub fn from_map(graph: &DirectedGraph, map: &BTreeMap<Edge, Rational>) -> Result<Self> {
        let mut offers = vec![Rational::zero(); graph.edge_count()];
        for (e, a) in map {
            let k = graph.edge_index(*e).ok_or(Error::WeightOffGraph(*e))?;
            offers[k] = a.clone();
        }
        Self::new(graph, offers)
    }

    pub fn single(graph: &DirectedGraph, e: Edge, amount: Rational) -> Result<Self> {
        Self::from_map(graph, &BTreeMap::from([(e, amount)]))
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn values(&self) -> &[Rational] {
        &self.offers
    }

    pub fn get(&self, e: Edge) -> Option<&Rational> {
        self.graph.edge_index(e).map(|k| &self.offers[k])
    }

    pub fn is_zero(&self) -> bool {
        self.offers.iter().all(Zero::is_zero)
    }

    /// `abar_i = sum_j a_ij`.
    pub fn row_sums(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.graph.vertex_count()];
        for (e, a) in self.graph.edges().iter().zip(&self.offers) {
            out[e.from] += a;
        }
        out
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        Self::new(&self.graph, self.offers.iter().map(|a| a * c).collect())
    }

    /// `(lambda a)_ij = lambda_i a_ij`.
    pub fn row_scaled(&self, lambda: &[Rational]) -> Result<Self> {
        let offers = self.graph.edges().iter().zip(&self.offers).map(|(e, a)| a * &lambda[e.from]).collect();
        Self::new(&self.graph, offers)
    }

    pub fn add(&self, other: &OfferMatrix) -> Result<Self> {
        if self.graph != other.graph {
            return Err(Error::GraphMismatch);
        }
        Self::new(&self.graph, self.offers.iter().zip(&other.offers).map(|(a, b)| a + b).collect())
    }

    pub fn to_json(&self) -> OffersJson {
        let offers = self
            .graph
            .edges()
            .iter()
            .zip(&self.offers)
            .filter(|(_, a)| !a.is_zero())
            .map(|(e, a)| {
                let (i, j) = e.labels();
                (format!("{i},{j}"), format_rational(a))
            })
            .collect();
        OffersJson { offers }
    }
}

/// `{"offers": {"1,2": "3/2", ...}}`; omitted edges are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffersJson {
    pub offers: BTreeMap<String, String>,
}

impl OffersJson {
    pub fn into_offers(&self, graph: &DirectedGraph) -> Result<OfferMatrix> {
        let mut map = BTreeMap::new();
        for (k, v) in &self.offers {
            let e = parse_edge_key(k, graph.vertex_count())?;
            if map.insert(e, parse_rational(v)?).is_some() {
                return Err(Error::DuplicateEdge(e));
            }
        }
        OfferMatrix::from_map(graph, &map)
    }
}

/// Edgewise sum of the offers; every edge must end up strictly positive.
pub fn aggregate(offers: &[OfferMatrix]) -> Result<EdgeWeights> {
    let first = offers.first().ok_or_else(|| Error::Invalid("no traders".into()))?;
    let g = first.graph();
    let mut total = vec![Rational::zero(); g.edge_count()];
    for a in offers {
        if a.graph() != g {
            return Err(Error::GraphMismatch);
        }
        for (t, x) in total.iter_mut().zip(a.values()) {
            *t += x;
        }
    }
    if let Some(k) = total.iter().position(|t| t.is_zero()) {
        return Err(Error::InactiveEdge(g.edges()[k]));
    }
    EdgeWeights::new(g, total)
}

/// Signed net trade `nu = r - abar`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetTrade {
    pub nu: Vec<Rational>,
}

impl NetTrade {
    pub fn is_zero(&self) -> bool {
        self.nu.iter().all(Zero::is_zero)
    }

    pub fn has_positive(&self) -> bool {
        self.nu.iter().any(Signed::is_positive)
    }

    pub fn has_negative(&self) -> bool {
        self.nu.iter().any(Signed::is_negative)
    }

    /// Negative at `i`, positive at `j`, zero elsewhere.
    pub fn is_exchange_vector(&self, i: usize, j: usize) -> bool {
        self.nu.iter().enumerate().all(|(k, v)| {
            if k == i {
                v.is_negative()
            } else if k == j {
                v.is_positive()
            } else {
                v.is_zero()
            }
        })
    }

    pub fn value(&self, prices: &PriceVector) -> Rational {
        prices.dot(&self.nu)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.nu.iter().map(format_rational).collect()
    }
}

/// Prices fixed by an aggregate offer, ready to price individual offers.
#[derive(Debug, Clone)]
pub struct Market {
    weights: EdgeWeights,
    prices: PriceVector,
}

impl Market {
    pub fn new(b: &EdgeWeights) -> Result<Self> {
        let prices = prices_by_minors(b.graph(), b)?;
        Ok(Market { weights: b.clone(), prices })
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.weights.graph()
    }

    pub fn weights(&self) -> &EdgeWeights {
        &self.weights
    }

    pub fn prices(&self) -> &PriceVector {
        &self.prices
    }

    pub fn returns(&self, a: &OfferMatrix) -> Result<Vec<Rational>> {
        if a.graph() != self.graph() {
            return Err(Error::GraphMismatch);
        }
        let p = self.prices.as_slice();
        let mut r = vec![Rational::zero(); p.len()];
        for (e, x) in self.graph().edges().iter().zip(a.values()) {
            if !x.is_zero() {
                r[e.to] += x * &p[e.from] / &p[e.to];
            }
        }
        Ok(r)
    }

    pub fn net_trade(&self, a: &OfferMatrix) -> Result<NetTrade> {
        let r = self.returns(a)?;
        let nu = r.into_iter().zip(a.row_sums()).map(|(r, s)| r - s).collect();
        Ok(NetTrade { nu })
    }
}

fn market_for(g: &DirectedGraph, b: &EdgeWeights) -> Result<Market> {
    if b.graph() != g {
        return Err(Error::GraphMismatch);
    }
    Market::new(b)
}

pub fn returns(g: &DirectedGraph, a: &OfferMatrix, b: &EdgeWeights) -> Result<Vec<Rational>> {
    market_for(g, b)?.returns(a)
}

pub fn net_trade(g: &DirectedGraph, a: &OfferMatrix, b: &EdgeWeights) -> Result<NetTrade> {
    market_for(g, b)?.net_trade(a)
}

#[derive(Debug, Clone)]
pub struct TraderSession {
    pub traders: Vec<OfferMatrix>,
    pub aggregate: EdgeWeights,
    pub prices: PriceVector,
    pub returns: Vec<Vec<Rational>>,
    pub net_trades: Vec<NetTrade>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraderResultJson {
    pub returns: Vec<String>,
    pub net_trade: Vec<String>,
    pub value_of_net_trade: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionJson {
    pub prices: Vec<String>,
    pub normalization: String,
    pub traders: Vec<TraderResultJson>,
    pub conservation: bool,
    pub budget_balance: bool,
}

impl TraderSession {
    pub fn conservation_holds(&self) -> bool {
        let m = self.prices.len();
        let mut offered = vec![Rational::zero(); m];
        let mut received = vec![Rational::zero(); m];
        for (a, r) in self.traders.iter().zip(&self.returns) {
            for (k, s) in a.row_sums().into_iter().enumerate() {
                offered[k] += s;
            }
            for (k, x) in r.iter().enumerate() {
                received[k] += x;
            }
        }
        offered == received
    }

    pub fn budget_balance_holds(&self) -> bool {
        self.net_trades.iter().all(|nu| nu.value(&self.prices).is_zero())
    }

    pub fn to_json(&self) -> SessionJson {
        SessionJson {
            prices: self.prices.as_slice().iter().map(format_rational).collect(),
            normalization: "p1=1".into(),
            traders: self
                .returns
                .iter()
                .zip(&self.net_trades)
                .map(|(r, nu)| TraderResultJson {
                    returns: r.iter().map(format_rational).collect(),
                    net_trade: nu.to_strings(),
                    value_of_net_trade: format_rational(&nu.value(&self.prices)),
                })
                .collect(),
            conservation: self.conservation_holds(),
            budget_balance: self.budget_balance_holds(),
        }
    }
}

/// Runs the mechanism with `b` the sum of all offers.
pub fn run_session(g: &DirectedGraph, offers: &[OfferMatrix]) -> Result<TraderSession> {
    let b = aggregate(offers)?;
    let market = market_for(g, &b)?;
    let returns = offers.iter().map(|a| market.returns(a)).collect::<Result<Vec<_>>>()?;
    let net_trades = offers.iter().map(|a| market.net_trade(a)).collect::<Result<Vec<_>>>()?;
    let session = TraderSession {
        traders: offers.to_vec(),
        aggregate: b,
        prices: market.prices,
        returns,
        net_trades,
    };
    if !session.conservation_holds() {
        return Err(Error::Invalid("commodities not conserved".into()));
    }
    if !session.budget_balance_holds() {
        return Err(Error::Invalid("net trade has nonzero value".into()));
    }
    Ok(session)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeStep {
    pub edge: Edge,
    pub offered: Rational,
    pub received: Rational,
}

/// Conversion of `amount` of commodity `source` into `target` along a walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangePlan {
    pub source: usize,
    pub target: usize,
    pub amount: Rational,
    pub path: Vec<usize>,
    pub steps: Vec<ExchangeStep>,
    pub net_trade: NetTrade,
    /// Received per unit offered.
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeStepJson {
    pub edge: [usize; 2],
    pub offered: String,
    pub received: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangePlanJson {
    pub source: usize,
    pub target: usize,
    pub amount: String,
    pub path: Vec<usize>,
    pub steps: Vec<ExchangeStepJson>,
    pub net_trade: Vec<String>,
    pub ratio: String,
}

impl ExchangePlan {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn to_json(&self) -> ExchangePlanJson {
        ExchangePlanJson {
            source: self.source + 1,
            target: self.target + 1,
            amount: format_rational(&self.amount),
            path: self.path.iter().map(|v| v + 1).collect(),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let (i, j) = s.edge.labels();
                    ExchangeStepJson { edge: [i, j], offered: format_rational(&s.offered), received: format_rational(&s.received) }
                })
                .collect(),
            net_trade: self.net_trade.to_strings(),
            ratio: format_rational(&self.ratio),
        }
    }
}

/// Routes along the lexicographically least shortest path.
pub fn route_exchange(g: &DirectedGraph, b: &EdgeWeights, i: usize, j: usize, x: &Rational) -> Result<ExchangePlan> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    if i == j {
        return Err(Error::SameVertex(i));
    }
    route_along(g, b, &g.shortest_path(i, j)?, x)
}

/// Routes along an arbitrary walk: each step offers everything received
/// on the previous one.
pub fn route_along(g: &DirectedGraph, b: &EdgeWeights, path: &[usize], x: &Rational) -> Result<ExchangePlan> {
    if !x.is_positive() {
        return Err(Error::Invalid("amount must be positive".into()));
    }
    let (&source, &target) = match (path.first(), path.last()) {
        (Some(s), Some(t)) if s != t => (s, t),
        _ => return Err(Error::Invalid("walk must join two distinct vertices".into())),
    };
    let market = market_for(g, b)?;
    let mut total = OfferMatrix::zero(g);
    let mut steps = Vec::with_capacity(path.len() - 1);
    let mut w = x.clone();
    for pair in path.windows(2) {
        let e = Edge::new(pair[0], pair[1]);
        if !g.has_edge(e.from, e.to) {
            return Err(Error::Invalid(format!("{e} is not an edge")));
        }
        let offer = OfferMatrix::single(g, e, w.clone())?;
        let received = market.returns(&offer)?[e.to].clone();
        total = total.add(&offer)?;
        steps.push(ExchangeStep { edge: e, offered: w, received: received.clone() });
        w = received;
    }
    let net_trade = market.net_trade(&total)?;
    if !net_trade.is_exchange_vector(source, target) || net_trade.nu[target] != w || net_trade.nu[source] != -x.clone() {
        return Err(Error::Invalid("walk did not produce a pure exchange".into()));
    }
    let ratio = &w / x;
    Ok(ExchangePlan { source, target, amount: x.clone(), path: path.to_vec(), steps, net_trade, ratio })
}

/// Units of `j` obtained per unit of `i`; equal to `p_i / p_j`.
pub fn exchange_ratio(g: &DirectedGraph, b: &EdgeWeights, i: usize, j: usize) -> Result<Rational> {
    price_ratio(g, b, i, j)
}
