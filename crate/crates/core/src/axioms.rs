//! Randomised checks of the defining properties of the mechanism.
//!
//! Each instance is drawn from its own seed, so a failure can be replayed
//! with [`check_instance`]. Every check is an exact rational identity.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};
use crate::market::{run_session, Market, NetTrade, OfferMatrix, TraderSession};
use crate::price::{prices_by_minors, EdgeWeights};
use crate::rational::Rational;
use crate::sampling::{connected_graph, positive_rational, DEFAULT_MAX_VALUE};
use crate::search::in_pool;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Conservation,
    BudgetBalance,
    NoArbitrage,
    NonDissipation,
    Anonymity,
    Aggregation,
    Invariance,
    Linearity,
    PriceMediation,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Conservation,
        Axiom::BudgetBalance,
        Axiom::NoArbitrage,
        Axiom::NonDissipation,
        Axiom::Anonymity,
        Axiom::Aggregation,
        Axiom::Invariance,
        Axiom::Linearity,
        Axiom::PriceMediation,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Conservation => "conservation",
            Axiom::BudgetBalance => "budget_balance",
            Axiom::NoArbitrage => "no_arbitrage",
            Axiom::NonDissipation => "non_dissipation",
            Axiom::Anonymity => "anonymity",
            Axiom::Aggregation => "aggregation",
            Axiom::Invariance => "invariance",
            Axiom::Linearity => "linearity",
            Axiom::PriceMediation => "price_mediation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomConfig {
    pub instances: usize,
    pub seed: u64,
    pub max_m: usize,
    pub max_traders: usize,
    /// Bound on sampled numerators and denominators.
    pub max_value: i64,
    pub workers: usize,
    /// Fixed graph; sampled per instance when absent.
    #[serde(skip)]
    pub graph: Option<DirectedGraph>,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig { instances: 1000, seed: 0, max_m: 6, max_traders: 5, max_value: DEFAULT_MAX_VALUE, workers: 0, graph: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub instance: usize,
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceOutcome {
    pub seed: u64,
    pub m: usize,
    pub traders: usize,
    pub failures: Vec<(Axiom, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub instances: usize,
    pub seed: u64,
    /// Instances passing each check.
    pub passed: BTreeMap<Axiom, usize>,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn instance_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn validate(cfg: &AxiomConfig) -> Result<()> {
    if !(2..=6).contains(&cfg.max_m) {
        return Err(Error::UnsupportedM { m: cfg.max_m, min: 2, max: 6 });
    }
    if !(1..=5).contains(&cfg.max_traders) {
        return Err(Error::Invalid(format!("trader count bound {} outside 1..=5", cfg.max_traders)));
    }
    if cfg.max_value < 1 {
        return Err(Error::Invalid("max_value must be positive".into()));
    }
    if let Some(g) = &cfg.graph {
        g.ensure_connected()?;
        if g.vertex_count() < 2 {
            return Err(Error::Invalid("axiom checks need at least two commodities".into()));
        }
    }
    Ok(())
}

pub fn check_axioms(cfg: &AxiomConfig) -> Result<AxiomReport> {
    validate(cfg)?;
    let outcomes: Vec<InstanceOutcome> = in_pool(cfg.workers, || {
        (0..cfg.instances).into_par_iter().map(|k| check_instance(cfg, instance_seed(cfg.seed, k))).collect()
    })?;
    let mut passed: BTreeMap<Axiom, usize> = Axiom::ALL.iter().map(|&a| (a, 0)).collect();
    let mut failures = Vec::new();
    for (k, o) in outcomes.into_iter().enumerate() {
        for a in Axiom::ALL {
            match o.failures.iter().find(|(f, _)| *f == a) {
                None => *passed.get_mut(&a).expect("all axioms") += 1,
                Some((_, detail)) => failures.push(AxiomFailure { axiom: a, instance: k, seed: o.seed, detail: detail.clone() }),
            }
        }
    }
    Ok(AxiomReport { instances: cfg.instances, seed: cfg.seed, passed, failures })
}

struct Instance {
    graph: DirectedGraph,
    traders: Vec<OfferMatrix>,
}

fn random_offer(rng: &mut ChaCha8Rng, g: &DirectedGraph, max: i64, density: f64) -> OfferMatrix {
    let values = (0..g.edge_count())
        .map(|_| if rng.gen_bool(density) { positive_rational(rng, max) } else { Rational::zero() })
        .collect();
    OfferMatrix::new(g, values).expect("nonnegative")
}

fn sample_instance(rng: &mut ChaCha8Rng, cfg: &AxiomConfig) -> Instance {
    let graph = match &cfg.graph {
        Some(g) => g.clone(),
        None => {
            let m = rng.gen_range(2..=cfg.max_m);
            connected_graph(rng, m)
        }
    };
    let n = rng.gen_range(1..=cfg.max_traders);
    let mut traders: Vec<OfferMatrix> = (0..n)
        .map(|_| {
            // occasionally a trader who offers nothing
            let density = if rng.gen_bool(0.1) { 0.0 } else { 0.5 };
            random_offer(rng, &graph, cfg.max_value, density)
        })
        .collect();
    // keep every edge active
    for (k, e) in graph.edges().iter().enumerate() {
        if traders.iter().all(|a| a.values()[k].is_zero()) {
            let who = rng.gen_range(0..n);
            let mut values = traders[who].values().to_vec();
            values[k] = positive_rational(rng, cfg.max_value);
            traders[who] = OfferMatrix::new(&graph, values).expect("nonnegative");
            debug_assert!(traders[who].get(*e).is_some());
        }
    }
    Instance { graph, traders }
}

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Runs every check on the instance drawn from `seed`.
pub fn check_instance(cfg: &AxiomConfig, seed: u64) -> InstanceOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = sample_instance(&mut rng, cfg);
    let mut failures = Vec::new();
    let outcome = |failures| InstanceOutcome { seed, m: inst.graph.vertex_count(), traders: inst.traders.len(), failures };
    let session = match run_session(&inst.graph, &inst.traders) {
        Ok(s) => s,
        Err(e) => {
            for a in Axiom::ALL {
                failures.push((a, format!("session failed: {e}")));
            }
            return outcome(failures);
        }
    };
    let checks: [(Axiom, Check); 9] = [
        (Axiom::Conservation, conservation(&session)),
        (Axiom::BudgetBalance, budget_balance(&session)),
        (Axiom::NoArbitrage, no_arbitrage(&session)),
        (Axiom::NonDissipation, non_dissipation(&session)),
        (Axiom::Anonymity, anonymity(&mut rng, &inst, &session)),
        (Axiom::Aggregation, aggregation(&mut rng, &inst, &session)),
        (Axiom::Invariance, invariance(&mut rng, &inst, &session, cfg.max_value)),
        (Axiom::Linearity, linearity(&mut rng, &inst, &session, cfg.max_value)),
        (Axiom::PriceMediation, price_mediation(&mut rng, &inst, &session, cfg.max_value)),
    ];
    for (a, c) in checks {
        if let Err(detail) = c {
            failures.push((a, detail));
        }
    }
    outcome(failures)
}

fn conservation(s: &TraderSession) -> Check {
    let m = s.prices.len();
    let mut offered = vec![Rational::zero(); m];
    let mut received = vec![Rational::zero(); m];
    for (a, r) in s.traders.iter().zip(&s.returns) {
        for (k, x) in a.row_sums().into_iter().enumerate() {
            offered[k] += x;
        }
        for (k, x) in r.iter().enumerate() {
            received[k] += x;
        }
    }
    ensure(offered == received, || format!("offered {offered:?} != received {received:?}"))
}

fn budget_balance(s: &TraderSession) -> Check {
    for (k, nu) in s.net_trades.iter().enumerate() {
        let v = nu.value(&s.prices);
        ensure(v.is_zero(), || format!("trader {k}: p.nu = {v}"))?;
    }
    Ok(())
}

fn no_arbitrage(s: &TraderSession) -> Check {
    for (k, nu) in s.net_trades.iter().enumerate() {
        ensure(nu.is_zero() || (nu.has_positive() && nu.has_negative()), || format!("trader {k}: one-signed {:?}", nu.nu))?;
    }
    Ok(())
}

fn non_dissipation(s: &TraderSession) -> Check {
    for (k, nu) in s.net_trades.iter().enumerate() {
        ensure(nu.is_zero() || nu.has_positive(), || format!("trader {k}: nothing gained {:?}", nu.nu))?;
    }
    Ok(())
}

fn anonymity(rng: &mut ChaCha8Rng, inst: &Instance, s: &TraderSession) -> Check {
    let mut sigma: Vec<usize> = (0..inst.traders.len()).collect();
    sigma.shuffle(rng);
    let permuted: Vec<OfferMatrix> = sigma.iter().map(|&k| inst.traders[k].clone()).collect();
    let t = lift(run_session(&inst.graph, &permuted))?;
    for (pos, &k) in sigma.iter().enumerate() {
        ensure(t.returns[pos] == s.returns[k], || format!("trader {k} moved to {pos} changed returns"))?;
    }
    Ok(())
}

fn random_fraction(rng: &mut ChaCha8Rng) -> Rational {
    let u = rng.gen_range(1..=50i64);
    let v = rng.gen_range(1..=50i64);
    Rational::new(u.into(), (u + v).into())
}

fn aggregation(rng: &mut ChaCha8Rng, inst: &Instance, s: &TraderSession) -> Check {
    let n = inst.traders.len();
    let last = &inst.traders[n - 1];
    let first: Vec<Rational> = last.values().iter().map(|x| x * random_fraction(rng)).collect();
    let second: Vec<Rational> = last.values().iter().zip(&first).map(|(x, y)| x - y).collect();
    let mut split = inst.traders[..n - 1].to_vec();
    split.push(lift(OfferMatrix::new(&inst.graph, first))?);
    split.push(lift(OfferMatrix::new(&inst.graph, second))?);
    let t = lift(run_session(&inst.graph, &split))?;
    for k in 0..n - 1 {
        ensure(t.returns[k] == s.returns[k], || format!("trader {k} affected by the split"))?;
    }
    let joined: Vec<Rational> = t.returns[n - 1].iter().zip(&t.returns[n]).map(|(x, y)| x + y).collect();
    ensure(joined == s.returns[n - 1], || "split returns do not add up".into())
}

fn invariance(rng: &mut ChaCha8Rng, inst: &Instance, s: &TraderSession, max: i64) -> Check {
    let m = inst.graph.vertex_count();
    let lambda: Vec<Rational> = (0..m).map(|_| positive_rational(rng, max)).collect();
    let market = lift(Market::new(&lift(s.aggregate.row_scaled(&lambda))?))?;
    for (k, a) in inst.traders.iter().enumerate() {
        let nu = lift(market.net_trade(&lift(a.row_scaled(&lambda))?))?;
        let expected: Vec<Rational> = s.net_trades[k].nu.iter().zip(&lambda).map(|(v, l)| v * l).collect();
        ensure(nu.nu == expected, || format!("trader {k}: nu(la, lb) != l nu(a, b)"))?;
    }
    Ok(())
}

fn linearity(rng: &mut ChaCha8Rng, inst: &Instance, s: &TraderSession, max: i64) -> Check {
    let g = &inst.graph;
    let market = lift(Market::new(&s.aggregate))?;
    let a = &inst.traders[rng.gen_range(0..inst.traders.len())];
    // the second offer need not fit under the aggregate
    let other = random_offer(rng, g, max, 0.6);
    let (l1, l2) = (positive_rational(rng, max), positive_rational(rng, max));
    let combined = lift(lift(a.scaled(&l1))?.add(&lift(other.scaled(&l2))?))?;
    let lhs = lift(market.net_trade(&combined))?;
    let nu_a = lift(market.net_trade(a))?;
    let nu_o = lift(market.net_trade(&other))?;
    let rhs: Vec<Rational> = nu_a.nu.iter().zip(&nu_o.nu).map(|(x, y)| x * &l1 + y * &l2).collect();
    ensure(lhs.nu == rhs, || "nu not linear in the offer".into())?;
    let c = positive_rational(rng, max);
    let rescaled = lift(Market::new(&lift(s.aggregate.scaled(&c))?))?;
    ensure(lift(rescaled.net_trade(a))? == nu_a, || format!("nu changed when b scaled by {c}"))
}

/// Adds `t / p_u` to every edge `uv` of a directed cycle through a random
/// edge. Inflow and outflow of value both rise by `t` at each cycle vertex,
/// so the price ray is unchanged.
fn cycle_augmented(rng: &mut ChaCha8Rng, b: &EdgeWeights, max: i64) -> Result<EdgeWeights> {
    let g = b.graph();
    let prices = prices_by_minors(g, b)?;
    let start: Edge = g.edges()[rng.gen_range(0..g.edge_count())];
    let mut cycle = g.shortest_path(start.to, start.from)?;
    cycle.push(start.to);
    let t = positive_rational(rng, max);
    let mut out = b.clone();
    for pair in cycle.windows(2) {
        let e = Edge::new(pair[0], pair[1]);
        let bumped = out.get(e).expect("cycle edge") + &t / prices.get(e.from);
        out = out.with_weight(e, bumped)?;
    }
    Ok(out)
}

fn price_mediation(rng: &mut ChaCha8Rng, inst: &Instance, s: &TraderSession, max: i64) -> Check {
    let base = lift(Market::new(&s.aggregate))?;
    let scaled = lift(Market::new(&lift(s.aggregate.scaled(&positive_rational(rng, max)))?))?;
    let c = lift(cycle_augmented(rng, &s.aggregate, max))?;
    ensure(c != s.aggregate, || "cycle augmentation left b unchanged".into())?;
    let shifted = lift(Market::new(&c))?;
    ensure(shifted.prices() == base.prices(), || "cycle augmentation moved the price ray".into())?;
    for (k, a) in inst.traders.iter().enumerate() {
        let r = lift(base.returns(a))?;
        ensure(lift(scaled.returns(a))? == r, || format!("trader {k}: returns changed under uniform scaling"))?;
        ensure(lift(shifted.returns(a))? == r, || format!("trader {k}: returns changed under equal-price offers"))?;
    }
    Ok(())
}

/// Net trade of `a` at `b`, convenience for callers outside a session.
pub fn net_trade_at(a: &OfferMatrix, b: &EdgeWeights) -> Result<NetTrade> {
    Market::new(b)?.net_trade(a)
}
