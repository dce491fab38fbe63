//! Exhaustive search over all mechanisms on `m` commodities.
//!
//! Every slot mask `0..2^(m(m-1))` is scanned; a mask is kept when it is
//! strongly connected and minimal in its relabeling orbit, so each
//! isomorphism class is visited once, at its canonical representative.
//! Ranges are processed concurrently and concatenated in mask order.
//!
//! In screened mode `pi` starts as a prime-field lower bound. Before a
//! frontier is reported, records are promoted to exact values until every
//! frontier member is exact and every other record is dominated, with a
//! margin of one in `pi`, by an exact frontier member. `tau` is always exact.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{CanonicalKey, Canonizer};
use crate::complexity::{pi_profile, special_complexity, tau_profile, InfluenceMethod};
use crate::error::{Error, Result};
use crate::field::PRIME;
use crate::graph::{slot_edge, DirectedGraph};
use crate::rational::{format_rational, nat, Rational};
use crate::structure::{classify, MechanismClass};

pub const MIN_SEARCH_M: usize = 2;
pub const MAX_SEARCH_M: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PiMethod {
    Exact,
    Screened,
}

impl FromStr for PiMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PiMethod::Exact),
            "screened" => Ok(PiMethod::Screened),
            other => Err(Error::Invalid(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for PiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PiMethod::Exact => "exact",
            PiMethod::Screened => "screened",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub method: PiMethod,
    /// Zero means the ambient rayon pool.
    pub workers: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn exact() -> Self {
        SearchConfig { method: PiMethod::Exact, workers: 0, seed: 0 }
    }

    pub fn screened(seed: u64) -> Self {
        SearchConfig { method: PiMethod::Screened, workers: 0, seed }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        SearchConfig { workers, ..self }
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or inline on the
/// ambient pool when `workers == 0`.
pub(crate) fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn check_m(m: usize) -> Result<()> {
    if !(MIN_SEARCH_M..=MAX_SEARCH_M).contains(&m) {
        return Err(Error::UnsupportedM { m, min: MIN_SEARCH_M, max: MAX_SEARCH_M });
    }
    Ok(())
}

/// Strong connectivity straight from a slot mask.
struct MaskConnectivity {
    m: usize,
    ends: Vec<(usize, usize)>,
}

impl MaskConnectivity {
    fn new(m: usize) -> Self {
        let ends = (0..m * (m - 1)).map(|s| slot_edge(m, s)).map(|e| (e.from, e.to)).collect();
        MaskConnectivity { m, ends }
    }

    fn is_connected(&self, mask: u64) -> bool {
        let mut out = [0u8; 8];
        let mut inn = [0u8; 8];
        let mut rest = mask;
        while rest != 0 {
            let (i, j) = self.ends[rest.trailing_zeros() as usize];
            out[i] |= 1 << j;
            inn[j] |= 1 << i;
            rest &= rest - 1;
        }
        let all = ((1u16 << self.m) - 1) as u8;
        closure(&out, self.m) == all && closure(&inn, self.m) == all
    }
}

fn closure(rows: &[u8; 8], m: usize) -> u8 {
    let mut seen = 1u8;
    let mut frontier = 1u8;
    while frontier != 0 {
        let mut next = 0u8;
        for v in 0..m {
            if frontier >> v & 1 == 1 {
                next |= rows[v];
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

/// One isomorphism class of connected digraphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumeratedGraph {
    pub key: CanonicalKey,
    /// Number of labeled graphs in the class.
    pub labeled_count: u64,
}

impl EnumeratedGraph {
    pub fn graph(&self) -> DirectedGraph {
        self.key.graph()
    }
}

pub fn enumerate_mechanisms(m: usize) -> Result<Vec<EnumeratedGraph>> {
    enumerate_with_workers(m, 0)
}

pub fn enumerate_with_workers(m: usize, workers: usize) -> Result<Vec<EnumeratedGraph>> {
    check_m(m)?;
    let canon = Canonizer::new(m)?;
    let conn = MaskConnectivity::new(m);
    let total: u64 = 1 << (m * (m - 1));
    let chunk: u64 = 1 << 14;
    let chunks = total.div_ceil(chunk);
    let scan = |c: u64| -> Vec<EnumeratedGraph> {
        let lo = c * chunk;
        let hi = (lo + chunk).min(total);
        (lo..hi)
            .filter(|&mask| conn.is_connected(mask) && canon.is_canonical(mask))
            .map(|mask| EnumeratedGraph {
                key: canon.key(&DirectedGraph::from_slot_mask(m, mask)),
                labeled_count: canon.labeled_count(mask),
            })
            .collect()
    };
    let parts: Vec<Vec<EnumeratedGraph>> = in_pool(workers, || (0..chunks).into_par_iter().map(scan).collect())?;
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismRecord {
    pub key: CanonicalKey,
    pub graph: DirectedGraph,
    pub class: MechanismClass,
    pub tau: u32,
    pub pi: u32,
    pub labeled_count: u64,
    /// False while `pi` is only a screened lower bound.
    pub pi_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MechanismRecordJson {
    pub canonical_key: String,
    pub class: String,
    pub tau: u32,
    pub pi: u32,
    pub labeled_count: u64,
    pub edges: Vec<[usize; 2]>,
    pub pi_exact: bool,
}

impl MechanismRecord {
    pub fn point(&self) -> (u32, u32) {
        (self.tau, self.pi)
    }

    pub fn to_json(&self) -> MechanismRecordJson {
        MechanismRecordJson {
            canonical_key: self.key.to_string(),
            class: self.class.to_string(),
            tau: self.tau,
            pi: self.pi,
            labeled_count: self.labeled_count,
            edges: self.graph.label_pairs(),
            pi_exact: self.pi_exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceRule {
    /// No worse in both coordinates, strictly better in at least one.
    Pareto,
    /// Strictly better in both coordinates.
    Strict,
}

impl DominanceRule {
    pub fn dominates(self, a: (u32, u32), b: (u32, u32)) -> bool {
        match self {
            DominanceRule::Pareto => a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1),
            DominanceRule::Strict => a.0 < b.0 && a.1 < b.1,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DominanceRule::Pareto => "weakly better in tau and pi, strictly better in at least one",
            DominanceRule::Strict => "strictly better in both tau and pi",
        }
    }
}

impl fmt::Display for DominanceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominanceRule::Pareto => "pareto",
            DominanceRule::Strict => "strict",
        })
    }
}

/// Indices of points not dominated by any other point.
pub fn minimal_indices(points: &[(u32, u32)], rule: DominanceRule) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|&q| rule.dominates(q, points[i])))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoFrontier {
    pub m: usize,
    pub dominance_rule: DominanceRule,
    /// Sorted by `(tau, pi, key)`.
    pub minimal: Vec<MechanismRecord>,
}

impl ParetoFrontier {
    pub fn points(&self) -> Vec<(u32, u32)> {
        self.minimal.iter().map(MechanismRecord::point).collect()
    }

    pub fn classes(&self) -> Vec<MechanismClass> {
        self.minimal.iter().map(|r| r.class).collect()
    }

    pub fn dominates(&self, point: (u32, u32)) -> bool {
        self.minimal.iter().any(|f| self.dominance_rule.dominates(f.point(), point))
    }
}

/// Per-graph seed, a function of the graph only so results do not depend
/// on scheduling.
fn graph_seed(seed: u64, key: CanonicalKey) -> u64 {
    let mut z = seed ^ key.mask().rotate_left(17) ^ (key.vertex_count() as u64) << 58;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn exact_pi(g: &DirectedGraph) -> Result<u32> {
    Ok(pi_profile(g, InfluenceMethod::Exact)?.pi)
}

/// All mechanisms on `m` commodities with their complexities.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub m: usize,
    pub config: SearchConfig,
    pub records: Vec<MechanismRecord>,
    /// Records whose `pi` was recomputed exactly after screening.
    pub exact_verifications: usize,
    settled: Vec<DominanceRule>,
}

pub fn sweep(m: usize, cfg: SearchConfig) -> Result<Sweep> {
    let classes = enumerate_with_workers(m, cfg.workers)?;
    let evaluate = |c: &EnumeratedGraph| -> Result<MechanismRecord> {
        let graph = c.graph();
        let tau = tau_profile(&graph)?.tau;
        let (pi, pi_exact) = match cfg.method {
            PiMethod::Exact => (exact_pi(&graph)?, true),
            PiMethod::Screened => {
                let method = InfluenceMethod::randomized(graph_seed(cfg.seed, c.key));
                (pi_profile(&graph, method)?.pi, false)
            }
        };
        Ok(MechanismRecord {
            key: c.key,
            class: classify(&graph)?,
            graph,
            tau,
            pi,
            labeled_count: c.labeled_count,
            pi_exact,
        })
    };
    let records = in_pool(cfg.workers, || classes.par_iter().map(evaluate).collect::<Result<Vec<_>>>())??;
    let mut s = Sweep { m, config: cfg, records, exact_verifications: 0, settled: Vec::new() };
    s.settle(DominanceRule::Pareto)?;
    Ok(s)
}

impl Sweep {
    fn verify(&mut self, mut todo: Vec<usize>) -> Result<()> {
        todo.sort_unstable();
        todo.dedup();
        let records = &self.records;
        let values: Vec<u32> =
            in_pool(self.config.workers, || todo.par_iter().map(|&k| exact_pi(&records[k].graph)).collect::<Result<_>>())??;
        for (&k, pi) in todo.iter().zip(values) {
            debug_assert!(pi >= self.records[k].pi, "screened pi must be a lower bound");
            self.records[k].pi = pi;
            self.records[k].pi_exact = true;
        }
        self.exact_verifications += todo.len();
        Ok(())
    }

    /// Exact-verifies records until the frontier under `rule` is certified.
    fn settle(&mut self, rule: DominanceRule) -> Result<()> {
        if self.settled.contains(&rule) {
            return Ok(());
        }
        loop {
            let points: Vec<(u32, u32)> = self.records.iter().map(MechanismRecord::point).collect();
            let front = minimal_indices(&points, rule);
            // certify the frontier itself first, then everything it must cover
            let mut todo: Vec<usize> = front.iter().copied().filter(|&k| !self.records[k].pi_exact).collect();
            if todo.is_empty() {
                let exact_front: Vec<(u32, u32)> = front.iter().map(|&k| points[k]).collect();
                for (k, r) in self.records.iter().enumerate() {
                    // margin of one on the screened lower bound
                    let shifted = (r.tau, r.pi.saturating_sub(1));
                    let covered = r.pi >= 1 && exact_front.iter().any(|&f| rule.dominates(f, shifted));
                    if !r.pi_exact && !covered {
                        todo.push(k);
                    }
                }
            }
            if todo.is_empty() {
                self.settled.push(rule);
                return Ok(());
            }
            self.verify(todo)?;
        }
    }

    /// The certified frontier under `rule`; may exact-verify more records.
    pub fn frontier(&mut self, rule: DominanceRule) -> Result<ParetoFrontier> {
        self.settle(rule)?;
        let points: Vec<(u32, u32)> = self.records.iter().map(MechanismRecord::point).collect();
        let mut minimal: Vec<MechanismRecord> =
            minimal_indices(&points, rule).into_iter().map(|k| self.records[k].clone()).collect();
        minimal.sort_by_key(|r| (r.tau, r.pi, r.key));
        Ok(ParetoFrontier { m: self.m, dominance_rule: rule, minimal })
    }

    pub fn labeled_total(&self) -> u64 {
        self.records.iter().map(|r| r.labeled_count).sum()
    }

    pub fn find(&self, g: &DirectedGraph) -> Result<&MechanismRecord> {
        let key = Canonizer::new(self.m)?.key(g);
        self.records
            .iter()
            .find(|r| r.key == key)
            .ok_or_else(|| Error::Invalid(format!("{g} is not among the swept mechanisms")))
    }

    /// Exact minimisers of `lambda * pi + mu * tau` over the whole sweep.
    pub fn weighted_argmin(&mut self, lambda: &Rational, mu: &Rational) -> Result<Vec<MechanismRecord>> {
        check_weights(lambda, mu)?;
        let cost = |r: &MechanismRecord| lambda * nat(r.pi as u64) + mu * nat(r.tau as u64);
        let best_exact = self
            .records
            .iter()
            .filter(|r| r.pi_exact)
            .map(cost)
            .min()
            .ok_or_else(|| Error::Invalid("no exact record".into()))?;
        // screened costs are lower bounds
        let todo: Vec<usize> =
            (0..self.records.len()).filter(|&k| !self.records[k].pi_exact && cost(&self.records[k]) <= best_exact).collect();
        self.verify(todo)?;
        let best = self.records.iter().map(cost).min().expect("nonempty");
        let mut out: Vec<MechanismRecord> = self.records.iter().filter(|r| cost(r) == best).cloned().collect();
        out.sort_by_key(|r| (r.tau, r.pi, r.key));
        Ok(out)
    }
}

pub fn pareto_minimal(m: usize, cfg: SearchConfig) -> Result<ParetoFrontier> {
    sweep(m, cfg)?.frontier(DominanceRule::Pareto)
}

fn check_weights(lambda: &Rational, mu: &Rational) -> Result<()> {
    if !lambda.is_positive() || !mu.is_positive() {
        return Err(Error::NonPositiveObjectiveWeight);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedCost {
    pub class: MechanismClass,
    pub tau: u64,
    pub pi: u64,
    pub cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedCostJson {
    pub class: String,
    pub tau: u64,
    pub pi: u64,
    pub cost: String,
}

impl WeightedCost {
    pub fn to_json(&self) -> WeightedCostJson {
        WeightedCostJson {
            class: self.class.to_string(),
            tau: self.tau,
            pi: self.pi,
            cost: format_rational(&self.cost),
        }
    }
}

/// Closed-form comparison of the three special mechanisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMinimum {
    pub m: usize,
    pub lambda: Rational,
    pub mu: Rational,
    /// Star, cycle, complete, in that order.
    pub specials: Vec<WeightedCost>,
    pub argmin: Vec<MechanismClass>,
    pub unique: bool,
}

pub fn weighted_minimizer(m: usize, lambda: &Rational, mu: &Rational) -> Result<WeightedMinimum> {
    check_weights(lambda, mu)?;
    if m <= 3 {
        return Err(Error::UnsupportedM { m, min: 4, max: usize::MAX });
    }
    let specials: Vec<WeightedCost> = [MechanismClass::Star, MechanismClass::Cycle, MechanismClass::Complete]
        .into_iter()
        .map(|class| {
            let s = special_complexity(class, m)?;
            let cost = lambda * nat(s.pi as u64) + mu * nat(s.tau as u64);
            Ok(WeightedCost { class, tau: s.tau, pi: s.pi, cost })
        })
        .collect::<Result<_>>()?;
    let best = specials.iter().map(|c| c.cost.clone()).min().expect("three specials");
    let argmin: Vec<MechanismClass> = specials.iter().filter(|c| c.cost == best).map(|c| c.class).collect();
    Ok(WeightedMinimum { m, lambda: lambda.clone(), mu: mu.clone(), unique: argmin.len() == 1, specials, argmin })
}

/// Least `m > 3` with `m > 2 lambda/mu + 3` and `m^2 - m > mu/lambda + 4`.
pub fn m0_bound(lambda: &Rational, mu: &Rational) -> Result<u64> {
    check_weights(lambda, mu)?;
    let linear = nat(2) * lambda / mu + nat(3);
    let quadratic = mu / lambda + nat(4);
    // least integer strictly above the linear bound
    let start = (linear.floor() + Rational::one()).to_integer();
    let mut m: u64 = u64::try_from(start).map_err(|_| Error::Invalid("weight ratio too large".into()))?.max(4);
    while nat(m * m - m) <= quadratic {
        m += 1;
    }
    debug_assert!(nat(m) > linear && !linear.is_zero());
    Ok(m)
}

pub fn prime_modulus() -> u64 {
    PRIME
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn mask_connectivity_matches_graph() {
        let conn = MaskConnectivity::new(3);
        for mask in 0..64u64 {
            assert_eq!(conn.is_connected(mask), DirectedGraph::from_slot_mask(3, mask).is_connected());
        }
    }

    #[test]
    fn enumeration_counts_small() {
        let two = enumerate_mechanisms(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].labeled_count, 1);
        let three = enumerate_mechanisms(3).unwrap();
        assert_eq!(three.len(), 5);
        assert_eq!(three.iter().map(|c| c.labeled_count).sum::<u64>(), 18);
        assert!(enumerate_mechanisms(1).is_err());
        assert!(enumerate_mechanisms(7).is_err());
    }

    #[test]
    fn dominance_rules() {
        let f = DominanceRule::Pareto;
        let s = DominanceRule::Strict;
        assert!(f.dominates((2, 2), (2, 4)));
        assert!(!s.dominates((2, 2), (2, 4)));
        assert!(s.dominates((1, 1), (2, 2)));
        assert!(!f.dominates((2, 4), (2, 4)));
        assert_eq!(minimal_indices(&[(2, 4), (3, 2), (1, 12), (3, 5)], f), vec![0, 1, 2]);
    }

    #[test]
    fn m4_exact_frontier() {
        let fr = pareto_minimal(4, SearchConfig::exact()).unwrap();
        assert_eq!(fr.points(), vec![(1, 12), (2, 4), (3, 2)]);
        assert_eq!(fr.classes(), vec![MechanismClass::Complete, MechanismClass::Star, MechanismClass::Cycle]);
    }

    #[test]
    fn screened_matches_exact_at_m4() {
        let mut exact = sweep(4, SearchConfig::exact()).unwrap();
        let mut screened = sweep(4, SearchConfig::screened(1)).unwrap();
        for rule in [DominanceRule::Pareto, DominanceRule::Strict] {
            assert_eq!(exact.frontier(rule).unwrap(), screened.frontier(rule).unwrap());
        }
    }

    #[test]
    fn weighted_examples() {
        let w = weighted_minimizer(22, &int(9), &int(1)).unwrap();
        let costs: Vec<Rational> = w.specials.iter().map(|c| c.cost.clone()).collect();
        assert_eq!(costs, vec![int(38), int(39), int(4159)]);
        assert_eq!(w.argmin, vec![MechanismClass::Star]);
        let w = weighted_minimizer(4, &int(1), &int(1)).unwrap();
        assert_eq!(w.argmin, vec![MechanismClass::Cycle]);
        let w = weighted_minimizer(6, &int(1), &int(1)).unwrap();
        assert_eq!(w.argmin, vec![MechanismClass::Star]);
        let w = weighted_minimizer(5, &int(1), &int(1)).unwrap();
        assert_eq!(w.argmin, vec![MechanismClass::Star, MechanismClass::Cycle]);
        assert!(!w.unique);
        assert_eq!(weighted_minimizer(5, &int(0), &int(1)), Err(Error::NonPositiveObjectiveWeight));
        assert!(weighted_minimizer(3, &int(1), &int(1)).is_err());
    }

    #[test]
    fn m0_examples() {
        assert_eq!(m0_bound(&int(1), &int(1)).unwrap(), 6);
        assert_eq!(m0_bound(&int(1), &int(9)).unwrap(), 5);
        assert_eq!(m0_bound(&int(9), &int(1)).unwrap(), 22);
        assert!(m0_bound(&int(-1), &int(1)).is_err());
    }
}
