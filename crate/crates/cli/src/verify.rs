use std::time::{Duration, Instant};

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use gmech::arborescence::{count_arborescences, enumerate_arborescences};
use gmech::axioms::{check_axioms, AxiomConfig};
use gmech::complexity::{pi_profile, InfluenceMethod};
use gmech::graph::{DirectedGraph, Edge};
use gmech::market::route_exchange;
use gmech::price::{price_ratio, prices_by_balance_solve, prices_by_tree_formula, EdgeWeights};
use gmech::rational::{int, Rational};
use gmech::sampling::{connected_graph, positive_rational, positive_weights};
use gmech::search::{m0_bound, sweep, weighted_minimizer, DominanceRule, SearchConfig, Sweep};
use gmech::structure::{collapse, collapsible_edges, MechanismClass, Subgraph};

use crate::manifest::RunManifest;
use crate::output::{Report, Table};
use crate::Common;

#[derive(Serialize)]
struct Criterion {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

#[derive(Serialize)]
struct VerifyReport {
    quick: bool,
    passed: usize,
    failed: usize,
    criteria: Vec<Criterion>,
}

struct Scale {
    weightings: usize,
    random_cases: usize,
    jumps: usize,
    sessions: usize,
    routes: usize,
}

type Outcome = std::result::Result<String, String>;
type Suite<'a> = (u32, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, pass: impl Into<String>, fail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(pass.into())
    } else {
        Err(fail())
    }
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Outcome {
    check(elapsed < budget, format!("{what}, within {:.0}s", budget.as_secs_f64()), || {
        format!("{what} took {:.2}s, budget {:.0}s", elapsed.as_secs_f64(), budget.as_secs_f64())
    })
}

fn specials(m: usize) -> Vec<(MechanismClass, (u32, u32))> {
    let m32 = m as u32;
    vec![(MechanismClass::Complete, (1, m32 * (m32 - 1))), (MechanismClass::Star, (2, 4)), (MechanismClass::Cycle, (m32 - 1, 2))]
}

fn frontier_matches(m: usize, cfg: SearchConfig, budget: Duration) -> Outcome {
    let t = Instant::now();
    let mut s = sweep(m, cfg).map_err(|e| e.to_string())?;
    let f = s.frontier(DominanceRule::Pareto).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let got: Vec<(MechanismClass, (u32, u32))> = f.minimal.iter().map(|r| (r.class, r.point())).collect();
    check(got == specials(m), "", || format!("frontier {got:?}"))?;
    check(f.minimal.iter().all(|r| r.pi_exact), "", || "unverified frontier member".into())?;
    within(elapsed, budget, &format!("{} mechanisms, frontier {:?}", s.records.len(), f.points()))
}

fn all_labeled_connected(m: usize) -> Vec<DirectedGraph> {
    (0..1u64 << (m * (m - 1)))
        .map(|mask| DirectedGraph::from_slot_mask(m, mask))
        .filter(DirectedGraph::is_connected)
        .collect()
}

fn random_cases(seed: u64, n: usize) -> Vec<(DirectedGraph, EdgeWeights)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|k| {
            let g = connected_graph(&mut rng, 5 + k % 2);
            let b = positive_weights(&mut rng, &g, 100);
            (g, b)
        })
        .collect()
}

fn prices_agree(g: &DirectedGraph, b: &EdgeWeights) -> bool {
    matches!((prices_by_tree_formula(g, b), prices_by_balance_solve(g, b)), (Ok(x), Ok(y)) if x == y)
}

fn criterion_4(seed: u64, scale: &Scale) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for m in 1..=4 {
        for g in all_labeled_connected_or_single(m) {
            for _ in 0..scale.weightings {
                let b = positive_weights(&mut rng, &g, 100);
                cases.push((g.clone(), b));
            }
        }
    }
    let small = cases.len();
    cases.extend(random_cases(seed ^ 0x5eed, scale.random_cases));
    let bad = cases.par_iter().filter(|(g, b)| !prices_agree(g, b)).count();
    check(bad == 0, format!("{small} small and {} random weightings agree", scale.random_cases), || format!("{bad} disagreements"))
}

fn all_labeled_connected_or_single(m: usize) -> Vec<DirectedGraph> {
    if m == 1 {
        vec![DirectedGraph::single_vertex()]
    } else {
        all_labeled_connected(m)
    }
}

fn criterion_5(seed: u64, scale: &Scale) -> Outcome {
    let mut graphs: Vec<DirectedGraph> = (1..=4).flat_map(all_labeled_connected_or_single).collect();
    let small = graphs.len();
    graphs.extend(random_cases(seed, scale.random_cases).into_iter().map(|(g, _)| g));
    let bad = graphs
        .par_iter()
        .filter(|g| {
            (0..g.vertex_count()).any(|r| {
                let listed = enumerate_arborescences(g, r).map(|v| v.len() as u128);
                listed.is_err() || listed.ok() != count_arborescences(g, r).ok()
            })
        })
        .count();
    check(bad == 0, format!("{small} small and {} random graphs, every root", scale.random_cases), || format!("{bad} mismatches"))
}

fn criterion_6(seed: u64, scale: &Scale) -> Outcome {
    let mut notes = Vec::new();
    for m in 2..=5 {
        let s = sweep(m, SearchConfig::exact()).map_err(|e| e.to_string())?;
        for r in &s.records {
            let ok = match r.class {
                MechanismClass::Cycle => r.pi == 2,
                MechanismClass::ChordedCycle => r.pi == 4 && (m < 4 || r.tau >= 3),
                MechanismClass::Rose(_) | MechanismClass::Star => r.pi == 4,
                MechanismClass::SingleVertex => r.pi == 0,
                // on two commodities the only graph is the cycle
                _ => r.pi >= 5,
            };
            check(ok, "", || format!("{} ({}) has tau {} pi {}", r.graph, r.class, r.tau, r.pi))?;
        }
        notes.push(format!("m={m}: {}", s.records.len()));
    }
    for m in [4, 5] {
        let k = DirectedGraph::complete(m).map_err(|e| e.to_string())?;
        let p = pi_profile(&k, InfluenceMethod::Exact).map_err(|e| e.to_string())?;
        let full = (m * (m - 1)) as u32;
        let ok = (0..m).all(|i| (0..m).all(|j| i == j || p.pi_ij[i][j] == full));
        check(ok, "", || format!("complete graph on {m} has a pair below {full}"))?;
    }
    let mono = monotonicity()?;
    let jumps = complexity_jumps(seed, scale.jumps)?;
    Ok(format!("classes by exhaustion ({}); {mono}; {jumps}", notes.join(", ")))
}

/// Subgraph and collapse steps never raise pi; minors follow by chaining.
fn monotonicity() -> Outcome {
    let sweeps: Vec<Sweep> = (2..=4).map(|m| sweep(m, SearchConfig::exact())).collect::<gmech::Result<_>>().map_err(|e| e.to_string())?;
    let pi_of = |g: &DirectedGraph| -> Result<u32, String> {
        match g.vertex_count() {
            1 => Ok(0),
            m => sweeps[m - 2].find(g).map(|r| r.pi).map_err(|e| e.to_string()),
        }
    };
    let (mut subgraphs, mut collapses) = (0usize, 0usize);
    for s in &sweeps {
        for r in &s.records {
            let edges = r.graph.edges();
            for mask in 1u64..(1 << edges.len()) {
                let chosen: Vec<Edge> = (0..edges.len()).filter(|k| mask >> k & 1 == 1).map(|k| edges[k]).collect();
                let sub = Subgraph::from_edges(&r.graph, &chosen).map_err(|e| e.to_string())?;
                if !sub.is_connected(&r.graph) {
                    continue;
                }
                let h = sub.to_graph(&r.graph).map_err(|e| e.to_string())?;
                let p = pi_of(&h)?;
                check(p <= r.pi, "", || format!("subgraph {h} of {} has pi {p} > {}", r.graph, r.pi))?;
                subgraphs += 1;
            }
            for e in collapsible_edges(&r.graph) {
                let h = collapse(&r.graph, e).map_err(|e| e.to_string())?;
                let p = pi_of(&h)?;
                check(p <= r.pi, "", || format!("collapse of {e} in {} has pi {p} > {}", r.graph, r.pi))?;
                collapses += 1;
            }
        }
    }
    Ok(format!("{subgraphs} subgraph and {collapses} collapse pairs at m <= 4"))
}

fn complexity_jumps(seed: u64, n: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let mh = rng.gen_range(1..=4);
        let h = connected_graph(&mut rng, mh);
        let j = rng.gen_range(0..mh);
        let l = rng.gen_range(0..mh);
        let mut edges = h.edges().to_vec();
        edges.push(Edge::new(j, mh));
        edges.push(Edge::new(mh, l));
        let k = DirectedGraph::new(mh + 1, edges).map_err(|e| e.to_string())?;
        let ph = pi_profile(&h, InfluenceMethod::Exact).map_err(|e| e.to_string())?;
        let pk = pi_profile(&k, InfluenceMethod::Exact).map_err(|e| e.to_string())?;
        for i in 0..mh {
            check(pk.pi_ij[i][mh] == ph.pi_ij[i][j] + 2, "", || format!("jump fails for {h} + ({},{}) at i={}", j + 1, l + 1, i + 1))?;
        }
    }
    Ok(format!("{n} two-edge augmentations"))
}

fn criterion_7(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in 4..=6 {
        let money = m - 1;
        let star = DirectedGraph::star(m, money).map_err(|e| e.to_string())?;
        let p = pi_profile(&star, InfluenceMethod::Exact).map_err(|e| e.to_string())?;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    let want = if i == money || j == money { 2 } else { 4 };
                    check(p.pi_ij[i][j] == want, "", || format!("star m={m}: pi_{}{} = {}", i + 1, j + 1, p.pi_ij[i][j]))?;
                }
            }
        }
        let b = positive_weights(&mut rng, &star, 100);
        for i in 0..money {
            let base = price_ratio(&star, &b, i, money).map_err(|e| e.to_string())?;
            for (k, e) in star.edges().iter().enumerate() {
                if *e == Edge::new(i, money) || *e == Edge::new(money, i) {
                    continue;
                }
                let moved = b.with_weight(*e, &b.values()[k] + positive_rational(&mut rng, 100)).map_err(|e| e.to_string())?;
                let r = price_ratio(&star, &moved, i, money).map_err(|e| e.to_string())?;
                check(r == base, "", || format!("p_{}/p_m moved when {e} changed", i + 1))?;
            }
        }
    }
    Ok("pi_ij pattern and p_i/p_m invariance for m = 4..6".into())
}

fn criterion_8() -> Outcome {
    let one = int(1);
    for m in 6..=200 {
        let w = weighted_minimizer(m, &one, &one).map_err(|e| e.to_string())?;
        check(w.argmin == [MechanismClass::Star], "", || format!("m={m}: argmin {:?}", w.argmin))?;
    }
    let w4 = weighted_minimizer(4, &one, &one).map_err(|e| e.to_string())?;
    check(w4.argmin == [MechanismClass::Cycle], "", || format!("m=4: argmin {:?}", w4.argmin))?;
    let w5 = weighted_minimizer(5, &one, &one).map_err(|e| e.to_string())?;
    check(w5.argmin.contains(&MechanismClass::Cycle), "", || format!("m=5: argmin {:?}", w5.argmin))?;
    for m in [4, 5] {
        let mut s = sweep(m, SearchConfig::screened(m as u64)).map_err(|e| e.to_string())?;
        let argmin = s.weighted_argmin(&one, &one).map_err(|e| e.to_string())?;
        let mut got: Vec<String> = argmin.iter().map(|r| r.class.to_string()).collect();
        let closed = weighted_minimizer(m, &one, &one).map_err(|e| e.to_string())?;
        let mut want: Vec<String> = closed.argmin.iter().map(|c| c.to_string()).collect();
        got.sort();
        want.sort();
        check(got == want, "", || format!("m={m}: enumeration argmin {got:?}, closed form {want:?}"))?;
    }
    let (nine, one_q) = (int(9), int(1));
    let m0 = m0_bound(&nine, &one_q).map_err(|e| e.to_string())?;
    check(m0 == 22, "", || format!("m0 = {m0}"))?;
    let m = Rational::from_integer(22.into());
    let both = m > int(2) * &nine / &one_q + int(3) && &m * &m - &m > &one_q / &nine + int(4);
    check(both, "", || "m = 22 violates the inequalities".into())?;
    let w22 = weighted_minimizer(22, &nine, &one_q).map_err(|e| e.to_string())?;
    check(w22.argmin == [MechanismClass::Star], "", || format!("m=22: argmin {:?}", w22.argmin))?;
    Ok(format!(
        "star strict for m = 6..200; cycle strict at m=4, tied with star at m=5 (unique={}); m0(9,1) = 22",
        w5.unique
    ))
}

fn criterion_9(seed: u64, scale: &Scale, workers: usize) -> Outcome {
    let t = Instant::now();
    let cfg = AxiomConfig { instances: scale.sessions, seed, workers, ..AxiomConfig::default() };
    let report = check_axioms(&cfg).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(report.all_passed(), "", || {
        let f = &report.failures[0];
        format!("{} failures; first: {} at seed {}: {}", report.failures.len(), f.axiom, f.seed, f.detail)
    })?;
    within(elapsed, Duration::from_secs(120), &format!("{} sessions, every property", scale.sessions))
}

fn criterion_10(seed: u64, scale: &Scale) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..scale.routes {
        let m = rng.gen_range(2..=6);
        let g = connected_graph(&mut rng, m);
        let b = positive_weights(&mut rng, &g, 100);
        let i = rng.gen_range(0..m);
        let j = (i + rng.gen_range(1..m)) % m;
        let x = positive_rational(&mut rng, 100);
        let plan = route_exchange(&g, &b, i, j, &x).map_err(|e| e.to_string())?;
        let ratio = price_ratio(&g, &b, i, j).map_err(|e| e.to_string())?;
        let tau = g.shortest_path_length(i, j).map_err(|e| e.to_string())?;
        check(plan.ratio == ratio && plan.step_count() == tau as usize, "", || format!("route {}->{} on {g}", i + 1, j + 1))?;
    }
    Ok(format!("{} random routes", scale.routes))
}

fn criterion_3() -> Outcome {
    let mut s = sweep(3, SearchConfig::exact()).map_err(|e| e.to_string())?;
    let triangle = DirectedGraph::from_labels(3, &[(1, 3), (3, 1), (1, 2), (2, 3)]).map_err(|e| e.to_string())?;
    let star = DirectedGraph::star(3, 2).map_err(|e| e.to_string())?;
    let t = s.find(&triangle).map_err(|e| e.to_string())?.point();
    let st = s.find(&star).map_err(|e| e.to_string())?.point();
    check(t == (2, 4) && st == (2, 4), "", || format!("chorded triangle {t:?}, star {st:?}"))?;
    let pareto = s.frontier(DominanceRule::Pareto).map_err(|e| e.to_string())?;
    let strict = s.frontier(DominanceRule::Strict).map_err(|e| e.to_string())?;
    let names = |f: &gmech::search::ParetoFrontier| f.classes().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    Ok(format!("chorded triangle (2,4) ties star; pareto [{}], strict [{}]", names(&pareto), names(&strict)))
}

pub fn run(quick: bool, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("verify", common.workers);
    manifest.seed("suite", common.seed);
    manifest.param("quick", quick);
    let scale = if quick {
        Scale { weightings: 1, random_cases: 40, jumps: 50, sessions: 100, routes: 50 }
    } else {
        Scale { weightings: 10, random_cases: 1000, jumps: 500, sessions: 1000, routes: 500 }
    };
    let seed = common.seed;
    let m5_budget = Duration::from_secs(600);
    let suites: Vec<Suite> = vec![
        (1, "frontier at m=4, exact", Box::new(|| frontier_matches(4, SearchConfig::exact().with_workers(common.workers), Duration::from_secs(10)))),
        (2, "frontier at m=5, screened", Box::new(move || frontier_matches(5, SearchConfig::screened(seed).with_workers(common.workers), m5_budget))),
        (3, "m=3 report", Box::new(criterion_3)),
        (4, "price oracle equivalence", Box::new(|| criterion_4(seed, &scale))),
        (5, "arborescence counts", Box::new(|| criterion_5(seed, &scale))),
        (6, "complexity by exhaustion", Box::new(|| criterion_6(seed, &scale))),
        (7, "star structure", Box::new(|| criterion_7(seed))),
        (8, "weighted objective", Box::new(criterion_8)),
        (9, "axiom suite", Box::new(|| criterion_9(seed, &scale, common.workers))),
        (10, "routing", Box::new(|| criterion_10(seed, &scale))),
    ];
    let mut criteria = Vec::new();
    let mut table = Table::new(&["id", "name", "passed", "detail"]);
    for (id, name, f) in suites {
        let t = Instant::now();
        let outcome = f();
        let seconds = (!common.omit_timing).then(|| t.elapsed().as_secs_f64());
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        table.push(vec![id.to_string(), name.to_string(), passed.to_string(), detail.clone()]);
        criteria.push(Criterion { id, name, passed, detail, seconds });
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    let failed = criteria.len() - passed;
    let body = VerifyReport { quick, passed, failed, criteria };
    Ok(Report::new(manifest, body)?.with_table(table).failed_if(failed > 0))
}
