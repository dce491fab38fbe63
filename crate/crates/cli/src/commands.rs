use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use gmech::arborescence::count_arborescences;
use gmech::axioms::{check_axioms, AxiomConfig, AxiomReport};
use gmech::complexity::{influential_edges, profile, InfluenceMethod};
use gmech::graph::{DirectedGraph, GraphJson};
use gmech::market::{route_exchange, run_session, ExchangePlanJson, OffersJson, SessionJson};
use gmech::price::{
    price_ratio, prices_by_balance_solve, prices_by_minors, prices_by_tree_formula, EdgeWeights, WeightsJson,
};
use gmech::rational::{format_rational, parse_rational, Rational};
use gmech::search::{
    m0_bound, sweep, weighted_minimizer, DominanceRule, MechanismRecord, MechanismRecordJson, PiMethod,
    SearchConfig, WeightedCostJson, MAX_SEARCH_M,
};
use gmech::structure::{classify, collapsible_edges, is_rigid};

use crate::manifest::{read_input, RunManifest};
use crate::output::{Report, Table};
use crate::{Common, MethodArg, RuleArg};

fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8], what: &str) -> Result<T> {
    serde_json::from_slice(bytes).with_context(|| format!("parsing {what}"))
}

fn load_graph(manifest: &mut RunManifest, path: &Path) -> Result<DirectedGraph> {
    let json: GraphJson = parse_json(&read_input(manifest, "graph", path)?, "graph")?;
    let g = DirectedGraph::try_from(json).context("invalid graph")?;
    g.ensure_connected().context("invalid graph")?;
    Ok(g)
}

fn load_weights(manifest: &mut RunManifest, path: &Path, g: &DirectedGraph) -> Result<EdgeWeights> {
    let json: WeightsJson = parse_json(&read_input(manifest, "weights", path)?, "weights")?;
    json.into_weights(g).context("invalid weights")
}

fn vertex_arg(g: &DirectedGraph, label: usize, flag: &str) -> Result<usize> {
    if label == 0 || label > g.vertex_count() {
        bail!("--{flag} {label} is not a vertex of a graph on {} commodities", g.vertex_count());
    }
    Ok(label - 1)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn pi_method(method: MethodArg) -> PiMethod {
    match method {
        MethodArg::Exact => PiMethod::Exact,
        MethodArg::Screened => PiMethod::Screened,
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    graph: GraphJson,
    m: usize,
    edge_count: usize,
    class: String,
    circuit_rank: usize,
    rigid: bool,
    collapsible_edges: Vec<[usize; 2]>,
    tau: u32,
    arborescence_counts: Vec<String>,
}

pub fn analyze(path: &Path, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("analyze", common.workers);
    let g = load_graph(&mut manifest, path)?;
    let counts = (0..g.vertex_count())
        .map(|r| count_arborescences(&g, r).map(|c| c.to_string()))
        .collect::<gmech::Result<Vec<_>>>()?;
    let body = AnalyzeReport {
        graph: g.to_json(),
        m: g.vertex_count(),
        edge_count: g.edge_count(),
        class: classify(&g)?.to_string(),
        circuit_rank: g.circuit_rank()?,
        rigid: is_rigid(&g),
        collapsible_edges: collapsible_edges(&g).iter().map(|e| [e.from + 1, e.to + 1]).collect(),
        tau: gmech::complexity::tau_profile(&g)?.tau,
        arborescence_counts: counts,
    };
    Report::new(manifest, body)
}

#[derive(Serialize)]
struct PriceReport {
    normalization: &'static str,
    tree_formula: Vec<String>,
    balance_solve: Vec<String>,
    laplacian_minors: Vec<String>,
    methods_agree: bool,
    residuals: Vec<String>,
    residuals_zero: bool,
}

pub fn price(graph: &Path, weights: &Path, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("price", common.workers);
    let g = load_graph(&mut manifest, graph)?;
    let b = load_weights(&mut manifest, weights, &g)?;
    let tree = prices_by_tree_formula(&g, &b)?;
    let solve = prices_by_balance_solve(&g, &b)?;
    let minors = prices_by_minors(&g, &b)?;
    let residuals = tree.balance_residuals(&b);
    let residuals_zero = residuals.iter().all(|r| r == &Rational::from_integer(0.into()));
    let methods_agree = tree == solve && tree == minors;
    let mut table = Table::new(&["commodity", "tree_formula", "balance_solve", "residual"]);
    for k in 0..g.vertex_count() {
        table.push(vec![
            (k + 1).to_string(),
            format_rational(tree.get(k)),
            format_rational(solve.get(k)),
            format_rational(&residuals[k]),
        ]);
    }
    let body = PriceReport {
        normalization: "p1=1",
        tree_formula: strings(tree.as_slice()),
        balance_solve: strings(solve.as_slice()),
        laplacian_minors: strings(minors.as_slice()),
        methods_agree,
        residuals: strings(&residuals),
        residuals_zero,
    };
    Ok(Report::new(manifest, body)?.with_table(table).failed_if(!(methods_agree && residuals_zero)))
}

#[derive(Serialize)]
struct PairInfluence {
    pair: [usize; 2],
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct ComplexityReport {
    m: usize,
    method: &'static str,
    trials: Option<u32>,
    tau: u32,
    pi: u32,
    tau_ij: Vec<Vec<u32>>,
    pi_ij: Vec<Vec<u32>>,
    influential: Vec<PairInfluence>,
}

pub fn complexity(path: &Path, method: MethodArg, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("complexity", common.workers);
    let g = load_graph(&mut manifest, path)?;
    let (influence, name, trials) = match method {
        MethodArg::Exact => (InfluenceMethod::Exact, "exact", None),
        MethodArg::Screened => {
            manifest.seed("screen", common.seed);
            let m = InfluenceMethod::randomized(common.seed);
            let InfluenceMethod::Randomized { trials, .. } = m else { unreachable!() };
            (m, "screened", Some(trials))
        }
    };
    manifest.param("method", name);
    let p = profile(&g, influence)?;
    let m = g.vertex_count();
    let mut influential = Vec::new();
    let mut table = Table::new(&["i", "j", "tau_ij", "pi_ij"]);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                table.push(vec![(i + 1).to_string(), (j + 1).to_string(), p.tau_ij[i][j].to_string(), p.pi_ij[i][j].to_string()]);
            }
            if i < j {
                let r = influential_edges(&g, i, j, influence)?;
                influential.push(PairInfluence {
                    pair: [i + 1, j + 1],
                    edges: r.influential.iter().map(|e| [e.from + 1, e.to + 1]).collect(),
                });
            }
        }
    }
    let body = ComplexityReport { m, method: name, trials, tau: p.tau, pi: p.pi, tau_ij: p.tau_ij, pi_ij: p.pi_ij, influential };
    Ok(Report::new(manifest, body)?.with_table(table))
}

#[derive(Serialize)]
struct FrontierJson {
    rule: String,
    description: &'static str,
    minimal: Vec<MechanismRecordJson>,
}

#[derive(Serialize)]
struct FrontierReport {
    m: usize,
    method: String,
    canonical_count: usize,
    labeled_count: u64,
    exact_verifications: usize,
    frontiers: Vec<FrontierJson>,
}

fn edge_list(r: &MechanismRecord) -> String {
    r.graph.label_pairs().iter().map(|[i, j]| format!("{i}->{j}")).collect::<Vec<_>>().join(" ")
}

pub fn frontier(m: usize, method: MethodArg, rule: RuleArg, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("frontier", common.workers);
    let method = pi_method(method);
    manifest.param("m", m);
    manifest.param("method", method);
    manifest.seed("screen", common.seed);
    let cfg = SearchConfig { method, workers: common.workers, seed: common.seed };
    let mut s = sweep(m, cfg)?;
    let rules = match rule {
        RuleArg::Pareto => vec![DominanceRule::Pareto],
        RuleArg::Strict => vec![DominanceRule::Strict],
        RuleArg::Both => vec![DominanceRule::Pareto, DominanceRule::Strict],
    };
    manifest.param("rule", rules.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","));
    let mut table = Table::new(&["rule", "class", "tau", "pi", "labeled_count", "edges"]);
    let mut frontiers = Vec::new();
    for r in rules {
        let f = s.frontier(r)?;
        for rec in &f.minimal {
            table.push(vec![
                r.to_string(),
                rec.class.to_string(),
                rec.tau.to_string(),
                rec.pi.to_string(),
                rec.labeled_count.to_string(),
                edge_list(rec),
            ]);
        }
        frontiers.push(FrontierJson {
            rule: r.to_string(),
            description: r.description(),
            minimal: f.minimal.iter().map(MechanismRecord::to_json).collect(),
        });
    }
    let body = FrontierReport {
        m,
        method: method.to_string(),
        canonical_count: s.records.len(),
        labeled_count: s.labeled_total(),
        exact_verifications: s.exact_verifications,
        frontiers,
    };
    Ok(Report::new(manifest, body)?.with_table(table))
}

#[derive(Serialize)]
struct EnumerationCheck {
    argmin: Vec<MechanismRecordJson>,
    agrees_with_closed_form: bool,
}

#[derive(Serialize)]
struct MinimizeReport {
    m: usize,
    lambda: String,
    mu: String,
    specials: Vec<WeightedCostJson>,
    argmin: Vec<String>,
    unique: bool,
    m0_bound: u64,
    enumeration: Option<EnumerationCheck>,
}

pub fn minimize(m: usize, lambda: &str, mu: &str, method: MethodArg, enumerate: bool, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("minimize", common.workers);
    let lambda_q = parse_rational(lambda).context("--lambda")?;
    let mu_q = parse_rational(mu).context("--mu")?;
    manifest.param("m", m);
    manifest.param("lambda", format_rational(&lambda_q));
    manifest.param("mu", format_rational(&mu_q));
    let w = weighted_minimizer(m, &lambda_q, &mu_q)?;
    let m0 = m0_bound(&lambda_q, &mu_q)?;
    let enumeration = if enumerate || m <= 5 {
        if m > MAX_SEARCH_M {
            bail!("full enumeration supports m <= {MAX_SEARCH_M}");
        }
        let method = pi_method(method);
        manifest.param("method", method);
        manifest.seed("screen", common.seed);
        let mut s = sweep(m, SearchConfig { method, workers: common.workers, seed: common.seed })?;
        let argmin = s.weighted_argmin(&lambda_q, &mu_q)?;
        let mut classes: Vec<_> = argmin.iter().map(|r| r.class).collect();
        let mut expected = w.argmin.clone();
        classes.sort_by_key(|c| c.to_string());
        expected.sort_by_key(|c| c.to_string());
        let best = &w.specials.iter().find(|c| c.class == w.argmin[0]).expect("argmin is special").cost;
        let costs_match = argmin.iter().all(|r| &(&lambda_q * Rational::from_integer(r.pi.into()) + &mu_q * Rational::from_integer(r.tau.into())) == best);
        Some(EnumerationCheck {
            argmin: argmin.iter().map(MechanismRecord::to_json).collect(),
            agrees_with_closed_form: classes == expected && costs_match,
        })
    } else {
        None
    };
    let mut table = Table::new(&["class", "tau", "pi", "cost", "argmin"]);
    for c in &w.specials {
        table.push(vec![
            c.class.to_string(),
            c.tau.to_string(),
            c.pi.to_string(),
            format_rational(&c.cost),
            w.argmin.contains(&c.class).to_string(),
        ]);
    }
    let failed = enumeration.as_ref().is_some_and(|e| !e.agrees_with_closed_form);
    let body = MinimizeReport {
        m,
        lambda: format_rational(&lambda_q),
        mu: format_rational(&mu_q),
        specials: w.specials.iter().map(|c| c.to_json()).collect(),
        argmin: w.argmin.iter().map(|c| c.to_string()).collect(),
        unique: w.unique,
        m0_bound: m0,
        enumeration,
    };
    Ok(Report::new(manifest, body)?.with_table(table).failed_if(failed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionInput {
    graph: GraphJson,
    traders: Vec<OffersJson>,
    #[serde(default)]
    options: SessionOptions,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SessionOptions {
    #[serde(default)]
    check_axioms: bool,
    instances: Option<usize>,
    seed: Option<u64>,
    max_traders: Option<usize>,
    max_value: Option<i64>,
}

#[derive(Serialize)]
struct SimulateReport {
    session: SessionJson,
    axioms: Option<AxiomReport>,
}

pub fn simulate(path: &Path, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("simulate", common.workers);
    let input: SessionInput = parse_json(&read_input(&mut manifest, "session", path)?, "session")?;
    let g = DirectedGraph::try_from(input.graph).context("invalid graph")?;
    g.ensure_connected().context("invalid graph")?;
    let traders = input
        .traders
        .iter()
        .enumerate()
        .map(|(k, t)| t.into_offers(&g).with_context(|| format!("trader {}", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    let session = run_session(&g, &traders)?;
    let axioms = if input.options.check_axioms {
        let defaults = AxiomConfig::default();
        let cfg = AxiomConfig {
            instances: input.options.instances.unwrap_or(100),
            seed: input.options.seed.unwrap_or(common.seed),
            max_m: g.vertex_count().clamp(2, 6),
            max_traders: input.options.max_traders.unwrap_or(defaults.max_traders),
            max_value: input.options.max_value.unwrap_or(defaults.max_value),
            workers: common.workers,
            graph: Some(g.clone()),
        };
        manifest.seed("axioms", cfg.seed);
        manifest.param("axiom_instances", cfg.instances);
        Some(check_axioms(&cfg)?)
    } else {
        None
    };
    let mut table = Table::new(&["trader", "commodity", "return", "net_trade"]);
    for (k, (r, nu)) in session.returns.iter().zip(&session.net_trades).enumerate() {
        for c in 0..g.vertex_count() {
            table.push(vec![(k + 1).to_string(), (c + 1).to_string(), format_rational(&r[c]), format_rational(&nu.nu[c])]);
        }
    }
    let json = session.to_json();
    let failed = !json.conservation || !json.budget_balance || axioms.as_ref().is_some_and(|a| !a.all_passed());
    Ok(Report::new(manifest, SimulateReport { session: json, axioms })?.with_table(table).failed_if(failed))
}

#[derive(Serialize)]
struct RouteReport {
    plan: ExchangePlanJson,
    price_ratio: String,
    ratio_matches_prices: bool,
    shortest_path_length: u32,
    step_count_matches: bool,
}

pub fn route(graph: &Path, weights: &Path, from: usize, to: usize, amount: &str, common: &Common) -> Result<Report> {
    let mut manifest = RunManifest::new("route", common.workers);
    let g = load_graph(&mut manifest, graph)?;
    let b = load_weights(&mut manifest, weights, &g)?;
    let i = vertex_arg(&g, from, "from")?;
    let j = vertex_arg(&g, to, "to")?;
    let x = parse_rational(amount).context("--amount")?;
    manifest.param("from", from);
    manifest.param("to", to);
    manifest.param("amount", format_rational(&x));
    let plan = route_exchange(&g, &b, i, j, &x)?;
    let expected = price_ratio(&g, &b, i, j)?;
    let tau = g.shortest_path_length(i, j)?;
    let mut table = Table::new(&["step", "edge", "offered", "received"]);
    for (k, s) in plan.steps.iter().enumerate() {
        let (a, c) = s.edge.labels();
        table.push(vec![(k + 1).to_string(), format!("{a}->{c}"), format_rational(&s.offered), format_rational(&s.received)]);
    }
    let body = RouteReport {
        ratio_matches_prices: plan.ratio == expected,
        step_count_matches: plan.step_count() == tau as usize,
        plan: plan.to_json(),
        price_ratio: format_rational(&expected),
        shortest_path_length: tau,
    };
    let failed = !(body.ratio_matches_prices && body.step_count_matches);
    Ok(Report::new(manifest, body)?.with_table(table).failed_if(failed))
}
