//! Time complexity (graph diameter) and price complexity (number of edge
//! weights that influence each price ratio).
//!
//! An edge variable `x` influences `p_i / p_j` iff
//! `p_j * d(p_i)/dx - p_i * d(p_j)/dx` is not the zero polynomial. Tree
//! polynomials are multilinear, so with `p = x*A + B` this reduces to
//! `A_i * B_j != A_j * B_i`. The exact method expands both products; every
//! coefficient is positive, so equality is multiset equality of monomials.
//!
//! The randomized method evaluates prices over the prime field at two
//! points differing only in `x`. A nonzero cross difference certifies
//! influence; agreement on every trial is only evidence of non-influence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fp, PRIME};
use crate::graph::{DirectedGraph, Edge};
use crate::price::{price_ray_mod_p, tree_price_polynomials};
use crate::structure::MechanismClass;

pub const DEFAULT_TRIALS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InfluenceMethod {
    Exact,
    Randomized { trials: u32, seed: u64 },
}

impl InfluenceMethod {
    pub fn randomized(seed: u64) -> Self {
        InfluenceMethod::Randomized { trials: DEFAULT_TRIALS, seed }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, InfluenceMethod::Exact)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceReport {
    pub pair: (usize, usize),
    pub influential: Vec<Edge>,
    pub method: InfluenceMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauProfile {
    /// `tau_ij[i][j]`; the diagonal is 0.
    pub tau_ij: Vec<Vec<u32>>,
    pub tau: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiProfile {
    /// `pi_ij[i][j]`; the diagonal is 0.
    pub pi_ij: Vec<Vec<u32>>,
    pub pi: u32,
    pub method: InfluenceMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityProfile {
    pub m: usize,
    pub tau_ij: Vec<Vec<u32>>,
    pub pi_ij: Vec<Vec<u32>>,
    pub tau: u32,
    pub pi: u32,
    pub method: InfluenceMethod,
}

pub fn tau_profile(g: &DirectedGraph) -> Result<TauProfile> {
    g.ensure_connected()?;
    let m = g.vertex_count();
    let tau_ij: Vec<Vec<u32>> = (0..m)
        .map(|i| g.distances_from(i).into_iter().map(|d| d.expect("connected")).collect())
        .collect();
    let tau = tau_ij.iter().flatten().copied().max().unwrap_or(0);
    Ok(TauProfile { tau_ij, tau })
}

/// Influence matrix: `sets[i][j]` is a bitmask over edge indices.
fn exact_influence_sets(g: &DirectedGraph) -> Result<Vec<Vec<u64>>> {
    let m = g.vertex_count();
    let polys = tree_price_polynomials(g)?;
    let mut sets = vec![vec![0u64; m]; m];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for x in 0..g.edge_count() {
        let bit = 1u64 << x;
        // split every p_r as x*A_r + B_r
        let split: Vec<(Vec<u64>, Vec<u64>)> = polys
            .iter()
            .map(|p| {
                let (with, without): (Vec<u64>, Vec<u64>) = p.terms().iter().partition(|&&t| t & bit != 0);
                (with.into_iter().map(|t| t & !bit).collect(), without)
            })
            .collect();
        for i in 0..m {
            for j in i + 1..m {
                let (a_i, b_i) = &split[i];
                let (a_j, b_j) = &split[j];
                let influential = if a_i.len() * b_j.len() != a_j.len() * b_i.len() {
                    true
                } else {
                    product_multiset(a_i, b_j, &mut left);
                    product_multiset(a_j, b_i, &mut right);
                    left != right
                };
                if influential {
                    sets[i][j] |= bit;
                    sets[j][i] |= bit;
                }
            }
        }
    }
    Ok(sets)
}

/// Sorted products of two squarefree monomial lists. A product's exponent
/// vector (entries 0..=2) is encoded as `(a | b, a & b)`.
fn product_multiset(xs: &[u64], ys: &[u64], out: &mut Vec<u128>) {
    out.clear();
    out.reserve(xs.len() * ys.len());
    for &a in xs {
        for &b in ys {
            out.push(((a | b) as u128) << 64 | (a & b) as u128);
        }
    }
    out.sort_unstable();
}

fn randomized_influence_sets(g: &DirectedGraph, trials: u32, seed: u64) -> Vec<Vec<u64>> {
    let m = g.vertex_count();
    let e = g.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = vec![vec![0u64; m]; m];
    for _ in 0..trials {
        let base: Vec<Fp> = (0..e).map(|_| Fp::random_nonzero(&mut rng)).collect();
        let p = price_ray_mod_p(g, &base);
        for x in 0..e {
            let bit = 1u64 << x;
            let mut moved = base.clone();
            loop {
                moved[x] = Fp::random_nonzero(&mut rng);
                if moved[x] != base[x] {
                    break;
                }
            }
            let q = price_ray_mod_p(g, &moved);
            for i in 0..m {
                for j in i + 1..m {
                    if sets[i][j] & bit == 0 && p[i] * q[j] != q[i] * p[j] {
                        sets[i][j] |= bit;
                        sets[j][i] |= bit;
                    }
                }
            }
        }
    }
    sets
}

fn influence_sets(g: &DirectedGraph, method: InfluenceMethod) -> Result<Vec<Vec<u64>>> {
    g.ensure_connected()?;
    if g.edge_count() > 64 {
        return Err(Error::Invalid(format!("{} edges exceed the 64-variable limit", g.edge_count())));
    }
    match method {
        InfluenceMethod::Exact => exact_influence_sets(g),
        InfluenceMethod::Randomized { trials, seed } => Ok(randomized_influence_sets(g, trials, seed)),
    }
}

pub fn influential_edges(g: &DirectedGraph, i: usize, j: usize, method: InfluenceMethod) -> Result<InfluenceReport> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    if i == j {
        return Err(Error::SameVertex(i));
    }
    let sets = influence_sets(g, method)?;
    let influential = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(k, _)| sets[i][j] >> k & 1 == 1)
        .map(|(_, e)| *e)
        .collect();
    Ok(InfluenceReport { pair: (i, j), influential, method })
}

pub fn pi_profile(g: &DirectedGraph, method: InfluenceMethod) -> Result<PiProfile> {
    let sets = influence_sets(g, method)?;
    let pi_ij: Vec<Vec<u32>> = sets.iter().map(|row| row.iter().map(|s| s.count_ones()).collect()).collect();
    let pi = pi_ij.iter().flatten().copied().max().unwrap_or(0);
    Ok(PiProfile { pi_ij, pi, method })
}

pub fn profile(g: &DirectedGraph, method: InfluenceMethod) -> Result<ComplexityProfile> {
    let tau = tau_profile(g)?;
    let pi = pi_profile(g, method)?;
    Ok(ComplexityProfile {
        m: g.vertex_count(),
        tau_ij: tau.tau_ij,
        pi_ij: pi.pi_ij,
        tau: tau.tau,
        pi: pi.pi,
        method,
    })
}

/// `(tau, pi)` of one of the three special mechanisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialComplexity {
    pub class: MechanismClass,
    pub m: usize,
    pub tau: u64,
    pub pi: u64,
    /// False when computed directly from the graph (m = 2, 3).
    pub closed_form: bool,
    pub caveat: Option<String>,
}

pub fn special_complexity(class: MechanismClass, m: usize) -> Result<SpecialComplexity> {
    if !matches!(class, MechanismClass::Star | MechanismClass::Cycle | MechanismClass::Complete) {
        return Err(Error::UnsupportedClass(class.to_string()));
    }
    if m < 2 {
        return Err(Error::UnsupportedM { m, min: 2, max: usize::MAX });
    }
    let mm = m as u64;
    if m > 3 {
        let (tau, pi) = match class {
            MechanismClass::Star => (2, 4),
            MechanismClass::Cycle => (mm - 1, 2),
            _ => (1, mm * (mm - 1)),
        };
        return Ok(SpecialComplexity { class, m, tau, pi, closed_form: true, caveat: None });
    }
    let g = match class {
        MechanismClass::Star => DirectedGraph::star(m, m - 1)?,
        MechanismClass::Cycle => DirectedGraph::cycle(m)?,
        _ => DirectedGraph::complete(m)?,
    };
    let p = profile(&g, InfluenceMethod::Exact)?;
    let caveat = if m == 2 {
        format!(
            "on two commodities star, cycle and complete are the same bidirected pair; computed (tau, pi) = ({}, {}) differs from the quoted (2, 2)",
            p.tau, p.pi
        )
    } else {
        "on three commodities the chorded triangle ties the star at (tau, pi) = (2, 4)".to_string()
    };
    Ok(SpecialComplexity { class, m, tau: p.tau as u64, pi: p.pi as u64, closed_form: false, caveat: Some(caveat) })
}

/// Prime-field metadata embedded in reports.
pub fn prime_field_modulus() -> u64 {
    PRIME
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: usize, pairs: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::from_labels(m, pairs).unwrap()
    }

    fn labels(r: &InfluenceReport) -> Vec<(usize, usize)> {
        r.influential.iter().map(|e| e.labels()).collect()
    }

    fn chorded_triangle() -> DirectedGraph {
        g(3, &[(1, 3), (3, 1), (1, 2), (2, 3)])
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_profile(&DirectedGraph::star(5, 4).unwrap()).unwrap().tau, 2);
        assert_eq!(tau_profile(&DirectedGraph::cycle(5).unwrap()).unwrap().tau, 4);
        assert_eq!(tau_profile(&DirectedGraph::complete(4).unwrap()).unwrap().tau, 1);
    }

    #[test]
    fn chorded_triangle_influence() {
        let t0 = chorded_triangle();
        for method in [InfluenceMethod::Exact, InfluenceMethod::randomized(11)] {
            assert_eq!(labels(&influential_edges(&t0, 0, 1, method).unwrap()), vec![(1, 2), (2, 3)]);
            assert_eq!(
                labels(&influential_edges(&t0, 1, 2, method).unwrap()),
                vec![(1, 2), (1, 3), (2, 3), (3, 1)]
            );
        }
    }

    #[test]
    fn star_influence() {
        let star = DirectedGraph::star(5, 4).unwrap();
        let r = influential_edges(&star, 0, 1, InfluenceMethod::Exact).unwrap();
        assert_eq!(labels(&r), vec![(1, 5), (2, 5), (5, 1), (5, 2)]);
        assert_eq!(influential_edges(&star, 0, 4, InfluenceMethod::Exact).unwrap().influential.len(), 2);
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi_profile(&DirectedGraph::cycle(5).unwrap(), InfluenceMethod::Exact).unwrap().pi, 2);
        assert_eq!(pi_profile(&chorded_triangle(), InfluenceMethod::Exact).unwrap().pi, 4);
        let k4 = pi_profile(&DirectedGraph::complete(4).unwrap(), InfluenceMethod::Exact).unwrap();
        assert_eq!(k4.pi, 12);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(k4.pi_ij[i][j], 12);
                }
            }
        }
        assert_eq!(pi_profile(&DirectedGraph::single_vertex(), InfluenceMethod::Exact).unwrap().pi, 0);
    }

    #[test]
    fn methods_agree_on_small_graphs() {
        let graphs = [
            chorded_triangle(),
            DirectedGraph::complete(4).unwrap(),
            g(4, &[(1, 2), (2, 1), (2, 3), (3, 4), (4, 1), (4, 3)]),
            g(4, &[(1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3)]),
        ];
        for h in &graphs {
            let exact = pi_profile(h, InfluenceMethod::Exact).unwrap();
            let screened = pi_profile(h, InfluenceMethod::randomized(5)).unwrap();
            assert_eq!(exact.pi_ij, screened.pi_ij, "{h}");
        }
    }

    #[test]
    fn special_closed_forms() {
        let star = special_complexity(MechanismClass::Star, 10).unwrap();
        assert_eq!((star.tau, star.pi), (2, 4));
        let cycle = special_complexity(MechanismClass::Cycle, 10).unwrap();
        assert_eq!((cycle.tau, cycle.pi), (9, 2));
        let complete = special_complexity(MechanismClass::Complete, 10).unwrap();
        assert_eq!((complete.tau, complete.pi), (1, 90));
        assert!(special_complexity(MechanismClass::ChordedCycle, 10).is_err());
    }

    #[test]
    fn special_small_m_is_computed_and_flagged() {
        for class in [MechanismClass::Star, MechanismClass::Cycle, MechanismClass::Complete] {
            let s = special_complexity(class, 2).unwrap();
            assert!(!s.closed_form);
            assert_eq!((s.tau, s.pi), (1, 2));
            assert!(s.caveat.is_some());
        }
        let star3 = special_complexity(MechanismClass::Star, 3).unwrap();
        assert_eq!((star3.tau, star3.pi), (2, 4));
        let cycle3 = special_complexity(MechanismClass::Cycle, 3).unwrap();
        assert_eq!((cycle3.tau, cycle3.pi), (2, 2));
        let k3 = special_complexity(MechanismClass::Complete, 3).unwrap();
        assert_eq!((k3.tau, k3.pi), (1, 6));
    }
}
