//! Canonical labelling by brute-force minimisation over all relabelings.
//!
//! A graph's key is the numerically smallest slot mask among all `m!`
//! relabelings, so two graphs share a key iff they are isomorphic.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{slot_edge, slot_index, DirectedGraph, Edge};

pub const MAX_CANON_VERTICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    m: u8,
    mask: u64,
}

impl CanonicalKey {
    pub fn vertex_count(&self) -> usize {
        self.m as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn to_bytes(&self) -> [u8; 9] {
        let mut out = [0u8; 9];
        out[0] = self.m;
        out[1..].copy_from_slice(&self.mask.to_le_bytes());
        out
    }

    /// The canonical representative itself.
    pub fn graph(&self) -> DirectedGraph {
        DirectedGraph::from_slot_mask(self.m as usize, self.mask)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.m, self.mask)
    }
}

/// Precomputed permutation action on slot masks for one vertex count.
pub struct Canonizer {
    m: usize,
    slots: usize,
    perms: Vec<Vec<usize>>,
    // byte-chunk lookup tables, only for m <= 6
    tables: Option<Vec<Vec<[u64; 256]>>>,
    // per-slot images, used when tables are absent
    images: Vec<Vec<u8>>,
}

impl Canonizer {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_CANON_VERTICES {
            return Err(Error::UnsupportedM { m, min: 1, max: MAX_CANON_VERTICES });
        }
        let slots = m * (m - 1);
        let perms = permutations(m);
        let images: Vec<Vec<u8>> = perms
            .iter()
            .map(|p| {
                (0..slots)
                    .map(|s| {
                        let e = slot_edge(m, s);
                        slot_index(m, Edge::new(p[e.from], p[e.to])) as u8
                    })
                    .collect()
            })
            .collect();
        let tables = (m <= 6).then(|| {
            let chunks = slots.div_ceil(8);
            images
                .iter()
                .map(|img| {
                    (0..chunks)
                        .map(|c| {
                            let mut table = [0u64; 256];
                            for (byte, entry) in table.iter_mut().enumerate() {
                                for b in 0..8 {
                                    let s = c * 8 + b;
                                    if s < slots && byte >> b & 1 == 1 {
                                        *entry |= 1u64 << img[s];
                                    }
                                }
                            }
                            table
                        })
                        .collect()
                })
                .collect()
        });
        Ok(Canonizer { m, slots, perms, tables, images })
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn permutation_count(&self) -> usize {
        self.perms.len()
    }

    #[inline]
    fn apply(&self, k: usize, mask: u64) -> u64 {
        match &self.tables {
            Some(tables) => {
                let mut out = 0;
                let mut rest = mask;
                for table in &tables[k] {
                    out |= table[(rest & 0xff) as usize];
                    rest >>= 8;
                }
                out
            }
            None => {
                let img = &self.images[k];
                let mut out = 0;
                let mut rest = mask;
                while rest != 0 {
                    let s = rest.trailing_zeros() as usize;
                    out |= 1u64 << img[s];
                    rest &= rest - 1;
                }
                out
            }
        }
    }

    pub fn canonical_mask(&self, mask: u64) -> u64 {
        (0..self.perms.len()).map(|k| self.apply(k, mask)).min().unwrap_or(mask)
    }

    /// True iff `mask` is already the minimum of its orbit.
    pub fn is_canonical(&self, mask: u64) -> bool {
        (0..self.perms.len()).all(|k| self.apply(k, mask) >= mask)
    }

    pub fn automorphism_count(&self, mask: u64) -> usize {
        (0..self.perms.len()).filter(|&k| self.apply(k, mask) == mask).count()
    }

    /// Number of distinct labeled graphs isomorphic to `mask`.
    pub fn labeled_count(&self, mask: u64) -> u64 {
        (self.perms.len() / self.automorphism_count(mask)) as u64
    }

    pub fn key(&self, g: &DirectedGraph) -> CanonicalKey {
        assert_eq!(g.vertex_count(), self.m);
        debug_assert!(self.slots <= 64);
        CanonicalKey { m: self.m as u8, mask: self.canonical_mask(g.slot_mask()) }
    }
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).unwrap_or(i);
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Canonical key of `g`, building a throwaway [`Canonizer`].
pub fn canonical_key(g: &DirectedGraph) -> Result<CanonicalKey> {
    Ok(Canonizer::new(g.vertex_count())?.key(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_cycles_share_a_key() {
        let a = DirectedGraph::from_labels(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let b = DirectedGraph::from_labels(3, &[(1, 3), (3, 2), (2, 1)]).unwrap();
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
    }

    #[test]
    fn stars_with_different_money_share_a_key() {
        let a = DirectedGraph::star(5, 0).unwrap();
        let b = DirectedGraph::star(5, 4).unwrap();
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
    }

    #[test]
    fn star_and_cycle_differ() {
        let a = DirectedGraph::star(4, 3).unwrap();
        let b = DirectedGraph::cycle(4).unwrap();
        assert_ne!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
    }

    #[test]
    fn table_and_bitwise_paths_agree() {
        // m = 7 uses the bitwise path; compare against a direct relabel
        let g = DirectedGraph::from_labels(7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 1), (3, 1)]).unwrap();
        let c = Canonizer::new(7).unwrap();
        let perm = [3, 1, 6, 0, 2, 5, 4];
        assert_eq!(c.key(&g), c.key(&g.relabel(&perm)));
    }

    #[test]
    fn labeled_counts() {
        let c = Canonizer::new(3).unwrap();
        assert_eq!(c.labeled_count(DirectedGraph::cycle(3).unwrap().slot_mask()), 2);
        assert_eq!(c.labeled_count(DirectedGraph::complete(3).unwrap().slot_mask()), 1);
        assert_eq!(c.labeled_count(DirectedGraph::star(3, 2).unwrap().slot_mask()), 3);
    }

    #[test]
    fn permutation_order() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
        assert_eq!(permutations(1), vec![vec![0]]);
    }
}
