use rand::seq::SliceRandom;
use serde::Serialize;

use super::GenError;
use crate::graph::{Graph, NodeId};
use crate::rng::{Rng, Seed};

/// Perfect matching on `groups * group_size` half-nodes.
///
/// Half-node `(i, j)` has flat index `i * group_size + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingGraph {
    groups: usize,
    group_size: usize,
    partner: Vec<u32>,
}

/// Why a contraction is not a simple graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ContractionDefects {
    /// Matching edges with both ends in one group.
    pub self_loops: usize,
    /// Matching edges that repeat an earlier group pair.
    pub duplicates: usize,
}

impl MatchingGraph {
    /// Uniform random perfect matching: shuffle, then pair neighbors.
    pub(crate) fn random(groups: usize, group_size: usize, rng: &mut Rng) -> MatchingGraph {
        let total = groups * group_size;
        debug_assert!(total.is_multiple_of(2));
        let mut order: Vec<u32> = (0..total as u32).collect();
        order.shuffle(rng);
        let mut partner = vec![0u32; total];
        for c in order.chunks_exact(2) {
            partner[c[0] as usize] = c[1];
            partner[c[1] as usize] = c[0];
        }
        MatchingGraph { groups, group_size, partner }
    }

    /// From explicit flat half-node pairs; must cover every half-node once.
    pub fn from_pairs(groups: usize, group_size: usize, pairs: &[(usize, usize)]) -> Result<MatchingGraph, GenError> {
        let total = groups * group_size;
        let mut partner = vec![u32::MAX; total];
        for &(a, b) in pairs {
            if a >= total || b >= total || a == b {
                return Err(GenError::InvalidParameter(format!("bad matching pair ({a}, {b})")));
            }
            if partner[a] != u32::MAX || partner[b] != u32::MAX {
                return Err(GenError::InvalidParameter(format!("half-node reused in pair ({a}, {b})")));
            }
            partner[a] = b as u32;
            partner[b] = a as u32;
        }
        if partner.contains(&u32::MAX) {
            return Err(GenError::InvalidParameter("matching is not perfect".into()));
        }
        Ok(MatchingGraph { groups, group_size, partner })
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn half_nodes(&self) -> usize {
        self.partner.len()
    }

    pub fn half_node(&self, group: usize, slot: usize) -> usize {
        group * self.group_size + slot
    }

    pub fn group_of(&self, half: usize) -> usize {
        half / self.group_size
    }

    pub fn partner(&self, half: usize) -> usize {
        self.partner[half] as usize
    }

    /// Matching edges touching `group`, as `(own half, partner half)`.
    pub fn group_incidence(&self, group: usize) -> Vec<(usize, usize)> {
        let base = group * self.group_size;
        (base..base + self.group_size).map(|h| (h, self.partner(h))).collect()
    }

    /// Whether some matching edge joins groups `a` and `b`.
    pub fn joins(&self, a: usize, b: usize) -> bool {
        self.group_incidence(a).iter().any(|&(_, h)| self.group_of(h) == b)
    }

    /// Matching edges `(x, y)` with `x < y`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner.iter().enumerate().filter(|&(x, &y)| x < y as usize).map(|(x, &y)| (x, y as usize))
    }

    pub fn is_involution(&self) -> bool {
        self.partner.iter().enumerate().all(|(x, &y)| y as usize != x && self.partner[y as usize] as usize == x)
    }

    /// Contracts every group to one node, keeping loops and parallel edges
    /// as adjacency-list entries.
    pub fn contract_unchecked(&self) -> Graph {
        let mut lists = vec![Vec::with_capacity(self.group_size); self.groups];
        for h in 0..self.half_nodes() {
            lists[self.group_of(h)].push(NodeId::new(self.group_of(self.partner(h))));
        }
        Graph::from_adjacency_unchecked(lists, Some(self.group_size))
    }

    /// Contracts every group; succeeds only if the result is simple.
    pub fn contract(&self) -> Result<Graph, ContractionDefects> {
        let mut defects = ContractionDefects::default();
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(self.half_nodes() / 2);
        for (x, y) in self.pairs() {
            let (a, b) = (self.group_of(x) as u32, self.group_of(y) as u32);
            if a == b {
                defects.self_loops += 1;
            } else {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        defects.duplicates = edges.windows(2).filter(|w| w[0] == w[1]).count();
        if defects != ContractionDefects::default() {
            return Err(defects);
        }
        Ok(Graph::from_unique_pairs(self.groups, &edges))
    }
}

/// Uniform draw from the matching model on `n` groups of `d` half-nodes.
pub fn gen_matching_model(n: usize, d: usize, seed: Seed) -> Result<MatchingGraph, GenError> {
    if n == 0 || d == 0 {
        return Err(GenError::InvalidParameter(format!("n = {n}, d = {d} must be positive")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::InvalidParameter(format!("n * d = {} is odd", n * d)));
    }
    Ok(MatchingGraph::random(n, d, &mut seed.rng()))
}

/// Calls `visit` with the partner array of every perfect matching on
/// `points` elements (`(points - 1)!!` of them). Intended for `points <= 14`.
pub fn enumerate_matchings(points: usize, mut visit: impl FnMut(&[u32])) {
    assert!(points.is_multiple_of(2), "odd number of points has no perfect matching");
    let mut partner = vec![u32::MAX; points];
    fn rec(partner: &mut [u32], visit: &mut dyn FnMut(&[u32])) {
        let Some(first) = partner.iter().position(|&p| p == u32::MAX) else {
            visit(partner);
            return;
        };
        for other in first + 1..partner.len() {
            if partner[other] == u32::MAX {
                partner[first] = other as u32;
                partner[other] = first as u32;
                rec(partner, visit);
                partner[first] = u32::MAX;
                partner[other] = u32::MAX;
            }
        }
    }
    rec(&mut partner, &mut visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn forced_matchings() {
        let mg = gen_matching_model(1, 2, Seed(5)).unwrap();
        assert_eq!(mg.pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        let mg = gen_matching_model(2, 1, Seed(5)).unwrap();
        assert_eq!(mg.pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(mg.joins(0, 1));
    }

    #[test]
    fn odd_half_node_count_rejected() {
        assert!(matches!(gen_matching_model(3, 1, Seed(0)), Err(GenError::InvalidParameter(_))));
    }

    #[test]
    fn four_points_uniform_over_three_matchings() {
        let trials = 100_000;
        let mut freq: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for s in 0..trials {
            let mg = gen_matching_model(2, 2, Seed(s)).unwrap();
            *freq.entry(mg.pairs().collect()).or_default() += 1;
        }
        assert_eq!(freq.len(), 3);
        for (m, c) in freq {
            let f = c as f64 / trials as f64;
            assert!((f - 1.0 / 3.0).abs() <= 0.01, "{m:?}: {f}");
        }
    }

    #[test]
    fn enumeration_counts_double_factorial() {
        for (points, expected) in [(2, 1), (4, 3), (6, 15), (8, 105), (12, 10395)] {
            let mut count = 0;
            enumerate_matchings(points, |p| {
                assert!(p.iter().enumerate().all(|(x, &y)| p[y as usize] as usize == x && y as usize != x));
                count += 1;
            });
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn contraction_defects_are_counted() {
        let mg = MatchingGraph::from_pairs(2, 2, &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(mg.contract(), Err(ContractionDefects { self_loops: 0, duplicates: 1 }));
        let mg = MatchingGraph::from_pairs(2, 2, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(mg.contract(), Err(ContractionDefects { self_loops: 2, duplicates: 0 }));
        let mg = MatchingGraph::from_pairs(2, 1, &[(0, 1)]).unwrap();
        let g = mg.contract().unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.regular_degree(), Some(1));
    }

    #[test]
    fn from_pairs_rejects_non_matchings() {
        assert!(MatchingGraph::from_pairs(2, 2, &[(0, 1)]).is_err());
        assert!(MatchingGraph::from_pairs(2, 2, &[(0, 1), (1, 2)]).is_err());
        assert!(MatchingGraph::from_pairs(2, 2, &[(0, 0), (1, 2)]).is_err());
    }
}
