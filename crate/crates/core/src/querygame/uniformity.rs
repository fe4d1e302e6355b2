//! Exhaustive check that, given any set of revealed matching edges, the
//! partner of an unrevealed half-node is uniform over the other unrevealed
//! half-nodes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::GameError;
use crate::generators::enumerate_matchings;

/// Largest matching model enumerated (`n d` half-nodes).
pub const MAX_HALF_NODES: usize = 10;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub half_nodes: usize,
    pub matchings: usize,
    /// Revealed edge sets examined.
    pub conditions: usize,
    /// `(condition, unrevealed half-node)` pairs examined.
    pub checks: usize,
    /// Checks whose partner counts were not all equal.
    pub violations: usize,
}

impl UniformityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checks > 0
    }
}

/// Partner of `half` tallied over all perfect matchings on `points` that
/// contain every pair in `revealed`.
pub fn conditional_partner_counts(points: usize, revealed: &[(usize, usize)], half: usize) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    enumerate_matchings(points, |partner| {
        if revealed.iter().all(|&(a, b)| partner[a] as usize == b) {
            *counts.entry(partner[half] as usize).or_insert(0) += 1;
        }
    });
    counts
}

/// Runs the check for the matching model on `n` groups of `d`, over every
/// set of disjoint revealed pairs that leaves at least two half-nodes free.
pub fn conditional_uniformity_check(n: usize, d: usize) -> Result<UniformityReport, GameError> {
    let points = n * d;
    if points % 2 == 1 || points == 0 || points > MAX_HALF_NODES {
        return Err(GameError::InvalidParameter(format!(
            "n d = {points} must be even, positive and at most {MAX_HALF_NODES}"
        )));
    }
    let mut all: Vec<Vec<u32>> = Vec::new();
    enumerate_matchings(points, |p| all.push(p.to_vec()));
    let mut report = UniformityReport { half_nodes: points, matchings: all.len(), ..Default::default() };

    let mut revealed: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; points];
    for_each_condition(points, 0, &mut used, &mut revealed, &mut |revealed, used| {
        report.conditions += 1;
        let consistent: Vec<&Vec<u32>> =
            all.iter().filter(|p| revealed.iter().all(|&(a, b)| p[a] as usize == b)).collect();
        let free: Vec<usize> = (0..points).filter(|&x| !used[x]).collect();
        for &h in &free {
            report.checks += 1;
            let mut counts = vec![0u64; points];
            for p in &consistent {
                counts[p[h] as usize] += 1;
            }
            let target = counts[free.iter().copied().find(|&x| x != h).unwrap()];
            let uniform = target > 0
                && (0..points).all(|x| {
                    let expected = if used[x] || x == h { 0 } else { target };
                    counts[x] == expected
                });
            report.violations += !uniform as usize;
        }
    });
    Ok(report)
}

/// Enumerates sets of disjoint pairs, each pair `(a, b)` with `a < b`,
/// built in increasing order of `a` so every set appears once.
fn for_each_condition(
    points: usize,
    from: usize,
    used: &mut [bool],
    revealed: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)], &[bool]),
) {
    visit(revealed, used);
    if points - 2 * revealed.len() <= 2 {
        return;
    }
    for a in from..points {
        if used[a] {
            continue;
        }
        for b in a + 1..points {
            if used[b] {
                continue;
            }
            used[a] = true;
            used[b] = true;
            revealed.push((a, b));
            for_each_condition(points, a + 1, used, revealed, visit);
            revealed.pop();
            used[a] = false;
            used[b] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_one_revealed_edge() {
        // 6 points with (0, 3) fixed: the other 4 points have 3 matchings,
        // and 1 meets each of 2, 4, 5 exactly once.
        let counts = conditional_partner_counts(6, &[(0, 3)], 1);
        assert_eq!(counts, BTreeMap::from([(2, 1), (4, 1), (5, 1)]));
    }

    #[test]
    fn uniform_at_ten_half_nodes() {
        let r = conditional_uniformity_check(5, 2).unwrap();
        assert_eq!(r.matchings, 945);
        // Sets of 0..=4 disjoint pairs on 10 points.
        assert_eq!(r.conditions, 1 + 45 + 630 + 3150 + 4725);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn rejects_large_or_odd_models() {
        assert!(conditional_uniformity_check(3, 1).is_err());
        assert!(conditional_uniformity_check(4, 3).is_err());
    }
}
