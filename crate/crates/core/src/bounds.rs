//! Closed-form expander bounds and their exact counterparts.
//!
//! Evaluators work in log space; `*_ln` variants return the natural log of
//! the bound so that comparisons survive values beyond `f64::MAX`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, Graph, GraphError, NodeId, QueryOracle};
use crate::pathfind::full_bfs;

pub const WALK_COUNT_MAX_NODES: usize = 4096;
pub const WALK_COUNT_MAX_LEN: usize = 64;
pub const DISTRIBUTION_MAX_NODES: usize = 4096;
pub const DISTRIBUTION_MAX_STEPS: usize = 10_000;

/// Exponents above this are not materialized as `f64`.
const MAX_EXP: f64 = 700.0;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("{what} = {value} exceeds the budget of {max}")]
    Budget { what: &'static str, value: usize, max: usize },
    #[error("operation needs a regular graph")]
    NotRegular,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `(n, d, lambda)` with `0 < lambda < d <= n - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
}

impl ExpanderParams {
    pub fn new(n: usize, d: usize, lambda: f64) -> Result<ExpanderParams, BoundsError> {
        if !(lambda > 0.0 && lambda < d as f64 && d < n) {
            return Err(BoundsError::InvalidParameter(format!(
                "need 0 < lambda < d <= n - 1, got n = {n}, d = {d}, lambda = {lambda}"
            )));
        }
        Ok(ExpanderParams { n, d, lambda })
    }

    pub fn ratio(&self) -> f64 {
        self.lambda / self.d as f64
    }

    /// `lg_{d/lambda}(x)`.
    pub fn log_base(&self, x: f64) -> f64 {
        x.ln() / (self.d as f64 / self.lambda).ln()
    }
}

/// Ceiling that absorbs rounding noise: values within `1e-9` (relative) of
/// an integer round to it.
pub fn ceil_tol(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

fn exp_guarded(ln: f64) -> f64 {
    if ln > MAX_EXP {
        f64::INFINITY
    } else {
        ln.exp()
    }
}

/// `ln((lambda/d)^{2k} n^2)`.
pub fn far_node_bound_ln(p: &ExpanderParams, k: usize) -> f64 {
    2.0 * k as f64 * p.ratio().ln() + 2.0 * (p.n as f64).ln()
}

/// `(lambda/d)^{2k} n^2`: bound on the number of nodes with no length-`k`
/// walk from `s`, hence on nodes farther than `k` from `s`.
pub fn far_node_bound(p: &ExpanderParams, k: usize) -> f64 {
    exp_guarded(far_node_bound_ln(p, k))
}

/// `(1/2) lg_{d/lambda}(n / delta)`: radius within which all but
/// `delta n` nodes lie.
pub fn radius_for_fraction(p: &ExpanderParams, delta: f64) -> Result<f64, BoundsError> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(BoundsError::InvalidParameter(format!("delta = {delta}, need 0 < delta <= 1")));
    }
    Ok(0.5 * p.log_base(p.n as f64 / delta))
}

/// `ceil(lg_{d/lambda} n)`.
pub fn diameter_bound(p: &ExpanderParams) -> usize {
    ceil_tol(p.log_base(p.n as f64))
}

/// Nodes at distance greater than `k` from `s`, unreachable ones included.
pub fn count_far_nodes(g: &Graph, s: NodeId, k: usize) -> Result<usize, GraphError> {
    let dist = full_bfs(&mut QueryOracle::new(g), s)?;
    Ok(dist.iter().filter(|d| d.is_none_or(|d| d as usize > k)).count())
}

/// `ln(w d^k (mu + (lambda/d)(1 - mu))^k)` with `mu = w / n`;
/// `-inf` when `w = 0`.
pub fn confined_walk_bound_ln(p: &ExpanderParams, w: usize, k: usize) -> Result<f64, BoundsError> {
    if w > p.n {
        return Err(BoundsError::InvalidParameter(format!("w = {w} exceeds n = {}", p.n)));
    }
    if w == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let mu = w as f64 / p.n as f64;
    let kf = k as f64;
    Ok((w as f64).ln() + kf * (p.d as f64).ln() + kf * (mu + p.ratio() * (1.0 - mu)).ln())
}

/// Bound on the number of length-`k` walks that stay inside a set of `w` nodes.
pub fn confined_walk_bound(p: &ExpanderParams, w: usize, k: usize) -> Result<f64, BoundsError> {
    Ok(exp_guarded(confined_walk_bound_ln(p, w, k)?))
}

/// Exact number of walks with `k` steps (`k + 1` nodes, repeats allowed)
/// whose nodes all lie in `set`. Parallel edges count separately.
pub fn count_confined_walks<G: Adjacency + ?Sized>(g: &G, set: &[NodeId], k: usize) -> Result<BigUint, BoundsError> {
    let n = g.node_count();
    if n > WALK_COUNT_MAX_NODES {
        return Err(BoundsError::Budget { what: "n", value: n, max: WALK_COUNT_MAX_NODES });
    }
    if k > WALK_COUNT_MAX_LEN {
        return Err(BoundsError::Budget { what: "k", value: k, max: WALK_COUNT_MAX_LEN });
    }
    let mut inside = vec![false; n];
    for &v in set {
        if v.index() >= n {
            return Err(GraphError::NodeOutOfRange { node: v.index(), n }.into());
        }
        inside[v.index()] = true;
    }
    let members: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
    let mut count: Vec<BigUint> = (0..n).map(|v| if inside[v] { BigUint::one() } else { BigUint::zero() }).collect();
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); n];
        for &v in &members {
            for u in g.neighbors(NodeId::new(v)) {
                if inside[u.index()] {
                    next[v] += &count[u.index()];
                }
            }
        }
        count = next;
    }
    Ok(members.iter().map(|&v| &count[v]).sum())
}

/// `ln` of a non-negative big integer (`-inf` for zero).
pub fn biguint_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap().ln();
    }
    let shift = bits - 64;
    let top = num_traits::ToPrimitive::to_f64(&(x >> shift)).unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(lambda/d)^k`: bound on `|p^k_{s,t} - 1/n|`.
pub fn mixing_deviation_bound(p: &ExpanderParams, k: usize) -> f64 {
    (k as f64 * p.ratio().ln()).exp()
}

/// Distribution of the endpoint of a `k`-step uniform walk from `s`.
pub fn exact_walk_distribution<G: Adjacency + ?Sized>(g: &G, s: NodeId, k: usize) -> Result<Vec<f64>, BoundsError> {
    let d = g.regular_degree().filter(|&d| d > 0).ok_or(BoundsError::NotRegular)?;
    let n = g.node_count();
    if n > DISTRIBUTION_MAX_NODES {
        return Err(BoundsError::Budget { what: "n", value: n, max: DISTRIBUTION_MAX_NODES });
    }
    if k > DISTRIBUTION_MAX_STEPS {
        return Err(BoundsError::Budget { what: "k", value: k, max: DISTRIBUTION_MAX_STEPS });
    }
    if s.index() >= n {
        return Err(GraphError::NodeOutOfRange { node: s.index(), n }.into());
    }
    let mut p = vec![0.0; n];
    p[s.index()] = 1.0;
    let inv_d = 1.0 / d as f64;
    for _ in 0..k {
        // Symmetric adjacency: pulling from neighbors equals pushing to them.
        p = (0..n)
            .map(|v| g.neighbors(NodeId::new(v)).iter().map(|u| p[u.index()]).sum::<f64>() * inv_d)
            .collect();
    }
    Ok(p)
}

/// Distance window `lg_{d-1} n +- 3 lg_{d-1} lg_2 n` for d-regular graphs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceWindow {
    pub center: f64,
    pub slack: f64,
}

impl DistanceWindow {
    pub fn new(n: usize, d: usize) -> DistanceWindow {
        let base = ((d - 1) as f64).ln();
        let nf = n as f64;
        DistanceWindow { center: nf.ln() / base, slack: 3.0 * nf.log2().ln() / base }
    }

    pub fn contains(&self, dist: u32) -> bool {
        (dist as f64 - self.center).abs() <= self.slack
    }
}

/// Fraction of targets `t != s` whose distance from `s` falls outside
/// [`DistanceWindow`]; unreachable targets count as outside.
pub fn ramanujan_concentration_check(g: &Graph, s: NodeId) -> Result<f64, BoundsError> {
    let d = g.regular_degree().ok_or(BoundsError::NotRegular)?;
    if d < 3 {
        return Err(BoundsError::InvalidParameter(format!("d = {d}, need d >= 3")));
    }
    let n = g.n();
    let dist = full_bfs(&mut QueryOracle::new(g), s)?;
    let window = DistanceWindow::new(n, d);
    let outside = (0..n).filter(|&t| t != s.index()).filter(|&t| !dist[t].is_some_and(|x| window.contains(x))).count();
    Ok(outside as f64 / (n - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{self, fixtures};
    use crate::rng::Seed;
    use crate::spectral::lambda_exact;
    use proptest::prelude::*;

    fn params(n: usize, d: usize, lambda: f64) -> ExpanderParams {
        ExpanderParams::new(n, d, lambda).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn params_invariants() {
        assert!(ExpanderParams::new(10, 3, 3.0).is_err());
        assert!(ExpanderParams::new(10, 3, 0.0).is_err());
        assert!(ExpanderParams::new(4, 4, 1.0).is_err());
        assert!(ExpanderParams::new(4, 3, 1.0).is_ok());
    }

    #[test]
    fn ceil_tol_absorbs_noise() {
        assert_eq!(ceil_tol(10.000000000001), 10);
        assert_eq!(ceil_tol(9.9999999999), 10);
        assert_eq!(ceil_tol(10.01), 11);
        assert_eq!(ceil_tol(0.0), 0);
    }

    #[test]
    fn far_node_examples() {
        let p = params(1024, 4, 2.0);
        assert_eq!(far_node_bound(&p, 0), 1024.0 * 1024.0);
        assert!(close(far_node_bound(&p, 10), 1.0));
        // k = (1/2) lg_2(1024 / (1/4)) = 6 gives delta n.
        assert!(close(radius_for_fraction(&p, 0.25).unwrap(), 6.0));
        assert!(close(far_node_bound(&p, 6), 256.0));
    }

    #[test]
    fn radius_examples() {
        let p = params(1 << 20, 2, 1.0);
        assert!(close(radius_for_fraction(&p, 1.0).unwrap(), 10.0));
        assert!(close(radius_for_fraction(&p, 1.0 / 16.0).unwrap(), 12.0));
        let tiny = params(2, 1, 0.5);
        assert!(close(radius_for_fraction(&tiny, 1.0).unwrap(), 0.5));
        assert!(radius_for_fraction(&p, 0.0).is_err());
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter_bound(&params(1024, 2, 1.0)), 10);
        assert_eq!(diameter_bound(&params(1000, 10, 1.0)), 3);
        assert_eq!(diameter_bound(&params(10, 3, 2.0)), 6);
        let g = fixtures::petersen();
        let ecc = (0..10)
            .map(|s| full_bfs(&mut QueryOracle::new(&g), NodeId(s)).unwrap().into_iter().flatten().max().unwrap())
            .max()
            .unwrap();
        assert_eq!(ecc, 2);
    }

    #[test]
    fn far_node_counts() {
        let c6 = fixtures::cycle(6);
        assert_eq!(count_far_nodes(&c6, NodeId(0), 3).unwrap(), 0);
        assert_eq!(count_far_nodes(&c6, NodeId(0), 1).unwrap(), 3);
        assert_eq!(count_far_nodes(&fixtures::petersen(), NodeId(0), 1).unwrap(), 6);
    }

    #[test]
    fn confined_bound_examples() {
        let p = params(10, 3, 2.0);
        assert!(close(confined_walk_bound(&p, 10, 4).unwrap(), 10.0 * 81.0));
        assert!(close(confined_walk_bound(&p, 7, 0).unwrap(), 7.0));
        assert!(close(confined_walk_bound(&p, 5, 2).unwrap(), 31.25));
        assert_eq!(confined_walk_bound(&p, 0, 3).unwrap(), 0.0);
        assert!(confined_walk_bound(&p, 11, 1).is_err());
    }

    #[test]
    fn log_space_guard() {
        let p = params(1 << 20, 16, 4.0);
        assert_eq!(confined_walk_bound(&p, 1 << 20, 400).unwrap(), f64::INFINITY);
        let ln = confined_walk_bound_ln(&p, 1 << 20, 400).unwrap();
        assert!(close(ln, 20.0 * 2f64.ln() + 400.0 * 16f64.ln()));
    }

    #[test]
    fn confined_walk_examples() {
        let c6 = fixtures::cycle(6);
        let all: Vec<NodeId> = (0..6).map(NodeId).collect();
        assert_eq!(count_confined_walks(&c6, &all, 2).unwrap(), BigUint::from(24u32));
        assert_eq!(count_confined_walks(&c6, &[NodeId(0)], 1).unwrap(), BigUint::zero());
        let seg = [NodeId(0), NodeId(1), NodeId(2)];
        assert_eq!(count_confined_walks(&c6, &seg, 2).unwrap(), BigUint::from(6u32));
        assert!(matches!(count_confined_walks(&c6, &seg, 65), Err(BoundsError::Budget { .. })));
    }

    /// Enumerates all walks explicitly.
    fn brute_force_walks(g: &Graph, set: &[NodeId], k: usize) -> u64 {
        fn extend(g: &Graph, inside: &[bool], v: NodeId, left: usize) -> u64 {
            if left == 0 {
                return 1;
            }
            g.neighbors(v).iter().filter(|u| inside[u.index()]).map(|&u| extend(g, inside, u, left - 1)).sum()
        }
        let mut inside = vec![false; g.n()];
        set.iter().for_each(|v| inside[v.index()] = true);
        set.iter().map(|&v| extend(g, &inside, v, k)).sum()
    }

    #[test]
    fn big_counts_stay_exact() {
        let k4 = fixtures::complete(4);
        let all: Vec<NodeId> = (0..4).map(NodeId).collect();
        // 4 * 3^40 overflows u64.
        let want = BigUint::from(4u32) * BigUint::from(3u32).pow(40);
        let got = count_confined_walks(&k4, &all, 40).unwrap();
        assert_eq!(got, want);
        assert!(close(biguint_ln(&got), 4f64.ln() + 40.0 * 3f64.ln()));
    }

    #[test]
    fn mixing_examples() {
        let p = params(1024, 4, 2.0);
        assert_eq!(mixing_deviation_bound(&p, 0), 1.0);
        assert!(close(mixing_deviation_bound(&p, 10), 1.0 / 1024.0));
        assert!((mixing_deviation_bound(&params(10, 3, 2.0), 3) - 0.2963).abs() < 1e-4);
    }

    #[test]
    fn walk_distribution_examples() {
        let k4 = fixtures::complete(4);
        assert_eq!(exact_walk_distribution(&k4, NodeId(2), 0).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
        let one = exact_walk_distribution(&k4, NodeId(0), 1).unwrap();
        for (x, e) in one.iter().zip([0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]) {
            assert!((x - e).abs() < 1e-15);
        }
        let pet = exact_walk_distribution(&fixtures::petersen(), NodeId(0), 20).unwrap();
        assert!((pet.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let dev = pet.iter().map(|x| (x - 0.1).abs()).fold(0.0, f64::max);
        assert!(dev <= (2.0f64 / 3.0).powi(20));
        assert!(matches!(exact_walk_distribution(&fixtures::star(3), NodeId(0), 1), Err(BoundsError::NotRegular)));
    }

    #[test]
    fn walk_distribution_matches_matrix_powers() {
        // Independent oracle: dense transition matrix raised to the k-th power.
        let g = fixtures::petersen();
        let n = g.n();
        let t: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| if g.has_edge(NodeId::new(i), NodeId::new(j)) { 1.0 / 3.0 } else { 0.0 }).collect()).collect();
        let mut pow = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect::<Vec<_>>()).collect::<Vec<_>>();
        for _ in 0..7 {
            pow = (0..n).map(|i| (0..n).map(|j| (0..n).map(|m| pow[i][m] * t[m][j]).sum()).collect()).collect();
        }
        let dist = exact_walk_distribution(&g, NodeId(4), 7).unwrap();
        for j in 0..n {
            assert!((dist[j] - pow[4][j]).abs() < 1e-14);
        }
    }

    #[test]
    fn concentration_examples() {
        assert_eq!(ramanujan_concentration_check(&fixtures::complete(4), NodeId(0)).unwrap(), 0.0);
        assert!(matches!(
            ramanujan_concentration_check(&fixtures::cycle(6), NodeId(0)),
            Err(BoundsError::InvalidParameter(_))
        ));
        let w = DistanceWindow::new(4, 3);
        assert!(close(w.center, 2.0) && close(w.slack, 3.0));
    }

    #[test]
    fn concentration_on_random_cubic() {
        let g = generators::gen_random_regular(1 << 14, 3, Seed(3)).unwrap();
        assert!(ramanujan_concentration_check(&g, NodeId(0)).unwrap() <= 0.1);
    }

    #[test]
    fn bounds_hold_on_small_regular_graphs() {
        let graphs = [
            fixtures::petersen(),
            fixtures::complete(5),
            generators::gen_random_regular(40, 3, Seed(11)).unwrap(),
            generators::gen_random_regular(30, 4, Seed(12)).unwrap(),
        ];
        for g in &graphs {
            let d = g.regular_degree().unwrap();
            let lambda = lambda_exact(g).unwrap().lambda_est;
            let p = params(g.n(), d, lambda);
            let diameter = (0..g.n())
                .map(|s| full_bfs(&mut QueryOracle::new(g), NodeId::new(s)).unwrap().into_iter().flatten().max().unwrap())
                .max()
                .unwrap() as usize;
            assert!(diameter_bound(&p) >= diameter);
            for k in 0..=diameter {
                assert!(count_far_nodes(g, NodeId(0), k).unwrap() as f64 <= far_node_bound(&p, k));
            }
            for k in 0..30 {
                let dist = exact_walk_distribution(g, NodeId(1), k).unwrap();
                let dev = dist.iter().map(|x| (x - 1.0 / g.n() as f64).abs()).fold(0.0, f64::max);
                assert!(dev <= mixing_deviation_bound(&p, k) + 1e-12);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn walk_count_dp_matches_enumeration(seed in any::<u64>(), mask in 1u32..(1 << 12), k in 0usize..6) {
            let g = generators::gen_random_regular(12, 3, Seed(seed)).unwrap();
            let set: Vec<NodeId> = (0..12).filter(|i| mask >> i & 1 == 1).map(NodeId).collect();
            let dp = count_confined_walks(&g, &set, k).unwrap();
            prop_assert_eq!(dp, BigUint::from(brute_force_walks(&g, &set, k)));
        }

        #[test]
        fn confined_walks_respect_bound(seed in any::<u64>(), mask in 1u32..(1 << 12), k in 1usize..=8) {
            let g = generators::gen_random_regular(12, 3, Seed(seed)).unwrap();
            let lambda = lambda_exact(&g).unwrap().lambda_est;
            prop_assume!(lambda < 3.0 - 1e-9);
            let set: Vec<NodeId> = (0..12).filter(|i| mask >> i & 1 == 1).map(NodeId).collect();
            let p = params(12, 3, lambda);
            let ln_count = biguint_ln(&count_confined_walks(&g, &set, k).unwrap());
            prop_assert!(ln_count <= confined_walk_bound_ln(&p, set.len(), k).unwrap() + 1e-9);
        }
    }
}
