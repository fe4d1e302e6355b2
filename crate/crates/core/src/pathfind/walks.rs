use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{climb, erase_loops, PathError, PathResult, PathStatus};
use crate::bounds::ceil_tol;
use crate::graph::{GraphError, NodeId, Oracle};
use crate::rng::Seed;

/// Expansion needed for the success guarantee of [`bfs_plus_walks`].
pub const MAX_LAMBDA_OVER_D: f64 = 0.5;

/// Parameters of BFS + random walks for an `(n, d, lambda)`-graph.
///
/// With `L = ln n / ln(d / lambda)`: the BFS ball holds
/// `k = ceil(sqrt(7 n ln(1/delta)))` nodes and `ceil(k / 3L)` walks of
/// `ceil(3L)` steps are launched from `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub k: usize,
    pub walk_len: usize,
    pub num_walks: usize,
    pub delta: f64,
    pub lambda_over_d: f64,
    /// Run even when `lambda_over_d > MAX_LAMBDA_OVER_D`, where the
    /// success guarantee no longer applies.
    pub allow_weak_expansion: bool,
}

impl WalkParams {
    pub fn derive(n: usize, lambda_over_d: f64, delta: f64) -> Result<WalkParams, PathError> {
        if n < 2 {
            return Err(PathError::InvalidParameter(format!("n = {n}, need n >= 2")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(PathError::InvalidParameter(format!("delta = {delta}, need 0 < delta < 1")));
        }
        if !(lambda_over_d > 0.0 && lambda_over_d < 1.0) {
            return Err(PathError::InvalidParameter(format!("lambda/d = {lambda_over_d}, need 0 < lambda/d < 1")));
        }
        let nf = n as f64;
        let log_n = nf.ln() / (1.0 / lambda_over_d).ln();
        let k = ceil_tol((7.0 * nf * (1.0 / delta).ln()).sqrt()).max(1);
        let walk_len = ceil_tol(3.0 * log_n).max(1);
        let num_walks = ceil_tol(k as f64 / (3.0 * log_n)).max(1);
        Ok(WalkParams { k, walk_len, num_walks, delta, lambda_over_d, allow_weak_expansion: false })
    }

    pub fn allow_weak_expansion(mut self) -> WalkParams {
        self.allow_weak_expansion = true;
        self
    }

    fn check(&self) -> Result<(), PathError> {
        if self.walk_len == 0 || self.num_walks == 0 {
            return Err(PathError::InvalidParameter("walk_len and num_walks must be positive".into()));
        }
        if self.lambda_over_d > MAX_LAMBDA_OVER_D && !self.allow_weak_expansion {
            return Err(PathError::InvalidParameter(format!(
                "lambda/d = {:.4} exceeds {MAX_LAMBDA_OVER_D}",
                self.lambda_over_d
            )));
        }
        Ok(())
    }
}

/// BFS from `s` until `params.k` nodes are discovered (or the component is
/// exhausted), then up to `params.num_walks` random walks of
/// `params.walk_len` steps from `t`, walk `i` seeded by `seed.derive(i)`.
/// The first walk to touch the ball at node `w` yields the path
/// `s -> w` (tree) followed by `w -> t` (walk, reversed), loop-erased.
pub fn bfs_plus_walks<O: Oracle + ?Sized>(
    oracle: &mut O,
    s: NodeId,
    t: NodeId,
    params: &WalkParams,
    seed: Seed,
) -> Result<PathResult, PathError> {
    let d = oracle.regular_degree().filter(|&d| d > 0).ok_or(PathError::NotRegular)?;
    let n = oracle.node_count();
    for v in [s, t] {
        if v.index() >= n {
            return Err(GraphError::NodeOutOfRange { node: v.index(), n }.into());
        }
    }
    if s == t {
        return Err(PathError::SameEndpoints(s));
    }
    params.check()?;
    let start = oracle.counters();

    let mut parent: HashMap<NodeId, NodeId> = HashMap::from([(s, s)]);
    let mut queue = VecDeque::from([s]);
    let mut expanded = 0;
    'grow: while let Some(v) = queue.pop_front() {
        expanded += 1;
        for j in 0..oracle.degree(v)? {
            if parent.len() >= params.k {
                break 'grow;
            }
            let u = oracle.neighbor(v, j)?;
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(u) {
                e.insert(v);
                queue.push_back(u);
            }
        }
    }

    let found = |path: Vec<NodeId>, meet: NodeId, visited: usize, oracle: &O| PathResult {
        status: PathStatus::Found,
        path,
        visited_count: visited,
        frontier_count: visited - expanded,
        query_count: oracle.counters().since(&start).total(),
        meet_node: Some(meet),
    };

    if parent.contains_key(&t) {
        let mut path = climb(&parent, t);
        path.reverse();
        return Ok(found(path, t, parent.len(), oracle));
    }

    let mut walked: HashSet<NodeId> = HashSet::new();
    for i in 0..params.num_walks {
        let mut rng = seed.derive(i as u64).rng();
        let mut walk = vec![t];
        walked.insert(t);
        let mut v = t;
        for _ in 0..params.walk_len {
            v = oracle.neighbor(v, rng.gen_range(0..d))?;
            walk.push(v);
            if parent.contains_key(&v) {
                // t ... w, then up the tree to s; reversed to run s ... t.
                let mut seq = walk.clone();
                seq.extend(climb(&parent, v).into_iter().skip(1));
                seq.reverse();
                let visited = parent.len() + walked.len();
                return Ok(found(erase_loops(seq), v, visited, oracle));
            }
            walked.insert(v);
        }
    }
    let visited = parent.len() + walked.len();
    Ok(PathResult {
        status: PathStatus::NotFound,
        path: Vec::new(),
        visited_count: visited,
        frontier_count: visited - expanded,
        query_count: oracle.counters().since(&start).total(),
        meet_node: None,
    })
}
