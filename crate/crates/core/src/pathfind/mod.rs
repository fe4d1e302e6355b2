//! s-t path search driven exclusively through an [`Oracle`].
//!
//! All searches use degree/neighbor queries: expanding a node costs one
//! degree query plus one neighbor query per incident edge.

mod bidirectional;
mod walks;

use std::collections::HashMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, NodeId, Oracle};
use crate::rng::Seed;

pub use bidirectional::bidirectional_bfs;
pub use walks::{bfs_plus_walks, WalkParams, MAX_LAMBDA_OVER_D};

#[derive(Debug, Error)]
pub enum PathError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("source and target are both {0}")]
    SameEndpoints(NodeId),
    #[error("operation needs a regular graph")]
    NotRegular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Found,
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathResult {
    pub status: PathStatus,
    /// `s` first, `t` last, when found; empty otherwise.
    pub path: Vec<NodeId>,
    /// Distinct nodes that entered any search structure.
    pub visited_count: usize,
    /// Visited nodes whose neighbors were never queried.
    pub frontier_count: usize,
    /// All queries issued during the search.
    pub query_count: u64,
    pub meet_node: Option<NodeId>,
}

impl PathResult {
    /// Number of edges on the path, if one was found.
    pub fn length(&self) -> Option<usize> {
        (self.status == PathStatus::Found).then(|| self.path.len() - 1)
    }

    pub fn is_found(&self) -> bool {
        self.status == PathStatus::Found
    }
}

/// Exact BFS distances from `s`; `None` for unreachable nodes.
pub fn full_bfs<O: Oracle + ?Sized>(oracle: &mut O, s: NodeId) -> Result<Vec<Option<u32>>, GraphError> {
    let n = oracle.node_count();
    if s.index() >= n {
        return Err(GraphError::NodeOutOfRange { node: s.index(), n });
    }
    let mut dist = vec![None; n];
    dist[s.index()] = Some(0);
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v.index()].unwrap();
        for j in 0..oracle.degree(v)? {
            let u = oracle.neighbor(v, j)?;
            if dist[u.index()].is_none() {
                dist[u.index()] = Some(dv + 1);
                queue.push_back(u);
            }
        }
    }
    Ok(dist)
}

/// One-sided BFS from `s`, stopping as soon as `t` is discovered. The
/// baseline that bidirectional search is measured against.
pub fn bfs_path<O: Oracle + ?Sized>(oracle: &mut O, s: NodeId, t: NodeId) -> Result<PathResult, PathError> {
    let n = oracle.node_count();
    for v in [s, t] {
        if v.index() >= n {
            return Err(GraphError::NodeOutOfRange { node: v.index(), n }.into());
        }
    }
    if s == t {
        return Err(PathError::SameEndpoints(s));
    }
    let start = oracle.counters();
    let mut parent: HashMap<NodeId, NodeId> = HashMap::from([(s, s)]);
    let mut queue = std::collections::VecDeque::from([s]);
    let mut expanded = 0;
    while let Some(v) = queue.pop_front() {
        expanded += 1;
        for j in 0..oracle.degree(v)? {
            let u = oracle.neighbor(v, j)?;
            if parent.contains_key(&u) {
                continue;
            }
            parent.insert(u, v);
            if u == t {
                let mut path = climb(&parent, t);
                path.reverse();
                return Ok(PathResult {
                    status: PathStatus::Found,
                    path,
                    visited_count: parent.len(),
                    frontier_count: parent.len() - expanded,
                    query_count: oracle.counters().since(&start).total(),
                    meet_node: Some(t),
                });
            }
            queue.push_back(u);
        }
    }
    Ok(PathResult {
        status: PathStatus::NotFound,
        path: Vec::new(),
        visited_count: parent.len(),
        frontier_count: 0,
        query_count: oracle.counters().since(&start).total(),
        meet_node: None,
    })
}

/// Uniform random walk with `len` steps; returns `len + 1` nodes.
pub fn random_walk<O: Oracle + ?Sized>(
    oracle: &mut O,
    start: NodeId,
    len: usize,
    seed: Seed,
) -> Result<Vec<NodeId>, PathError> {
    let d = oracle.regular_degree().filter(|&d| d > 0).ok_or(PathError::NotRegular)?;
    let n = oracle.node_count();
    if start.index() >= n {
        return Err(GraphError::NodeOutOfRange { node: start.index(), n }.into());
    }
    let mut rng = seed.rng();
    let mut walk = Vec::with_capacity(len + 1);
    walk.push(start);
    let mut v = start;
    for _ in 0..len {
        v = oracle.neighbor(v, rng.gen_range(0..d))?;
        walk.push(v);
    }
    Ok(walk)
}

/// Removes cycles: whenever a node reappears, everything after its first
/// occurrence is dropped.
pub(crate) fn erase_loops(seq: impl IntoIterator<Item = NodeId>) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::new();
    let mut pos: HashMap<NodeId, usize> = HashMap::new();
    for v in seq {
        if let Some(&i) = pos.get(&v) {
            for x in out.drain(i + 1..) {
                pos.remove(&x);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

/// Follows parent pointers from `v` up to the root (whose parent is itself).
pub(crate) fn climb(parent: &HashMap<NodeId, NodeId>, mut v: NodeId) -> Vec<NodeId> {
    let mut out = vec![v];
    while let Some(&p) = parent.get(&v) {
        if p == v {
            break;
        }
        out.push(p);
        v = p;
    }
    out
}
