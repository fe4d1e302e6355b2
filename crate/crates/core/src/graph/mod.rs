//! Immutable graph storage.
//!
//! [`Graph`] is a simple undirected graph in CSR form with every adjacency
//! list sorted ascending, so "the j-th neighbor of v" is well defined.
//! Algorithms never read it directly; they go through an [`Oracle`].
//! [`Multigraph`] exists for constructions (Margulis) whose natural form has
//! parallel edges and loops; it is only consumed by the exact spectral and
//! walk-counting routines through the [`Adjacency`] trait.

mod io;
mod oracle;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{read_binary, read_edge_list, read_graph, write_binary, write_edge_list, write_graph, GraphFormat};
pub use oracle::{Edge, Oracle, QueryCounters, QueryOracle};
pub use validate::{validate, ValidationReport, Violation};

/// Largest supported node count.
pub const MAX_NODES: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        NodeId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("neighbor index {index} out of range for node {node} of degree {degree}")]
    NeighborOutOfRange { node: usize, index: usize, degree: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("declared {declared}-regular but node {node} has degree {found}")]
    NotRegular { declared: usize, node: usize, found: usize },
    #[error("graph with {0} nodes exceeds the supported maximum")]
    TooLarge(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed binary graph: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Read-only adjacency view shared by [`Graph`] and [`Multigraph`].
///
/// Neighbor lists may repeat entries for multigraphs; a loop at `v` shows up
/// twice in `neighbors(v)`, so list lengths always equal the row sums of the
/// symmetric adjacency matrix.
pub trait Adjacency {
    fn node_count(&self) -> usize;
    fn neighbors(&self, v: NodeId) -> &[NodeId];
    fn regular_degree(&self) -> Option<usize>;

    fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }
}

/// Simple undirected graph, CSR layout, sorted adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    regular_degree: Option<usize>,
}

impl Graph {
    /// Builds a simple graph from an undirected edge list. Each edge may be
    /// given in either orientation but only once.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_NODES {
            return Err(GraphError::TooLarge(n));
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push((u.min(v) as u32, u.max(v) as u32));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        Ok(Self::from_unique_pairs(n, &pairs))
    }

    /// `pairs` must be distinct with `u < v < n`.
    pub(crate) fn from_unique_pairs(n: usize, pairs: &[(u32, u32)]) -> Graph {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![NodeId(0); 2 * pairs.len()];
        for &(u, v) in pairs {
            targets[fill[u as usize]] = NodeId(v);
            fill[u as usize] += 1;
            targets[fill[v as usize]] = NodeId(u);
            fill[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let regular_degree = uniform_degree(&degree);
        Graph { offsets, targets, regular_degree }
    }

    /// Stores adjacency lists as given (after sorting each list) without any
    /// checking. Used to represent defective inputs for [`validate`].
    pub fn from_adjacency_unchecked(lists: Vec<Vec<NodeId>>, regular_degree: Option<usize>) -> Graph {
        let (offsets, targets) = pack_lists(lists);
        Graph { offsets, targets, regular_degree }
    }

    /// Builds from raw CSR arrays, rejecting anything that is not a simple
    /// symmetric graph.
    pub fn from_csr(offsets: Vec<usize>, targets: Vec<NodeId>) -> Result<Graph, GraphError> {
        let n = offsets.len().checked_sub(1).ok_or_else(|| GraphError::Format("empty offset array".into()))?;
        if n > MAX_NODES {
            return Err(GraphError::TooLarge(n));
        }
        if offsets[0] != 0 || offsets[n] != targets.len() || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(GraphError::Format("offsets are not a monotone prefix sum".into()));
        }
        let degrees: Vec<usize> = offsets.windows(2).map(|w| w[1] - w[0]).collect();
        let mut g = Graph { offsets, targets, regular_degree: uniform_degree(&degrees) };
        for v in 0..n {
            g.targets[g.offsets[v]..g.offsets[v + 1]].sort_unstable();
        }
        let report = validate(&g);
        if let Some(v) = report.violations.first() {
            return Err(GraphError::Format(v.to_string()));
        }
        Ok(g)
    }

    /// Declares the graph `d`-regular, failing if any node disagrees.
    pub fn with_regular_degree(mut self, d: usize) -> Result<Graph, GraphError> {
        for v in 0..self.n() {
            let found = self.offsets[v + 1] - self.offsets[v];
            if found != d {
                return Err(GraphError::NotRegular { declared: d, node: v, found });
            }
        }
        self.regular_degree = Some(d);
        Ok(self)
    }

    pub(crate) fn clear_regular_degree(&mut self) {
        self.regular_degree = None;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let i = v.index();
        self.offsets[i + 1] - self.offsets[i]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn regular_degree(&self) -> Option<usize> {
        self.regular_degree
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        v.index() < self.n()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.contains_node(u) && self.contains_node(v) && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let u = NodeId::new(u);
            self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub(crate) fn targets(&self) -> &[NodeId] {
        &self.targets
    }
}

impl Adjacency for Graph {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        Graph::neighbors(self, v)
    }

    fn regular_degree(&self) -> Option<usize> {
        self.regular_degree
    }
}

/// Undirected multigraph with loops; see [`Adjacency`] for the list
/// convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    regular_degree: Option<usize>,
}

impl Multigraph {
    /// Lists must be symmetric as multisets; checked.
    pub fn from_lists(lists: Vec<Vec<NodeId>>) -> Result<Multigraph, GraphError> {
        let n = lists.len();
        let degrees: Vec<usize> = lists.iter().map(Vec::len).collect();
        let (offsets, targets) = pack_lists(lists);
        let g = Multigraph { offsets, targets, regular_degree: uniform_degree(&degrees) };
        for v in 0..n {
            let v = NodeId::new(v);
            for &u in g.neighbors(v) {
                if u.index() >= n {
                    return Err(GraphError::NodeOutOfRange { node: u.index(), n });
                }
                if g.multiplicity(v, u) != g.multiplicity(u, v) {
                    return Err(GraphError::Format(format!("asymmetric multiplicity between {v} and {u}")));
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    pub fn multiplicity(&self, u: NodeId, v: NodeId) -> usize {
        let list = self.neighbors(u);
        let lo = list.partition_point(|&x| x < v);
        let hi = list.partition_point(|&x| x <= v);
        hi - lo
    }

    /// Collapses to a simple graph: loops dropped, parallel edges merged.
    pub fn simplify(&self) -> Graph {
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(self.targets.len() / 2);
        for u in 0..self.n() {
            for &v in self.neighbors(NodeId::new(u)) {
                if (u as u32) < v.0 {
                    pairs.push((u as u32, v.0));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Graph::from_unique_pairs(self.n(), &pairs)
    }

    /// True when the multigraph already is simple.
    pub fn is_simple(&self) -> bool {
        (0..self.n()).all(|u| {
            let list = self.neighbors(NodeId::new(u));
            list.windows(2).all(|w| w[0] != w[1]) && !list.contains(&NodeId::new(u))
        })
    }
}

impl Adjacency for Multigraph {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        Multigraph::neighbors(self, v)
    }

    fn regular_degree(&self) -> Option<usize> {
        self.regular_degree
    }
}

fn pack_lists(lists: Vec<Vec<NodeId>>) -> (Vec<usize>, Vec<NodeId>) {
    let mut offsets = Vec::with_capacity(lists.len() + 1);
    offsets.push(0);
    let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
    for mut list in lists {
        list.sort_unstable();
        targets.extend_from_slice(&list);
        offsets.push(targets.len());
    }
    (offsets, targets)
}

fn uniform_degree(degrees: &[usize]) -> Option<usize> {
    let first = *degrees.first()?;
    degrees.iter().all(|&d| d == first).then_some(first)
}
