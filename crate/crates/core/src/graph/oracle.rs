use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};

/// Undirected edge as returned by an incidence query: `(queried, other)`.
pub type Edge = (NodeId, NodeId);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounters {
    pub degree: u64,
    pub neighbor: u64,
    pub incidence: u64,
}

impl QueryCounters {
    pub fn total(&self) -> u64 {
        self.degree + self.neighbor + self.incidence
    }

    /// Component-wise difference against an earlier snapshot.
    pub fn since(&self, earlier: &QueryCounters) -> QueryCounters {
        QueryCounters {
            degree: self.degree - earlier.degree,
            neighbor: self.neighbor - earlier.neighbor,
            incidence: self.incidence - earlier.incidence,
        }
    }
}

/// The only read path available to search and query-game algorithms.
///
/// Two query models coexist: degree/neighbor queries (each costs one) and
/// node-incidence queries (one per call, regardless of degree).
pub trait Oracle {
    fn node_count(&self) -> usize;

    /// Declared regular degree of the hidden graph, if any. Treated as a
    /// known parameter, not a query.
    fn regular_degree(&self) -> Option<usize>;

    fn degree(&mut self, v: NodeId) -> Result<usize, GraphError>;

    /// The `j`-th neighbor of `v` in ascending order.
    fn neighbor(&mut self, v: NodeId, j: usize) -> Result<NodeId, GraphError>;

    /// All edges `(v, u)` incident to `v`, `u` ascending.
    fn node_incidence(&mut self, v: NodeId) -> Result<Vec<Edge>, GraphError>;

    fn counters(&self) -> QueryCounters;
}

/// Metered oracle session over a shared [`Graph`].
#[derive(Debug)]
pub struct QueryOracle<'g> {
    graph: &'g Graph,
    counters: QueryCounters,
    log: Option<VisitLog>,
}

#[derive(Debug, Default)]
struct VisitLog {
    order: Vec<NodeId>,
    seen: HashSet<NodeId>,
}

impl<'g> QueryOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        QueryOracle { graph, counters: QueryCounters::default(), log: None }
    }

    /// Session that also records, in first-reveal order, every node whose
    /// neighbors were revealed by a neighbor or incidence query.
    pub fn with_visit_log(graph: &'g Graph) -> Self {
        QueryOracle { graph, counters: QueryCounters::default(), log: Some(VisitLog::default()) }
    }

    pub fn visited_log(&self) -> Option<&[NodeId]> {
        self.log.as_ref().map(|l| l.order.as_slice())
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v.index() < self.graph.n() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node: v.index(), n: self.graph.n() })
        }
    }

    fn record(&mut self, v: NodeId) {
        if let Some(log) = self.log.as_mut() {
            if log.seen.insert(v) {
                log.order.push(v);
            }
        }
    }
}

impl Oracle for QueryOracle<'_> {
    fn node_count(&self) -> usize {
        self.graph.n()
    }

    fn regular_degree(&self) -> Option<usize> {
        self.graph.regular_degree()
    }

    fn degree(&mut self, v: NodeId) -> Result<usize, GraphError> {
        self.check(v)?;
        self.counters.degree += 1;
        Ok(self.graph.degree(v))
    }

    fn neighbor(&mut self, v: NodeId, j: usize) -> Result<NodeId, GraphError> {
        self.check(v)?;
        let list = self.graph.neighbors(v);
        let u = *list
            .get(j)
            .ok_or(GraphError::NeighborOutOfRange { node: v.index(), index: j, degree: list.len() })?;
        self.counters.neighbor += 1;
        self.record(v);
        Ok(u)
    }

    fn node_incidence(&mut self, v: NodeId) -> Result<Vec<Edge>, GraphError> {
        self.check(v)?;
        self.counters.incidence += 1;
        self.record(v);
        Ok(self.graph.neighbors(v).iter().map(|&u| (v, u)).collect())
    }

    fn counters(&self) -> QueryCounters {
        self.counters
    }
}
