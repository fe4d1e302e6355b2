use std::collections::HashMap;

use rand::Rng as _;

use super::GenError;
use crate::graph::{Edge, GraphError, NodeId, Oracle, QueryCounters};
use crate::rng::{Rng, Seed};

/// `G(n, p)` sampled on demand.
///
/// A node's incident pairs are drawn the first time any query touches it;
/// pairs already fixed by an earlier reveal or an [`edge_present`] probe
/// keep their value. Every pair is an independent `Bernoulli(p)`, so the
/// revealed part has exactly the law of a fully materialized draw while a
/// query-bounded run costs `O(queries * n p)` instead of `O(n^2 p)`.
///
/// [`edge_present`]: LazyErdosRenyi::edge_present
#[derive(Debug)]
pub struct LazyErdosRenyi {
    n: usize,
    p: f64,
    rng: Rng,
    revealed: Vec<bool>,
    adj: HashMap<u32, Vec<NodeId>>,
    /// Pairs decided by a probe while both ends were still hidden.
    probed: HashMap<(u32, u32), bool>,
    counters: QueryCounters,
}

impl LazyErdosRenyi {
    pub fn new(n: usize, p: f64, seed: Seed) -> Result<LazyErdosRenyi, GenError> {
        if n < 2 {
            return Err(GenError::InvalidParameter(format!("n = {n}, need n >= 2")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(GenError::InvalidParameter(format!("p = {p}, need 0 < p < 1")));
        }
        Ok(LazyErdosRenyi {
            n,
            p,
            rng: seed.rng(),
            revealed: vec![false; n],
            adj: HashMap::new(),
            probed: HashMap::new(),
            counters: QueryCounters::default(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Whether `{u, v}` is an edge, drawing it if still undecided. Not
    /// metered: this is how a harness judges outputs, not an algorithm query.
    pub fn edge_present(&mut self, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return false;
        }
        for (a, b) in [(u, v), (v, u)] {
            if self.revealed[a.index()] {
                return self.adj.get(&a.0).is_some_and(|l| l.binary_search(&b).is_ok());
            }
        }
        let key = (u.0.min(v.0), u.0.max(v.0));
        let p = self.p;
        let rng = &mut self.rng;
        *self.probed.entry(key).or_insert_with(|| rng.gen_bool(p))
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v.index() < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node: v.index(), n: self.n })
        }
    }

    fn reveal(&mut self, v: NodeId) -> &[NodeId] {
        if !self.revealed[v.index()] {
            let mut fresh = Vec::new();
            let log_q = (-self.p).ln_1p();
            let mut u: i64 = -1;
            loop {
                let r: f64 = self.rng.gen();
                let skip = ((1.0 - r).ln() / log_q).floor();
                if skip >= self.n as f64 {
                    break;
                }
                u += 1 + skip as i64;
                if u >= self.n as i64 {
                    break;
                }
                let w = NodeId(u as u32);
                let key = (v.0.min(w.0), v.0.max(w.0));
                if w != v && !self.revealed[w.index()] && !self.probed.contains_key(&key) {
                    fresh.push(w);
                }
            }
            let v32 = v.0;
            self.probed.retain(|&(a, b), present| {
                if a != v32 && b != v32 {
                    return true;
                }
                if *present {
                    fresh.push(NodeId(if a == v32 { b } else { a }));
                }
                false
            });
            for &w in &fresh {
                self.adj.entry(w.0).or_default().push(v);
            }
            let list = self.adj.entry(v.0).or_default();
            list.extend(fresh);
            list.sort_unstable();
            self.revealed[v.index()] = true;
        }
        self.adj.get(&v.0).map_or(&[], Vec::as_slice)
    }
}

impl Oracle for LazyErdosRenyi {
    fn node_count(&self) -> usize {
        self.n
    }

    fn regular_degree(&self) -> Option<usize> {
        None
    }

    fn degree(&mut self, v: NodeId) -> Result<usize, GraphError> {
        self.check(v)?;
        self.counters.degree += 1;
        Ok(self.reveal(v).len())
    }

    fn neighbor(&mut self, v: NodeId, j: usize) -> Result<NodeId, GraphError> {
        self.check(v)?;
        let list = self.reveal(v);
        let u = *list.get(j).ok_or(GraphError::NeighborOutOfRange { node: v.index(), index: j, degree: list.len() })?;
        self.counters.neighbor += 1;
        Ok(u)
    }

    fn node_incidence(&mut self, v: NodeId) -> Result<Vec<Edge>, GraphError> {
        self.check(v)?;
        self.counters.incidence += 1;
        Ok(self.reveal(v).iter().map(|&u| (v, u)).collect())
    }

    fn counters(&self) -> QueryCounters {
        self.counters
    }
}
