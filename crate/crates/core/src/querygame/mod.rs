//! Executable query games behind the lower bounds.
//!
//! An algorithm (a [`Strategy`]) asks incidence queries about *units*:
//! nodes of a hidden graph, or groups of a hidden matching. Every answer is
//! appended to a [`Trace`]; the trace is *connected* once the discovered
//! edges link `s` and `t`.

mod budget;
mod dsu;
mod strategies;
mod uniformity;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{ContractionDefects, LazyErdosRenyi, MatchingGraph};
use crate::graph::{Graph, GraphError, NodeId, Oracle};
use crate::rng::Seed;

pub use budget::{success_vs_budget, BudgetRow, GameModel};
pub use dsu::Dsu;
pub use strategies::{BidirectionalBfs, DegreeGreedy, GuessDirectEdge, RandomProbe, Scripted, Strategy, StrategyKind};
pub use uniformity::{conditional_partner_counts, conditional_uniformity_check, UniformityReport};

#[derive(Debug, Error)]
pub enum GameError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("strategy queried unit {unit}, but there are only {units}")]
    QueryOutOfRange { unit: usize, units: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum UnitKind {
    /// Units are nodes; returned edges are `(queried node, neighbor)`.
    Node,
    /// Units are groups of `size` half-nodes; returned edges are
    /// `(own half-node, partner half-node)` by flat index.
    Group { size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub query: usize,
    pub returned: Vec<(usize, usize)>,
}

/// Ordered transcript `(i_1, N_1, ..., i_q, N_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub kind: UnitKind,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn new(kind: UnitKind) -> Trace {
        Trace { kind, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn queries(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.query).collect()
    }

    /// Unit owning an edge endpoint.
    pub fn unit_of(&self, endpoint: usize) -> usize {
        match self.kind {
            UnitKind::Node => endpoint,
            UnitKind::Group { size } => endpoint / size,
        }
    }

    /// Union of all returned edge sets, each edge as `(min, max)`.
    pub fn discovered_edges(&self) -> BTreeSet<(usize, usize)> {
        self.steps.iter().flat_map(|s| s.returned.iter().map(|&(a, b)| (a.min(b), a.max(b)))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceClass {
    /// Prefix length; `k = 0` is the empty trace.
    pub k: usize,
    pub connected: bool,
    /// Distinct edges discovered in the first `k` steps.
    pub edges: usize,
    /// Disconnected with at most `2 p n k` edges; only defined for `G(n, p)`.
    pub useless: Option<bool>,
}

/// Classification of every prefix `pi_0, ..., pi_q` of `trace`, with
/// connectivity over `units` units maintained by union-find.
pub fn classify_trace(trace: &Trace, s: usize, t: usize, p: Option<f64>, units: usize) -> Vec<TraceClass> {
    let mut dsu = Dsu::new(units);
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::with_capacity(trace.len() + 1);
    let classify = |k: usize, connected: bool, edges: usize| TraceClass {
        k,
        connected,
        edges,
        useless: p.map(|p| !connected && edges as f64 <= 2.0 * p * units as f64 * k as f64 + 1e-9),
    };
    out.push(classify(0, s == t, 0));
    for (i, step) in trace.steps.iter().enumerate() {
        for &(a, b) in &step.returned {
            if seen.insert((a.min(b), a.max(b))) {
                dsu.union(trace.unit_of(a), trace.unit_of(b));
            }
        }
        out.push(classify(i + 1, dsu.same(s, t), seen.len()));
    }
    out
}

/// What a strategy knows: the trace plus structures derived from it.
#[derive(Debug)]
pub struct Explored {
    adj: HashMap<usize, Vec<usize>>,
    queried: HashSet<usize>,
    edges: HashSet<(usize, usize)>,
    dsu: Dsu,
}

impl Explored {
    fn new(units: usize) -> Explored {
        Explored { adj: HashMap::new(), queried: HashSet::new(), edges: HashSet::new(), dsu: Dsu::new(units) }
    }

    fn absorb(&mut self, kind: UnitKind, step: &TraceStep) {
        let unit_of = |x: usize| match kind {
            UnitKind::Node => x,
            UnitKind::Group { size } => x / size,
        };
        self.queried.insert(step.query);
        for &(a, b) in &step.returned {
            if !self.edges.insert((a.min(b), a.max(b))) {
                continue;
            }
            let (ua, ub) = (unit_of(a), unit_of(b));
            if ua == ub {
                continue;
            }
            for (x, y) in [(ua, ub), (ub, ua)] {
                let list = self.adj.entry(x).or_default();
                if !list.contains(&y) {
                    list.push(y);
                }
            }
            self.dsu.union(ua, ub);
        }
    }

    /// Units joined to `u` by a discovered edge, in discovery order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        self.adj.get(&u).map_or(&[], Vec::as_slice)
    }

    pub fn is_queried(&self, u: usize) -> bool {
        self.queried.contains(&u)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.dsu.root(a) == self.dsu.root(b)
    }

    /// Shortest unit path from `a` to `b` over discovered edges.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut parent: HashMap<usize, usize> = HashMap::from([(a, a)]);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                let mut path = vec![b];
                let mut x = b;
                while x != a {
                    x = parent[&x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for &u in self.neighbors(v) {
                parent.entry(u).or_insert_with(|| {
                    queue.push_back(u);
                    v
                });
            }
        }
        None
    }
}

/// Read-only state handed to a strategy.
pub struct GameView<'a> {
    pub units: usize,
    pub s: usize,
    pub t: usize,
    pub trace: &'a Trace,
    pub explored: &'a Explored,
}

impl GameView<'_> {
    /// `s` and `t` joined by discovered edges.
    pub fn connected(&self) -> bool {
        self.explored.connected(self.s, self.t)
    }
}

struct Played {
    trace: Trace,
    explored: Explored,
    output: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn play(
    strategy: &mut dyn Strategy,
    kind: UnitKind,
    units: usize,
    s: usize,
    t: usize,
    budget: usize,
    seed: Seed,
    mut query: impl FnMut(usize) -> Result<Vec<(usize, usize)>, GameError>,
) -> Result<Played, GameError> {
    for v in [s, t] {
        if v >= units {
            return Err(GameError::InvalidParameter(format!("endpoint {v} out of range for {units} units")));
        }
    }
    if s == t {
        return Err(GameError::InvalidParameter(format!("s and t are both {s}")));
    }
    let mut trace = Trace::new(kind);
    let mut explored = Explored::new(units);
    strategy.start(&GameView { units, s, t, trace: &trace, explored: &explored }, seed);
    while trace.len() < budget {
        let Some(q) = strategy.next_query(&GameView { units, s, t, trace: &trace, explored: &explored }) else {
            break;
        };
        if q >= units {
            return Err(GameError::QueryOutOfRange { unit: q, units });
        }
        let step = TraceStep { query: q, returned: query(q)? };
        explored.absorb(kind, &step);
        trace.steps.push(step);
    }
    let output = strategy.output(&GameView { units, s, t, trace: &trace, explored: &explored });
    Ok(Played { trace, explored, output })
}

/// Judges reported paths against the hidden graph without metering.
pub trait EdgeJudge {
    fn contains_edge(&mut self, u: NodeId, v: NodeId) -> bool;
}

impl EdgeJudge for Graph {
    fn contains_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        self.has_edge(u, v)
    }
}

impl EdgeJudge for &Graph {
    fn contains_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        self.has_edge(u, v)
    }
}

impl EdgeJudge for LazyErdosRenyi {
    fn contains_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        self.edge_present(u, v)
    }
}

/// `s ... t` with every consecutive pair an edge of the hidden graph.
pub fn path_is_valid<J: EdgeJudge + ?Sized>(judge: &mut J, path: &[NodeId], s: NodeId, t: NodeId) -> bool {
    path.len() >= 2
        && path.first() == Some(&s)
        && path.last() == Some(&t)
        && path.windows(2).all(|w| judge.contains_edge(w[0], w[1]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracedRun {
    pub trace: Trace,
    /// The strategy's answer; empty when it abstains.
    pub output: Vec<NodeId>,
    pub connected: bool,
    pub edges_discovered: usize,
}

/// Node-incidence game: at most `budget` queries through `oracle`.
pub fn run_traced<O: Oracle + ?Sized>(
    strategy: &mut dyn Strategy,
    oracle: &mut O,
    s: NodeId,
    t: NodeId,
    budget: usize,
    seed: Seed,
) -> Result<TracedRun, GameError> {
    let units = oracle.node_count();
    let played = play(strategy, UnitKind::Node, units, s.index(), t.index(), budget, seed, |q| {
        Ok(oracle.node_incidence(NodeId::new(q))?.into_iter().map(|(a, b)| (a.index(), b.index())).collect())
    })?;
    Ok(TracedRun {
        connected: played.explored.connected(s.index(), t.index()),
        edges_discovered: played.explored.edge_count(),
        output: played.output.into_iter().map(NodeId::new).collect(),
        trace: played.trace,
    })
}

/// Sequence of group indices from the `s` group to the `t` group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaPath {
    pub groups: Vec<usize>,
}

impl MetaPath {
    /// Starts at `s`, ends at `t`, and every consecutive pair of groups
    /// shares at least one matching edge.
    pub fn is_valid(&self, mg: &MatchingGraph, s: usize, t: usize) -> bool {
        let g = &self.groups;
        g.len() >= 2
            && g[0] == s
            && g[g.len() - 1] == t
            && g.iter().all(|&x| x < mg.groups())
            && g.windows(2).all(|w| mg.joins(w[0], w[1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaRun {
    pub trace: Trace,
    pub meta_path: MetaPath,
    pub valid: bool,
    pub connected: bool,
    pub edges_discovered: usize,
}

/// Group-incidence game on a matching; the output is judged against the
/// full matching.
pub fn run_meta_game(
    strategy: &mut dyn Strategy,
    mg: &MatchingGraph,
    s: usize,
    t: usize,
    budget: usize,
    seed: Seed,
) -> Result<MetaRun, GameError> {
    let kind = UnitKind::Group { size: mg.group_size() };
    let played = play(strategy, kind, mg.groups(), s, t, budget, seed, |q| Ok(mg.group_incidence(q)))?;
    let meta_path = MetaPath { groups: played.output };
    Ok(MetaRun {
        valid: meta_path.is_valid(mg, s, t),
        connected: played.explored.connected(s, t),
        edges_discovered: played.explored.edge_count(),
        meta_path,
        trace: played.trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractOutcome {
    /// Simple `d`-regular graph on the groups.
    Simple(Graph),
    Rejected(ContractionDefects),
}

impl ContractOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, ContractOutcome::Simple(_))
    }
}

/// Replaces each matching edge `((i, h), (j, k))` by `(i, j)`; rejects if
/// that produces a self-edge or a duplicate edge.
pub fn contract_groups(mg: &MatchingGraph) -> ContractOutcome {
    match mg.contract() {
        Ok(g) => ContractOutcome::Simple(g),
        Err(defects) => ContractOutcome::Rejected(defects),
    }
}
