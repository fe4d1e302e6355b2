use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::GameView;
use crate::rng::{Rng, Seed};

/// A query policy. The next query may depend only on what the view exposes
/// (the trace and structures derived from it) and on the seed.
pub trait Strategy {
    fn name(&self) -> &'static str;

    /// Called once, before the first query, with an empty trace.
    fn start(&mut self, view: &GameView<'_>, seed: Seed);

    /// Next unit to query; `None` ends the game early.
    fn next_query(&mut self, view: &GameView<'_>) -> Option<usize>;

    /// Final answer: units from `s` to `t`, or empty to abstain. Defaults to
    /// a shortest path over discovered edges.
    fn output(&mut self, view: &GameView<'_>) -> Vec<usize> {
        view.explored.path(view.s, view.t).unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Bibfs,
    RandomProbe,
    DegreeGreedy,
    GuessDirect,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] =
        [StrategyKind::Bibfs, StrategyKind::RandomProbe, StrategyKind::DegreeGreedy, StrategyKind::GuessDirect];

    /// The strategies that explore (everything except the blind guess).
    pub const EXPLORING: [StrategyKind; 3] = [StrategyKind::Bibfs, StrategyKind::RandomProbe, StrategyKind::DegreeGreedy];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Bibfs => "bibfs",
            StrategyKind::RandomProbe => "random-probe",
            StrategyKind::DegreeGreedy => "degree-greedy",
            StrategyKind::GuessDirect => "guess-direct",
        }
    }

    pub fn build(self) -> Box<dyn Strategy + Send> {
        match self {
            StrategyKind::Bibfs => Box::<BidirectionalBfs>::default(),
            StrategyKind::RandomProbe => Box::<RandomProbe>::default(),
            StrategyKind::DegreeGreedy => Box::<DegreeGreedy>::default(),
            StrategyKind::GuessDirect => Box::new(GuessDirectEdge),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = StrategyKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown strategy {s:?}, expected one of {}", names.join(", "))
        })
    }
}

#[derive(Debug, Default)]
struct Side {
    seen: HashSet<usize>,
    layer: Vec<usize>,
    pos: usize,
    next: Vec<usize>,
}

impl Side {
    fn rooted(root: usize) -> Side {
        Side { seen: HashSet::from([root]), layer: vec![root], pos: 0, next: Vec::new() }
    }

    fn absorb(&mut self, view: &GameView<'_>, u: usize) {
        for &w in view.explored.neighbors(u) {
            if self.seen.insert(w) {
                self.next.push(w);
            }
        }
    }
}

/// Layer-by-layer search from both ends, `s` side first, stopping as soon
/// as the trace is connected. A unit already queried by the other side is
/// expanded from the known answer instead of being queried again.
#[derive(Debug, Default)]
pub struct BidirectionalBfs {
    sides: [Side; 2],
    turn: usize,
    pending: Option<(usize, usize)>,
}

impl Strategy for BidirectionalBfs {
    fn name(&self) -> &'static str {
        StrategyKind::Bibfs.name()
    }

    fn start(&mut self, view: &GameView<'_>, _seed: Seed) {
        self.sides = [Side::rooted(view.s), Side::rooted(view.t)];
        self.turn = 0;
        self.pending = None;
    }

    fn next_query(&mut self, view: &GameView<'_>) -> Option<usize> {
        if let Some((side, u)) = self.pending.take() {
            self.sides[side].absorb(view, u);
        }
        if view.connected() {
            return None;
        }
        loop {
            let side = &mut self.sides[self.turn];
            while side.pos < side.layer.len() {
                let u = side.layer[side.pos];
                side.pos += 1;
                if view.explored.is_queried(u) {
                    side.absorb(view, u);
                    continue;
                }
                self.pending = Some((self.turn, u));
                return Some(u);
            }
            if side.next.is_empty() {
                return None;
            }
            side.layer = std::mem::take(&mut side.next);
            side.pos = 0;
            self.turn ^= 1;
        }
    }
}

/// Discovered-but-unqueried units, updated from new trace steps.
#[derive(Debug, Default)]
struct Frontier {
    members: BTreeSet<usize>,
    steps_seen: usize,
}

impl Frontier {
    fn update(&mut self, view: &GameView<'_>) {
        for step in &view.trace.steps[self.steps_seen..] {
            self.members.remove(&step.query);
            for &w in view.explored.neighbors(step.query) {
                if !view.explored.is_queried(w) {
                    self.members.insert(w);
                }
            }
        }
        self.steps_seen = view.trace.len();
    }
}

fn endpoints_first(view: &GameView<'_>) -> Option<usize> {
    [view.s, view.t].into_iter().find(|&u| !view.explored.is_queried(u))
}

/// Queries `s`, `t`, then a uniformly random frontier unit (any unqueried
/// unit if the frontier is empty). Stops once connected.
#[derive(Debug)]
pub struct RandomProbe {
    rng: Rng,
    frontier: Frontier,
}

impl Default for RandomProbe {
    fn default() -> Self {
        RandomProbe { rng: Seed(0).rng(), frontier: Frontier::default() }
    }
}

impl Strategy for RandomProbe {
    fn name(&self) -> &'static str {
        StrategyKind::RandomProbe.name()
    }

    fn start(&mut self, _view: &GameView<'_>, seed: Seed) {
        self.rng = seed.rng();
        self.frontier = Frontier::default();
    }

    fn next_query(&mut self, view: &GameView<'_>) -> Option<usize> {
        self.frontier.update(view);
        if view.connected() {
            return None;
        }
        if let Some(u) = endpoints_first(view) {
            return Some(u);
        }
        let members = &self.frontier.members;
        if !members.is_empty() {
            let i = self.rng.gen_range(0..members.len());
            return members.iter().nth(i).copied();
        }
        // Nothing discovered is left: probe blindly, giving up after a
        // bounded number of draws.
        (0..4 * view.units).map(|_| self.rng.gen_range(0..view.units)).find(|&u| !view.explored.is_queried(u))
    }
}

/// Queries `s`, `t`, then the frontier unit with the most discovered edges
/// (smallest index on ties). Stops once connected.
#[derive(Debug, Default)]
pub struct DegreeGreedy {
    frontier: Frontier,
}

impl Strategy for DegreeGreedy {
    fn name(&self) -> &'static str {
        StrategyKind::DegreeGreedy.name()
    }

    fn start(&mut self, _view: &GameView<'_>, _seed: Seed) {
        self.frontier = Frontier::default();
    }

    fn next_query(&mut self, view: &GameView<'_>) -> Option<usize> {
        self.frontier.update(view);
        if view.connected() {
            return None;
        }
        if let Some(u) = endpoints_first(view) {
            return Some(u);
        }
        let mut best: Option<(usize, usize)> = None;
        for &u in &self.frontier.members {
            let deg = view.explored.neighbors(u).len();
            if best.is_none_or(|(_, d)| deg > d) {
                best = Some((u, deg));
            }
        }
        best.map(|(u, _)| u)
    }
}

/// Asks nothing and reports the direct edge `s - t`.
#[derive(Debug, Default)]
pub struct GuessDirectEdge;

impl Strategy for GuessDirectEdge {
    fn name(&self) -> &'static str {
        StrategyKind::GuessDirect.name()
    }

    fn start(&mut self, _view: &GameView<'_>, _seed: Seed) {}

    fn next_query(&mut self, _view: &GameView<'_>) -> Option<usize> {
        None
    }

    fn output(&mut self, view: &GameView<'_>) -> Vec<usize> {
        vec![view.s, view.t]
    }
}

/// Fixed query list; used to replay recorded traces.
#[derive(Debug, Default)]
pub struct Scripted {
    queries: Vec<usize>,
    pos: usize,
}

impl Scripted {
    pub fn new(queries: Vec<usize>) -> Scripted {
        Scripted { queries, pos: 0 }
    }
}

impl Strategy for Scripted {
    fn name(&self) -> &'static str {
        "scripted"
    }

    fn start(&mut self, _view: &GameView<'_>, _seed: Seed) {
        self.pos = 0;
    }

    fn next_query(&mut self, _view: &GameView<'_>) -> Option<usize> {
        let q = self.queries.get(self.pos).copied();
        self.pos += 1;
        q
    }
}
