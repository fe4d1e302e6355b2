use std::collections::HashMap;

use super::{climb, PathError, PathResult, PathStatus};
use crate::graph::{GraphError, NodeId, Oracle};

/// One BFS tree grown a full layer at a time.
struct Tree {
    parent: HashMap<NodeId, NodeId>,
    frontier: Vec<NodeId>,
    expanded: usize,
}

impl Tree {
    fn new(root: NodeId) -> Tree {
        Tree { parent: HashMap::from([(root, root)]), frontier: vec![root], expanded: 0 }
    }

    fn contains(&self, v: NodeId) -> bool {
        self.parent.contains_key(&v)
    }

    /// Expands the current frontier; the new layer becomes the frontier.
    fn expand_layer<O: Oracle + ?Sized>(&mut self, oracle: &mut O) -> Result<(), GraphError> {
        let mut next = Vec::new();
        for &v in &self.frontier {
            for j in 0..oracle.degree(v)? {
                let u = oracle.neighbor(v, j)?;
                if let std::collections::hash_map::Entry::Vacant(e) = self.parent.entry(u) {
                    e.insert(v);
                    next.push(u);
                }
            }
        }
        self.expanded += self.frontier.len();
        self.frontier = next;
        Ok(())
    }
}

/// Bidirectional BFS: alternately completes one layer of the tree rooted at
/// `s` and one of the tree rooted at `t` (s side first) and stops at the
/// first layer completion after which the trees share a node. The shared
/// node with the smallest id is the meet node; the path runs `s -> meet`
/// in the s-tree and `meet -> t` in the t-tree, and is a shortest path.
pub fn bidirectional_bfs<O: Oracle + ?Sized>(oracle: &mut O, s: NodeId, t: NodeId) -> Result<PathResult, PathError> {
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
    let mut trees = [Tree::new(s), Tree::new(t)];
    let mut side = 0;
    loop {
        let (this, other) = if side == 0 {
            let (a, b) = trees.split_at_mut(1);
            (&mut a[0], &b[0])
        } else {
            let (a, b) = trees.split_at_mut(1);
            (&mut b[0], &a[0])
        };
        this.expand_layer(oracle)?;
        // Before this layer the trees were disjoint, so any shared node is new.
        let shared: Vec<NodeId> = this.frontier.iter().copied().filter(|&v| other.contains(v)).collect();
        if let Some(&meet) = shared.iter().min() {
            let [ts, tt] = &trees;
            let mut path = climb(&ts.parent, meet);
            path.reverse();
            path.extend(climb(&tt.parent, meet).into_iter().skip(1));
            let visited = ts.parent.len() + tt.parent.len() - shared.len();
            return Ok(PathResult {
                status: PathStatus::Found,
                path,
                visited_count: visited,
                frontier_count: visited - ts.expanded - tt.expanded,
                query_count: oracle.counters().since(&start).total(),
                meet_node: Some(meet),
            });
        }
        if this.frontier.is_empty() {
            let [ts, tt] = &trees;
            let visited = ts.parent.len() + tt.parent.len();
            return Ok(PathResult {
                status: PathStatus::NotFound,
                path: Vec::new(),
                visited_count: visited,
                frontier_count: visited - ts.expanded - tt.expanded,
                query_count: oracle.counters().since(&start).total(),
                meet_node: None,
            });
        }
        side = 1 - side;
    }
}
