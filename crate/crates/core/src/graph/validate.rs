use std::fmt;

use serde::Serialize;

use super::{Graph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    OutOfRange { node: usize, neighbor: usize },
    SelfLoop { node: usize },
    Duplicate { node: usize, neighbor: usize },
    /// `neighbor` is listed under `node` but not the other way round.
    Asymmetric { node: usize, neighbor: usize },
    DegreeMismatch { node: usize, expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { node, neighbor } => write!(f, "node {node} lists out-of-range neighbor {neighbor}"),
            Violation::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Violation::Duplicate { node, neighbor } => write!(f, "node {node} lists neighbor {neighbor} more than once"),
            Violation::Asymmetric { node, neighbor } => {
                write!(f, "node {node} lists {neighbor} but {neighbor} does not list {node}")
            }
            Violation::DegreeMismatch { node, expected, found } => {
                write!(f, "node {node} has degree {found}, declared {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub edge_count: usize,
    pub declared_degree: Option<usize>,
    /// Common degree of all nodes, if there is one.
    pub uniform_degree: Option<usize>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_regular(&self) -> bool {
        self.uniform_degree.is_some()
    }
}

/// Checks symmetry, simplicity and declared regularity.
pub fn validate(graph: &Graph) -> ValidationReport {
    let n = graph.n();
    let mut violations = Vec::new();
    for v in 0..n {
        let list = graph.neighbors(NodeId::new(v));
        for (i, &u) in list.iter().enumerate() {
            let ui = u.index();
            if ui >= n {
                violations.push(Violation::OutOfRange { node: v, neighbor: ui });
                continue;
            }
            if ui == v {
                // One report per loop entry group.
                if i == 0 || list[i - 1] != u {
                    violations.push(Violation::SelfLoop { node: v });
                }
                continue;
            }
            if i > 0 && list[i - 1] == u {
                if i < 2 || list[i - 2] != u {
                    violations.push(Violation::Duplicate { node: v, neighbor: ui });
                }
                continue;
            }
            if graph.neighbors(u).binary_search(&NodeId::new(v)).is_err() {
                violations.push(Violation::Asymmetric { node: v, neighbor: ui });
            }
        }
    }
    let degrees: Vec<usize> = (0..n).map(|v| graph.degree(NodeId::new(v))).collect();
    if let Some(d) = graph.regular_degree() {
        for (v, &found) in degrees.iter().enumerate() {
            if found != d {
                violations.push(Violation::DegreeMismatch { node: v, expected: d, found });
            }
        }
    }
    let uniform_degree = degrees.first().copied().filter(|&d0| degrees.iter().all(|&d| d == d0));
    ValidationReport {
        n,
        edge_count: graph.edge_count(),
        declared_degree: graph.regular_degree(),
        uniform_degree,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixtures, MatchingGraph};

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&x| NodeId(x)).collect()
    }

    #[test]
    fn cycle_is_valid_and_two_regular() {
        let r = validate(&fixtures::cycle(6));
        assert!(r.is_valid());
        assert_eq!(r.uniform_degree, Some(2));
        assert_eq!(r.declared_degree, Some(2));
        assert_eq!(r.edge_count, 6);
    }

    #[test]
    fn one_sided_edge_is_asymmetric() {
        let g = Graph::from_adjacency_unchecked(vec![ids(&[1]), ids(&[]), ids(&[])], None);
        let r = validate(&g);
        assert_eq!(r.violations, vec![Violation::Asymmetric { node: 0, neighbor: 1 }]);
    }

    #[test]
    fn contraction_with_self_pair_reports_loop() {
        // Half-nodes (0,0)-(0,1) pair inside group 0; (1,0)-(1,1) inside group 1.
        let mg = MatchingGraph::from_pairs(2, 2, &[(0, 1), (2, 3)]).unwrap();
        let raw = mg.contract_unchecked();
        let r = validate(&raw);
        assert!(r.violations.contains(&Violation::SelfLoop { node: 0 }));
        assert!(r.violations.contains(&Violation::SelfLoop { node: 1 }));
    }

    #[test]
    fn duplicates_out_of_range_and_degree_mismatch() {
        let g = Graph::from_adjacency_unchecked(vec![ids(&[1, 1, 7]), ids(&[0, 0])], Some(2));
        let r = validate(&g);
        assert!(r.violations.contains(&Violation::Duplicate { node: 0, neighbor: 1 }));
        assert!(r.violations.contains(&Violation::Duplicate { node: 1, neighbor: 0 }));
        assert!(r.violations.contains(&Violation::OutOfRange { node: 0, neighbor: 7 }));
        assert!(r.violations.contains(&Violation::DegreeMismatch { node: 0, expected: 2, found: 3 }));
        assert!(!r.is_valid());
    }
}
