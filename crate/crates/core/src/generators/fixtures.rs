//! Small deterministic graphs with known structure.

use crate::graph::Graph;

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

/// `K_{1,leaves}` with the center at node 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
}

/// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes `i -- i + 5`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_degrees() {
        assert_eq!(cycle(6).edge_count(), 6);
        assert_eq!(complete(4).regular_degree(), Some(3));
        assert_eq!(star(5).edge_count(), 5);
        assert_eq!(path(4).edge_count(), 3);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert_eq!(p.regular_degree(), Some(3));
    }
}
