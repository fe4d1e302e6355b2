use crate::graph::{Graph, Multigraph, NodeId};

/// The four Gabber-Galil maps on the `m x m` torus; each is a bijection, so
/// together with their inverses every node gets exactly 8 arcs.
fn images(x: usize, y: usize, m: usize) -> [(usize, usize); 4] {
    [
        ((x + 2 * y) % m, y),
        ((x + 2 * y + 1) % m, y),
        (x, (y + 2 * x) % m),
        (x, (y + 2 * x + 1) % m),
    ]
}

/// The 8-regular Margulis-Gabber-Galil multigraph on `m^2` nodes, node
/// `(x, y)` stored at index `x * m + y`. Loops and parallel edges are kept.
pub fn margulis_multigraph(m: usize) -> Multigraph {
    assert!(m >= 1);
    let n = m * m;
    let mut lists = vec![Vec::with_capacity(8); n];
    for x in 0..m {
        for y in 0..m {
            let v = x * m + y;
            for (a, b) in images(x, y, m) {
                let u = a * m + b;
                lists[v].push(NodeId::new(u));
                lists[u].push(NodeId::new(v));
            }
        }
    }
    Multigraph::from_lists(lists).expect("margulis arcs are symmetric by construction")
}

/// Simple graph underlying [`margulis_multigraph`]: loops dropped, parallel
/// edges merged. `regular_degree` is unset whenever anything was dropped.
pub fn gen_margulis_expander(m: usize) -> Graph {
    let multi = margulis_multigraph(m);
    let mut g = multi.simplify();
    if !multi.is_simple() {
        g.clear_regular_degree();
    }
    g
}
