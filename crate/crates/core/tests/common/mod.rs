//! Shared instance generation for the integration tests.

use oor_core::graph::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Grows a random construction tree by gluing K3/K4 nodes onto free
/// triangle edges and returns the merged graph.
pub fn random_tree_graph(nodes: usize, k4_bias: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut free_edges: Vec<(usize, usize)> = Vec::new();
    let mut next_vertex;

    let root_k4 = rng.gen_bool(k4_bias);
    edges.extend([(0, 1), (1, 2), (0, 2)]);
    free_edges.extend([(0, 1), (1, 2), (0, 2)]);
    next_vertex = 3;
    if root_k4 {
        edges.extend([(0, 3), (1, 3), (2, 3)]);
        next_vertex = 4;
    }

    for _ in 1..nodes {
        let i = rng.gen_range(0..free_edges.len());
        let (u, v) = free_edges.swap_remove(i);
        let w = next_vertex;
        next_vertex += 1;
        edges.push((u, w));
        edges.push((v, w));
        free_edges.push((u, w));
        free_edges.push((v, w));
        if rng.gen_bool(k4_bias) {
            let m = next_vertex;
            next_vertex += 1;
            edges.extend([(u, m), (v, m), (w, m)]);
        }
    }
    Graph::build(next_vertex, &edges).unwrap()
}
