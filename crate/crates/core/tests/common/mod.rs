#![allow(dead_code)]

use kwise_sparsify::WeightedGraph;
use rand::Rng;

/// Connected graph: a random spanning tree plus each other pair with
/// probability `density`, weights uniform in `[lo, hi]`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, density: f64, lo: f64, hi: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        present[u][v] = true;
        edges.push((u, v, rng.gen_range(lo..=hi)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(lo..=hi)));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Same graph with each weight multiplied by a factor from `factor`.
pub fn reweight<R: Rng>(
    rng: &mut R,
    g: &WeightedGraph,
    mut factor: impl FnMut(&mut R) -> f64,
) -> WeightedGraph {
    let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w * factor(rng))).collect();
    WeightedGraph::new(g.vertex_count(), edges).unwrap()
}
