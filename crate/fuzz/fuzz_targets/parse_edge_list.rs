#![no_main]

use kwise_sparsify::WeightedGraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(g) = WeightedGraph::parse_edge_list(data) else {
        return;
    };
    let text = g.to_edge_list();
    let again = WeightedGraph::parse_edge_list(text.as_bytes()).expect("printed graph reparses");
    assert_eq!(g, again);
    if g.vertex_count() <= 64 {
        let l = g.laplacian();
        assert_eq!(l.dim(), g.vertex_count());
    }
});
