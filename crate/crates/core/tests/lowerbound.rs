use num_rational::Ratio;

use kwise_sparsify::graph::Girth;
use kwise_sparsify::lowerbound::{
    complete, cycle, disconnection_probability, edge_marginals, fixtures, independence_order,
    moore_bound_check, partition_sample, EdgeDistribution, PartitionDistribution,
};
use kwise_sparsify::resistance::effective_resistances_exact;

#[test]
fn edge_transitive_fixtures_have_equal_resistances() {
    for f in fixtures() {
        let r = effective_resistances_exact(&f.graph).unwrap();
        let expected = (f.graph.vertex_count() - 1) as f64 / f.graph.edge_count() as f64;
        for &x in r.values() {
            assert!((x - expected).abs() < 1e-10, "{}: {x} vs {expected}", f.name);
        }
    }
}

#[test]
fn partition_marginals_are_one_half() {
    for f in fixtures().into_iter().filter(|f| f.graph.vertex_count() <= 10) {
        let d = PartitionDistribution::new(f.graph);
        assert!(edge_marginals(&d).unwrap().iter().all(|p| *p == Ratio::new(1, 2)));
    }
}

#[test]
fn complete_graph_disconnects_unless_partition_is_trivial() {
    for n in 3..=8u32 {
        let d = PartitionDistribution::new(complete(n as usize).unwrap());
        let p = disconnection_probability(&d).unwrap();
        assert_eq!(p, Ratio::new(1, 1) - Ratio::new(1, 1u128 << (n - 1)), "K_{n}");
    }
}

#[test]
fn cycle_order_tracks_girth() {
    for n in 3..=9 {
        let g = cycle(n).unwrap();
        assert_eq!(g.girth(), Girth::Finite(n));
        let d = PartitionDistribution::new(g);
        assert_eq!(independence_order(&d).unwrap(), n - 1);
    }
}

#[test]
fn partition_sample_keeps_edges_inside_sides() {
    let g = complete(4).unwrap();
    let keep = partition_sample(&g, &[true, false, false, true]).unwrap();
    for (e, k) in g.edges().iter().zip(keep) {
        assert_eq!(k, (e.u == 0 || e.u == 3) == (e.v == 0 || e.v == 3));
    }
    assert!(partition_sample(&g, &[true]).is_err());
}

#[test]
fn distribution_exposes_its_graph() {
    let d = PartitionDistribution::new(cycle(5).unwrap());
    assert_eq!(d.graph().edge_count(), 5);
    assert_eq!(d.outcomes().unwrap().log2_denominator, 5);
}

#[test]
fn moore_bound_on_cages() {
    // Heawood meets the even-girth bound with equality.
    assert!(moore_bound_check(14, 3, 6).unwrap());
    assert!(!moore_bound_check(13, 3, 6).unwrap());
    assert!(moore_bound_check(10, 3, 5).is_err());
    assert!(moore_bound_check(10, 2, 4).is_err());
}
