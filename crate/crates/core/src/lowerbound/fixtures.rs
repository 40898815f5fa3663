//! Small named graphs: complete graphs, cycles, and the Petersen and Heawood
//! cages.

use crate::error::Result;
use crate::graph::WeightedGraph;

pub fn complete(n: usize) -> Result<WeightedGraph> {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    WeightedGraph::unweighted(n, pairs)
}

/// `C_n` for `n >= 3`.
pub fn cycle(n: usize) -> Result<WeightedGraph> {
    WeightedGraph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// 10 vertices, 3-regular, girth 5.
pub fn petersen() -> WeightedGraph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    WeightedGraph::unweighted(10, outer.chain(spokes).chain(inner).collect::<Vec<_>>())
        .expect("petersen graph is simple")
}

/// 14 vertices, 3-regular, girth 6: a 14-cycle with chords `i -- i+5` for
/// even `i`.
pub fn heawood() -> WeightedGraph {
    let ring = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    WeightedGraph::unweighted(14, ring.chain(chords).collect::<Vec<_>>())
        .expect("heawood graph is simple")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub graph: WeightedGraph,
}

/// `K_3..=K_12`, `C_3..=C_12`, Petersen and Heawood.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for n in 3..=12 {
        out.push(Fixture {
            name: format!("complete:{n}"),
            graph: complete(n).expect("n >= 1"),
        });
    }
    for n in 3..=12 {
        out.push(Fixture {
            name: format!("cycle:{n}"),
            graph: cycle(n).expect("n >= 3"),
        });
    }
    out.push(Fixture {
        name: "petersen".into(),
        graph: petersen(),
    });
    out.push(Fixture {
        name: "heawood".into(),
        graph: heawood(),
    });
    out
}

/// Looks up `petersen`, `heawood`, `complete:<n>` or `cycle:<n>`.
pub fn by_name(name: &str) -> Option<WeightedGraph> {
    match name {
        "petersen" => return Some(petersen()),
        "heawood" => return Some(heawood()),
        _ => {}
    }
    let (kind, n) = name.split_once(':')?;
    let n: usize = n.parse().ok()?;
    match kind {
        "complete" if (1..=4096).contains(&n) => complete(n).ok(),
        "cycle" if (3..=1 << 20).contains(&n) => cycle(n).ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Girth;

    fn regular(g: &WeightedGraph, d: usize) -> bool {
        g.degrees().iter().all(|&x| x == d)
    }

    #[test]
    fn petersen_shape() {
        let g = petersen();
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
        assert!(regular(&g, 3));
        assert_eq!(g.girth(), Girth::Finite(5));
    }

    #[test]
    fn heawood_shape() {
        let g = heawood();
        assert_eq!((g.vertex_count(), g.edge_count()), (14, 21));
        assert!(regular(&g, 3));
        assert_eq!(g.girth(), Girth::Finite(6));
    }

    #[test]
    fn complete_and_cycles() {
        let k5 = complete(5).unwrap();
        assert!(regular(&k5, 4));
        assert_eq!(k5.girth(), Girth::Finite(3));
        for n in 3..=12 {
            assert_eq!(cycle(n).unwrap().girth(), Girth::Finite(n));
        }
        assert_eq!(fixtures().len(), 22);
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("petersen"), Some(petersen()));
        assert_eq!(by_name("complete:4"), complete(4).ok());
        assert_eq!(by_name("cycle:5"), cycle(5).ok());
        assert_eq!(by_name("cycle:2"), None);
        assert_eq!(by_name("wheel:5"), None);
        assert_eq!(by_name("complete:x"), None);
    }
}
