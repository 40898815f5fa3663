//! Replays the checked-in fuzz corpus through the parsers, with the same
//! round-trip checks the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use kwise_sparsify::kwise::{parse_marginals, KWiseSpace, Seed};
use kwise_sparsify::lowerbound::fixtures::by_name;
use kwise_sparsify::{SymMatrix, WeightedGraph};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn edge_list_seeds() {
    let mut accepted = Vec::new();
    for (name, data) in seeds("parse_edge_list") {
        if let Ok(g) = WeightedGraph::parse_edge_list(&data) {
            let again = WeightedGraph::parse_edge_list(g.to_edge_list().as_bytes()).unwrap();
            assert_eq!(g, again, "{name}");
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["commented_path", "single_vertex", "triangle"]);
}

#[test]
fn matrix_seeds() {
    let mut accepted = Vec::new();
    for (name, data) in seeds("parse_matrix") {
        if let Ok(m) = SymMatrix::parse_matrix(&data) {
            assert_eq!(m, SymMatrix::parse_matrix(m.to_text().as_bytes()).unwrap(), "{name}");
            accepted.push(name);
        }
    }
    assert!(accepted.contains(&"triangle_laplacian".to_string()), "{accepted:?}");
    assert!(!accepted.contains(&"ragged".to_string()));
    assert!(!accepted.contains(&"asymmetric".to_string()));
}

#[test]
fn marginal_seeds() {
    let mut accepted = Vec::new();
    for (name, data) in seeds("parse_marginals") {
        if let Ok(p) = parse_marginals(&data) {
            let space = KWiseSpace::build(&p, 2, 4).unwrap();
            assert_eq!(space.sample_at(Seed(0)).unwrap().len(), p.len());
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["endpoints", "mixed_lines"]);
}

#[test]
fn fixture_name_seeds() {
    let mut accepted = Vec::new();
    for (name, data) in seeds("fixture_name") {
        if let Some(g) = by_name(std::str::from_utf8(&data).unwrap()) {
            assert!(g.is_connected());
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["complete_5", "cycle_7", "heawood", "petersen"]);
}
