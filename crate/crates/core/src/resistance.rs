//! Effective resistances `R_ab = (e_a - e_b)^T L^+ (e_a - e_b)`.
//!
//! All values in a table come from one pseudoinverse, so approximate tables
//! inherit the multiplicative `(1 ± γ)` band from the perturbed
//! pseudoinverse uniformly across edges.

use crate::error::{check_range, Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{perturbed_pseudoinverse, pseudoinverse, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResistanceMode {
    Exact,
    Approx { gamma: f64 },
}

/// Per-edge resistances aligned with the graph's canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceTable {
    values: Vec<f64>,
    mode: ResistanceMode,
}

impl ResistanceTable {
    pub fn new(values: Vec<f64>, mode: ResistanceMode) -> Self {
        Self { values, mode }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mode(&self) -> ResistanceMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_aligned(&self, g: &WeightedGraph) -> Result<()> {
        if self.values.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                expected: g.edge_count(),
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

fn quadratic_forms(g: &WeightedGraph, pinv: &SymMatrix) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|e| pinv.get(e.u, e.u) + pinv.get(e.v, e.v) - 2.0 * pinv.get(e.u, e.v))
        .collect()
}

pub fn effective_resistances_exact(g: &WeightedGraph) -> Result<ResistanceTable> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let pinv = pseudoinverse(&g.laplacian())?;
    Ok(ResistanceTable::new(
        quadratic_forms(g, &pinv),
        ResistanceMode::Exact,
    ))
}

/// Resistances against a `γ`-perturbed pseudoinverse; each value lies within
/// `(1 ± γ)` of the exact one. Seed 0 reproduces the exact table.
pub fn effective_resistances_approx(
    g: &WeightedGraph,
    gamma: f64,
    noise_seed: u64,
) -> Result<ResistanceTable> {
    check_range("gamma", gamma, gamma > 0.0 && gamma < 1.0, "0 < gamma < 1")?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let pinv = perturbed_pseudoinverse(&g.laplacian(), gamma, noise_seed)?;
    Ok(ResistanceTable::new(
        quadratic_forms(g, &pinv),
        ResistanceMode::Approx { gamma },
    ))
}

/// `sum w_ab R_ab - (n - 1)`, zero for exact tables on connected graphs.
pub fn foster_residual(g: &WeightedGraph, r: &ResistanceTable) -> Result<f64> {
    r.check_aligned(g)?;
    let sum: f64 = g.weights().zip(r.values()).map(|(w, r)| w * r).sum();
    Ok(sum - (g.vertex_count() as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> WeightedGraph {
        WeightedGraph::unweighted(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn exact_examples() {
        let r = effective_resistances_exact(&k3()).unwrap();
        assert!(r.values().iter().all(|x| (x - 2.0 / 3.0).abs() < 1e-14));

        let tree = WeightedGraph::new(4, [(0, 1, 2.0), (1, 2, 0.5), (1, 3, 4.0)]).unwrap();
        let r = effective_resistances_exact(&tree).unwrap();
        for (e, x) in tree.edges().iter().zip(r.values()) {
            assert!((x - 1.0 / e.w).abs() < 1e-12, "{x} vs {}", 1.0 / e.w);
        }

        // Unit 4-cycle: 1 in parallel with 3.
        let c4 = WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = effective_resistances_exact(&c4).unwrap();
        assert!(r.values().iter().all(|x| (x - 0.75).abs() < 1e-14));
    }

    #[test]
    fn approx_examples() {
        let g = k3();
        let exact = effective_resistances_exact(&g).unwrap();
        assert_eq!(
            effective_resistances_approx(&g, 0.1, 0).unwrap().values(),
            exact.values()
        );
        for seed in 1..20 {
            let r = effective_resistances_approx(&g, 0.1, seed).unwrap();
            for x in r.values() {
                assert!((0.6 - 1e-12..=2.2 / 3.0 + 1e-12).contains(x), "{x}");
            }
            let f = foster_residual(&g, &r).unwrap() + 2.0;
            assert!((2.0 * 0.9 - 1e-12..=2.0 * 1.1 + 1e-12).contains(&f));
        }
    }

    #[test]
    fn foster_examples() {
        let g = k3();
        let r = effective_resistances_exact(&g).unwrap();
        assert!(foster_residual(&g, &r).unwrap().abs() < 1e-10);
        let path = WeightedGraph::new(5, [(0, 1, 3.0), (1, 2, 0.2), (2, 3, 1.0), (3, 4, 7.0)]).unwrap();
        let r = effective_resistances_exact(&path).unwrap();
        assert!(foster_residual(&path, &r).unwrap().abs() < 1e-12);
        let short = ResistanceTable::new(vec![1.0], ResistanceMode::Exact);
        assert_eq!(
            foster_residual(&g, &short),
            Err(Error::LengthMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn disconnected() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(effective_resistances_exact(&g), Err(Error::Disconnected));
        assert_eq!(effective_resistances_approx(&g, 0.1, 3), Err(Error::Disconnected));
    }
}
