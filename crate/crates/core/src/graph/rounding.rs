//! Reduction from real weights to integer weights.
//!
//! With `z = min(1, w_min)` and `t = ceil(log2(2 n^3 / (delta * z)))`, every
//! weight becomes `floor(2^t * w)`. The rounding error per edge is below one
//! unit, and `2^-t * L'` is a `delta`-spectral approximation of `L`.

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Accuracy of the rounded Laplacian.
pub const ROUNDING_DELTA: f64 = 1.0 / 6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundedMultigraph {
    /// Integer-weighted graph, weights `floor(2^t * w)`.
    pub graph: WeightedGraph,
    pub shift_t: u32,
}

impl RoundedMultigraph {
    /// `2^-t * L'`, the Laplacian rescaled back to the original magnitude.
    pub fn scaled_laplacian(&self) -> SymMatrix {
        self.graph
            .laplacian()
            .scale((-(self.shift_t as i32) as f64).exp2())
    }
}

/// Smallest `t >= 0` with `2^t >= x`.
fn ceil_log2(x: f64) -> u32 {
    let mut t = 0u32;
    while (t as f64).exp2() < x {
        t += 1;
    }
    t
}

pub fn round_to_multigraph(g: &WeightedGraph) -> Result<RoundedMultigraph> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count() as f64;
    let z = g.min_weight().map_or(1.0, |w| w.min(1.0));
    let shift_t = ceil_log2(2.0 * n.powi(3) / (ROUNDING_DELTA * z));
    let scale = (shift_t as f64).exp2();
    let mut edges = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let w = (e.w * scale).floor();
        if w > 2f64.powi(53) {
            return Err(Error::OutOfRange {
                name: "rounded weight",
                value: w,
                expected: "at most 2^53",
            });
        }
        edges.push((e.u, e.v, w));
    }
    Ok(RoundedMultigraph {
        graph: WeightedGraph::new(g.vertex_count(), edges)?,
        shift_t,
    })
}
