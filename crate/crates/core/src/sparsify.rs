//! Resistance-sampling sparsifier driven by a k-wise independent seed.
//!
//! Each edge is kept with probability `p_ab = min(1, w_ab R_ab s)` truncated
//! to `t` bits, and a kept edge gets weight `w_ab / p_ab`. The truncated
//! probability is used both as the sampling marginal and in the reweighting,
//! which makes `E[L(H)] = L(G)` hold exactly over the seed space.

use std::f64::consts::E;

use rand::Rng;

use crate::error::{check_range, Error, Result};
use crate::graph::WeightedGraph;
use crate::kwise::{KWiseSpace, Seed};
use crate::resistance::ResistanceTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsifyParams {
    k: u32,
    eps: f64,
    delta: f64,
    s: f64,
}

impl SparsifyParams {
    /// Parameters with the default oversampling rate for an `n`-vertex graph.
    pub fn new(n: usize, k: u32, eps: f64, delta: f64) -> Result<Self> {
        let s = oversampling_rate(n, k, eps, delta)?;
        Self::with_rate(k, eps, delta, s)
    }

    /// Parameters with an explicit oversampling rate `s`.
    pub fn with_rate(k: u32, eps: f64, delta: f64, s: f64) -> Result<Self> {
        check_k(k)?;
        check_range("eps", eps, eps > 0.0 && eps < 1.0, "0 < eps < 1")?;
        check_range("delta", delta, delta > 0.0 && delta < 0.5, "0 < delta < 1/2")?;
        check_range("s", s, s > 0.0, "s > 0")?;
        Ok(Self { k, eps, delta, s })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn rate(&self) -> f64 {
        self.s
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            expected: "k even and positive",
        });
    }
    Ok(())
}

/// `s = 18 e ln(n) / ε² * (n / δ)^(2/k)`.
pub fn oversampling_rate(n: usize, k: u32, eps: f64, delta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            expected: "n >= 2",
        });
    }
    check_k(k)?;
    check_range("eps", eps, eps > 0.0 && eps < 1.0, "0 < eps < 1")?;
    check_range("delta", delta, delta > 0.0 && delta < 0.5, "0 < delta < 1/2")?;
    let n = n as f64;
    Ok(18.0 * E * n.ln() / (eps * eps) * (n / delta).powf(2.0 / k as f64))
}

/// `p_ab = min(1, w_ab R_ab s)` per edge.
pub fn sampling_probabilities(g: &WeightedGraph, r: &ResistanceTable, s: f64) -> Result<Vec<f64>> {
    r.check_aligned(g)?;
    check_range("s", s, s > 0.0, "s > 0")?;
    Ok(g
        .weights()
        .zip(r.values())
        .map(|(w, &r)| (w * r * s).min(1.0))
        .collect())
}

/// Divides every value by `1 - α`, turning a `(1 ± α)` table into an upper
/// bound on the exact resistances.
pub fn adjust_for_alpha(r: &ResistanceTable, alpha: f64) -> Result<ResistanceTable> {
    check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "0 <= alpha < 1")?;
    let values = r.values().iter().map(|x| x / (1.0 - alpha)).collect();
    Ok(ResistanceTable::new(values, r.mode()))
}

/// Relative distance within which a probability is moved onto the nearest
/// point of the `2^-t` grid before truncation.
pub const GRID_SNAP: f64 = 1e-9;

/// Absorbs rounding error in `p` so that, for example, a bridge with
/// `w R s = 1 - 1e-16` is not truncated a whole grid step down.
pub(crate) fn snap_to_grid(p: f64, t: u32) -> f64 {
    let scale = (t as f64).exp2();
    let x = p * scale;
    let r = x.round();
    if (x - r).abs() <= GRID_SNAP * r.max(1.0) {
        r / scale
    } else {
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `s <= 2e ln n`, below the range where the concentration bound applies.
    RateBelowBound { s: f64, bound: f64 },
    /// `k > ln n`.
    IndependenceAboveLogN { k: u32, ln_n: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::RateBelowBound { s, bound } => {
                write!(f, "oversampling rate {s} is at most 2e ln n = {bound}")
            }
            Warning::IndependenceAboveLogN { k, ln_n } => {
                write!(f, "k = {k} exceeds ln n = {ln_n}")
            }
        }
    }
}

fn warnings_for(n: usize, params: &SparsifyParams) -> Vec<Warning> {
    let ln_n = (n as f64).ln();
    let mut out = Vec::new();
    let bound = 2.0 * E * ln_n;
    if params.s <= bound {
        out.push(Warning::RateBelowBound { s: params.s, bound });
    }
    if params.k as f64 > ln_n {
        out.push(Warning::IndependenceAboveLogN { k: params.k, ln_n });
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifierOutput {
    /// The sparsifier `H`, on the same vertex set.
    pub graph: WeightedGraph,
    /// `chosen[i]` iff input edge `i` is in `H`.
    pub chosen: Vec<bool>,
    /// Truncated probabilities used for sampling and reweighting.
    pub probs: Vec<f64>,
    /// `None` for degenerate inputs, where nothing is sampled.
    pub seed: Option<Seed>,
    pub warnings: Vec<Warning>,
}

impl SparsifierOutput {
    pub fn expected_edges(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// A graph together with its k-wise space over truncated probabilities,
/// ready to produce one sparsifier per seed.
#[derive(Debug, Clone)]
pub struct SamplingPlan {
    graph: WeightedGraph,
    space: KWiseSpace,
    probs: Vec<f64>,
}

impl SamplingPlan {
    /// Truncates `probs` to `t` bits (after [`GRID_SNAP`]) and builds the
    /// `k`-wise space over them.
    ///
    /// Fails with [`Error::ZeroProbabilityEdge`] if a positive probability
    /// truncates to zero.
    pub fn new(g: &WeightedGraph, probs: &[f64], k: u32, t: u32) -> Result<Self> {
        if probs.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                expected: g.edge_count(),
                got: probs.len(),
            });
        }
        let snapped: Vec<f64> = probs.iter().map(|&p| snap_to_grid(p, t)).collect();
        let space = KWiseSpace::build(&snapped, k, t)?;
        let truncated = space.marginals();
        if let Some(edge) = (0..probs.len()).find(|&i| probs[i] > 0.0 && truncated[i] == 0.0) {
            return Err(Error::ZeroProbabilityEdge {
                edge,
                p: probs[edge],
                t,
            });
        }
        Ok(Self {
            graph: g.clone(),
            space,
            probs: truncated,
        })
    }

    pub fn space(&self) -> &KWiseSpace {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn expected_edges(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn seed_count(&self) -> u128 {
        self.space.seed_count()
    }

    pub fn sample(&self, seed: Seed) -> Result<SparsifierOutput> {
        let chosen = self.space.sample_at(seed)?;
        Ok(SparsifierOutput {
            graph: self.reweighted(&chosen),
            chosen,
            probs: self.probs.clone(),
            seed: Some(seed),
            warnings: Vec::new(),
        })
    }

    /// Number of edges `seed` keeps, without building the graph.
    pub fn edge_count_at(&self, seed: Seed, scratch: &mut Vec<bool>) -> Result<usize> {
        self.space.sample_into(seed, scratch)?;
        Ok(scratch.iter().filter(|&&b| b).count())
    }

    pub(crate) fn reweighted(&self, chosen: &[bool]) -> WeightedGraph {
        self.graph.filter_edges(chosen, |i, e| e.w / self.probs[i])
    }
}

fn degenerate(g: &WeightedGraph) -> Option<SparsifierOutput> {
    (g.vertex_count() == 1 || g.edge_count() == 0).then(|| SparsifierOutput {
        graph: g.clone(),
        chosen: vec![true; g.edge_count()],
        probs: vec![1.0; g.edge_count()],
        seed: None,
        warnings: Vec::new(),
    })
}

fn plan_for(
    g: &WeightedGraph,
    r: &ResistanceTable,
    params: &SparsifyParams,
    t: u32,
) -> Result<SamplingPlan> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let probs = sampling_probabilities(g, r, params.s)?;
    SamplingPlan::new(g, &probs, params.k, t)
}

/// Sparsifier for one seed of the `k`-wise space over `t`-bit probabilities.
pub fn sparsify_with_seed(
    g: &WeightedGraph,
    r: &ResistanceTable,
    params: &SparsifyParams,
    t: u32,
    seed: Seed,
) -> Result<SparsifierOutput> {
    if let Some(out) = degenerate(g) {
        return Ok(out);
    }
    let mut out = plan_for(g, r, params, t)?.sample(seed)?;
    out.warnings = warnings_for(g.vertex_count(), params);
    Ok(out)
}

/// Sparsifier for a seed drawn uniformly by `rng`.
pub fn sparsify_random<R: Rng + ?Sized>(
    g: &WeightedGraph,
    r: &ResistanceTable,
    params: &SparsifyParams,
    t: u32,
    rng: &mut R,
) -> Result<SparsifierOutput> {
    if let Some(out) = degenerate(g) {
        return Ok(out);
    }
    let plan = plan_for(g, r, params, t)?;
    let seed = Seed(rng.gen_range(0..plan.seed_count()));
    let mut out = plan.sample(seed)?;
    out.warnings = warnings_for(g.vertex_count(), params);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMatrix;
    use crate::resistance::{effective_resistances_approx, effective_resistances_exact, ResistanceMode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> WeightedGraph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        WeightedGraph::unweighted(n, pairs).unwrap()
    }

    #[test]
    fn rate_examples() {
        let s = oversampling_rate(1024, 4, 0.5, 0.25).unwrap();
        let expected = 18.0 * E * 1024f64.ln() / 0.25 * 64.0;
        assert!((s - expected).abs() < 1e-9 * expected);
        assert!((s - 8.68e4).abs() < 0.01e4);
        let a = oversampling_rate(100, 4, 0.2, 0.1).unwrap();
        let b = oversampling_rate(100, 4, 0.4, 0.1).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
        let big_k = oversampling_rate(100, 1 << 20, 0.5, 0.1).unwrap();
        assert!((big_k / (18.0 * E * 100f64.ln() / 0.25) - 1.0).abs() < 1e-4);
        assert!(oversampling_rate(1, 2, 0.5, 0.1).is_err());
        assert!(oversampling_rate(10, 3, 0.5, 0.1).is_err());
        assert!(oversampling_rate(10, 2, 1.0, 0.1).is_err());
        assert!(oversampling_rate(10, 2, 0.5, 0.5).is_err());
    }

    #[test]
    fn probability_examples() {
        let g = complete(64);
        let r = effective_resistances_exact(&g).unwrap();
        let p = sampling_probabilities(&g, &r, 16.0).unwrap();
        assert!(p.iter().all(|x| (x - 0.5).abs() < 1e-12));
        let p = sampling_probabilities(&g, &r, 1e6).unwrap();
        assert!(p.iter().all(|&x| x == 1.0));

        let tree = WeightedGraph::new(4, [(0, 1, 2.0), (1, 2, 0.5), (1, 3, 4.0)]).unwrap();
        let r = effective_resistances_exact(&tree).unwrap();
        let p = sampling_probabilities(&tree, &r, 1.0).unwrap();
        assert!(p.iter().all(|x| (x - 1.0).abs() < 1e-12));

        let short = ResistanceTable::new(vec![1.0], ResistanceMode::Exact);
        assert!(matches!(
            sampling_probabilities(&tree, &short, 1.0),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn alpha_adjustment() {
        let g = complete(3);
        let exact = effective_resistances_exact(&g).unwrap();
        assert_eq!(adjust_for_alpha(&exact, 0.0).unwrap(), exact);
        let doubled = adjust_for_alpha(&exact, 0.5).unwrap();
        for (a, b) in doubled.values().iter().zip(exact.values()) {
            assert!((a - 2.0 * b).abs() < 1e-15);
        }
        for seed in 1..10 {
            let approx = effective_resistances_approx(&g, 0.1, seed).unwrap();
            let adj = adjust_for_alpha(&approx, 0.1).unwrap();
            for (a, b) in adj.values().iter().zip(exact.values()) {
                assert!(*a >= b * (1.0 - 1e-12));
            }
        }
        assert!(adjust_for_alpha(&exact, 1.0).is_err());
    }

    #[test]
    fn saturated_inputs_return_g() {
        let path = WeightedGraph::new(3, [(0, 1, 1.5), (1, 2, 0.25)]).unwrap();
        let r = effective_resistances_exact(&path).unwrap();
        let params = SparsifyParams::with_rate(2, 0.5, 0.25, 1.0).unwrap();
        let plan = plan_for(&path, &r, &params, 3).unwrap();
        for seed in plan.space().seeds() {
            let out = sparsify_with_seed(&path, &r, &params, 3, seed).unwrap();
            assert_eq!(out.graph, path);
            assert!(out.chosen.iter().all(|&b| b));
        }
    }

    #[test]
    fn all_zero_sample_keeps_only_saturated_edges() {
        // A pendant edge (bridge, saturated) attached to a triangle.
        let g = WeightedGraph::unweighted(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let r = effective_resistances_exact(&g).unwrap();
        let params = SparsifyParams::with_rate(2, 0.5, 0.25, 1.0).unwrap();
        let plan = plan_for(&g, &r, &params, 2).unwrap();
        assert_eq!(plan.probs(), &[0.5, 0.5, 0.5, 1.0]);
        let mut found = false;
        for seed in plan.space().seeds() {
            let out = plan.sample(seed).unwrap();
            for (i, &c) in out.chosen.iter().enumerate() {
                if c {
                    let e = &g.edges()[i];
                    let h = out.graph.edges().iter().find(|h| (h.u, h.v) == (e.u, e.v)).unwrap();
                    assert_eq!(h.w, e.w / out.probs[i]);
                }
            }
            if out.chosen[..3].iter().all(|&b| !b) {
                found = true;
                assert!(out.chosen[3]);
                assert_eq!(out.graph.edge_count(), 1);
            }
        }
        assert!(found);
    }

    #[test]
    fn unbiased_over_all_seeds() {
        let g = WeightedGraph::new(
            4,
            [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 0.5), (1, 2, 1.5), (1, 3, 3.0), (2, 3, 1.0)],
        )
        .unwrap();
        let r = effective_resistances_exact(&g).unwrap();
        let params = SparsifyParams::with_rate(2, 0.5, 0.25, 1.5).unwrap();
        let plan = plan_for(&g, &r, &params, 4).unwrap();
        let mut sum = SymMatrix::zeros(4);
        for seed in plan.space().seeds() {
            sum = sum.add(&plan.sample(seed).unwrap().graph.laplacian());
        }
        let avg = sum.scale(1.0 / plan.seed_count() as f64);
        assert!(avg.max_abs_diff(&g.laplacian()) < 1e-9);
    }

    #[test]
    fn expected_sparsity_bounded_by_foster() {
        let g = complete(10);
        let r = effective_resistances_exact(&g).unwrap();
        let params = SparsifyParams::with_rate(2, 0.5, 0.25, 2.0).unwrap();
        let plan = plan_for(&g, &r, &params, 6).unwrap();
        assert!(plan.expected_edges() <= 2.0 * 9.0 + 1e-9);
    }

    #[test]
    fn errors_and_degenerate_inputs() {
        let params = SparsifyParams::with_rate(2, 0.5, 0.25, 1.0).unwrap();
        let single = WeightedGraph::new(1, []).unwrap();
        let r0 = ResistanceTable::new(vec![], ResistanceMode::Exact);
        let out = sparsify_with_seed(&single, &r0, &params, 2, Seed(0)).unwrap();
        assert_eq!(out.graph, single);
        assert_eq!(out.seed, None);
        let empty = WeightedGraph::new(3, []).unwrap();
        assert_eq!(sparsify_with_seed(&empty, &r0, &params, 2, Seed(0)).unwrap().graph, empty);

        let split = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let r = ResistanceTable::new(vec![1.0, 1.0], ResistanceMode::Exact);
        assert_eq!(
            sparsify_with_seed(&split, &r, &params, 2, Seed(0)),
            Err(Error::Disconnected)
        );

        let g = complete(8);
        let r = effective_resistances_exact(&g).unwrap();
        let tiny = SparsifyParams::with_rate(2, 0.5, 0.25, 0.5).unwrap();
        assert!(matches!(
            sparsify_with_seed(&g, &r, &tiny, 2, Seed(0)),
            Err(Error::ZeroProbabilityEdge { t: 2, .. })
        ));
        assert!(SparsifyParams::with_rate(3, 0.5, 0.25, 1.0).is_err());
    }

    #[test]
    fn warnings() {
        let g = complete(8);
        let r = effective_resistances_exact(&g).unwrap();
        let params = SparsifyParams::with_rate(4, 0.5, 0.25, 4.0).unwrap();
        let out = sparsify_with_seed(&g, &r, &params, 4, Seed(7)).unwrap();
        assert_eq!(out.warnings.len(), 2);
        let quiet = SparsifyParams::new(8, 2, 0.5, 0.25).unwrap();
        let out = sparsify_with_seed(&g, &r, &quiet, 4, Seed(0)).unwrap();
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn random_draws_are_reproducible_and_unbiased_in_size() {
        let g = complete(16);
        let r = effective_resistances_exact(&g).unwrap();
        let params = SparsifyParams::with_rate(4, 0.5, 0.25, 2.0).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sparsify_random(&g, &r, &params, 6, &mut rng).unwrap()
        };
        assert_eq!(draw(11), draw(11));
        let plan = plan_for(&g, &r, &params, 6).unwrap();
        let mean_p = plan.expected_edges();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 400;
        let total: usize = (0..trials)
            .map(|_| {
                sparsify_random(&g, &r, &params, 6, &mut rng)
                    .unwrap()
                    .graph
                    .edge_count()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        // Pairwise independence gives Var = sum p(1-p) per draw.
        let var: f64 = plan.probs().iter().map(|p| p * (1.0 - p)).sum();
        let sigma = (var / trials as f64).sqrt();
        assert!((mean - mean_p).abs() <= 3.0 * sigma, "{mean} vs {mean_p}");
    }
}
