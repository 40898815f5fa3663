//! Deterministic sparsification by enumerating a k-wise sample space.
//!
//! Seeds are tried in ascending order. A seed is accepted when its
//! sparsifier has at most `ceil(12 s (n - 1))` edges and the trace-power
//! verifier, run at `ε̂ = 4ε/5` and `α = 9/16`, says YES. Since
//! `ε̂ sqrt(1 + 9/16) = ε`, every accepted graph is an `ε`-approximation.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::{check_range, Error, Result};
use crate::graph::WeightedGraph;
use crate::kwise::Seed;
use crate::resistance::{effective_resistances_approx, effective_resistances_exact, ResistanceTable};
use crate::sparsify::{oversampling_rate, snap_to_grid, SamplingPlan};
use crate::verify::{PinvMode, Verdict, Verifier, VerifierParams};

/// Failure probability used to size the oversampling rate.
pub const DELTA: f64 = 0.25;
/// Verifier accuracy parameter.
pub const VERIFIER_ALPHA: f64 = 9.0 / 16.0;
/// Default limit on the number of seeds tried.
pub const DEFAULT_CAP: u128 = 1 << 24;

/// Seeds handed to a worker at a time.
const BLOCK: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct DerandConfig {
    pub k: u32,
    pub eps: f64,
    pub enumeration_cap: u128,
    pub parallel_width: usize,
    /// Noise seed for the approximate resistances; 0 uses exact ones.
    pub noise_seed: u64,
    /// Replaces the default oversampling rate.
    pub rate_override: Option<f64>,
}

impl DerandConfig {
    pub fn new(k: u32, eps: f64) -> Result<Self> {
        let config = Self {
            k,
            eps,
            enumeration_cap: DEFAULT_CAP,
            parallel_width: 1,
            noise_seed: 0,
            rate_override: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k % 2 != 0 {
            return Err(Error::OutOfRange {
                name: "k",
                value: self.k as f64,
                expected: "k even and positive",
            });
        }
        check_range("eps", self.eps, self.eps > 0.0 && self.eps < 1.0, "0 < eps < 1")?;
        if self.enumeration_cap == 0 {
            return Err(Error::OutOfRange {
                name: "enumeration cap",
                value: 0.0,
                expected: "cap >= 1",
            });
        }
        if self.parallel_width == 0 {
            return Err(Error::OutOfRange {
                name: "parallel width",
                value: 0.0,
                expected: "at least one worker",
            });
        }
        if let Some(s) = self.rate_override {
            check_range("rate", s, s > 0.0, "rate > 0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub delta: f64,
    pub eps_hat: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub s: f64,
    /// Truncation bits, `ceil(log2(1/α'))`.
    pub t: u32,
    /// `ceil(12 s (n - 1))`.
    pub threshold: u64,
}

/// `δ = 1/4`, `ε̂ = 4ε/5`, `α = min(1, w_min) / (2 d_max)` with `d_max` the
/// largest weighted degree, `α' = α/(4+α)`, and the rate and threshold
/// derived from them.
pub fn derived_constants(g: &WeightedGraph, config: &DerandConfig) -> Result<DerivedConstants> {
    config.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let eps_hat = 4.0 * config.eps / 5.0;
    let w_min = g.min_weight().ok_or(Error::EmptyGraph)?;
    let alpha = w_min.min(1.0) / (2.0 * g.max_weighted_degree()?);
    let alpha_prime = alpha / (4.0 + alpha);
    let s = match config.rate_override {
        Some(s) => s,
        None => oversampling_rate(n, config.k, eps_hat, DELTA)?,
    };
    let t = (1.0 / alpha_prime).log2().ceil() as u32;
    let threshold = (12.0 * s * (n as f64 - 1.0)).ceil();
    Ok(DerivedConstants {
        delta: DELTA,
        eps_hat,
        alpha,
        alpha_prime,
        s,
        t,
        threshold: if threshold >= u64::MAX as f64 {
            u64::MAX
        } else {
            threshold as u64
        },
    })
}

/// `p̃ = 2^-t floor(2^t min(1, w R̃ s / (1 - α')))`.
pub fn truncated_probabilities(
    g: &WeightedGraph,
    r: &ResistanceTable,
    s: f64,
    alpha_prime: f64,
    t: u32,
) -> Result<Vec<f64>> {
    r.check_aligned(g)?;
    check_range("alpha'", alpha_prime, (0.0..1.0).contains(&alpha_prime), "0 <= alpha' < 1")?;
    let scale = (t as f64).exp2();
    Ok(g
        .weights()
        .zip(r.values())
        .map(|(w, &r)| {
            let p = snap_to_grid((w * r * s / (1.0 - alpha_prime)).min(1.0), t);
            (p * scale).floor() / scale
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateReport {
    pub seed_index: u128,
    pub edge_count: usize,
    /// `None` when the candidate failed the sparsity check and was not
    /// verified.
    pub verifier_verdict: Option<Verdict>,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerandOutput {
    pub graph: WeightedGraph,
    pub report: CandidateReport,
    pub constants: DerivedConstants,
}

/// Everything needed to judge a single seed.
#[derive(Debug, Clone)]
pub struct Derandomizer {
    constants: DerivedConstants,
    plan: SamplingPlan,
    verifier: Verifier,
    config: DerandConfig,
}

impl Derandomizer {
    pub fn new(g: &WeightedGraph, config: &DerandConfig) -> Result<Self> {
        let constants = derived_constants(g, config)?;
        let r = if config.noise_seed == 0 {
            effective_resistances_exact(g)?
        } else {
            effective_resistances_approx(g, constants.alpha_prime, config.noise_seed)?
        };
        let probs = truncated_probabilities(g, &r, constants.s, constants.alpha_prime, constants.t)?;
        let plan = SamplingPlan::new(g, &probs, config.k, constants.t)?;
        let params = VerifierParams::new(constants.eps_hat, VERIFIER_ALPHA, PinvMode::Exact)?;
        let verifier = Verifier::new(&g.laplacian(), params)?;
        Ok(Self {
            constants,
            plan,
            verifier,
            config: config.clone(),
        })
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.constants
    }

    pub fn plan(&self) -> &SamplingPlan {
        &self.plan
    }

    pub fn seed_count(&self) -> u128 {
        self.plan.seed_count()
    }

    /// Judges one seed, returning the candidate graph with its report.
    pub fn candidate(&self, seed_index: u128) -> Result<(CandidateReport, WeightedGraph)> {
        let out = self.plan.sample(Seed(seed_index))?;
        let edge_count = out.graph.edge_count();
        let verdict = if edge_count as u64 <= self.constants.threshold {
            Some(self.verifier.verify(&out.graph.laplacian())?)
        } else {
            None
        };
        let report = CandidateReport {
            seed_index,
            edge_count,
            verifier_verdict: verdict,
            accepted: verdict == Some(Verdict::Yes),
        };
        Ok((report, out.graph))
    }

    /// Tries seeds in ascending order up to the cap and returns the first
    /// accepted one. With several workers the result is the same.
    pub fn run(&self) -> Result<DerandOutput> {
        let limit = self.config.enumeration_cap.min(self.seed_count());
        let limit = u64::try_from(limit).unwrap_or(u64::MAX);
        let next_block = AtomicU64::new(0);
        // Lowest index at which a seed was accepted or an error occurred.
        let stop = AtomicU64::new(u64::MAX);
        let events: Mutex<Vec<(u64, Result<(CandidateReport, WeightedGraph)>)>> =
            Mutex::new(Vec::new());
        let best_rejected: Mutex<Option<CandidateReport>> = Mutex::new(None);

        let worker = || {
            let mut local_best: Option<CandidateReport> = None;
            loop {
                let block = next_block.fetch_add(1, Ordering::SeqCst);
                let start = block.saturating_mul(BLOCK);
                if start >= limit || start >= stop.load(Ordering::SeqCst) {
                    break;
                }
                let end = start.saturating_add(BLOCK).min(limit);
                for i in start..end {
                    match self.candidate(i as u128) {
                        Ok((report, graph)) if report.accepted => {
                            stop.fetch_min(i, Ordering::SeqCst);
                            events.lock().unwrap().push((i, Ok((report, graph))));
                            break;
                        }
                        Ok((report, _)) => {
                            if better(&report, local_best.as_ref()) {
                                local_best = Some(report);
                            }
                        }
                        Err(e) => {
                            stop.fetch_min(i, Ordering::SeqCst);
                            events.lock().unwrap().push((i, Err(e)));
                            break;
                        }
                    }
                }
            }
            if let Some(r) = local_best {
                let mut best = best_rejected.lock().unwrap();
                if better(&r, best.as_ref()) {
                    *best = Some(r);
                }
            }
        };

        let width = self.config.parallel_width.max(1);
        if width == 1 {
            worker();
        } else {
            std::thread::scope(|scope| {
                for _ in 0..width {
                    scope.spawn(&worker);
                }
            });
        }

        let mut events = events.into_inner().unwrap();
        events.sort_by_key(|(i, _)| *i);
        match events.into_iter().next() {
            Some((_, Ok((report, graph)))) => Ok(DerandOutput {
                graph,
                report,
                constants: self.constants,
            }),
            Some((_, Err(e))) => Err(e),
            None => Err(Error::ExhaustedSeeds {
                tried: limit as u128,
                best: best_rejected.into_inner().unwrap(),
            }),
        }
    }
}

/// Orders rejected candidates: verified ones first, then fewer edges, then
/// lower index.
fn better(a: &CandidateReport, b: Option<&CandidateReport>) -> bool {
    let key = |r: &CandidateReport| (r.verifier_verdict.is_none(), r.edge_count, r.seed_index);
    b.map_or(true, |b| key(a) < key(b))
}

/// Runs the full pipeline on `g`.
pub fn derandomized_sparsify(g: &WeightedGraph, config: &DerandConfig) -> Result<DerandOutput> {
    Derandomizer::new(g, config)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_approx_check;

    fn k3() -> WeightedGraph {
        WeightedGraph::unweighted(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn complete(n: usize) -> WeightedGraph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        WeightedGraph::unweighted(n, pairs).unwrap()
    }

    #[test]
    fn constants_examples() {
        let c = derived_constants(&k3(), &DerandConfig::new(2, 0.5).unwrap()).unwrap();
        assert_eq!(c.delta, 0.25);
        assert!((c.eps_hat - 0.4).abs() < 1e-15);
        assert_eq!(c.alpha, 0.25);
        assert!((c.alpha_prime - 1.0 / 17.0).abs() < 1e-15);
        assert_eq!(c.t, 5);
        let s = oversampling_rate(3, 2, 0.4, 0.25).unwrap();
        assert_eq!(c.s, s);
        assert_eq!(c.threshold, (24.0 * s).ceil() as u64);

        let mut cfg = DerandConfig::new(2, 0.5).unwrap();
        cfg.rate_override = Some(2.0);
        let c = derived_constants(&complete(5), &cfg).unwrap();
        assert_eq!(c.threshold, 96);
        cfg.rate_override = Some(4.0);
        assert_eq!(derived_constants(&complete(5), &cfg).unwrap().threshold, 192);
    }

    #[test]
    fn composed_accuracy_is_exact() {
        // (4/5) * sqrt(25/16) = 1 in exact arithmetic; 25/16 and 5/4 are dyadic.
        assert_eq!(1.0 + VERIFIER_ALPHA, 25.0 / 16.0);
        assert_eq!((1.0 + VERIFIER_ALPHA).sqrt(), 5.0 / 4.0);
        assert_eq!(4.0 / 5.0 * (5.0 / 4.0), 1.0);
    }

    #[test]
    fn truncation_examples() {
        let g = k3();
        let r = effective_resistances_exact(&g).unwrap();
        let p = truncated_probabilities(&g, &r, 100.0, 1.0 / 17.0, 5).unwrap();
        assert!(p.iter().all(|&x| x == 1.0));
        let p = truncated_probabilities(&g, &r, 0.5, 1.0 / 17.0, 5).unwrap();
        for x in p {
            assert_eq!((x * 32.0).fract(), 0.0);
            let star = 0.5 * 2.0 / 3.0;
            assert!((x - star).abs() <= 0.25);
        }
    }

    #[test]
    fn errors() {
        let split = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let cfg = DerandConfig::new(2, 0.5).unwrap();
        assert_eq!(derandomized_sparsify(&split, &cfg), Err(Error::Disconnected));
        let empty = WeightedGraph::new(2, []).unwrap();
        assert_eq!(derived_constants(&empty, &cfg), Err(Error::EmptyGraph));
        assert!(DerandConfig::new(3, 0.5).is_err());
        assert!(DerandConfig::new(2, 1.0).is_err());
    }

    #[test]
    fn tree_accepts_seed_zero() {
        let tree = WeightedGraph::new(4, [(0, 1, 2.0), (1, 2, 0.5), (1, 3, 4.0)]).unwrap();
        let out = derandomized_sparsify(&tree, &DerandConfig::new(2, 0.5).unwrap()).unwrap();
        assert_eq!(out.report.seed_index, 0);
        assert_eq!(out.graph, tree);
        assert!(out.report.accepted);
    }

    #[test]
    fn k3_end_to_end() {
        let g = k3();
        let out = derandomized_sparsify(&g, &DerandConfig::new(2, 0.9).unwrap()).unwrap();
        assert!(spectral_approx_check(&out.graph.laplacian(), &g.laplacian(), 0.9).unwrap());
        assert_eq!(out.report.verifier_verdict, Some(Verdict::Yes));
    }

    #[test]
    fn parallel_matches_sequential_on_nontrivial_space() {
        let g = complete(12);
        let mut cfg = DerandConfig::new(2, 0.9).unwrap();
        cfg.rate_override = Some(3.0);
        let seq = derandomized_sparsify(&g, &cfg).unwrap();
        cfg.parallel_width = 3;
        let par = derandomized_sparsify(&g, &cfg).unwrap();
        assert_eq!(seq, par);
        let d = Derandomizer::new(&g, &cfg).unwrap();
        for i in 0..seq.report.seed_index {
            assert!(!d.candidate(i).unwrap().0.accepted);
        }
    }

    #[test]
    fn exhausted_reports_best() {
        let g = complete(12);
        let mut cfg = DerandConfig::new(2, 0.9).unwrap();
        cfg.rate_override = Some(0.5);
        cfg.enumeration_cap = 10;
        cfg.parallel_width = 2;
        match derandomized_sparsify(&g, &cfg) {
            Err(Error::ExhaustedSeeds { tried, best }) => {
                assert_eq!(tried, 10);
                let best = best.unwrap();
                assert!(!best.accepted && best.seed_index < 10);
            }
            other => panic!("{other:?}"),
        }
    }
}
