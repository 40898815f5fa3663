//! Bounded-independence edge distributions that disconnect graphs.
//!
//! [`PartitionDistribution`] splits the vertices by fair coins and keeps
//! exactly the edges inside a side. Each edge is kept with probability 1/2,
//! any set of edges forming a forest is independent, and a cycle is not, so
//! on a graph of girth `g` the distribution is exactly `(g-1)`-wise
//! independent. Yet the sample is connected only when the partition is
//! trivial.
//!
//! [`ThreeWiseCompleteDistribution`] does the same job on complete graphs
//! with marginals 1/4: a fair-coin random graph inside one side, a random
//! complete bipartite graph inside the other, nothing across.
//!
//! Everything is computed exactly by enumerating the randomness.

pub mod fixtures;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::kwise::next_combination;

pub use fixtures::{complete, cycle, fixtures, heawood, petersen, Fixture};

/// Largest `n` whose `2^n` partitions are enumerated.
pub const MAX_PARTITION_VERTICES: usize = 24;
/// Largest number of outcomes enumerated for the three-wise distribution.
pub const MAX_THREEWISE_OUTCOMES: u128 = 1 << 26;
/// Edge sets are stored as bitmasks.
pub const MAX_EDGES: usize = 128;
/// Largest edge subset [`exact_joint_distribution`] tabulates.
pub const MAX_JOINT_SUBSET: usize = 20;

pub type Probability = Ratio<u128>;

/// All outcomes of a distribution over edge sets, as bitmasks with integer
/// weights over the common denominator `2^log2_denominator`. Equal masks
/// are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcomes {
    pub masks: Vec<u128>,
    pub weights: Vec<u128>,
    pub log2_denominator: u32,
}

impl Outcomes {
    fn from_pairs(mut pairs: Vec<(u128, u128)>, log2_denominator: u32) -> Self {
        pairs.sort_unstable_by_key(|p| p.0);
        let mut masks = Vec::new();
        let mut weights: Vec<u128> = Vec::new();
        for (m, w) in pairs {
            if masks.last() == Some(&m) {
                *weights.last_mut().expect("nonempty") += w;
            } else {
                masks.push(m);
                weights.push(w);
            }
        }
        Self {
            masks,
            weights,
            log2_denominator,
        }
    }

    fn probability(&self, weight: u128) -> Probability {
        Ratio::new(weight, 1u128 << self.log2_denominator)
    }

    /// Probability that every edge of `subset` is present.
    fn all_present(&self, subset_mask: u128) -> Probability {
        let w = self
            .masks
            .iter()
            .zip(&self.weights)
            .filter(|(m, _)| *m & subset_mask == subset_mask)
            .map(|(_, w)| w)
            .sum();
        self.probability(w)
    }
}

/// A distribution over edge subsets of a fixed graph.
pub trait EdgeDistribution {
    /// The graph whose edges are sampled.
    fn graph(&self) -> &WeightedGraph;

    /// Enumerates the randomness exactly.
    fn outcomes(&self) -> Result<Outcomes>;
}

fn check_edges(g: &WeightedGraph) -> Result<()> {
    if g.edge_count() > MAX_EDGES {
        return Err(Error::TooLarge {
            what: format!("{} edges (at most {MAX_EDGES})", g.edge_count()),
        });
    }
    Ok(())
}

fn to_mask(bits: &[bool]) -> u128 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (b as u128) << i)
}

fn bits_of(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

/// Keep an edge iff both endpoints fall on the same side of a uniform
/// vertex bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionDistribution {
    graph: WeightedGraph,
}

impl PartitionDistribution {
    pub fn new(graph: WeightedGraph) -> Self {
        Self { graph }
    }
}

/// Edge `i` is kept iff its endpoints agree in `partition`.
pub fn partition_sample(g: &WeightedGraph, partition: &[bool]) -> Result<Vec<bool>> {
    if partition.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            got: partition.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .map(|e| partition[e.u] == partition[e.v])
        .collect())
}

impl EdgeDistribution for PartitionDistribution {
    fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    fn outcomes(&self) -> Result<Outcomes> {
        let n = self.graph.vertex_count();
        if n > MAX_PARTITION_VERTICES {
            return Err(Error::TooLarge {
                what: format!("2^{n} partitions (at most {MAX_PARTITION_VERTICES} vertices)"),
            });
        }
        check_edges(&self.graph)?;
        let pairs = (0..1u64 << n)
            .map(|x| {
                let kept = partition_sample(&self.graph, &bits_of(x, n))?;
                Ok((to_mask(&kept), 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Outcomes::from_pairs(pairs, n as u32))
    }
}

/// Three-wise independent distribution on the edges of `K_n` with
/// marginals 1/4.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeWiseCompleteDistribution {
    graph: WeightedGraph,
}

impl ThreeWiseCompleteDistribution {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            graph: complete(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Number of randomness outcomes: a side per vertex, a coin per pair
    /// inside `V0`, an inner side per vertex of `V1`.
    pub fn outcome_count(&self) -> u128 {
        let n = self.n() as u32;
        (0..=n)
            .map(|a| {
                let bits = a * a.saturating_sub(1) / 2 + (n - a);
                binomial(n, a).saturating_mul(1u128.checked_shl(bits).unwrap_or(u128::MAX))
            })
            .fold(0u128, u128::saturating_add)
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// One sample on `K_n`: vertices with `partition[v] == false` form `V0`
/// and the rest `V1`. Edges inside `V0` take successive `inner_coins`,
/// edges inside `V1` are kept iff they cross `inner_partition`, and edges
/// between `V0` and `V1` are dropped. Edges are in canonical order.
pub fn three_wise_complete_sample(
    n: usize,
    partition: &[bool],
    inner_coins: &[bool],
    inner_partition: &[bool],
) -> Result<Vec<bool>> {
    for len in [partition.len(), inner_partition.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: len,
            });
        }
    }
    let a = partition.iter().filter(|&&b| !b).count();
    let needed = a * a.saturating_sub(1) / 2;
    if inner_coins.len() < needed {
        return Err(Error::InsufficientCoins {
            needed,
            got: inner_coins.len(),
        });
    }
    let mut coins = inner_coins.iter();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            out.push(match (partition[u], partition[v]) {
                (false, false) => *coins.next().expect("counted above"),
                (true, true) => inner_partition[u] != inner_partition[v],
                _ => false,
            });
        }
    }
    Ok(out)
}

impl EdgeDistribution for ThreeWiseCompleteDistribution {
    fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    fn outcomes(&self) -> Result<Outcomes> {
        let total = self.outcome_count();
        if total > MAX_THREEWISE_OUTCOMES {
            return Err(Error::TooLarge {
                what: format!("{total} outcomes (at most {MAX_THREEWISE_OUTCOMES})"),
            });
        }
        check_edges(&self.graph)?;
        let n = self.n();
        let pairs_n = n * n.saturating_sub(1) / 2;
        let log2_den = (2 * n + pairs_n) as u32;
        let mut pairs = Vec::new();
        for x in 0..1u64 << n {
            let partition = bits_of(x, n);
            let a = partition.iter().filter(|&&b| !b).count();
            let coins_n = a * a.saturating_sub(1) / 2;
            let b = n - a;
            // Each outcome has probability 2^-(n + coins_n + b); scale to
            // the common denominator.
            let weight = 1u128 << (log2_den as usize - (n + coins_n + b));
            let v1: Vec<usize> = (0..n).filter(|&v| partition[v]).collect();
            for c in 0..1u64 << coins_n {
                let coins = bits_of(c, coins_n);
                for y in 0..1u64 << b {
                    let mut inner = vec![false; n];
                    for (j, &v) in v1.iter().enumerate() {
                        inner[v] = y >> j & 1 == 1;
                    }
                    let kept = three_wise_complete_sample(n, &partition, &coins, &inner)?;
                    pairs.push((to_mask(&kept), weight));
                }
            }
        }
        Ok(Outcomes::from_pairs(pairs, log2_den))
    }
}

/// Exact distribution of the edges in `subset`: entry `x` is the
/// probability that edge `subset[b]` is present iff bit `b` of `x` is set.
pub fn exact_joint_distribution(
    dist: &dyn EdgeDistribution,
    subset: &[usize],
) -> Result<Vec<Probability>> {
    let m = dist.graph().edge_count();
    if subset.len() > MAX_JOINT_SUBSET {
        return Err(Error::TooLarge {
            what: format!("subset of {} edges (at most {MAX_JOINT_SUBSET})", subset.len()),
        });
    }
    if let Some(&bad) = subset.iter().find(|&&e| e >= m) {
        return Err(Error::IndexOutOfRange { index: bad, dim: m });
    }
    let out = dist.outcomes()?;
    let mut counts = vec![0u128; 1 << subset.len()];
    for (mask, w) in out.masks.iter().zip(&out.weights) {
        let pattern = subset
            .iter()
            .enumerate()
            .fold(0usize, |acc, (b, &e)| acc | ((mask >> e & 1) as usize) << b);
        counts[pattern] += w;
    }
    Ok(counts.into_iter().map(|c| out.probability(c)).collect())
}

/// Whether the edges in `subset` are mutually independent. For 0/1 variables
/// this holds iff `P(all of S present) = prod P(e present)` for every
/// `S ⊆ subset`; smaller `S` are covered when checking all sizes in order.
fn factorizes(out: &Outcomes, marginals: &[Probability], subset: &[usize]) -> bool {
    let mask = subset.iter().fold(0u128, |acc, &e| acc | 1 << e);
    let product = subset
        .iter()
        .fold(Ratio::from_integer(1u128), |acc, &e| acc * marginals[e]);
    out.all_present(mask) == product
}

fn marginals(out: &Outcomes, m: usize) -> Vec<Probability> {
    (0..m).map(|e| out.all_present(1 << e)).collect()
}

/// First `size`-subset of edges (in lexicographic order) that is not
/// independent, if any.
pub fn dependent_subset(dist: &dyn EdgeDistribution, size: usize) -> Result<Option<Vec<usize>>> {
    let out = dist.outcomes()?;
    let m = dist.graph().edge_count();
    Ok(first_failure(&out, &marginals(&out, m), m, size))
}

fn first_failure(
    out: &Outcomes,
    marg: &[Probability],
    m: usize,
    size: usize,
) -> Option<Vec<usize>> {
    if size == 0 || size > m {
        return None;
    }
    let mut c: Vec<usize> = (0..size).collect();
    loop {
        if !factorizes(out, marg, &c) {
            return Some(c);
        }
        if !next_combination(&mut c, m) {
            return None;
        }
    }
}

/// Largest `k` such that every set of at most `k` edges is independent.
pub fn independence_order(dist: &dyn EdgeDistribution) -> Result<usize> {
    let out = dist.outcomes()?;
    let m = dist.graph().edge_count();
    let marg = marginals(&out, m);
    for size in 2..=m {
        if first_failure(&out, &marg, m, size).is_some() {
            return Ok(size - 1);
        }
    }
    Ok(m)
}

/// Marginal probability of each edge.
pub fn edge_marginals(dist: &dyn EdgeDistribution) -> Result<Vec<Probability>> {
    let out = dist.outcomes()?;
    Ok(marginals(&out, dist.graph().edge_count()))
}

/// Subgraph of `g` with the edges in `mask`, all weights 1.
pub fn sample_graph(g: &WeightedGraph, mask: u128) -> WeightedGraph {
    let keep: Vec<bool> = (0..g.edge_count()).map(|i| mask >> i & 1 == 1).collect();
    WeightedGraph::unweighted(
        g.vertex_count(),
        g.edges()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| (e.u, e.v))
            .collect::<Vec<_>>(),
    )
    .expect("subgraph of a simple graph is simple")
}

/// Probability that the sampled edges leave some vertex unreachable.
pub fn disconnection_probability(dist: &dyn EdgeDistribution) -> Result<Probability> {
    let out = dist.outcomes()?;
    let g = dist.graph();
    let w: u128 = out
        .masks
        .iter()
        .zip(&out.weights)
        .filter(|(&m, _)| !sample_graph(g, m).is_connected())
        .map(|(_, w)| w)
        .sum();
    Ok(out.probability(w))
}

/// Distinct disconnected samples.
pub fn disconnected_samples(dist: &dyn EdgeDistribution) -> Result<Vec<WeightedGraph>> {
    let out = dist.outcomes()?;
    let g = dist.graph();
    Ok(out
        .masks
        .iter()
        .map(|&m| sample_graph(g, m))
        .filter(|h| !h.is_connected())
        .collect())
}

/// Moore bound for even girth: `n (d - 2) >= 2 ((d - 1)^(g/2) - 1)`,
/// evaluated in exact integers.
pub fn moore_bound_check(n: u64, d: u64, g: u32) -> Result<bool> {
    if d < 3 {
        return Err(Error::OutOfRange {
            name: "degree",
            value: d as f64,
            expected: "d >= 3",
        });
    }
    if g % 2 != 0 || g == 0 {
        return Err(Error::OutOfRange {
            name: "girth",
            value: g as f64,
            expected: "even girth >= 2",
        });
    }
    let Some(power) = ((d - 1) as u128).checked_pow(g / 2) else {
        return Ok(false);
    };
    Ok(n as u128 * (d - 2) as u128 >= 2 * (power - 1))
}
