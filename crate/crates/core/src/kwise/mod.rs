//! k-wise independent sample spaces with dyadic marginals.
//!
//! A seed is read as `k` coefficients of a polynomial `f` of degree `< k`
//! over GF(2^t'), with `t' = max(t, ceil(log2 m))`. Coordinate `i` is 1 iff
//! `f(i) < p'_i * 2^t'`, where `p'_i` is `p_i` truncated to `t` bits.
//! Evaluations of a uniformly random such polynomial at any `k` distinct
//! points are independent and uniform, so any `k` coordinates are
//! independent with the exact marginals `p'_i`. A seed is `k * t'` bits.

mod gf2;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::content_lines;

pub use gf2::{Gf2Field, IRREDUCIBLE, MAX_DEGREE};

/// Largest supported seed length in bits, so seed indices fit in a `u128`.
pub const MAX_SEED_BITS: u32 = 127;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seed(pub u128);

impl Seed {
    pub fn index(self) -> u128 {
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct KWiseSpace {
    k: u32,
    t: u32,
    field: Gf2Field,
    /// `floor(2^t p_i)`.
    numerators: Vec<u64>,
    /// `numerators[i] << (t' - t)`, compared against `f(i)`.
    thresholds: Vec<u64>,
}

fn ceil_log2(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

fn check_bits(t: u32) -> Result<()> {
    if t == 0 || t > MAX_DEGREE {
        return Err(Error::OutOfRange {
            name: "t",
            value: t as f64,
            expected: "1 <= t <= 32",
        });
    }
    Ok(())
}

fn truncated_numerator(p: f64, t: u32) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "marginal",
            value: p,
            expected: "0 <= p <= 1",
        });
    }
    // Exact: scaling by a power of two does not round.
    Ok((p * (t as f64).exp2()).floor() as u64)
}

/// `p'_i = 2^-t floor(2^t p_i)`.
pub fn truncate_marginals(p: &[f64], t: u32) -> Result<Vec<f64>> {
    check_bits(t)?;
    let scale = (-(t as f64)).exp2();
    p.iter()
        .map(|&x| truncated_numerator(x, t).map(|a| a as f64 * scale))
        .collect()
}

impl KWiseSpace {
    /// Space over `m = p.len()` coordinates with marginals `floor(p)_t`.
    pub fn build(p: &[f64], k: u32, t: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange {
                name: "k",
                value: 0.0,
                expected: "k >= 1",
            });
        }
        check_bits(t)?;
        if p.is_empty() {
            return Err(Error::OutOfRange {
                name: "m",
                value: 0.0,
                expected: "at least one coordinate",
            });
        }
        let field_log = t.max(ceil_log2(p.len()));
        if field_log > MAX_DEGREE {
            return Err(Error::OutOfRange {
                name: "m",
                value: p.len() as f64,
                expected: "m <= 2^32",
            });
        }
        let bits = k.saturating_mul(field_log);
        if bits > MAX_SEED_BITS {
            return Err(Error::Overflow { bits });
        }
        let numerators = p
            .iter()
            .map(|&x| truncated_numerator(x, t))
            .collect::<Result<Vec<_>>>()?;
        let thresholds = numerators.iter().map(|a| a << (field_log - t)).collect();
        Ok(Self {
            k,
            t,
            field: Gf2Field::new(field_log)?,
            numerators,
            thresholds,
        })
    }

    pub fn m(&self) -> usize {
        self.numerators.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `t' = max(t, ceil(log2 m))`.
    pub fn field_log(&self) -> u32 {
        self.field.degree()
    }

    pub fn seed_bits(&self) -> u32 {
        self.k * self.field_log()
    }

    /// `2^(k t')`.
    pub fn seed_count(&self) -> u128 {
        1u128 << self.seed_bits()
    }

    /// Truncated marginals `p'_i`.
    pub fn marginals(&self) -> Vec<f64> {
        let scale = (-(self.t as f64)).exp2();
        self.numerators.iter().map(|&a| a as f64 * scale).collect()
    }

    /// `floor(2^t p_i)`, the marginals in units of `2^-t`.
    pub fn marginal_numerators(&self) -> &[u64] {
        &self.numerators
    }

    /// Polynomial coefficients for a seed, constant term first.
    pub fn decode(&self, seed: Seed) -> Result<Vec<u64>> {
        if seed.0 >= self.seed_count() {
            return Err(Error::SeedOutOfRange {
                index: seed.0,
                count: self.seed_count(),
            });
        }
        let w = self.field_log();
        let mask = (1u128 << w) - 1;
        Ok((0..self.k)
            .map(|j| ((seed.0 >> (j * w)) & mask) as u64)
            .collect())
    }

    pub fn sample_at(&self, seed: Seed) -> Result<Vec<bool>> {
        let mut out = Vec::with_capacity(self.m());
        self.sample_into(seed, &mut out)?;
        Ok(out)
    }

    /// Like [`sample_at`](Self::sample_at), reusing `out`'s allocation.
    pub fn sample_into(&self, seed: Seed, out: &mut Vec<bool>) -> Result<()> {
        let coeffs = self.decode(seed)?;
        out.clear();
        out.extend(
            self.thresholds
                .iter()
                .enumerate()
                .map(|(i, &thr)| self.field.eval_poly(&coeffs, i as u64) < thr),
        );
        Ok(())
    }

    /// All seeds in ascending order.
    pub fn seeds(&self) -> impl Iterator<Item = Seed> {
        (0..self.seed_count()).map(Seed)
    }

    /// All seeds, or [`Error::Overflow`] when there are more than `cap`.
    pub fn seeds_capped(&self, cap: u128) -> Result<impl Iterator<Item = Seed>> {
        if self.seed_count() > cap {
            return Err(Error::Overflow {
                bits: self.seed_bits(),
            });
        }
        Ok(self.seeds())
    }

    /// Seeds in `range`, clipped to the space.
    pub fn seed_range(&self, range: Range<u128>) -> impl Iterator<Item = Seed> {
        let end = range.end.min(self.seed_count());
        (range.start.min(end)..end).map(Seed)
    }
}

pub fn build_space(p: &[f64], k: u32, t: u32) -> Result<KWiseSpace> {
    KWiseSpace::build(p, k, t)
}

pub fn sample_at(space: &KWiseSpace, seed: Seed) -> Result<Vec<bool>> {
    space.sample_at(seed)
}

pub fn seed_count(space: &KWiseSpace) -> u128 {
    space.seed_count()
}

pub fn enumerate_seeds(space: &KWiseSpace) -> impl Iterator<Item = Seed> {
    space.seeds()
}

/// Largest seed count [`check_kwise_bruteforce`] will enumerate.
pub const BRUTEFORCE_MAX_SEEDS: u128 = 1 << 24;

/// Enumerates every seed and checks that every set of at most `k_check`
/// coordinates has exactly the product distribution of the truncated
/// marginals. Counts are integers, so the comparison is exact.
pub fn check_kwise_bruteforce(space: &KWiseSpace, k_check: u32) -> Result<bool> {
    let n_seeds = space.seed_count();
    if n_seeds > BRUTEFORCE_MAX_SEEDS {
        return Err(Error::TooLarge {
            what: format!("{n_seeds} seeds"),
        });
    }
    let m = space.m();
    let k_check = (k_check as usize).min(m);
    if (space.t as usize) * k_check > 100 {
        return Err(Error::TooLarge {
            what: format!("t * k_check = {}", space.t as usize * k_check),
        });
    }
    let samples: Vec<Vec<bool>> = space
        .seeds()
        .map(|s| space.sample_at(s))
        .collect::<Result<_>>()?;
    let one = 1u128 << space.t;
    let num = space.marginal_numerators();

    let mut subset: Vec<usize> = Vec::with_capacity(k_check);
    let mut counts = Vec::new();
    for size in 1..=k_check {
        subset.clear();
        subset.extend(0..size);
        loop {
            counts.clear();
            counts.resize(1 << size, 0u128);
            for s in &samples {
                let pattern = subset
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (b, &i)| acc | (s[i] as usize) << b);
                counts[pattern] += 1;
            }
            for (pattern, &count) in counts.iter().enumerate() {
                let expected = subset.iter().enumerate().fold(n_seeds, |acc, (b, &i)| {
                    let a = num[i] as u128;
                    acc * if pattern >> b & 1 == 1 { a } else { one - a }
                });
                if count << (space.t as usize * size) != expected {
                    return Ok(false);
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    Ok(true)
}

/// Advances `c` to the next `|c|`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in (i + 1)..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Whitespace-separated marginals in `[0, 1]`; `#` lines are comments.
pub fn parse_marginals(text: &[u8]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (line, body) in content_lines(text)? {
        for tok in body.split_ascii_whitespace() {
            match tok.parse::<f64>() {
                Ok(p) if (0.0..=1.0).contains(&p) => out.push(p),
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("invalid marginal {tok:?}"),
                    })
                }
            }
        }
    }
    Ok(out)
}
