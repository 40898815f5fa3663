//! Trace-power test for spectral proximity of two Laplacians.
//!
//! With `M = ((L̃ - L) L⁺ / ε)²`, every eigenvalue of `M` is real and
//! nonnegative, and `L̃ ≈_ε L` iff `ρ(M) <= 1`. For `T = Tr M` and
//! `t = ceil(ln T / ln(1 + α))`:
//!
//! * if `ρ(M) <= 1` then `Tr(M^t) <= ρ(M)^(t-1) Tr(M) <= T`;
//! * if `ρ(M) > 1 + α` then `Tr(M^t) >= ρ(M)^t > (1 + α)^t >= T`.
//!
//! So comparing `Tr(M^t)` with `T` separates `L̃ ≈_ε L` from
//! `L̃ ≉_{ε√(1+α)} L`. Solver mode replaces `L⁺` by a pseudoinverse whose
//! nonzero eigenvalues are off by factors in `[1 - γ, 1 + γ]`, and shrinks
//! `α` to `α/2` to absorb that error.

use std::fmt;

use crate::error::{check_range, Error, Result};
use crate::linalg::{perturbed_pseudoinverse, pseudoinverse, Matrix, SymMatrix};

/// Relative slack on `Tr(M^t) <= T`.
pub const TRACE_SLACK: f64 = 1e-9;

/// `γ = 1 - 2 / (1 + sqrt(1 + α/(2+α)))`, so that
/// `((1+γ)/(1-γ))² = 1 + α/(2+α)`.
pub fn gamma_for_alpha(alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, alpha > 0.0, "alpha > 0")?;
    Ok(1.0 - 2.0 / (1.0 + (1.0 + alpha / (2.0 + alpha)).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PinvMode {
    Exact,
    /// Perturbed pseudoinverse with `γ = gamma_for_alpha(α)`.
    Solver { noise_seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifierParams {
    eps: f64,
    alpha: f64,
    mode: PinvMode,
}

impl VerifierParams {
    pub fn new(eps: f64, alpha: f64, mode: PinvMode) -> Result<Self> {
        check_range("eps", eps, eps > 0.0 && eps < 1.0, "0 < eps < 1")?;
        check_range("alpha", alpha, alpha > 0.0, "alpha > 0")?;
        Ok(Self { eps, alpha, mode })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mode(&self) -> PinvMode {
        self.mode
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
        })
    }
}

/// Internals of one trace-power comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStatistic {
    /// `T = Tr M`.
    pub trace: f64,
    /// Power `t`; zero when `T <= 1` short-circuits the test.
    pub exponent: u32,
    /// `ln Tr(M^t)`, or `-inf` when the trace is zero.
    pub log_value: f64,
    /// Matrix multiplications spent on `M^t`.
    pub mults: usize,
    pub verdict: Verdict,
}

impl TraceStatistic {
    /// `Tr(M^t)`; may be infinite when it exceeds `f64::MAX`.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Computes the statistic for `M = ((L̃ - L) P / ((1 + γ) ε))²`, with
/// `P` the supplied (possibly perturbed) pseudoinverse of `L`.
pub fn trace_power_statistic(
    l: &SymMatrix,
    l_tilde: &SymMatrix,
    eps: f64,
    alpha: f64,
    pinv: &SymMatrix,
    gamma: f64,
) -> Result<TraceStatistic> {
    check_range("eps", eps, eps > 0.0, "eps > 0")?;
    check_range("alpha", alpha, alpha > 0.0, "alpha > 0")?;
    check_range("gamma", gamma, (0.0..1.0).contains(&gamma), "0 <= gamma < 1")?;
    for m in [l_tilde, pinv] {
        if m.dim() != l.dim() {
            return Err(Error::LengthMismatch {
                expected: l.dim(),
                got: m.dim(),
            });
        }
    }
    let a: Matrix = l_tilde
        .sub(l)
        .matmul(pinv)
        .scale(1.0 / ((1.0 + gamma) * eps));
    let m = a.matmul(&a);
    let trace = m.trace().max(0.0);
    if trace <= 1.0 {
        return Ok(TraceStatistic {
            trace,
            exponent: 0,
            log_value: trace.ln(),
            mults: 0,
            verdict: Verdict::Yes,
        });
    }
    let exponent_f = (trace.ln() / alpha.ln_1p()).ceil();
    if exponent_f > u32::MAX as f64 {
        return Err(Error::OutOfRange {
            name: "trace power exponent",
            value: exponent_f,
            expected: "fits in 32 bits",
        });
    }
    let exponent = (exponent_f as u32).max(1);
    let (log_value, mults) = m.log_trace_power(exponent);
    let log_value = log_value.unwrap_or(f64::NEG_INFINITY);
    let bound = trace + TRACE_SLACK * trace.max(1.0);
    let verdict = if log_value <= bound.ln() {
        Verdict::Yes
    } else {
        Verdict::No
    };
    Ok(TraceStatistic {
        trace,
        exponent,
        log_value,
        mults,
        verdict,
    })
}

/// Connectivity of the graph whose edges are the negative off-diagonal
/// entries of a Laplacian.
fn laplacian_connected(m: &SymMatrix) -> bool {
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for i in 0..n {
        for (j, &v) in m.row(i).iter().enumerate().skip(i + 1) {
            if v < 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                    components -= 1;
                }
            }
        }
    }
    components <= 1
}

/// A verifier bound to a fixed `L`, reusing its pseudoinverse across
/// candidate matrices.
#[derive(Debug, Clone)]
pub struct Verifier {
    l: SymMatrix,
    pinv: SymMatrix,
    params: VerifierParams,
    gamma: f64,
    alpha_eff: f64,
}

impl Verifier {
    pub fn new(l: &SymMatrix, params: VerifierParams) -> Result<Self> {
        if !laplacian_connected(l) {
            return Err(Error::Disconnected);
        }
        let (pinv, gamma, alpha_eff) = match params.mode {
            PinvMode::Exact => (pseudoinverse(l)?, 0.0, params.alpha),
            PinvMode::Solver { noise_seed } => {
                let gamma = gamma_for_alpha(params.alpha)?;
                (
                    perturbed_pseudoinverse(l, gamma, noise_seed)?,
                    gamma,
                    params.alpha / 2.0,
                )
            }
        };
        Ok(Self {
            l: l.clone(),
            pinv,
            params,
            gamma,
            alpha_eff,
        })
    }

    pub fn params(&self) -> &VerifierParams {
        &self.params
    }

    /// `γ` in solver mode, zero in exact mode.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `None` when `L̃` is disconnected, which is an immediate NO.
    pub fn statistic(&self, l_tilde: &SymMatrix) -> Result<Option<TraceStatistic>> {
        if l_tilde.dim() != self.l.dim() {
            return Err(Error::LengthMismatch {
                expected: self.l.dim(),
                got: l_tilde.dim(),
            });
        }
        if !laplacian_connected(l_tilde) {
            return Ok(None);
        }
        trace_power_statistic(
            &self.l,
            l_tilde,
            self.params.eps,
            self.alpha_eff,
            &self.pinv,
            self.gamma,
        )
        .map(Some)
    }

    pub fn verify(&self, l_tilde: &SymMatrix) -> Result<Verdict> {
        Ok(self
            .statistic(l_tilde)?
            .map_or(Verdict::No, |s| s.verdict))
    }
}

/// YES whenever `L̃ ≈_ε L`, NO whenever `L̃ ≉_{ε√(1+α)} L`.
pub fn verify(l: &SymMatrix, l_tilde: &SymMatrix, params: VerifierParams) -> Result<Verdict> {
    Verifier::new(l, params)?.verify(l_tilde)
}
