use thiserror::Error;

use crate::derand::CandidateReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },

    #[error("edge ({u}, {v}) has non-positive weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("eigendecomposition did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue})")]
    NotPsd { eigenvalue: f64 },

    #[error("matrices have different kernels")]
    KernelMismatch,

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("seed {index} out of range for a space of {count} seeds")]
    SeedOutOfRange { index: u128, count: u128 },

    #[error("sample space of 2^{bits} seeds exceeds the enumeration limit")]
    Overflow { bits: u32 },

    #[error("enumeration too large: {what}")]
    TooLarge { what: String },

    #[error("edge {edge} has positive probability {p} that truncates to zero at t = {t} bits")]
    ZeroProbabilityEdge { edge: usize, p: f64, t: u32 },

    #[error("not enough coins: need {needed}, got {got}")]
    InsufficientCoins { needed: usize, got: usize },

    #[error("no seed accepted after trying {tried} candidates")]
    ExhaustedSeeds {
        tried: u128,
        best: Option<CandidateReport>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
