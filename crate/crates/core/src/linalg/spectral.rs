//! Pseudoinverses, square roots and the spectral approximation relation.
//!
//! `A ≈_ε B` means `(1 - ε) B ⪯ A ⪯ (1 + ε) B`. For PSD matrices with a common
//! kernel this holds iff every eigenvalue of `B^{+/2} A B^{+/2}` on the image
//! of `B` lies in `[1 - ε, 1 + ε]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{eigenvalues_sym, EigenDecomposition};
use super::{Matrix, SymMatrix};
use crate::error::{check_range, Error, Result};

/// Slack on the eigenvalue window of [`spectral_approx_check`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative size below which a direction counts as part of a kernel when
/// comparing the kernels of two matrices.
pub const KERNEL_RTOL: f64 = 1e-9;

/// Multiplier on `n * eps_machine` in the zero-eigenvalue rule.
pub(crate) const ZERO_FACTOR: f64 = 1.0;

/// Relative tolerance for declaring a matrix not PSD.
const PSD_RTOL: f64 = 1e-8;

pub(crate) fn zero_threshold(n: usize, max_abs: f64) -> f64 {
    ZERO_FACTOR * (n.max(1) as f64) * f64::EPSILON * max_abs
}

/// Moore-Penrose pseudoinverse: reciprocates the eigenvalues above the zero
/// threshold and drops the rest.
pub fn pseudoinverse(m: &SymMatrix) -> Result<SymMatrix> {
    let eig = m.eigen()?;
    let thr = eig.zero_threshold();
    Ok(eig.reconstruct_with(|l| if l.abs() > thr { 1.0 / l } else { 0.0 }))
}

fn check_psd(eig: &EigenDecomposition) -> Result<()> {
    let floor = -PSD_RTOL * eig.max_abs_value();
    match eig.values.first() {
        Some(&l) if l < floor => Err(Error::NotPsd { eigenvalue: l }),
        _ => Ok(()),
    }
}

/// Unique symmetric PSD square root. Eigenvalues within the PSD tolerance of
/// zero are clamped to zero.
pub fn psd_sqrt(m: &SymMatrix) -> Result<SymMatrix> {
    let eig = m.eigen()?;
    check_psd(&eig)?;
    let thr = eig.zero_threshold();
    Ok(eig.reconstruct_with(|l| if l > thr { l.sqrt() } else { 0.0 }))
}

/// `A^{+/2} = (A^+)^{1/2}`.
pub fn pinv_sqrt(m: &SymMatrix) -> Result<SymMatrix> {
    let eig = m.eigen()?;
    check_psd(&eig)?;
    let thr = eig.zero_threshold();
    Ok(eig.reconstruct_with(|l| if l > thr { 1.0 / l.sqrt() } else { 0.0 }))
}

/// `Π = I - J`, the projection onto the complement of the all-ones vector.
pub fn projection_pi(n: usize) -> SymMatrix {
    let j = 1.0 / n as f64;
    SymMatrix::from_fn(n, |a, b| if a == b { 1.0 - j } else { -j })
}

/// Largest eigenvalue magnitude.
pub fn spectral_radius_sym(m: &SymMatrix) -> Result<f64> {
    Ok(eigenvalues_sym(m)?
        .into_iter()
        .fold(0.0, |r, l| r.max(l.abs())))
}

/// A reference matrix `B` prepared for repeated `A ≈_ε B` queries.
///
/// Holds an orthonormal basis of `ker(B)` and the scaled image basis
/// `Q = [u_k / sqrt(λ_k)]`, so each query is one congruence `Q^T A Q` plus a
/// symmetric eigenvalue solve of size `rank(B)`.
#[derive(Debug, Clone)]
pub struct SpectralReference {
    dim: usize,
    kernel: Vec<Vec<f64>>,
    /// Row `k` is `u_k / sqrt(λ_k)` for the `k`-th image eigenpair.
    scaled_image_t: Vec<Vec<f64>>,
}

impl SpectralReference {
    pub fn new(b: &SymMatrix) -> Result<Self> {
        let eig = b.eigen()?;
        check_psd(&eig)?;
        let thr = eig.zero_threshold();
        let mut kernel = Vec::new();
        let mut scaled_image_t = Vec::new();
        for (k, &l) in eig.values.iter().enumerate() {
            if l > thr {
                let s = 1.0 / l.sqrt();
                scaled_image_t.push(eig.vector(k).iter().map(|x| x * s).collect());
            } else {
                kernel.push(eig.vector(k).to_vec());
            }
        }
        Ok(Self {
            dim: b.dim(),
            kernel,
            scaled_image_t,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.scaled_image_t.len()
    }

    /// Eigenvalues of `B^{+/2} A B^{+/2}` restricted to `im(B)`, ascending.
    ///
    /// Fails with [`Error::KernelMismatch`] unless `ker(A) = ker(B)`.
    pub fn relative_eigenvalues(&self, a: &SymMatrix) -> Result<Vec<f64>> {
        if a.dim() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: a.dim(),
            });
        }
        let a_norm = a.frobenius_norm();
        for u in &self.kernel {
            let au = a.mul_vec(u);
            let len = au.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > KERNEL_RTOL * a_norm {
                return Err(Error::KernelMismatch);
            }
        }
        let r = self.rank();
        if r == 0 {
            return Ok(Vec::new());
        }
        // C = Q^T A Q with Q = scaled_image_t^T.
        let n = self.dim;
        let aq: Vec<Vec<f64>> = self
            .scaled_image_t
            .iter()
            .map(|q| a.mul_vec(q))
            .collect();
        let mut c = Matrix::zeros(r);
        for i in 0..r {
            for j in i..r {
                let v: f64 = (0..n).map(|x| self.scaled_image_t[i][x] * aq[j][x]).sum();
                c[(i, j)] = v;
                c[(j, i)] = v;
            }
        }
        let mu = eigenvalues_sym(&SymMatrix::from_matrix(c))?;
        let mu_max = mu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if mu_max == 0.0 || mu.iter().any(|x| x.abs() <= KERNEL_RTOL * mu_max) {
            return Err(Error::KernelMismatch);
        }
        Ok(mu)
    }

    /// Smallest `ε` with `A ≈_ε B`.
    pub fn approximation_error(&self, a: &SymMatrix) -> Result<f64> {
        Ok(self
            .relative_eigenvalues(a)?
            .into_iter()
            .fold(0.0, |m, x| m.max((x - 1.0).abs())))
    }

    pub fn check(&self, a: &SymMatrix, eps: f64) -> Result<bool> {
        self.check_with_tol(a, eps, DEFAULT_TOL)
    }

    pub fn check_with_tol(&self, a: &SymMatrix, eps: f64, tol: f64) -> Result<bool> {
        check_range("eps", eps, eps >= 0.0, "eps >= 0")?;
        let lo = 1.0 - eps - tol;
        let hi = 1.0 + eps + tol;
        Ok(self
            .relative_eigenvalues(a)?
            .into_iter()
            .all(|x| (lo..=hi).contains(&x)))
    }
}

/// Whether `(1 - ε) B ⪯ A ⪯ (1 + ε) B`, up to [`DEFAULT_TOL`].
pub fn spectral_approx_check(a: &SymMatrix, b: &SymMatrix, eps: f64) -> Result<bool> {
    SpectralReference::new(b)?.check(a, eps)
}

/// Stand-in for an approximate Laplacian solver: the pseudoinverse of `m`
/// with every nonzero eigenvalue multiplied by an independent factor in
/// `[1 - γ, 1 + γ]`. Seed 0 gives the exact pseudoinverse.
pub fn perturbed_pseudoinverse(m: &SymMatrix, gamma: f64, noise_seed: u64) -> Result<SymMatrix> {
    check_range("gamma", gamma, gamma > 0.0 && gamma < 1.0, "0 < gamma < 1")?;
    let eig = m.eigen()?;
    check_psd(&eig)?;
    let thr = eig.zero_threshold();
    let factors: Vec<f64> = if noise_seed == 0 {
        vec![1.0; eig.dim()]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        (0..eig.dim())
            .map(|_| 1.0 + gamma * rng.gen_range(-1.0..=1.0))
            .collect()
    };
    let values: Vec<f64> = eig
        .values
        .iter()
        .zip(&factors)
        .map(|(&l, &f)| if l > thr { f / l } else { 0.0 })
        .collect();
    let mut k = 0;
    Ok(eig.reconstruct_with(|_| {
        let v = values[k];
        k += 1;
        v
    }))
}
