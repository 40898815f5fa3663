//! Dense real matrices at desk scale.
//!
//! [`SymMatrix`] keeps a full row-major copy of a symmetric matrix and is the
//! carrier for Laplacians, pseudoinverses and projections. [`Matrix`] is a
//! plain square matrix used for the asymmetric products that show up in the
//! trace-power test.

mod eigen;
mod io;
mod spectral;

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub use eigen::{eigenvalues_sym, EigenDecomposition, MAX_SWEEPS};
pub use spectral::{
    perturbed_pseudoinverse, pinv_sqrt, projection_pi, pseudoinverse, psd_sqrt,
    spectral_approx_check, spectral_radius_sym, SpectralReference, DEFAULT_TOL, KERNEL_RTOL,
};

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Matrix { dim: n, data: out }
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    /// `self^j` by repeated squaring, together with the number of matrix
    /// multiplications performed.
    pub fn power(&self, j: u32) -> (Matrix, usize) {
        let mut result: Option<Matrix> = None;
        let mut base = self.clone();
        let mut e = j;
        let mut mults = 0;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => {
                        mults += 1;
                        r.matmul(&base)
                    }
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
                mults += 1;
            }
        }
        (result.unwrap_or_else(|| Matrix::identity(self.dim)), mults)
    }

    /// Natural log of `Tr(self^j)`, computed with per-step rescaling so that
    /// large powers do not overflow. Returns `None` when the trace is not
    /// positive (for matrices with nonnegative spectrum this only happens
    /// when the trace underflows or the matrix is nilpotent).
    pub fn log_trace_power(&self, j: u32) -> (Option<f64>, usize) {
        fn normalize(m: &mut Matrix) -> f64 {
            let s = m.max_abs();
            if s > 0.0 && s.is_finite() {
                m.data.iter_mut().for_each(|x| *x /= s);
                s.ln()
            } else {
                0.0
            }
        }
        let mut base = self.clone();
        let mut base_log = normalize(&mut base);
        let mut acc: Option<(Matrix, f64)> = None;
        let mut e = j;
        let mut mults = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => (base.clone(), base_log),
                    Some((r, log)) => {
                        mults += 1;
                        let mut p = r.matmul(&base);
                        let s = normalize(&mut p);
                        (p, log + base_log + s)
                    }
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
                mults += 1;
                base_log = 2.0 * base_log + normalize(&mut base);
            }
        }
        let (m, log) = match acc {
            Some(a) => a,
            None => return ((self.dim as f64).ln().into(), 0),
        };
        let tr = m.trace();
        if tr > 0.0 {
            (Some(tr.ln() + log), mults)
        } else {
            (None, mults)
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Dense symmetric matrix. Entries `(i, j)` and `(j, i)` are bitwise equal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: Matrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: Matrix::identity(dim),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.inner[(i, i)] = v;
        }
        m
    }

    /// Symmetrizes by averaging `(i, j)` with `(j, i)`.
    pub fn from_matrix(m: Matrix) -> Self {
        let mut m = m;
        let n = m.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m.data[i * n + j] + m.data[j * n + i]);
                m.data[i * n + j] = avg;
                m.data[j * n + i] = avg;
            }
        }
        Self { inner: m }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::from_matrix(Matrix::from_rows(rows)?))
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        Self::from_matrix(m)
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.inner.row(i)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Adds `w * (e_a - e_b)(e_a - e_b)^T`.
    pub(crate) fn add_edge_term(&mut self, a: usize, b: usize, w: f64) {
        let m = &mut self.inner;
        m[(a, a)] += w;
        m[(b, b)] += w;
        m[(a, b)] -= w;
        m[(b, a)] -= w;
    }

    fn zip_with(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> SymMatrix {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        SymMatrix {
            inner: Matrix {
                dim: self.dim(),
                data: self
                    .inner
                    .data
                    .iter()
                    .zip(&other.inner.data)
                    .map(|(a, b)| f(*a, *b))
                    .collect(),
            },
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            inner: self.inner.scale(c),
        }
    }

    pub fn matmul(&self, other: &SymMatrix) -> Matrix {
        self.inner.matmul(&other.inner)
    }

    /// `C^T * self * C` for a square `C`.
    pub fn congruence(&self, c: &Matrix) -> SymMatrix {
        SymMatrix::from_matrix(c.transpose().matmul(&self.inner.matmul(c)))
    }

    /// `Tr(A) = sum of A_ii`.
    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `self^j` by repeated squaring.
    pub fn powi(&self, j: u32) -> SymMatrix {
        SymMatrix::from_matrix(self.inner.power(j).0)
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.sub(other).max_abs()
    }
}

/// `Tr(M)`.
pub fn trace(m: &SymMatrix) -> f64 {
    m.trace()
}

/// `M^j` by repeated squaring.
pub fn mat_power(m: &SymMatrix, j: u32) -> SymMatrix {
    m.powi(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_and_power() {
        assert_eq!(trace(&SymMatrix::identity(4)), 4.0);
        assert_eq!(
            mat_power(&SymMatrix::diag(&[2.0, 3.0]), 3),
            SymMatrix::diag(&[8.0, 27.0])
        );
        assert_eq!(mat_power(&SymMatrix::diag(&[2.0, 3.0]), 0), SymMatrix::identity(2));
    }

    #[test]
    fn power_uses_logarithmic_multiplications() {
        let m = Matrix::from_rows(&[vec![0.5, 0.25], vec![0.125, 0.5]]).unwrap();
        for j in 1..200u32 {
            let (p, mults) = m.power(j);
            let bits = 32 - j.leading_zeros() as usize;
            assert!(mults <= 2 * (bits - 1), "j={j} mults={mults}");
            let mut naive = Matrix::identity(2);
            for _ in 0..j {
                naive = naive.matmul(&m);
            }
            let scale = naive.max_abs().max(f64::MIN_POSITIVE);
            for i in 0..2 {
                for k in 0..2 {
                    assert!((p[(i, k)] - naive[(i, k)]).abs() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn log_trace_power_matches_direct_and_survives_overflow() {
        let m = Matrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap();
        for j in [1u32, 2, 5, 17] {
            let direct = m.power(j).0.trace().ln();
            let (scaled, _) = m.log_trace_power(j);
            assert!((scaled.unwrap() - direct).abs() < 1e-10, "j={j}");
        }
        let big = Matrix::from_rows(&[vec![1e10, 0.0], vec![0.0, 1.0]]).unwrap();
        let (log, _) = big.log_trace_power(100);
        assert!((log.unwrap() - 1000.0 * 10f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn construction_symmetrizes() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0, 1.0]]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0]]).is_err());
    }
}
