//! Symmetric eigensolvers.
//!
//! The full decomposition uses cyclic Jacobi rotations. When only the
//! spectrum is needed, [`eigenvalues_sym`] runs Householder tridiagonalization
//! followed by implicit QL, which is several times cheaper and avoids the
//! strided column updates Jacobi needs on row-major storage.

use super::{Matrix, SymMatrix};
use crate::error::{Error, Result};

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Convergence target: off-diagonal Frobenius norm relative to `||M||_F`.
const OFF_DIAGONAL_RTOL: f64 = 1e-15;

const QL_MAX_ITER: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Row `k` is the unit eigenvector for `values[k]`.
    vectors_t: Matrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        self.vectors_t.row(k)
    }

    /// Matrix whose columns are the eigenvectors.
    pub fn vectors(&self) -> Matrix {
        self.vectors_t.transpose()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Eigenvalues with `|lambda| <= n * eps_machine * max|lambda|` count as
    /// zero (scaled by [`super::spectral::ZERO_FACTOR`]).
    pub fn zero_threshold(&self) -> f64 {
        super::spectral::zero_threshold(self.dim(), self.max_abs_value())
    }

    pub fn is_zero(&self, lambda: f64) -> bool {
        lambda.abs() <= self.zero_threshold()
    }

    /// `U diag(f(lambda)) U^T`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> SymMatrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            if fk == 0.0 {
                continue;
            }
            let u = self.vectors_t.row(k);
            for i in 0..n {
                let a = fk * u[i];
                if a == 0.0 {
                    continue;
                }
                let row = &mut out.data[i * n..(i + 1) * n];
                for (o, uj) in row.iter_mut().zip(u).skip(i) {
                    *o += a * uj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.data[i * n + j] = out.data[j * n + i];
            }
        }
        SymMatrix { inner: out }
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|l| l)
    }
}

impl SymMatrix {
    /// Full spectral decomposition by cyclic Jacobi.
    pub fn eigen(&self) -> Result<EigenDecomposition> {
        let n = self.dim();
        let mut a = self.inner.data.clone();
        let mut vt = Matrix::identity(n);
        jacobi(&mut a, n, Some(&mut vt.data))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
        let values = order.iter().map(|&k| a[k * n + k]).collect();
        let mut sorted = Matrix::zeros(n);
        for (dst, &src) in order.iter().enumerate() {
            sorted.data[dst * n..(dst + 1) * n].copy_from_slice(vt.row(src));
        }
        Ok(EigenDecomposition {
            values,
            vectors_t: sorted,
        })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigenvalues_sym(self)
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi(a: &mut [f64], n: usize, mut vt: Option<&mut [f64]>) -> Result<()> {
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(());
    }
    for sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= OFF_DIAGONAL_RTOL * norm {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[p * n + r];
                    let h = a[q * n + r];
                    let new_p = g - s * (h + g * tau);
                    let new_q = h + s * (g - h * tau);
                    a[p * n + r] = new_p;
                    a[r * n + p] = new_p;
                    a[q * n + r] = new_q;
                    a[r * n + q] = new_q;
                }
                if let Some(v) = vt.as_deref_mut() {
                    let (lo, hi) = v.split_at_mut(q * n);
                    let vp = &mut lo[p * n..(p + 1) * n];
                    let vq = &mut hi[..n];
                    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                        let g = *x;
                        let h = *y;
                        *x = g - s * (h + g * tau);
                        *y = h + s * (g - h * tau);
                    }
                }
            }
        }
    }
    if off_diagonal_norm(a, n) <= OFF_DIAGONAL_RTOL * norm {
        Ok(())
    } else {
        Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
    }
}

/// Eigenvalues of a symmetric matrix in ascending order (tridiagonal QL).
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.inner.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut a, n, &mut d, &mut e);
    implicit_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction to tridiagonal form, eigenvalues only.
/// On return `d` holds the diagonal and `e[1..]` the subdiagonal.
fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
fn implicit_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence { sweeps: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut impl Rng) -> SymMatrix {
        let vals: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SymMatrix::from_fn(n, |i, j| vals[i * n + j])
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn small_examples() {
        let id = SymMatrix::identity(3).eigen().unwrap();
        assert_close(&id.values, &[1.0, 1.0, 1.0], 0.0);
        let refl = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_close(&refl.eigen().unwrap().values, &[-1.0, 1.0], 1e-15);
        let k3 = WeightedGraph::unweighted(3, [(0, 1), (0, 2), (1, 2)])
            .unwrap()
            .laplacian();
        assert_close(&k3.eigen().unwrap().values, &[0.0, 3.0, 3.0], 1e-14);
        assert_close(&k3.eigenvalues().unwrap(), &[0.0, 3.0, 3.0], 1e-14);
    }

    #[test]
    fn decomposition_invariants_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 17, 40] {
            let m = random_sym(n, &mut rng);
            let eig = m.eigen().unwrap();
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            let rec = eig.reconstruct();
            let rel = rec.sub(&m).frobenius_norm() / m.frobenius_norm();
            assert!(rel <= 1e-10, "n={n} rel={rel}");
            let u = eig.vectors();
            let utu = u.transpose().matmul(&u);
            for i in 0..n {
                for j in 0..n {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((utu[(i, j)] - target).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn jacobi_and_ql_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 8, 30, 64] {
            let m = random_sym(n, &mut rng);
            let a = m.eigen().unwrap().values;
            let b = eigenvalues_sym(&m).unwrap();
            assert_close(&a, &b, 1e-11 * (n as f64));
        }
    }

    #[test]
    fn zero_matrix() {
        let eig = SymMatrix::zeros(4).eigen().unwrap();
        assert_eq!(eig.values, vec![0.0; 4]);
        assert_eq!(eigenvalues_sym(&SymMatrix::zeros(4)).unwrap(), vec![0.0; 4]);
    }
}
