//! Small dense complex linear algebra: just what log-det capacity, SVD-based
//! precoding and correlated-grid coloring need.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension("matrix product inner dimensions differ"));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension("matrix-vector length mismatch"));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect())
    }

    /// `A A†` (rows × rows).
    pub fn outer_gram(&self) -> CMatrix {
        let n = self.rows;
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = (0..self.cols)
                    .map(|k| self[(i, k)] * self[(j, k)].conj())
                    .sum();
                g[(i, j)] = s;
                g[(j, i)] = s.conj();
            }
            g[(i, i)].im = 0.0;
        }
        g
    }

    /// `A† A` (cols × cols).
    pub fn inner_gram(&self) -> CMatrix {
        let n = self.cols;
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = (0..self.rows)
                    .map(|k| self[(k, i)].conj() * self[(k, j)])
                    .sum();
                g[(i, j)] = s;
                g[(j, i)] = s.conj();
            }
            g[(i, i)].im = 0.0;
        }
        g
    }

    /// Largest absolute entry of `A − B`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Natural log-determinant of a Hermitian positive-definite matrix by
/// Cholesky factorization.
pub fn hermitian_logdet(a: &CMatrix) -> Result<f64> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension("log-det needs a square matrix"));
    }
    let mut l = CMatrix::zeros(n, n);
    let mut logdet = 0.0;
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NoConvergence(
                "Cholesky factorization (matrix not positive definite)",
            ));
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        logdet += d.ln();
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(logdet)
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues (unsorted) and the unitary matrix whose
/// columns are the matching eigenvectors.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(
            "eigen-decomposition needs a square matrix",
        ));
    }
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = CMatrix::identity(n);
    let scale: f64 = m.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            let vals = (0..n).map(|i| m[(i, i)].re).collect();
            return Ok((vals, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                let r = b.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = b / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                rotate(&mut m, p, q, jpp, jpq, jqp, jqq, true);
                rotate(&mut v, p, q, jpp, jpq, jqp, jqq, false);
                m[(p, q)] = Complex64::zero();
                m[(q, p)] = Complex64::zero();
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
            }
        }
    }
    Err(Error::NoConvergence("Jacobi eigen-decomposition"))
}

#[allow(clippy::too_many_arguments)]
fn rotate(
    m: &mut CMatrix,
    p: usize,
    q: usize,
    jpp: Complex64,
    jpq: Complex64,
    jqp: Complex64,
    jqq: Complex64,
    two_sided: bool,
) {
    for k in 0..m.rows {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * jpp + akq * jqp;
        m[(k, q)] = akp * jpq + akq * jqq;
    }
    if two_sided {
        for k in 0..m.cols {
            let apk = m[(p, k)];
            let aqk = m[(q, k)];
            m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
            m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
        }
    }
}

/// Pivoted Cholesky factor of a Hermitian positive-semidefinite matrix.
///
/// Returns `L` (n × rank) with `A ≈ L L†`, rows in the original order.
/// Factorization stops once every remaining pivot is at most
/// `rel_tol · max diag(A)`. A remaining pivot more negative than that bound
/// means the matrix is indefinite.
pub fn psd_factor(a: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension("factorization needs a square matrix"));
    }
    let mut diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let max_diag = diag.iter().cloned().fold(0.0, f64::max);
    let tol = rel_tol * max_diag;
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    let mut used = vec![false; n];

    loop {
        let mut pivot = None;
        let mut best = tol;
        for (i, &d) in diag.iter().enumerate() {
            if !used[i] && d > best {
                best = d;
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { break };
        used[p] = true;
        let root = best.sqrt();
        let mut col = vec![Complex64::zero(); n];
        for i in 0..n {
            if used[i] && i != p {
                continue;
            }
            let mut s = a[(i, p)];
            for prev in &cols {
                s -= prev[i] * prev[p].conj();
            }
            col[i] = s / root;
        }
        col[p] = Complex64::new(root, 0.0);
        for i in 0..n {
            if !used[i] {
                diag[i] -= col[i].norm_sqr();
            }
        }
        cols.push(col);
    }

    for (i, &d) in diag.iter().enumerate() {
        if !used[i] && d < -tol.max(1e-12 * max_diag) {
            return Err(Error::NotPositiveSemidefinite { pivot: d });
        }
    }

    let rank = cols.len();
    Ok(CMatrix::from_fn(n, rank, |r, c| cols[c][r]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_matrix() -> CMatrix {
        CMatrix::from_row_major(
            3,
            3,
            vec![
                c(0.3, -1.2),
                c(1.1, 0.4),
                c(-0.7, 0.2),
                c(0.05, 0.9),
                c(-1.4, -0.3),
                c(0.6, 0.6),
                c(0.8, 0.1),
                c(0.2, -0.5),
                c(1.3, 0.7),
            ],
        )
    }

    #[test]
    fn eigen_reconstructs_hermitian_matrix() {
        let h = sample_matrix();
        let g = h.outer_gram();
        let (vals, vecs) = hermitian_eigen(&g).unwrap();
        let d = CMatrix::from_fn(
            3,
            3,
            |i, j| if i == j { c(vals[i], 0.0) } else { c(0.0, 0.0) },
        );
        let back = vecs.matmul(&d).unwrap().matmul(&vecs.adjoint()).unwrap();
        assert!(back.max_abs_diff(&g) < 1e-12);
        let vv = vecs.adjoint().matmul(&vecs).unwrap();
        assert!(vv.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn logdet_matches_eigenvalues() {
        let g = sample_matrix().inner_gram();
        let a = CMatrix::from_fn(3, 3, |i, j| {
            g[(i, j)] * 2.0 + if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        let (vals, _) = hermitian_eigen(&a).unwrap();
        let want: f64 = vals.iter().map(|v| v.ln()).sum();
        assert!((hermitian_logdet(&a).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn logdet_rejects_indefinite() {
        let a = CMatrix::from_row_major(
            2,
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
        );
        assert!(hermitian_logdet(&a).is_err());
    }

    #[test]
    fn psd_factor_of_all_ones_is_rank_one_and_exact() {
        let a = CMatrix::from_fn(4, 4, |_, _| c(1.0, 0.0));
        let l = psd_factor(&a, 1e-12).unwrap();
        assert_eq!(l.cols(), 1);
        for i in 0..4 {
            assert_eq!(l[(i, 0)], c(1.0, 0.0));
        }
    }

    #[test]
    fn psd_factor_reconstructs_full_rank() {
        let g = sample_matrix().outer_gram();
        let l = psd_factor(&g, 1e-14).unwrap();
        assert_eq!(l.cols(), 3);
        let back = l.matmul(&l.adjoint()).unwrap();
        assert!(back.max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn psd_factor_rejects_indefinite() {
        let a = CMatrix::from_row_major(
            2,
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
        );
        assert!(matches!(
            psd_factor(&a, 1e-12),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }
}
