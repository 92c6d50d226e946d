//! Small dense matrix/vector kernel: symmetric eigenvalues via cyclic Jacobi,
//! definiteness tests, continuous Lyapunov solve, and classic RK4 stepping.
//!
//! Everything here targets matrices of order <= 8; no attempt is made at
//! large-scale or sparse linear algebra.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite entry encountered: {0}")]
    NonFinite(String),
    #[error("matrix of the Lyapunov system is not Hurwitz (singular solve or non-PD solution)")]
    NotHurwitz,
    #[error("right-hand side q must be symmetric positive definite")]
    QNotPositiveDefinite,
    #[error("numeric overflow at t = {t}")]
    Overflow { t: f64 },
    #[error("Jacobi iteration failed to converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(NumericsError::Dimension("no rows".into()));
        }
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(NumericsError::Dimension("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite("matrix entry".into()));
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(NumericsError::Dimension(format!(
                "{}x{} needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite("matrix entry".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// (m + m^T)/2; requires a square matrix.
    pub fn symmetrize(&self) -> Matrix {
        assert!(self.is_square(), "symmetrize requires a square matrix");
        let n = self.rows;
        let mut s = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = 0.5 * (self[(i, j)] + self[(j, i)]);
            }
        }
        s
    }

    pub fn matvec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "matvec dimension mismatch");
        let out = (0..self.rows)
            .map(|i| self.row(i).iter().zip(v.as_slice()).map(|(a, b)| a * b).sum())
            .collect();
        Vector::new(out)
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * f).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    /// Contiguous sub-block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r1 <= self.rows && c1 <= self.cols && r0 < r1 && c0 < c1);
        let mut out = Matrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        out
    }

    /// Rank-one product `col * row` as a matrix.
    pub fn outer(col: &Vector, row: &Vector) -> Matrix {
        let mut out = Matrix::zeros(col.dim(), row.dim());
        for i in 0..col.dim() {
            for j in 0..row.dim() {
                out[(i, j)] = col[i] * row[j];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense vector of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Self {
        assert!(!data.is_empty(), "vector must be nonempty");
        Vector { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector::new(vec![0.0; dim])
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Vector::new(s.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, f: f64) -> Vector {
        Vector::new(self.data.iter().map(|v| v * f).collect())
    }

    /// self + f * other
    pub fn axpy(&self, f: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(self.data.iter().zip(&other.data).map(|(a, b)| a + f * b).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// Eigenvalues and eigenvectors of the symmetric part of `m`, by cyclic Jacobi
/// rotations. Returns eigenvalues ascending and the orthogonal matrix whose
/// columns are the matching eigenvectors.
pub fn sym_eigen(m: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if !m.is_square() {
        return Err(NumericsError::Dimension(format!("{}x{} not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.symmetrize();
    let mut v = Matrix::identity(n);
    if n == 1 {
        return Ok((vec![a[(0, 0)]], v));
    }
    let scale = a.max_abs().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..200 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= tol {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
            let vals: Vec<f64> = idx.iter().map(|&i| a[(i, i)]).collect();
            let mut vec_sorted = Matrix::zeros(n, n);
            for (newj, &oldj) in idx.iter().enumerate() {
                for i in 0..n {
                    vec_sorted[(i, newj)] = v[(i, oldj)];
                }
            }
            return Ok((vals, vec_sorted));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(NumericsError::NoConvergence)
}

/// Eigenvalues of the symmetric part of `m`, sorted ascending.
pub fn sym_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    sym_eigen(m).map(|(vals, _)| vals)
}

/// True iff the largest eigenvalue of sym(m) is below `-tol`.
pub fn is_negative_definite(m: &Matrix, tol: f64) -> Result<bool> {
    let vals = sym_eigenvalues(m)?;
    Ok(*vals.last().unwrap() < -tol)
}

/// True iff the smallest eigenvalue of sym(m) is above `tol`.
pub fn is_positive_definite(m: &Matrix, tol: f64) -> Result<bool> {
    let vals = sym_eigenvalues(m)?;
    Ok(vals[0] > tol)
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &Matrix, b: &Vector) -> Result<Vector> {
    if !a.is_square() || a.rows() != b.dim() {
        return Err(NumericsError::Dimension("solve_dense shape".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut rhs = b.clone();
    let scale = m.max_abs().max(1.0);
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[(r, col)].abs() > m[(piv, col)].abs() {
                piv = r;
            }
        }
        if m[(piv, col)].abs() < 1e-13 * scale {
            return Err(NumericsError::NotHurwitz);
        }
        if piv != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = tmp;
            }
            let tmp = rhs[col];
            rhs[col] = rhs[piv];
            rhs[piv] = tmp;
        }
        for r in (col + 1)..n {
            let f = m[(r, col)] / m[(col, col)];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[(r, j)] -= f * m[(col, j)];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    Ok(Vector::new(x))
}

/// Solve the continuous Lyapunov equation `a^T P + P a = -q` for symmetric
/// positive definite `q`, via the vectorized n^2 x n^2 dense system.
///
/// Fails with `NotHurwitz` when `a` has spectrum touching the imaginary axis
/// (singular system) or the computed P is not positive definite.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    if !a.is_square() || !q.is_square() || a.rows() != q.rows() {
        return Err(NumericsError::Dimension("solve_lyapunov shape".into()));
    }
    let n = a.rows();
    let qs = q.symmetrize();
    if qs.sub(q).max_abs() > 1e-9 * q.max_abs().max(1.0) || !is_positive_definite(q, 0.0)? {
        return Err(NumericsError::QNotPositiveDefinite);
    }
    // unknown vec(P) in row-major order: equation (i,j) reads
    //   sum_k a[k][i] P[k][j] + sum_l a[l][j] P[i][l] = -q[i][j]
    let nn = n * n;
    let mut big = Matrix::zeros(nn, nn);
    let mut rhs = vec![0.0; nn];
    for i in 0..n {
        for j in 0..n {
            let r = i * n + j;
            rhs[r] = -qs[(i, j)];
            for k in 0..n {
                big[(r, k * n + j)] += a[(k, i)];
            }
            for l in 0..n {
                big[(r, i * n + l)] += a[(l, j)];
            }
        }
    }
    let sol = solve_dense(&big, &Vector::new(rhs))?;
    let p = Matrix::from_vec(n, n, sol.as_slice().to_vec())
        .map_err(|_| NumericsError::NotHurwitz)?
        .symmetrize();
    let residual = a.transpose().matmul(&p).add(&p.matmul(a)).add(&qs);
    if residual.max_abs() >= 1e-9 * qs.max_abs().max(1.0) {
        return Err(NumericsError::NotHurwitz);
    }
    if !is_positive_definite(&p, 0.0)? {
        return Err(NumericsError::NotHurwitz);
    }
    Ok(p)
}

/// One classic fourth-order Runge-Kutta step of `x' = f(t, x)`.
pub fn rk4_step<F>(f: F, t: f64, x: &Vector, dt: f64) -> Result<Vector>
where
    F: Fn(f64, &Vector) -> Vector,
{
    assert!(dt > 0.0, "rk4 step size must be positive");
    let k1 = f(t, x);
    let k2 = f(t + 0.5 * dt, &x.axpy(0.5 * dt, &k1));
    let k3 = f(t + 0.5 * dt, &x.axpy(0.5 * dt, &k2));
    let k4 = f(t + dt, &x.axpy(dt, &k3));
    if !(k1.is_finite() && k2.is_finite() && k3.is_finite() && k4.is_finite()) {
        return Err(NumericsError::Overflow { t });
    }
    let mut out = x.clone();
    for i in 0..x.dim() {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if !out.is_finite() {
        return Err(NumericsError::Overflow { t });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let vals = sym_eigenvalues(&Matrix::diag(&[2.0, 3.0])).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_exchange() {
        let vals = sym_eigenvalues(&mat(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_sorted_ascending() {
        let vals = sym_eigenvalues(&Matrix::diag(&[-1.0, -2.0])).unwrap();
        assert!((vals[0] + 2.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_reject_non_square() {
        let m = Matrix::zeros(2, 3);
        assert!(matches!(sym_eigenvalues(&m), Err(NumericsError::Dimension(_))));
    }

    #[test]
    fn eigen_residual_on_random_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.random_range(2..=6);
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = rng.random_range(-3.0..3.0);
                }
            }
            let sym = m.symmetrize();
            let (vals, vecs) = sym_eigen(&m).unwrap();
            for (k, &lam) in vals.iter().enumerate() {
                let v = vecs.column(k);
                let resid = sym.matvec(&v).sub(&v.scale(lam));
                assert!(resid.norm() < 1e-8, "residual {} too large", resid.norm());
            }
        }
    }

    #[test]
    fn eigenvalues_invariant_under_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut m = Matrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] = rng.random_range(-2.0..2.0);
                }
            }
            let a = sym_eigenvalues(&m).unwrap();
            let b = sym_eigenvalues(&m.transpose()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn negative_definite_cases() {
        assert!(is_negative_definite(&Matrix::diag(&[-1.0, -1.0]), 0.0).unwrap());
        assert!(!is_negative_definite(&Matrix::zeros(2, 2), 0.0).unwrap());
        // skew-symmetric: symmetric part is zero
        assert!(!is_negative_definite(&mat(&[&[0.0, 1.0], &[-1.0, 0.0]]), 0.0).unwrap());
    }

    #[test]
    fn lyapunov_scalar_like() {
        let p = solve_lyapunov(&Matrix::diag(&[-1.0, -1.0]), &Matrix::diag(&[2.0, 2.0])).unwrap();
        assert!(p.sub(&Matrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn lyapunov_diagonal_by_substitution() {
        // a = diag(-1,-2), q = I  =>  2*1*p11 = 1, 2*2*p22 = 1
        let p = solve_lyapunov(&Matrix::diag(&[-1.0, -2.0]), &Matrix::identity(2)).unwrap();
        assert!((p[(0, 0)] - 0.5).abs() < 1e-12);
        assert!((p[(1, 1)] - 0.25).abs() < 1e-12);
        assert!(p[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn lyapunov_rejects_non_hurwitz() {
        // integrator: eigenvalue zero
        let a = mat(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(solve_lyapunov(&a, &Matrix::identity(2)), Err(NumericsError::NotHurwitz)));
    }

    #[test]
    fn lyapunov_roundtrip_on_random_hurwitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(2..=5);
            let mut l = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    l[(i, j)] = rng.random_range(-1.0..1.0);
                }
            }
            // -L L^T - I is Hurwitz by construction
            let a = l.matmul(&l.transpose()).scale(-1.0).sub(&Matrix::identity(n));
            let q = Matrix::identity(n);
            let p = solve_lyapunov(&a, &q).unwrap();
            let resid = a.transpose().matmul(&p).add(&p.matmul(&a)).add(&q);
            assert!(resid.max_abs() < 1e-9, "residual {}", resid.max_abs());
            assert!(is_positive_definite(&p, 0.0).unwrap());
        }
    }

    #[test]
    fn rk4_zero_field_is_identity() {
        let x = Vector::from_slice(&[1.0, 2.0]);
        let out = rk4_step(|_, _| Vector::zeros(2), 0.0, &x, 0.5).unwrap();
        assert_eq!(out, x);
    }

    #[test]
    fn rk4_exponential_decay_single_step() {
        // hand expansion of the four stages for x' = -x, dt = 0.1 gives 0.9048375
        let x = Vector::from_slice(&[1.0]);
        let out = rk4_step(|_, v| v.scale(-1.0), 0.0, &x, 0.1).unwrap();
        assert!((out[0] - 0.9048375).abs() < 1e-12);
    }

    #[test]
    fn rk4_exact_for_polynomial_rate() {
        // x' = t integrates exactly to 1/2 over [0,1]
        let x = Vector::from_slice(&[0.0]);
        let out = rk4_step(|t, _| Vector::from_slice(&[t]), 0.0, &x, 1.0).unwrap();
        assert!((out[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rk4_overflow_reports_time() {
        let x = Vector::from_slice(&[1.0]);
        let err = rk4_step(|_, _| Vector::from_slice(&[f64::INFINITY]), 2.5, &x, 0.1).unwrap_err();
        match err {
            NumericsError::Overflow { t } => assert_eq!(t, 2.5),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rk4_global_order_on_decay() {
        // global error ratio when halving dt should be ~16 (allow [13, 17])
        let run = |dt: f64| {
            let mut x = Vector::from_slice(&[1.0]);
            let steps = (1.0 / dt).round() as usize;
            for k in 0..steps {
                x = rk4_step(|_, v| v.scale(-1.0), k as f64 * dt, &x, dt).unwrap();
            }
            (x[0] - (-1.0_f64).exp()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!((13.0..=17.0).contains(&ratio), "ratio {ratio}");
    }
}
