//! Dense matrices over any [`Scalar`], with elimination-based solvers.
//!
//! Two conventions appear in the crate. Linear maps on an algebra given by
//! their values on basis vectors (structure maps such as the involution,
//! comultiplication, antipode) are stored in *row* convention: row `i` holds
//! the coefficients of the image of `b_i`, and a coefficient vector `x` is
//! mapped to `x^T M` via [`Mat::row_combination`]. Hilbert-space operators
//! (regular representations, multiplicative unitaries) use the usual column
//! convention and act through [`Mat::mul_vec`].

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;

use crate::scalar::{Scalar, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has the wrong length");
        Mat { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[T]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> Mat<C64> {
        self.map(Scalar::to_c64)
    }

    /// `A x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![T::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = T::zero();
            for (a, b) in row.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            *o = acc;
        }
        out
    }

    /// `x^T A`: the linear combination `Σ x_i row_i`.
    pub fn row_combination(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o = o.clone() + xi.clone() * a.clone();
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    /// Kronecker product; index `(i, j)` of the result is `i_a * b.rows + i_b`.
    pub fn kron(&self, other: &Mat<T>) -> Mat<T> {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Mat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt()
    }

    /// Frobenius distance, computed in `T` before conversion so exact
    /// matrices that agree give exactly `0.0`.
    pub fn dist(&self, other: &Mat<T>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dist shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a.clone() - b.clone()).modulus().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

/// Euclidean distance between coefficient vectors.
pub fn vec_dist<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).modulus().powi(2)).sum::<f64>().sqrt()
}

pub fn vec_norm<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Elimination

/// Failure modes of [`solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum LinSolveError {
    Inconsistent { residual: f64 },
    Underdetermined { nullity: usize },
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<T> {
    pub matrix: Mat<T>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination restricted to the first `pivot_cols` columns,
/// partial pivoting by modulus. Entries below `tol · max|a|` are zero.
fn eliminate<T: Scalar>(mut m: Mat<T>, pivot_cols: usize, tol: f64) -> Rref<T> {
    let scale = (0..m.rows)
        .flat_map(|i| m.row(i)[..pivot_cols].iter().map(Scalar::modulus).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    let thresh = tol * scale.max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m.rows {
            break;
        }
        let (best, best_mod) =
            (r..m.rows).map(|i| (i, m[(i, c)].modulus())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if m[(best, c)].is_negligible(thresh) || best_mod <= 0.0 {
            continue;
        }
        if best != r {
            for j in 0..m.cols {
                m.data.swap(best * m.cols + j, r * m.cols + j);
            }
        }
        let inv = T::one() / m[(r, c)].clone();
        for j in c..m.cols {
            if !m[(r, j)].is_zero() {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
        }
        let pivot_row: Vec<T> = m.row(r).to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = m[(i, c)].clone();
            if f.is_zero() {
                continue;
            }
            let row = m.row_mut(i);
            for j in c..row.len() {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
                }
            }
            if !T::EXACT {
                row[c] = T::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, pivots }
}

pub fn rref<T: Scalar>(m: &Mat<T>, tol: f64) -> Rref<T> {
    eliminate(m.clone(), m.cols, tol)
}

pub fn rank<T: Scalar>(m: &Mat<T>, tol: f64) -> usize {
    rref(m, tol).pivots.len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace<T: Scalar>(a: &Mat<T>, tol: f64) -> Vec<Vec<T>> {
    let Rref { matrix, pivots } = rref(a, tol);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); a.cols];
            x[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -matrix[(r, f)].clone();
            }
            x
        })
        .collect()
}

/// Solves `A X = B` for a unique `X`.
///
/// Float systems are additionally gated on the residual:
/// `‖AX − B‖ ≤ 10·tol·(‖A‖‖X‖ + ‖B‖)`.
pub fn solve<T: Scalar>(a: &Mat<T>, b: &Mat<T>, tol: f64) -> Result<Mat<T>, LinSolveError> {
    assert_eq!(a.rows, b.rows, "solve: row mismatch");
    let aug =
        Mat::from_fn(
            a.rows,
            a.cols + b.cols,
            |i, j| {
                if j < a.cols {
                    a[(i, j)].clone()
                } else {
                    b[(i, j - a.cols)].clone()
                }
            },
        );
    let Rref { matrix, pivots } = eliminate(aug, a.cols, tol);
    let rank = pivots.len();
    let b_scale = b.max_abs().max(f64::MIN_POSITIVE);
    let mut inconsistency: f64 = 0.0;
    for i in rank..a.rows {
        for j in 0..b.cols {
            inconsistency = inconsistency.max(matrix[(i, a.cols + j)].modulus());
        }
    }
    let inconsistent = if T::EXACT { inconsistency > 0.0 } else { inconsistency > tol.sqrt() * b_scale };
    if inconsistent {
        return Err(LinSolveError::Inconsistent { residual: inconsistency });
    }
    if rank < a.cols {
        return Err(LinSolveError::Underdetermined { nullity: a.cols - rank });
    }
    let mut x = Mat::zeros(a.cols, b.cols);
    for (r, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(p, j)] = matrix[(r, a.cols + j)].clone();
        }
    }
    if !T::EXACT {
        let res = a.matmul(&x).dist(b);
        let scale = a.frobenius() * x.frobenius() + b.frobenius();
        if res > 10.0 * tol * scale.max(1.0) {
            return Err(LinSolveError::Inconsistent { residual: res });
        }
    }
    Ok(x)
}

pub fn solve_vec<T: Scalar>(a: &Mat<T>, b: &[T], tol: f64) -> Result<Vec<T>, LinSolveError> {
    let bm = Mat::from_row_major(b.len(), 1, b.to_vec());
    solve(a, &bm, tol).map(|x| x.col(0))
}

pub fn inverse<T: Scalar>(a: &Mat<T>, tol: f64) -> Result<Mat<T>, LinSolveError> {
    assert!(a.is_square(), "inverse of a non-square matrix");
    solve(a, &Mat::identity(a.rows), tol)
}

/// Least-squares solution of `A X ≈ B` via the normal equations; `A` must
/// have full column rank.
pub fn least_squares(a: &Mat<C64>, b: &Mat<C64>, tol: f64) -> Result<Mat<C64>, LinSolveError> {
    let ah = a.adjoint();
    let lhs = ah.matmul(a);
    let rhs = ah.matmul(b);
    let x =
        eliminate(
            Mat::from_fn(lhs.rows, lhs.cols + rhs.cols, |i, j| {
                if j < lhs.cols {
                    lhs[(i, j)]
                } else {
                    rhs[(i, j - lhs.cols)]
                }
            }),
            lhs.cols,
            tol,
        );
    if x.pivots.len() < lhs.cols {
        return Err(LinSolveError::Underdetermined { nullity: lhs.cols - x.pivots.len() });
    }
    let mut out = Mat::zeros(a.cols, b.cols);
    for (r, &p) in x.pivots.iter().enumerate() {
        for j in 0..b.cols {
            out[(p, j)] = x.matrix[(r, lhs.cols + j)];
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Floating-point spectral helpers (nalgebra backed)

pub fn to_dmatrix(m: &Mat<C64>) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

pub fn from_dmatrix(m: &DMatrix<C64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn hermitian_part(m: &Mat<C64>) -> DMatrix<C64> {
    let d = to_dmatrix(m);
    (&d + d.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Mat<C64>) -> Vec<f64> {
    if m.rows == 0 {
        return Vec::new();
    }
    let eig = hermitian_part(m).symmetric_eigenvalues();
    let mut v: Vec<f64> = eig.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigen-decomposition of the Hermitian part of `m`: eigenvalues ascending,
/// eigenvectors as matching columns.
pub fn hermitian_eigen(m: &Mat<C64>) -> (Vec<f64>, Mat<C64>) {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..m.rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = Mat::from_fn(m.rows, m.rows, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// Singular values, descending.
pub fn singular_values(m: &Mat<C64>) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = to_dmatrix(m).singular_values().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Operator (spectral) norm.
pub fn op_norm(m: &Mat<C64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Lower-triangular `L` with `m = L L^*`, if `m` is positive definite.
pub fn cholesky(m: &Mat<C64>) -> Option<Mat<C64>> {
    nalgebra::linalg::Cholesky::new(hermitian_part(m)).map(|c| from_dmatrix(&c.l()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qc, QC};

    fn q(rows: Vec<Vec<i64>>) -> Mat<QC> {
        Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| qc(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn exact_inverse() {
        let a = q(vec![vec![2, 1], vec![1, 1]]);
        let inv = inverse(&a, 0.0).unwrap();
        assert_eq!(a.matmul(&inv), Mat::identity(2));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = q(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = nullspace(&a, 0.0);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| *x == qc(0, 1)));
        }
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = q(vec![vec![1, 1], vec![1, 1]]);
        let b = Mat::from_row_major(2, 1, vec![qc(1, 1), qc(2, 1)]);
        assert!(matches!(solve(&a, &b, 0.0), Err(LinSolveError::Inconsistent { .. })));
        let b = Mat::from_row_major(2, 1, vec![qc(1, 1), qc(1, 1)]);
        assert_eq!(solve(&a, &b, 0.0), Err(LinSolveError::Underdetermined { nullity: 1 }));
    }

    #[test]
    fn float_solve_overdetermined() {
        let a = Mat::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(2.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(3.0, 0.0), C64::new(1.0, 1.0)],
        ])
        .unwrap();
        let x = vec![C64::new(0.5, -1.0), C64::new(2.0, 0.25)];
        let b = a.mul_vec(&x);
        let got = solve_vec(&a, &b, 1e-12).unwrap();
        assert!(vec_dist(&got, &x) < 1e-12);
    }

    #[test]
    fn kron_index_layout() {
        let a = q(vec![vec![1, 2], vec![3, 4]]);
        let b = q(vec![vec![0, 1], vec![1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k[(1, 2)], qc(2, 1));
        assert_eq!(k[(2, 1)], qc(3, 1));
    }

    #[test]
    fn spectral_helpers() {
        let m = Mat::from_rows(vec![
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
        assert!((op_norm(&m) - 3.0).abs() < 1e-12);
        let l = cholesky(&m).unwrap();
        assert!(l.matmul(&l.adjoint()).dist(&m) < 1e-12);
    }
}
