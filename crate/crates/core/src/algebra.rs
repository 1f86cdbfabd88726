//! Finite-dimensional *-algebras given by structure constants.
//!
//! An algebra with basis `b_0 … b_{n-1}` is described by its multiplication
//! tensor (`b_i b_j = Σ_k m[i][j][k] b_k`), the matrix of the involution
//! (row `i` holds the coefficients of `b_i^*`) and optionally the coordinates
//! of a unit. Tensor products use the index `i * n_b + j` for `b_i ⊗ c_j`.

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, nullspace, rank, solve, Mat};
use crate::scalar::{Scalar, C64};

/// An element of an algebra, as coefficients in its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<T> {
    pub coeffs: Vec<T>,
}

/// A linear functional, as its values on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Element<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Element { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Element { coeffs: vec![T::zero(); n] }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut coeffs = vec![T::zero(); n];
        coeffs[i] = T::one();
        Element { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

impl<T: Scalar> LinearFunctional<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        LinearFunctional { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LinearFunctional { coeffs: vec![T::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `ω(x)` for a coefficient vector `x`.
    pub fn eval(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.coeffs.len(), "functional evaluated on wrong dimension");
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(w, v)| !w.is_zero() && !v.is_zero())
            .fold(T::zero(), |acc, (w, v)| acc + w.clone() * v.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        LinearFunctional { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn to_c64(&self) -> LinearFunctional<C64> {
        LinearFunctional { coeffs: self.coeffs.iter().map(Scalar::to_c64).collect() }
    }

    /// Tensor product functional on `A ⊗ B`.
    pub fn tensor(&self, other: &LinearFunctional<T>) -> LinearFunctional<T> {
        let mut coeffs = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.coeffs {
            for b in &other.coeffs {
                coeffs.push(a.clone() * b.clone());
            }
        }
        LinearFunctional { coeffs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Residuals of the *-algebra axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub associativity: f64,
    pub involutive: f64,
    pub anti_multiplicative: f64,
    pub unit: Option<f64>,
    /// Ranks of `x ↦ (x b_j)_j` and `x ↦ (b_j x)_j`; both equal `dim` iff non-degenerate.
    pub nondegeneracy_ranks: (usize, usize),
    pub dim: usize,
}

impl StructureReport {
    pub fn non_degenerate(&self) -> bool {
        self.nondegeneracy_ranks == (self.dim, self.dim)
    }

    pub fn max_residual(&self) -> f64 {
        [self.associativity, self.involutive, self.anti_multiplicative, self.unit.unwrap_or(0.0)]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Positivity and faithfulness of a functional, read off its Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalPredicates {
    pub positive: bool,
    pub faithful: bool,
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
}

/// Threshold below which a Gram eigenvalue counts as negative.
pub const PSD_THRESHOLD: f64 = -1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StarAlgebra<T> {
    labels: Vec<String>,
    mult: Vec<T>,
    star: Mat<T>,
    unit: Option<Vec<T>>,
}

impl<T: Scalar> StarAlgebra<T> {
    /// `mult` is the flattened tensor with index `(i * n + j) * n + k`.
    pub fn new(labels: Vec<String>, mult: Vec<T>, star: Mat<T>, unit: Option<Vec<T>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidStructure("algebra must have positive dimension".into()));
        }
        if mult.len() != n * n * n {
            return Err(Error::DimensionMismatch { expected: n * n * n, found: mult.len() });
        }
        if star.rows() != n || star.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: star.rows().max(star.cols()) });
        }
        if let Some(u) = &unit {
            if u.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: u.len() });
            }
        }
        Ok(StarAlgebra { labels, mult, star, unit })
    }

    /// Builds an algebra whose basis products are single basis elements with
    /// unit coefficient, e.g. a group algebra or a function algebra.
    pub fn from_table(
        labels: Vec<String>,
        product: impl Fn(usize, usize) -> Option<usize>,
        star: impl Fn(usize) -> usize,
        unit: Option<usize>,
    ) -> Self {
        let n = labels.len();
        let mut mult = vec![T::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                if let Some(k) = product(i, j) {
                    mult[(i * n + j) * n + k] = T::one();
                }
            }
        }
        let star = Mat::from_fn(n, n, |i, k| if star(i) == k { T::one() } else { T::zero() });
        let unit = unit.map(|u| (0..n).map(|k| if k == u { T::one() } else { T::zero() }).collect());
        StarAlgebra { labels, mult, star, unit }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mult_tensor(&self) -> &[T] {
        &self.mult
    }

    pub fn star_matrix(&self) -> &Mat<T> {
        &self.star
    }

    /// Coefficients of `b_i b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[T] {
        let n = self.dim();
        &self.mult[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn unit(&self) -> Option<&[T]> {
        self.unit.as_deref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    /// The same algebra with its unit forgotten.
    pub fn without_unit(&self) -> Self {
        StarAlgebra { unit: None, ..self.clone() }
    }

    pub fn basis(&self, i: usize) -> Element<T> {
        Element::basis(self.dim(), i)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    /// Product of coefficient vectors (bilinear contraction of the tensor).
    pub fn mul(&self, x: &[T], y: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj.clone();
                for (o, m) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !m.is_zero() {
                        *o = o.clone() + c.clone() * m.clone();
                    }
                }
            }
        }
        out
    }

    pub fn multiply(&self, x: &Element<T>, y: &Element<T>) -> Result<Element<T>> {
        self.check_dim(x.dim())?;
        self.check_dim(y.dim())?;
        Ok(Element::new(self.mul(&x.coeffs, &y.coeffs)))
    }

    /// `x^*` (conjugate-linear).
    pub fn star(&self, x: &[T]) -> Vec<T> {
        let conj: Vec<T> = x.iter().map(Scalar::conj).collect();
        self.star.row_combination(&conj)
    }

    pub fn star_element(&self, x: &Element<T>) -> Result<Element<T>> {
        self.check_dim(x.dim())?;
        Ok(Element::new(self.star(&x.coeffs)))
    }

    /// Matrix of `y ↦ x y` (column convention).
    pub fn left_mult_matrix(&self, x: &[T]) -> Mat<T> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            let col = self.mul(x, &Element::basis(n, j).coeffs);
            m.set_col(j, &col);
        }
        m
    }

    /// Matrix of `y ↦ y x` (column convention).
    pub fn right_mult_matrix(&self, x: &[T]) -> Mat<T> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            let col = self.mul(&Element::basis(n, j).coeffs, x);
            m.set_col(j, &col);
        }
        m
    }

    pub fn associativity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..n {
                    let left = self.mul(&ij, &Element::basis(n, k).coeffs);
                    let jk = self.basis_product(j, k).to_vec();
                    let right = self.mul(&Element::basis(n, i).coeffs, &jk);
                    worst = worst.max(crate::matrix::vec_dist(&left, &right));
                }
            }
        }
        worst
    }

    pub fn structure_report(&self, tol: f64) -> StructureReport {
        let n = self.dim();
        let mut involutive: f64 = 0.0;
        let mut anti: f64 = 0.0;
        for i in 0..n {
            let bi = Element::basis(n, i).coeffs;
            involutive = involutive.max(crate::matrix::vec_dist(&self.star(&self.star(&bi)), &bi));
            for j in 0..n {
                let bj = Element::basis(n, j).coeffs;
                let lhs = self.star(self.basis_product(i, j));
                let rhs = self.mul(&self.star(&bj), &self.star(&bi));
                anti = anti.max(crate::matrix::vec_dist(&lhs, &rhs));
            }
        }
        let unit = self.unit.as_ref().map(|u| {
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let bi = Element::basis(n, i).coeffs;
                worst = worst.max(crate::matrix::vec_dist(&self.mul(u, &bi), &bi));
                worst = worst.max(crate::matrix::vec_dist(&self.mul(&bi, u), &bi));
            }
            worst
        });
        StructureReport {
            associativity: self.associativity_residual(),
            involutive,
            anti_multiplicative: anti,
            unit,
            nondegeneracy_ranks: self.nondegeneracy_ranks(tol),
            dim: n,
        }
    }

    fn nondegeneracy_ranks(&self, tol: f64) -> (usize, usize) {
        let n = self.dim();
        // x ↦ (x b_j)_j stacks the right multiplications by each basis vector.
        let mut by_right = Mat::zeros(n * n, n);
        let mut by_left = Mat::zeros(n * n, n);
        for j in 0..n {
            let bj = Element::basis(n, j).coeffs;
            let r = self.right_mult_matrix(&bj);
            let l = self.left_mult_matrix(&bj);
            for row in 0..n {
                for col in 0..n {
                    by_right[(j * n + row, col)] = r[(row, col)].clone();
                    by_left[(j * n + row, col)] = l[(row, col)].clone();
                }
            }
        }
        (rank(&by_right, tol), rank(&by_left, tol))
    }

    /// Rejects algebras violating associativity, involution or non-degeneracy.
    pub fn validate(&self, tol: f64) -> Result<StructureReport> {
        let report = self.structure_report(tol);
        if report.max_residual() > tol {
            return Err(Error::InvalidStructure(format!(
                "*-algebra axioms fail (max residual {:.3e})",
                report.max_residual()
            )));
        }
        if !report.non_degenerate() {
            return Err(Error::InvalidStructure("algebra is degenerate".into()));
        }
        Ok(report)
    }

    /// The tensor product algebra `A ⊗ B`.
    pub fn tensor(&self, other: &StarAlgebra<T>) -> StarAlgebra<T> {
        let (na, nb) = (self.dim(), other.dim());
        let n = na * nb;
        let labels = self.labels.iter().flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}"))).collect();
        let mut mult = vec![T::zero(); n * n * n];
        for i in 0..na {
            for j in 0..nb {
                for k in 0..na {
                    for l in 0..nb {
                        let p = self.basis_product(i, k);
                        let q = other.basis_product(j, l);
                        let (x, y) = (i * nb + j, k * nb + l);
                        for (r, pr) in p.iter().enumerate() {
                            if pr.is_zero() {
                                continue;
                            }
                            for (s, qs) in q.iter().enumerate() {
                                if !qs.is_zero() {
                                    mult[(x * n + y) * n + r * nb + s] = pr.clone() * qs.clone();
                                }
                            }
                        }
                    }
                }
            }
        }
        let unit = match (&self.unit, &other.unit) {
            (Some(u), Some(v)) => Some(u.iter().flat_map(|a| v.iter().map(move |b| a.clone() * b.clone())).collect()),
            _ => None,
        };
        StarAlgebra { labels, mult, star: self.star.kron(&other.star), unit }
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> StarAlgebra<U> {
        StarAlgebra {
            labels: self.labels.clone(),
            mult: self.mult.iter().map(&f).collect(),
            star: self.star.map(&f),
            unit: self.unit.as_ref().map(|u| u.iter().map(&f).collect()),
        }
    }

    pub fn to_c64(&self) -> StarAlgebra<C64> {
        self.map_scalars(Scalar::to_c64)
    }

    // -- functionals ---------------------------------------------------------

    /// `(xω, ωx)` with `(xω)(a) = ω(ax)` and `(ωx)(a) = ω(xa)`.
    pub fn functional_translate(
        &self,
        x: &Element<T>,
        omega: &LinearFunctional<T>,
    ) -> Result<(LinearFunctional<T>, LinearFunctional<T>)> {
        self.check_dim(x.dim())?;
        self.check_dim(omega.dim())?;
        let n = self.dim();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for a in 0..n {
            let ba = Element::basis(n, a).coeffs;
            left.push(omega.eval(&self.mul(&ba, &x.coeffs)));
            right.push(omega.eval(&self.mul(&x.coeffs, &ba)));
        }
        Ok((LinearFunctional::new(left), LinearFunctional::new(right)))
    }

    /// `G_{ij} = ω(b_j^* b_i)`.
    pub fn gram(&self, omega: &LinearFunctional<T>) -> Mat<T> {
        let n = self.dim();
        let stars: Vec<Vec<T>> = (0..n).map(|j| self.star(&Element::basis(n, j).coeffs)).collect();
        Mat::from_fn(n, n, |i, j| omega.eval(&self.mul(&stars[j], &Element::basis(n, i).coeffs)))
    }

    pub fn functional_predicates(&self, omega: &LinearFunctional<T>, threshold: f64) -> FunctionalPredicates {
        let g = self.gram(omega).to_c64();
        let hermitian_residual = g.dist(&g.adjoint());
        let eig = hermitian_eigenvalues(&g);
        let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
        let positive = hermitian_residual <= threshold.abs().max(1e-10) && min_eigenvalue >= threshold;
        let faithful = positive && min_eigenvalue > threshold.abs();
        FunctionalPredicates { positive, faithful, min_eigenvalue, hermitian_residual }
    }

    /// `ω(xy) = ω(x)ω(y)` on basis pairs; returns the worst defect.
    pub fn multiplicativity_residual(&self, omega: &LinearFunctional<T>) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let lhs = omega.eval(self.basis_product(i, j));
                let rhs = omega.coeffs[i].clone() * omega.coeffs[j].clone();
                worst = worst.max((lhs - rhs).modulus());
            }
        }
        worst
    }

    /// `ω(xy) = ω(yx)` on basis pairs.
    pub fn trace_residual(&self, omega: &LinearFunctional<T>) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = omega.eval(self.basis_product(i, j)) - omega.eval(self.basis_product(j, i));
                worst = worst.max(d.modulus());
            }
        }
        worst
    }

    // -- multipliers --------------------------------------------------------

    /// Residual of `x(a)^* b = a^* y(b)` over all basis pairs, for linear
    /// maps `x, y` in column convention.
    pub fn multiplier_residual(&self, x: &Mat<T>, y: &Mat<T>) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let xa_star = self.star(&x.col(i));
            let a_star = self.star(&Element::basis(n, i).coeffs);
            for j in 0..n {
                let lhs = self.mul(&xa_star, &Element::basis(n, j).coeffs);
                let rhs = self.mul(&a_star, &y.col(j));
                worst = worst.max(crate::matrix::vec_dist(&lhs, &rhs));
            }
        }
        worst
    }

    /// The adjoint partner `y` of a multiplier `x`, solved from
    /// `a^* y(b) = x(a)^* b`; unique by non-degeneracy.
    pub fn multiplier_adjoint(&self, x: &Mat<T>, tol: f64) -> Result<Mat<T>> {
        let n = self.dim();
        // Unknown y(b_j) = Σ_k Y[k][j] b_k, one column at a time:
        // for each i: Σ_k Y[k][j] (b_i^* b_k) = x(b_i)^* b_j.
        let mut sys = Mat::zeros(n * n, n);
        let a_stars: Vec<Vec<T>> = (0..n).map(|i| self.star(&Element::basis(n, i).coeffs)).collect();
        for (i, ai) in a_stars.iter().enumerate() {
            for k in 0..n {
                let p = self.mul(ai, &Element::basis(n, k).coeffs);
                for (r, v) in p.into_iter().enumerate() {
                    sys[(i * n + r, k)] = v;
                }
            }
        }
        let mut rhs = Mat::zeros(n * n, n);
        for i in 0..n {
            let xa_star = self.star(&x.col(i));
            for j in 0..n {
                let p = self.mul(&xa_star, &Element::basis(n, j).coeffs);
                for (r, v) in p.into_iter().enumerate() {
                    rhs[(i * n + r, j)] = v;
                }
            }
        }
        solve(&sys, &rhs, tol).map_err(|e| Error::from_solve("multiplier adjoint", e))
    }

    /// Complex dimension of `M(A)`: the solution space of
    /// `x(a)^* b = a^* y(b)` in the unknowns `(conj x, y)`.
    pub fn multiplier_space_dim(&self, tol: f64) -> usize {
        let n = self.dim();
        let n2 = n * n;
        let mut sys = Mat::zeros(n * n * n, 2 * n2);
        for i in 0..n {
            let a_star = self.star(&Element::basis(n, i).coeffs);
            for j in 0..n {
                let bj = Element::basis(n, j).coeffs;
                // Σ_k conj(X[k][i]) b_k^* b_j
                for k in 0..n {
                    let bk_star = self.star(&Element::basis(n, k).coeffs);
                    let p = self.mul(&bk_star, &bj);
                    for (r, v) in p.into_iter().enumerate() {
                        sys[((i * n + j) * n + r, k * n + i)] = v;
                    }
                    let q = self.mul(&a_star, &Element::basis(n, k).coeffs);
                    for (r, v) in q.into_iter().enumerate() {
                        let e = &mut sys[((i * n + j) * n + r, n2 + k * n + j)];
                        *e = e.clone() - v;
                    }
                }
            }
        }
        nullspace(&sys, tol).len()
    }
}

/// Coordinates of `x · y` in `A ⊗ B` without materializing the tensor algebra.
pub fn tensor_mul<T: Scalar>(a: &StarAlgebra<T>, b: &StarAlgebra<T>, x: &[T], y: &[T]) -> Vec<T> {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = vec![T::zero(); na * nb];
    for (p, xp) in x.iter().enumerate() {
        if xp.is_zero() {
            continue;
        }
        let (i, j) = (p / nb, p % nb);
        for (q, yq) in y.iter().enumerate() {
            if yq.is_zero() {
                continue;
            }
            let (k, l) = (q / nb, q % nb);
            let c = xp.clone() * yq.clone();
            let left = a.basis_product(i, k);
            let right = b.basis_product(j, l);
            for (r, lr) in left.iter().enumerate() {
                if lr.is_zero() {
                    continue;
                }
                let cl = c.clone() * lr.clone();
                for (s, rs) in right.iter().enumerate() {
                    if !rs.is_zero() {
                        let o = &mut out[r * nb + s];
                        *o = o.clone() + cl.clone() * rs.clone();
                    }
                }
            }
        }
    }
    out
}

/// `x^*` in `A ⊗ B`.
pub fn tensor_star<T: Scalar>(a: &StarAlgebra<T>, b: &StarAlgebra<T>, x: &[T]) -> Vec<T> {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = vec![T::zero(); na * nb];
    for (p, xp) in x.iter().enumerate() {
        if xp.is_zero() {
            continue;
        }
        let c = xp.conj();
        let sa = a.star_matrix().row(p / nb);
        let sb = b.star_matrix().row(p % nb);
        for (r, u) in sa.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (s, v) in sb.iter().enumerate() {
                if !v.is_zero() {
                    let o = &mut out[r * nb + s];
                    *o = o.clone() + c.clone() * u.conj() * v.conj();
                }
            }
        }
    }
    out
}

/// Slice map on `A ⊗ B`: `(ω ⊗ ι)(a ⊗ b) = ω(a) b` for [`Side::Left`] (ω on
/// `A`), `(ι ⊗ ω)(a ⊗ b) = ω(b) a` for [`Side::Right`] (ω on `B`).
pub fn slice<T: Scalar>(side: Side, omega: &LinearFunctional<T>, x: &[T], dims: (usize, usize)) -> Result<Vec<T>> {
    let (na, nb) = dims;
    if x.len() != na * nb {
        return Err(Error::DimensionMismatch { expected: na * nb, found: x.len() });
    }
    let expected = if side == Side::Left { na } else { nb };
    if omega.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: omega.dim() });
    }
    Ok(match side {
        Side::Left => {
            let mut out = vec![T::zero(); nb];
            for i in 0..na {
                let w = &omega.coeffs[i];
                if w.is_zero() {
                    continue;
                }
                for (j, o) in out.iter_mut().enumerate() {
                    let v = &x[i * nb + j];
                    if !v.is_zero() {
                        *o = o.clone() + w.clone() * v.clone();
                    }
                }
            }
            out
        }
        Side::Right => (0..na)
            .map(|i| {
                (0..nb).fold(T::zero(), |acc, j| {
                    let v = &x[i * nb + j];
                    if v.is_zero() {
                        acc
                    } else {
                        acc + omega.coeffs[j].clone() * v.clone()
                    }
                })
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, function_algebra, group_algebra};
    use crate::scalar::{qc, QC};

    fn cz2() -> StarAlgebra<QC> {
        group_algebra::<QC>(&cyclic(2)).algebra
    }

    #[test]
    fn group_law_in_c_z2() {
        let a = cz2();
        let g = a.basis(1);
        assert_eq!(a.multiply(&g, &g).unwrap(), a.basis(0));
        let zero = Element::zero(2);
        assert_eq!(a.multiply(&g, &zero).unwrap(), zero);
    }

    #[test]
    fn pointwise_product_in_k_z2() {
        let k = function_algebra::<QC>(&cyclic(2)).algebra;
        for i in 0..2 {
            for j in 0..2 {
                let p = k.multiply(&k.basis(i), &k.basis(j)).unwrap();
                let expect = if i == j { k.basis(i) } else { Element::zero(2) };
                assert_eq!(p, expect);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = cz2();
        let bad = Element::new(vec![qc(1, 1); 3]);
        assert!(matches!(a.multiply(&bad, &a.basis(0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn slice_of_simple_tensor() {
        let omega = LinearFunctional::new(vec![qc(2, 1), qc(-1, 1)]);
        // b_1 ⊗ b_0 in a 2x2 tensor space
        let mut x = vec![qc(0, 1); 4];
        x[2] = qc(1, 1);
        let out = slice(Side::Left, &omega, &x, (2, 2)).unwrap();
        assert_eq!(out, vec![qc(-1, 1), qc(0, 1)]);
        assert!(slice(Side::Right, &LinearFunctional::new(vec![qc(1, 1)]), &x, (2, 2)).is_err());
    }

    #[test]
    fn unit_translate_is_identity() {
        let a = cz2();
        let omega = LinearFunctional::new(vec![qc(3, 1), qc(5, 2)]);
        let one = Element::new(a.unit().unwrap().to_vec());
        let (l, r) = a.functional_translate(&one, &omega).unwrap();
        assert_eq!(l, omega);
        assert_eq!(r, omega);
    }

    #[test]
    fn unital_multipliers_are_the_algebra() {
        let a = cz2();
        assert_eq!(a.multiplier_space_dim(0.0), 2);
        let g = a.basis(1).coeffs;
        let x = a.left_mult_matrix(&g);
        let y = a.multiplier_adjoint(&x, 0.0).unwrap();
        assert_eq!(y, a.left_mult_matrix(&a.star(&g)));
        assert_eq!(a.multiplier_residual(&x, &y), 0.0);
    }
}
