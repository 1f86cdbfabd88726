//! GNS construction for the Haar integral, the regular representation, and
//! the multiplicative unitary `W` with its pentagon and implementation checks.
//!
//! Operators are stored in `Λ`-coordinates: the vector `Σ u_i Λ(b_i)` has
//! coordinates `u`. In these coordinates `π(a)` is the left multiplication
//! matrix of `a`, and everything stays exact over rational scalars. The inner
//! product is `⟨u, v⟩ = v^H K u` with `K = Gᵀ`, so the Hilbert-space adjoint
//! is `X† = K⁻¹ X^H K`. An orthonormal frame is obtained from the Cholesky
//! factor of the Gram matrix when floating-point matrices are wanted.

use crate::algebra::{LinearFunctional, StarAlgebra};
use crate::duality::DualPresentation;
use crate::error::{Error, Result};
use crate::hopf::{leg_mul, HopfAlgebra, HopfStructure, Leg, QuantumGroup};
use crate::matrix::{cholesky, inverse, rank, vec_dist, Mat};
use crate::scalar::{Scalar, C64};

/// Default cap on `n` for computations on `H ⊗ H ⊗ H`.
pub const PENTAGON_DIM_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct GnsPair<T> {
    /// `G_{ij} = φ(b_j^* b_i)`.
    pub gram: Mat<T>,
    /// Column `i` is `Λ(b_i)` in an orthonormal frame.
    pub lambda: Mat<C64>,
    lambda_inv: Mat<C64>,
    /// `Gᵀ` and its inverse, for adjoints in `Λ`-coordinates.
    metric: Mat<T>,
    metric_inv: Mat<T>,
    algebra: StarAlgebra<T>,
}

/// Builds the GNS pair of a positive faithful functional.
pub fn build_gns<T: Scalar>(a: &StarAlgebra<T>, phi: &LinearFunctional<T>, tol: f64) -> Result<GnsPair<T>> {
    let gram = a.gram(phi);
    let pred = a.functional_predicates(phi, crate::algebra::PSD_THRESHOLD);
    if !pred.faithful {
        return Err(Error::NotFaithful { min_eigenvalue: pred.min_eigenvalue });
    }
    let g = gram.to_c64();
    let herm = Mat::from_fn(g.rows(), g.cols(), |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
    let l = cholesky(&herm).ok_or(Error::NotFaithful { min_eigenvalue: pred.min_eigenvalue })?;
    let lambda = l.transpose();
    let lambda_inv = inverse(&lambda, 1e-14).map_err(|e| Error::from_solve("GNS frame", e))?;
    let metric = gram.transpose();
    let metric_inv = inverse(&metric, tol).map_err(|e| Error::from_solve("GNS metric", e))?;
    Ok(GnsPair { gram, lambda, lambda_inv, metric, metric_inv, algebra: a.clone() })
}

impl<T: Scalar> GnsPair<T> {
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn algebra(&self) -> &StarAlgebra<T> {
        &self.algebra
    }

    /// `π(x)` in `Λ`-coordinates.
    pub fn pi_lambda(&self, x: &[T]) -> Mat<T> {
        self.algebra.left_mult_matrix(x)
    }

    /// `π(x)` in the orthonormal frame.
    pub fn pi(&self, x: &[T]) -> Mat<C64> {
        self.to_frame(&self.pi_lambda(x))
    }

    pub fn to_frame(&self, m: &Mat<T>) -> Mat<C64> {
        self.lambda.matmul(&m.to_c64()).matmul(&self.lambda_inv)
    }

    /// Frame version of an operator on `H ⊗ H` given in `Λ ⊗ Λ` coordinates.
    pub fn to_frame2(&self, m: &Mat<T>) -> Mat<C64> {
        let l2 = self.lambda.kron(&self.lambda);
        let l2_inv = self.lambda_inv.kron(&self.lambda_inv);
        l2.matmul(&m.to_c64()).matmul(&l2_inv)
    }

    /// Frame coordinates of the vector with `Λ`-coordinates `u`.
    pub fn vector_to_frame(&self, u: &[T]) -> Vec<C64> {
        self.lambda.mul_vec(&u.iter().map(Scalar::to_c64).collect::<Vec<_>>())
    }

    /// Hilbert-space adjoint of an operator on `H` in `Λ`-coordinates.
    pub fn adjoint(&self, x: &Mat<T>) -> Mat<T> {
        self.metric_inv.matmul(&x.adjoint()).matmul(&self.metric)
    }

    /// Hilbert-space adjoint of an operator on `H ⊗ H` in `Λ ⊗ Λ` coordinates.
    pub fn adjoint2(&self, x: &Mat<T>) -> Mat<T> {
        self.metric_inv.kron(&self.metric_inv).matmul(&x.adjoint()).matmul(&self.metric.kron(&self.metric))
    }

    /// `⟨u, v⟩` for `Λ`-coordinate vectors.
    pub fn inner(&self, u: &[T], v: &[T]) -> T {
        let ku = self.metric.mul_vec(u);
        v.iter().zip(ku).fold(T::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Residuals of `(Λ(a), Λ(b)) = φ(b^*a)`, `π(a)Λ(b) = Λ(ab)` (in the frame)
    /// and `π(a^*) = π(a)^*`.
    pub fn invariant_residuals(&self) -> GnsResiduals {
        let n = self.dim();
        let g = self.gram.to_c64();
        let inner = Mat::from_fn(n, n, |i, j| {
            (0..n).fold(C64::new(0.0, 0.0), |acc, k| acc + self.lambda[(k, i)] * self.lambda[(k, j)].conj())
        });
        let mut rep: f64 = 0.0;
        let mut star: f64 = 0.0;
        for i in 0..n {
            let bi = basis::<T>(n, i);
            let p = self.pi(&bi);
            for j in 0..n {
                let lhs = p.mul_vec(&self.lambda.col(j));
                let rhs = self.vector_to_frame(self.algebra.basis_product(i, j));
                rep = rep.max(vec_dist(&lhs, &rhs));
            }
            star = star.max(self.pi(&self.algebra.star(&bi)).dist(&p.adjoint()));
        }
        GnsResiduals { inner_product: inner.dist(&g), representation: rep, star }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GnsResiduals {
    pub inner_product: f64,
    pub representation: f64,
    pub star: f64,
}

fn basis<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

/// `W` on `H ⊗ H`, in `Λ ⊗ Λ` coordinates (index `a * n + b`).
#[derive(Clone, Debug, PartialEq)]
pub struct MultUnitary<T> {
    pub w: Mat<T>,
    /// The spanning map `T(a ⊗ b) = Δ(b)(a ⊗ 1)`; `W T = 1`.
    pub transfer: Mat<T>,
}

impl<T: Scalar> MultUnitary<T> {
    pub fn n(&self) -> usize {
        (self.w.rows() as f64).sqrt().round() as usize
    }

    /// Residual of `W (Λ⊗Λ)(Δ(b)(a⊗1)) = Λ(a) ⊗ Λ(b)` over all basis pairs.
    pub fn defining_residual(&self) -> f64 {
        self.w.matmul(&self.transfer).dist(&Mat::identity(self.w.rows()))
    }

    pub fn unitarity_residual(&self, gns: &GnsPair<T>) -> f64 {
        let adj = gns.adjoint2(&self.w);
        let id = Mat::identity(self.w.rows());
        adj.matmul(&self.w).dist(&id).max(self.w.matmul(&adj).dist(&id))
    }

    pub fn perturbed(&self, row: usize, col: usize, delta: T) -> Self {
        let mut w = self.w.clone();
        w[(row, col)] = w[(row, col)].clone() + delta;
        MultUnitary { w, transfer: self.transfer.clone() }
    }
}

/// Builds `W = T⁻¹` with `T(a ⊗ b) = Δ(b)(a ⊗ 1)`.
pub fn build_w<T: Scalar>(h: &HopfAlgebra<T>, tol: f64) -> Result<MultUnitary<T>> {
    let n = h.dim();
    let mut transfer = Mat::zeros(n * n, n * n);
    for b in 0..n {
        let db = h.hopf.delta(&basis(n, b));
        for a in 0..n {
            transfer.set_col(a * n + b, &leg_mul(&h.algebra, &db, &basis(n, a), Leg::RightFirst));
        }
    }
    let w = inverse(&transfer, tol).map_err(|_| Error::SingularTransfer { rank: rank(&transfer, tol), dim: n * n })?;
    Ok(MultUnitary { w, transfer })
}

/// Sparse column storage used for leg products on `H ⊗ H ⊗ H`.
struct SparseOp<T> {
    n: usize,
    cols: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SparseOp<T> {
    fn new(m: &Mat<T>, n: usize) -> Self {
        let cols = (0..m.cols())
            .map(|c| (0..m.rows()).filter(|&r| !m[(r, c)].is_zero()).map(|r| (r, m[(r, c)].clone())).collect())
            .collect();
        SparseOp { n, cols }
    }

    /// Applies the operator on legs `(x, y)` of a vector on `H ⊗ H ⊗ H`.
    fn apply(&self, legs: (usize, usize), v: &[T]) -> Vec<T> {
        let n = self.n;
        let mut out = vec![T::zero(); v.len()];
        for (idx, val) in v.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let mut ix = [idx / (n * n), (idx / n) % n, idx % n];
            let c = ix[legs.0] * n + ix[legs.1];
            for (r, w) in &self.cols[c] {
                ix[legs.0] = r / n;
                ix[legs.1] = r % n;
                let o = &mut out[ix[0] * n * n + ix[1] * n + ix[2]];
                *o = o.clone() + w.clone() * val.clone();
            }
        }
        out
    }
}

fn check_cap(n: usize, cap: Option<usize>) -> Result<()> {
    let cap = cap.unwrap_or(PENTAGON_DIM_CAP);
    if n > cap {
        return Err(Error::DimensionTooLarge { dim: n, cap });
    }
    Ok(())
}

/// Frobenius norm of `Σ_k (L_k − R_k) applied to each basis vector`, where
/// each side is a product of leg operators applied right-to-left.
fn leg_identity_residual<T: Scalar>(
    n: usize,
    lhs: &[(&SparseOp<T>, (usize, usize))],
    rhs: &[(&SparseOp<T>, (usize, usize))],
) -> f64 {
    let dim = n * n * n;
    let mut total = 0.0;
    for col in 0..dim {
        let mut l = basis::<T>(dim, col);
        for (op, legs) in lhs.iter().rev() {
            l = op.apply(*legs, &l);
        }
        let mut r = basis::<T>(dim, col);
        for (op, legs) in rhs.iter().rev() {
            r = op.apply(*legs, &r);
        }
        let d = vec_dist(&l, &r);
        total += d * d;
    }
    total.sqrt()
}

/// `‖W₁₂W₁₃W₂₃ − W₂₃W₁₂‖` (Frobenius, in `Λ`-coordinates). `cap` overrides
/// the default dimension limit.
pub fn check_pentagon<T: Scalar>(w: &MultUnitary<T>, cap: Option<usize>) -> Result<f64> {
    let n = w.n();
    check_cap(n, cap)?;
    let op = SparseOp::new(&w.w, n);
    Ok(leg_identity_residual(n, &[(&op, (0, 1)), (&op, (0, 2)), (&op, (1, 2))], &[(&op, (1, 2)), (&op, (0, 1))]))
}

/// Pentagon residual for a frame-coordinate unitary given in floating point.
pub fn check_pentagon_matrix(w: &Mat<C64>, cap: Option<usize>) -> Result<f64> {
    check_pentagon(&MultUnitary { w: w.clone(), transfer: Mat::identity(w.rows()) }, cap)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImplementationReport {
    /// `W*(1 ⊗ π(a))W = (π ⊗ π)Δ(a)`.
    pub delta_r: f64,
    /// `W(π̂(â) ⊗ 1)W* = (π̂ ⊗ π̂)Δ̂(â)`.
    pub delta_hat_r: f64,
    /// `W₁₂*W₂₃W₁₂ = W₁₃W₂₃`.
    pub leg_formula: f64,
    /// `Δ_r(1) = 1`, when `A` is unital.
    pub unit: Option<f64>,
    /// `W` lies in `span(π(A) ⊗ π̂(Â))`.
    pub membership: bool,
}

/// `π̂(â)` on `H` via `Λ̂(b̂) = Λ(b)`: left multiplication in `Â`.
pub fn pi_hat<T: Scalar>(dual: &DualPresentation<T>, coords: &[T]) -> Mat<T> {
    dual.dual.algebra.left_mult_matrix(coords)
}

fn tensor_rep<T: Scalar>(x: &[T], n: usize, rep: impl Fn(&[T]) -> Mat<T>) -> Mat<T> {
    let mut out = Mat::zeros(n * n, n * n);
    for (c, v) in x.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let k = rep(&basis(n, c / n)).kron(&rep(&basis(n, c % n))).scale(v);
        out = &out + &k;
    }
    out
}

pub fn check_implementations<T: Scalar>(
    qg: &QuantumGroup<T>,
    w: &MultUnitary<T>,
    gns: &GnsPair<T>,
    dual: &DualPresentation<T>,
    cap: Option<usize>,
    tol: f64,
) -> Result<ImplementationReport> {
    let n = qg.dim();
    check_cap(n, cap)?;
    let w_adj = gns.adjoint2(&w.w);
    let id = Mat::identity(n);
    let mut delta_r: f64 = 0.0;
    let mut delta_hat_r: f64 = 0.0;
    for i in 0..n {
        let bi = basis(n, i);
        let lhs = w_adj.matmul(&id.kron(&gns.pi_lambda(&bi))).matmul(&w.w);
        let rhs = tensor_rep(&qg.hopf.delta(&bi), n, |x| gns.pi_lambda(x));
        delta_r = delta_r.max(lhs.dist(&rhs));
        let lhs = w.w.matmul(&pi_hat(dual, &bi).kron(&id)).matmul(&w_adj);
        let rhs = tensor_rep(&dual.dual.hopf.delta(&bi), n, |x| pi_hat(dual, x));
        delta_hat_r = delta_hat_r.max(lhs.dist(&rhs));
    }
    let unit = qg.algebra.unit().map(|u| {
        let p = gns.pi_lambda(u);
        w_adj.matmul(&id.kron(&p)).matmul(&w.w).dist(&Mat::identity(n * n))
    });
    let op = SparseOp::new(&w.w, n);
    let op_adj = SparseOp::new(&w_adj, n);
    let leg_formula =
        leg_identity_residual(n, &[(&op_adj, (0, 1)), (&op, (1, 2)), (&op, (0, 1))], &[(&op, (0, 2)), (&op, (1, 2))]);

    // Membership: vec(W) against vec(π(b_i) ⊗ π̂(â_j)).
    let mut span = Mat::zeros(n.pow(4), n * n + 1);
    for i in 0..n {
        let p = gns.pi_lambda(&basis(n, i));
        for j in 0..n {
            let k = p.kron(&pi_hat(dual, &basis(n, j)));
            for (r, v) in k.data().iter().enumerate() {
                span[(r, i * n + j)] = v.clone();
            }
        }
    }
    let base_rank = rank(&span, tol);
    for (r, v) in w.w.data().iter().enumerate() {
        span[(r, n * n)] = v.clone();
    }
    let membership = rank(&span, tol) == base_rank;
    Ok(ImplementationReport { delta_r, delta_hat_r, leg_formula, unit, membership })
}

/// Residual of `W*(e_y ⊗ e_x) = e_{yx} ⊗ e_x` for a group algebra, where
/// `e_x = Λ(x⁻¹)`.
pub fn group_w_formula_residual<T: Scalar>(
    g: &crate::groups::FiniteGroup,
    w: &MultUnitary<T>,
    gns: &GnsPair<T>,
) -> f64 {
    let n = g.order();
    let w_adj = gns.adjoint2(&w.w);
    let e = |x: usize| g.inv(x);
    let mut total = 0.0;
    for y in 0..n {
        for x in 0..n {
            let col = w_adj.col(e(y) * n + e(x));
            let target = basis::<T>(n * n, e(g.mul(y, x)) * n + e(x));
            let d = vec_dist(&col, &target);
            total += d * d;
        }
    }
    f64::sqrt(total)
}

/// The opposite quantum group `(A, Δ_op)` with antipode `S⁻¹`, and its `W_op`
/// in the same GNS space.
pub fn build_opposite<T: Scalar>(qg: &QuantumGroup<T>, tol: f64) -> Result<(QuantumGroup<T>, MultUnitary<T>)> {
    if !qg.algebra.is_unital() {
        return Err(Error::NotCompactType);
    }
    let s_inv = inverse(qg.hopf.antipode_matrix(), tol).map_err(|e| Error::from_solve("inverse antipode", e))?;
    let hopf = HopfStructure::new(qg.hopf.flipped_delta(), qg.hopf.epsilon().clone(), s_inv);
    let op = HopfAlgebra { algebra: qg.algebra.clone(), hopf };
    let w = build_w(&op, tol)?;
    let op_qg = QuantumGroup::new(op, tol)?;
    Ok((op_qg, w))
}
