//! Finite-scale co-amenability and amenability checks.
//!
//! At finite dimension every algebraic quantum group is co-amenable and
//! amenable; what can be checked is that the characterizing identities hold
//! with the objects the theory prescribes, and that the natural wrong
//! candidates fail them.

use std::collections::BTreeMap;

use crate::algebra::{tensor_mul, tensor_star, LinearFunctional, PSD_THRESHOLD};
use crate::duality::DualPresentation;
use crate::error::{Error, Result};
use crate::gns::{pi_hat, GnsPair, MultUnitary};
use crate::groups::FiniteGroup;
use crate::hopf::{leg_mul, Leg, QuantumGroup};
use crate::matrix::{op_norm, solve, vec_norm, Mat};
use crate::sampling::{random_coeffs, rng};
use crate::scalar::{Scalar, C64};

fn basis<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounitBound {
    /// Largest `|ε(a)| / ‖π(a)‖` over the samples.
    pub ratio_max: f64,
    /// The ratio at `a = 1`, in compact type.
    pub unit_ratio: Option<f64>,
}

/// `|ε(a)| ≤ ‖π(a)‖` over seeded random elements.
pub fn counit_bound_check<T: Scalar>(qg: &QuantumGroup<T>, gns: &GnsPair<T>, samples: usize, seed: u64) -> CounitBound {
    let n = qg.dim();
    let eps = qg.epsilon().to_c64();
    let ratio = |a: &[C64]| -> f64 {
        let pi = gns.to_frame(&gns.pi_lambda(&a.iter().map(|z| T::from_c64(*z)).collect::<Vec<_>>()));
        let norm = op_norm(&pi);
        if norm == 0.0 {
            0.0
        } else {
            eps.eval(a).norm() / norm
        }
    };
    let mut r = rng(seed);
    let mut ratio_max: f64 = 0.0;
    for _ in 0..samples {
        ratio_max = ratio_max.max(ratio(&random_coeffs(&mut r, n)));
    }
    let unit_ratio = qg.algebra.unit().map(|u| ratio(&u.iter().map(Scalar::to_c64).collect::<Vec<_>>()));
    CounitBound { ratio_max, unit_ratio }
}

/// `W = Σ_k π(b_k) ⊗ X_k` in `Λ`-coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct WDecomposition<T> {
    pub x: Vec<Mat<T>>,
}

impl<T: Scalar> WDecomposition<T> {
    pub fn new(w: &MultUnitary<T>, gns: &GnsPair<T>, tol: f64) -> Result<Self> {
        let n = gns.dim();
        let mut pi = Mat::zeros(n * n, n);
        for k in 0..n {
            let p = gns.pi_lambda(&basis(n, k));
            for i in 0..n {
                for i2 in 0..n {
                    pi[(i * n + i2, k)] = p[(i, i2)].clone();
                }
            }
        }
        let reshuffled = Mat::from_fn(n * n, n * n, |r, c| {
            let (i, i2) = (r / n, r % n);
            let (j, j2) = (c / n, c % n);
            w.w[(i * n + j, i2 * n + j2)].clone()
        });
        let sol = solve(&pi, &reshuffled, tol).map_err(|e| Error::from_solve("first-leg decomposition of W", e))?;
        let x = (0..n).map(|k| Mat::from_row_major(n, n, sol.row(k).to_vec())).collect();
        Ok(WDecomposition { x })
    }

    /// `(ω ⊗ ι)(W)` for `ω` on `π(A)` given by its values `ω(π(b_k))`.
    pub fn slice_first_leg(&self, values: &[T]) -> Mat<T> {
        let n = self.x[0].rows();
        let mut out = Mat::zeros(n, n);
        for (v, x) in values.iter().zip(&self.x) {
            if !v.is_zero() {
                out = &out + &x.scale(v);
            }
        }
        out
    }
}

/// `‖(ω ⊗ ι)(W) − 1‖` for the functional `ω` transported through `π`; with
/// `ω = ε` this is the counit slice.
pub fn slice_counit_w<T: Scalar>(decomp: &WDecomposition<T>, omega: &LinearFunctional<T>) -> f64 {
    let s = decomp.slice_first_leg(&omega.coeffs);
    s.dist(&Mat::identity(s.rows()))
}

/// `max_w ‖W(v ⊗ w) − v ⊗ w‖` for frame vectors.
pub fn almost_invariant_residual(w_frame: &Mat<C64>, v: &[C64], tests: &[Vec<C64>]) -> f64 {
    tests
        .iter()
        .map(|t| {
            let vw: Vec<C64> = v.iter().flat_map(|a| t.iter().map(move |b| a * b)).collect();
            let image = w_frame.mul_vec(&vw);
            let diff: Vec<C64> = image.iter().zip(&vw).map(|(x, y)| x - y).collect();
            vec_norm(&diff)
        })
        .fold(0.0, f64::max)
}

/// The vector state `ω_{Λ(1)}` as a functional on `A`: `φ / φ(1)`.
pub fn unit_vector_state<T: Scalar>(qg: &QuantumGroup<T>) -> Result<LinearFunctional<T>> {
    let u = qg.algebra.unit().ok_or(Error::NotCompactType)?;
    let norm = qg.phi().eval(u);
    Ok(qg.phi().scale(&(T::one() / norm)))
}

/// `max |m((ι ⊗ ω)Δ_r(x)) − ω(1)m(x)|` over basis `x` and the dual basis of
/// normal functionals `ω` on `π(A)`; `m` is given by its values on `π(b_i)`.
pub fn invariant_mean_check<T: Scalar>(qg: &QuantumGroup<T>, m: &LinearFunctional<T>, tol: f64) -> Result<f64> {
    let n = qg.dim();
    let unit = qg.algebra.unit().ok_or(Error::NotCompactType)?;
    let mu = m.eval(unit);
    if (mu.to_c64() - C64::new(1.0, 0.0)).norm() > tol.max(1e-12) {
        return Err(Error::NotAState(format!("m(1) = {}", mu.to_c64())));
    }
    let pred = qg.algebra.functional_predicates(m, PSD_THRESHOLD);
    if !pred.positive {
        return Err(Error::NotAState(format!("not positive (min Gram eigenvalue {:.3e})", pred.min_eigenvalue)));
    }
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let d = qg.hopf.delta(&basis(n, j));
        for k in 0..n {
            let lhs = (0..n).fold(T::zero(), |acc, p| acc + d[p * n + k].clone() * m.coeffs[p].clone());
            let rhs = unit[k].clone() * m.coeffs[j].clone();
            worst = worst.max((lhs - rhs).modulus());
        }
    }
    Ok(worst)
}

/// Residuals of the evaluation means `m = δ_x` on `K(Γ)`, one per point.
pub fn evaluation_mean_residuals<T: Scalar>(k: &QuantumGroup<T>, tol: f64) -> Result<Vec<f64>> {
    let n = k.dim();
    (0..n).map(|x| invariant_mean_check(k, &LinearFunctional::new(basis(n, x)), tol)).collect()
}

/// `(ι ⊗ ω_v)(X)` for an operator on `H ⊗ H` and vector `v`, both in an
/// orthonormal frame.
pub fn slice_vector_state<T: Scalar>(x: &Mat<T>, v: &[T]) -> Mat<T> {
    let n = v.len();
    Mat::from_fn(n, n, |a, b| {
        let mut acc = T::zero();
        for (c, vc) in v.iter().enumerate() {
            if vc.is_zero() {
                continue;
            }
            for (d, vd) in v.iter().enumerate() {
                if !vd.is_zero() {
                    acc = acc + vc.conj() * x[(a * n + c, b * n + d)].clone() * vd.clone();
                }
            }
        }
        acc
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationResiduals {
    /// `π̂(R_x f) = (ι ⊗ ω_{e_x})(W(π̂(f) ⊗ 1)W*)`.
    pub right_translation: f64,
    /// The same with `L_x f(y) = f(xy)` in place of `R_x`.
    pub left_translation: f64,
    /// `W*(e_y ⊗ e_x) = e_{yx} ⊗ e_x`.
    pub w_formula: f64,
}

/// The translation identity on `ℓ²(Γ)` for the group algebra pipeline. The
/// GNS frame of `C(Γ)` is `Λ`-coordinates because the Gram matrix is `1`.
pub fn translation_identity_check<T: Scalar>(
    g: &FiniteGroup,
    w: &MultUnitary<T>,
    gns: &GnsPair<T>,
    dual: &DualPresentation<T>,
) -> TranslationResiduals {
    let n = g.order();
    let w_adj = gns.adjoint2(&w.w);
    let id = Mat::identity(n);
    // The function e_z on Γ is the dual basis element with index z⁻¹.
    let pi_hat_fn = |f: &[T]| {
        let mut coords = vec![T::zero(); n];
        for (z, v) in f.iter().enumerate() {
            coords[g.inv(z)] = v.clone();
        }
        pi_hat(dual, &coords)
    };
    let e = |x: usize| basis::<T>(n, g.inv(x));
    let mut right: f64 = 0.0;
    let mut left: f64 = 0.0;
    for x in 0..n {
        for fz in 0..n {
            let f = basis::<T>(n, fz);
            let conj = w.w.matmul(&pi_hat_fn(&f).kron(&id)).matmul(&w_adj);
            let rhs = slice_vector_state(&conj, &e(x));
            let rf: Vec<T> = (0..n).map(|y| f[g.mul(y, x)].clone()).collect();
            let lf: Vec<T> = (0..n).map(|y| f[g.mul(x, y)].clone()).collect();
            right = right.max(pi_hat_fn(&rf).dist(&rhs));
            left = left.max(pi_hat_fn(&lf).dist(&rhs));
        }
    }
    TranslationResiduals {
        right_translation: right,
        left_translation: left,
        w_formula: crate::gns::group_w_formula_residual(g, w, gns),
    }
}

/// `max |(φ ⊗ φ)(Δ(a)^*(b ⊗ 1)Δ(a)) − φ(b)|` over random `a` with
/// `φ(a^*a) = scale` and random `b`; `scale = 1` is the identity being tested.
pub fn tracial_mean_identity<T: Scalar>(
    qg: &QuantumGroup<T>,
    samples: usize,
    seed: u64,
    scale: f64,
    tol: f64,
) -> Result<f64> {
    let trace = qg.algebra.trace_residual(qg.phi());
    if trace > tol.max(1e-10) {
        return Err(Error::NotTracial { residual: trace });
    }
    let q = qg.to_c64();
    let a_alg = &q.algebra;
    let phi = q.phi();
    let pp = phi.tensor(phi);
    let n = q.dim();
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let mut a = random_coeffs(&mut r, n);
        let norm2 = phi.eval(&a_alg.mul(&a_alg.star(&a), &a)).re;
        let s = (scale / norm2).sqrt();
        a.iter_mut().for_each(|x| *x *= s);
        let b = random_coeffs(&mut r, n);
        let da = q.hopf.delta(&a);
        let inner = leg_mul(a_alg, &da, &b, Leg::LeftFirst);
        let full = tensor_mul(a_alg, a_alg, &tensor_star(a_alg, a_alg, &da), &inner);
        worst = worst.max((pp.eval(&full) - phi.eval(&b)).norm());
    }
    Ok(worst)
}

/// `(φ((a^*a)^n))^{1/n}` for `n = 1..=max_n`, with `φ` normalized to a state.
pub fn moment_norm<T: Scalar>(qg: &QuantumGroup<T>, a: &[C64], max_n: usize) -> Result<Vec<f64>> {
    let q = qg.to_c64();
    let alg = &q.algebra;
    let phi = match alg.unit() {
        Some(u) => q.phi().scale(&(C64::new(1.0, 0.0) / q.phi().eval(u))),
        None => q.phi().clone(),
    };
    let x = alg.mul(&alg.star(a), a);
    let mut y = x.clone();
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let v = phi.eval(&y).re;
        out.push(if v <= 0.0 { 0.0 } else { ((v.ln() + log_scale) / n as f64).exp() });
        y = alg.mul(&y, &x);
        let m = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            log_scale += m.ln();
            y.iter_mut().for_each(|z| *z /= m);
        }
    }
    Ok(out)
}

/// `ε_r((ι ⊗ ω_v)(W)) = ω_v(1)` for `v = Λ(b_j)`; returns the worst defect.
pub fn counit_state_multiplicative_at_w<T: Scalar>(
    qg: &QuantumGroup<T>,
    w: &MultUnitary<T>,
    gns: &GnsPair<T>,
    tol: f64,
) -> Result<f64> {
    let n = qg.dim();
    // ⟨Yξ, η⟩ = ⟨W(ξ ⊗ v), η ⊗ v⟩ gives K Y = Σ conj(v_c) ((K ⊗ K)W)_{(a,c),(b,d)} v_d.
    let metric = gns.gram.transpose();
    let kw = metric.kron(&metric).matmul(&w.w);
    let metric_inv = crate::matrix::inverse(&metric, tol).map_err(|e| Error::from_solve("GNS metric", e))?;
    let mut pi = Mat::zeros(n * n, n);
    for k in 0..n {
        let p = gns.pi_lambda(&basis(n, k));
        for (r, v) in p.data().iter().enumerate() {
            pi[(r, k)] = v.clone();
        }
    }
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let v = basis::<T>(n, j);
        let y = metric_inv.matmul(&slice_vector_state(&kw, &v));
        let coeffs = solve(&pi, &Mat::from_row_major(n * n, 1, y.data().to_vec()), tol)
            .map_err(|e| Error::from_solve("(ι⊗ω_v)(W) in π(A)", e))?;
        let lhs = qg.epsilon().eval(&coeffs.col(0));
        worst = worst.max((lhs - gns.inner(&v, &v)).modulus());
    }
    Ok(worst)
}

/// `(ε·σ)(x) = (σ·ε)(x) = σ(x)` for the dual basis of functionals `σ`, with
/// the product `(ω₁·ω₂)(x) = (ω₁ ⊗ ω₂)Δ_r(x)`.
pub fn approximate_unit_residual<T: Scalar>(qg: &QuantumGroup<T>) -> f64 {
    let n = qg.dim();
    let h = qg.hopf_algebra();
    let eps = qg.epsilon();
    (0..n)
        .map(|k| {
            let sigma = LinearFunctional::new(basis::<T>(n, k));
            let l = h.convolve(eps, &sigma);
            let r = h.convolve(&sigma, eps);
            crate::matrix::vec_dist(&l.coeffs, &sigma.coeffs).max(crate::matrix::vec_dist(&r.coeffs, &sigma.coeffs))
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmenReport {
    pub counit_bound_ratio_max: f64,
    pub slice_residual: f64,
    pub mean_residuals: BTreeMap<String, f64>,
    pub identity_residuals: BTreeMap<String, f64>,
}

/// Runs every applicable check on one quantum group.
pub fn amen_report<T: Scalar>(
    qg: &QuantumGroup<T>,
    gns: &GnsPair<T>,
    w: &MultUnitary<T>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<AmenReport> {
    let bound = counit_bound_check(qg, gns, samples, seed);
    let decomp = WDecomposition::new(w, gns, tol)?;
    let slice_residual = slice_counit_w(&decomp, qg.epsilon());
    let mut mean_residuals = BTreeMap::new();
    if qg.algebra.is_unital() {
        let m = unit_vector_state(qg)?;
        mean_residuals.insert("unit_vector_state".to_string(), invariant_mean_check(qg, &m, tol)?);
    }
    let mut identity_residuals = BTreeMap::new();
    identity_residuals
        .insert("counit_multiplicative_at_w".to_string(), counit_state_multiplicative_at_w(qg, w, gns, tol)?);
    identity_residuals.insert("approximate_unit".to_string(), approximate_unit_residual(qg));
    if let Some(u) = bound.unit_ratio {
        identity_residuals.insert("counit_ratio_at_unit".to_string(), (u - 1.0).abs());
    }
    if qg.is_tracial(tol.max(1e-10)) && qg.algebra.is_unital() {
        let phi_state = unit_vector_state(qg)?;
        let normalized =
            QuantumGroup { haar: crate::hopf::HaarData { phi: phi_state, ..qg.haar.clone() }, ..qg.clone() };
        identity_residuals
            .insert("tracial_mean".to_string(), tracial_mean_identity(&normalized, samples.min(200), seed, 1.0, tol)?);
    }
    Ok(AmenReport { counit_bound_ratio_max: bound.ratio_max, slice_residual, mean_residuals, identity_residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::build_dual;
    use crate::gns::{build_gns, build_w};
    use crate::groups::{cyclic, function_algebra, group_algebra, symmetric3};
    use crate::scalar::QC;

    fn pipeline(g: &FiniteGroup) -> (QuantumGroup<QC>, GnsPair<QC>, MultUnitary<QC>) {
        let qg = QuantumGroup::new(group_algebra::<QC>(g), 0.0).unwrap();
        let gns = build_gns(&qg.algebra, qg.phi(), 0.0).unwrap();
        let w = build_w(&qg.hopf_algebra(), 0.0).unwrap();
        (qg, gns, w)
    }

    #[test]
    fn counit_slice_is_exact_and_sign_character_fails() {
        let (qg, gns, w) = pipeline(&cyclic(2));
        let d = WDecomposition::new(&w, &gns, 0.0).unwrap();
        assert_eq!(slice_counit_w(&d, qg.epsilon()), 0.0);
        let sign = LinearFunctional::new(vec![QC::from_i64(1), QC::from_i64(-1)]);
        assert!(slice_counit_w(&d, &sign) >= 1.0);
    }

    #[test]
    fn g_minus_one_has_zero_ratio() {
        let (qg, gns, _) = pipeline(&cyclic(2));
        let a = vec![QC::from_i64(-1), QC::from_i64(1)];
        let pi = gns.pi(&a);
        assert!((op_norm(&pi) - 2.0).abs() < 1e-12);
        assert_eq!(qg.epsilon().eval(&a), QC::from_i64(0));
    }

    #[test]
    fn translation_identity_on_s3() {
        let g = symmetric3();
        let (qg, gns, w) = pipeline(&g);
        let dual = build_dual(&qg, 0.0).unwrap();
        let r = translation_identity_check(&g, &w, &gns, &dual);
        assert_eq!(r.right_translation, 0.0);
        assert_eq!(r.w_formula, 0.0);
        assert!(r.left_translation > 0.1);
    }

    #[test]
    fn uniform_mean_is_the_only_invariant_evaluation_mix() {
        let g = symmetric3();
        let k = QuantumGroup::new(function_algebra::<QC>(&g), 0.0).unwrap();
        let uniform = LinearFunctional::new(vec![crate::scalar::qc(1, 6); 6]);
        assert_eq!(invariant_mean_check(&k, &uniform, 0.0).unwrap(), 0.0);
        assert!(evaluation_mean_residuals(&k, 0.0).unwrap().iter().all(|&r| r >= 0.1));
    }

    #[test]
    fn moment_norm_of_one_plus_g() {
        let (qg, _, _) = pipeline(&cyclic(2));
        let a = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let seq = moment_norm(&qg, &a, 64).unwrap();
        // φ((a*a)^n) = (4^n + 0^n) / 2
        assert!((seq[0] - 2.0).abs() < 1e-12);
        assert!((seq[63] - 4.0 * 0.5f64.powf(1.0 / 64.0)).abs() < 1e-9);
    }

    #[test]
    fn tracial_identity_scales_with_the_norm_of_a() {
        let (qg, _, _) = pipeline(&symmetric3());
        assert!(tracial_mean_identity(&qg, 20, 7, 1.0, 1e-12).unwrap() < 1e-10);
        assert!(tracial_mean_identity(&qg, 20, 7, 4.0, 1e-12).unwrap() > 1e-3);
    }
}
