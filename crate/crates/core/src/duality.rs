//! The dual quantum group `Â = {φa}` and the canonical double-dual map.
//!
//! A functional on `A` is handled through its values on the basis. The dual
//! basis is `â_i = a_i φ`, `â_i(x) = φ(x a_i)`, so the pairing matrix
//! `P[i][j] = â_i(a_j)` converts values `f` to dual coordinates by `Pᵀc = f`.

use crate::algebra::{LinearFunctional, StarAlgebra};
use crate::error::{Error, Result};
use crate::hopf::{AxiomReport, HopfAlgebra, HopfStructure, QuantumGroup};
use crate::matrix::{inverse, solve, vec_dist, Mat};
use crate::scalar::Scalar;

/// Which conjugation placement produced a valid dual involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionReading {
    /// `ω*(a) = conj(ω(S(a)^*))`
    AntipodeThenStar,
    /// `ω*(a) = conj(ω(S(a^*)))`
    StarThenAntipode,
}

impl InvolutionReading {
    pub fn formula(self) -> &'static str {
        match self {
            InvolutionReading::AntipodeThenStar => "ω*(a) = conj(ω(S(a)*))",
            InvolutionReading::StarThenAntipode => "ω*(a) = conj(ω(S(a*)))",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualPresentation<T> {
    pub dual: HopfAlgebra<T>,
    /// `P[i][j] = â_i(a_j) = φ(a_j a_i)`.
    pub pairing: Mat<T>,
    /// Right Haar integral `ψ̂(â) = ε(a)`.
    pub haar_right: LinearFunctional<T>,
    pub reading: InvolutionReading,
    pub report: AxiomReport,
}

impl<T: Scalar> DualPresentation<T> {
    /// Dual coordinates of a functional given by its values on the primal basis.
    pub fn coords_of(&self, values: &[T], tol: f64) -> Result<Vec<T>> {
        let c = solve(&self.pairing.transpose(), &Mat::from_row_major(values.len(), 1, values.to_vec()), tol)
            .map_err(|e| Error::from_solve("dual coordinates", e))?;
        Ok(c.col(0))
    }

    /// Values on the primal basis of the functional with dual coordinates `c`.
    pub fn values_of(&self, c: &[T]) -> Vec<T> {
        self.pairing.row_combination(c)
    }

    /// Solves the left Haar integral of `Â` and packages the dual quantum group.
    pub fn quantum_group(&self, tol: f64) -> Result<QuantumGroup<T>> {
        QuantumGroup::new(self.dual.clone(), tol)
    }
}

/// Builds `Â` with product, involution, comultiplication, counit and antipode.
pub fn build_dual<T: Scalar>(qg: &QuantumGroup<T>, tol: f64) -> Result<DualPresentation<T>> {
    let a = &qg.algebra;
    let h = &qg.hopf;
    let phi = qg.phi();
    let n = a.dim();
    let pairing = Mat::from_fn(n, n, |i, j| phi.eval(a.basis_product(j, i)));
    let pred = a.functional_predicates(phi, crate::algebra::PSD_THRESHOLD);
    if !pred.faithful {
        return Err(Error::NotFaithful { min_eigenvalue: pred.min_eigenvalue });
    }
    let p_inv = inverse(&pairing, tol).map_err(|e| Error::from_solve("pairing inverse", e))?;
    let pt_inv = p_inv.transpose();
    let to_coords = |values: &Mat<T>| -> Mat<T> { pt_inv.matmul(values) };
    let basis = |k: usize| {
        let mut v = vec![T::zero(); n];
        v[k] = T::one();
        v
    };

    // Product: (ω₁ω₂)(b_j) = (ω₁ ⊗ ω₂)Δ(b_j); one column of values per pair (i, k).
    let deltas: Vec<Vec<T>> = (0..n).map(|j| h.delta(&basis(j))).collect();
    let mut values = Mat::zeros(n, n * n);
    for i in 0..n {
        for k in 0..n {
            let w =
                LinearFunctional::new(pairing.row(i).to_vec()).tensor(&LinearFunctional::new(pairing.row(k).to_vec()));
            for (j, d) in deltas.iter().enumerate() {
                values[(j, i * n + k)] = w.eval(d);
            }
        }
    }
    let prod_coords = to_coords(&values);
    let mut mult = vec![T::zero(); n * n * n];
    for c in 0..n * n {
        for r in 0..n {
            mult[c * n + r] = prod_coords[(r, c)].clone();
        }
    }

    // Comultiplication: Δ̂(â_i)(b_j ⊗ b_l) = â_i(b_j b_l), coordinates P^{-T} V P^{-1}.
    let mut delta = Mat::zeros(n, n * n);
    for i in 0..n {
        let v = Mat::from_fn(n, n, |j, l| {
            pairing.row(i).iter().zip(a.basis_product(j, l)).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        });
        let c = pt_inv.matmul(&v).matmul(&p_inv);
        for (k, x) in c.data().iter().enumerate() {
            delta[(i, k)] = x.clone();
        }
    }

    let epsilon = LinearFunctional::new((0..n).map(|i| phi.coeffs[i].clone()).collect());
    let s_values = Mat::from_fn(n, n, |j, i| {
        pairing.row(i).iter().zip(h.antipode(&basis(j))).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y)
    });
    let antipode = to_coords(&s_values).transpose();
    let unit_values = Mat::from_row_major(n, 1, h.epsilon().coeffs.clone());
    let unit = to_coords(&unit_values).col(0);
    let haar_right = LinearFunctional::new(h.epsilon().coeffs.clone());
    let labels: Vec<String> = a.labels().iter().map(|l| format!("φ·{l}")).collect();

    let mut last = None;
    for reading in [InvolutionReading::AntipodeThenStar, InvolutionReading::StarThenAntipode] {
        let star_values = Mat::from_fn(n, n, |j, i| {
            let x = match reading {
                InvolutionReading::AntipodeThenStar => a.star(&h.antipode(&basis(j))),
                InvolutionReading::StarThenAntipode => h.antipode(&a.star(&basis(j))),
            };
            pairing.row(i).iter().zip(x).fold(T::zero(), |acc, (p, v)| acc + p.clone() * v).conj()
        });
        let star = to_coords(&star_values).transpose();
        let carrier = StarAlgebra::new(labels.clone(), mult.clone(), star, Some(unit.clone()))?;
        let dual = HopfAlgebra {
            algebra: carrier,
            hopf: HopfStructure::new(delta.clone(), epsilon.clone(), antipode.clone()),
        };
        let report = dual.verify(tol.max(1e-12));
        let structure_ok = dual.algebra.structure_report(tol).max_residual() <= tol.max(1e-10);
        if report.passes(tol.max(1e-10)) && structure_ok {
            let presentation = DualPresentation { dual, pairing: pairing.clone(), haar_right, reading, report };
            let right = presentation.dual.right_invariance_residual(&presentation.haar_right);
            if right > tol.max(1e-10) {
                return Err(Error::InvalidStructure(format!("ψ̂ is not right invariant (residual {right:.3e})")));
            }
            return Ok(presentation);
        }
        last = Some(report.max_residual());
    }
    Err(Error::InvalidStructure(format!(
        "dual fails the Hopf axioms under both involution readings (residual {:.3e})",
        last.unwrap_or(f64::NAN)
    )))
}

/// Residuals of a candidate isomorphism between two Hopf *-algebras.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoResiduals {
    pub invertible: bool,
    pub multiplicative: f64,
    pub star: f64,
    pub comultiplication: f64,
    pub counit: f64,
    pub antipode: f64,
}

impl IsoResiduals {
    pub fn star_iso(&self, tol: f64) -> bool {
        self.invertible && self.multiplicative <= tol && self.star <= tol
    }

    pub fn intertwines_delta(&self, tol: f64) -> bool {
        self.comultiplication <= tol
    }

    pub fn max_residual(&self) -> f64 {
        [self.multiplicative, self.star, self.comultiplication, self.counit, self.antipode]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Checks that `m` (column `j` is the image of basis `j`) is an isomorphism
/// of Hopf *-algebras from `src` to `dst`.
pub fn check_isomorphism<T: Scalar>(src: &HopfAlgebra<T>, dst: &HopfAlgebra<T>, m: &Mat<T>, tol: f64) -> IsoResiduals {
    let n = src.dim();
    let img = |x: &[T]| m.mul_vec(x);
    let basis = |k: usize| {
        let mut v = vec![T::zero(); n];
        v[k] = T::one();
        v
    };
    let mm = m.kron(m);
    let mut mult: f64 = 0.0;
    let mut star: f64 = 0.0;
    let mut comult: f64 = 0.0;
    let mut counit: f64 = 0.0;
    let mut antipode: f64 = 0.0;
    for i in 0..n {
        let bi = basis(i);
        star = star.max(vec_dist(&img(&src.algebra.star(&bi)), &dst.algebra.star(&img(&bi))));
        comult = comult.max(vec_dist(&mm.mul_vec(&src.hopf.delta(&bi)), &dst.hopf.delta(&img(&bi))));
        counit = counit.max((src.hopf.epsilon().eval(&bi) - dst.hopf.epsilon().eval(&img(&bi))).modulus());
        antipode = antipode.max(vec_dist(&img(&src.hopf.antipode(&bi)), &dst.hopf.antipode(&img(&bi))));
        for j in 0..n {
            let bj = basis(j);
            let lhs = img(src.algebra.basis_product(i, j));
            let rhs = dst.algebra.mul(&img(&bi), &img(&bj));
            mult = mult.max(vec_dist(&lhs, &rhs));
        }
    }
    let invertible = crate::matrix::rank(m, tol) == n && dst.dim() == n;
    IsoResiduals { invertible, multiplicative: mult, star, comultiplication: comult, counit, antipode }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QGIsomorphism<T> {
    pub matrix: Mat<T>,
    pub star_iso: bool,
    pub intertwines_delta: bool,
    pub residuals: IsoResiduals,
}

/// The canonical map `π(a)(ω) = ω(a)` from `A` into the dual of its dual.
pub fn double_dual_iso<T: Scalar>(qg: &QuantumGroup<T>, tol: f64) -> Result<QGIsomorphism<T>> {
    let first = build_dual(qg, tol)?;
    let dual_qg = first.quantum_group(tol)?;
    let second = build_dual(&dual_qg, tol)?;
    // π(b_j) has values P[i][j] on â_i; its coordinates in the double dual solve P̂ᵀ c = P e_j.
    let matrix =
        solve(&second.pairing.transpose(), &first.pairing, tol).map_err(|e| Error::from_solve("double dual map", e))?;
    let residuals = check_isomorphism(&qg.hopf_algebra(), &second.dual, &matrix, tol);
    let check_tol = tol.max(1e-10);
    Ok(QGIsomorphism {
        star_iso: residuals.star_iso(check_tol),
        intertwines_delta: residuals.intertwines_delta(check_tol),
        matrix,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, function_algebra, group_algebra, symmetric3};
    use crate::scalar::QC;

    #[test]
    fn dual_of_c_z2_is_k_z2() {
        let g = cyclic(2);
        let qg = QuantumGroup::new(group_algebra::<QC>(&g), 0.0).unwrap();
        let d = build_dual(&qg, 0.0).unwrap();
        assert_eq!(d.report.max_residual(), 0.0);
        let k = function_algebra::<QC>(&g);
        let m = Mat::from_fn(2, 2, |r, x| if r == g.inv(x) { QC::from_i64(1) } else { QC::from_i64(0) });
        let iso = check_isomorphism(&d.dual, &k, &m, 0.0);
        assert!(iso.star_iso(0.0) && iso.intertwines_delta(0.0));
        assert_eq!(iso.max_residual(), 0.0);
    }

    #[test]
    fn double_dual_of_k_s3() {
        let qg = QuantumGroup::new(function_algebra::<QC>(&symmetric3()), 0.0).unwrap();
        let iso = double_dual_iso(&qg, 0.0).unwrap();
        assert!(iso.star_iso && iso.intertwines_delta);
        assert_eq!(iso.residuals.max_residual(), 0.0);
    }
}
