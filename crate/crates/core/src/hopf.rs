//! Multiplier Hopf *-algebra axioms, and solvers for the counit, antipode,
//! Haar integrals and the modular automorphism `ρ` of the Haar integral.
//!
//! The comultiplication is stored as an `n × n²` matrix whose row `i` holds
//! `Δ(b_i)` in the tensor basis `b_p ⊗ b_q ↦ p * n + q`. The antipode uses the
//! same row convention as the involution.

use crate::algebra::{tensor_mul, tensor_star, LinearFunctional, StarAlgebra, PSD_THRESHOLD};
use crate::error::{Error, Result};
use crate::matrix::{nullspace, rank, singular_values, solve, vec_dist, Mat};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HopfStructure<T> {
    delta: Mat<T>,
    epsilon: LinearFunctional<T>,
    antipode: Mat<T>,
}

impl<T: Scalar> HopfStructure<T> {
    pub fn new(delta: Mat<T>, epsilon: LinearFunctional<T>, antipode: Mat<T>) -> Self {
        HopfStructure { delta, epsilon, antipode }
    }

    /// Completes a comultiplication with a counit and antipode, solving for
    /// whichever of the two is not supplied.
    pub fn complete(
        algebra: &StarAlgebra<T>,
        delta: Mat<T>,
        epsilon: Option<LinearFunctional<T>>,
        antipode: Option<Mat<T>>,
        tol: f64,
    ) -> Result<Self> {
        let n = algebra.dim();
        if delta.rows() != n || delta.cols() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: delta.cols() });
        }
        let epsilon = match epsilon {
            Some(e) if e.dim() != n => return Err(Error::DimensionMismatch { expected: n, found: e.dim() }),
            Some(e) => e,
            None => solve_counit(algebra, &delta, tol)?,
        };
        let antipode = match antipode {
            Some(s) if s.rows() != n || s.cols() != n => {
                return Err(Error::DimensionMismatch { expected: n, found: s.rows() })
            }
            Some(s) => s,
            None => solve_antipode(algebra, &delta, &epsilon, tol)?,
        };
        Ok(HopfStructure { delta, epsilon, antipode })
    }

    pub fn delta_matrix(&self) -> &Mat<T> {
        &self.delta
    }

    pub fn epsilon(&self) -> &LinearFunctional<T> {
        &self.epsilon
    }

    pub fn antipode_matrix(&self) -> &Mat<T> {
        &self.antipode
    }

    pub fn dim(&self) -> usize {
        self.delta.rows()
    }

    pub fn delta(&self, x: &[T]) -> Vec<T> {
        self.delta.row_combination(x)
    }

    pub fn antipode(&self, x: &[T]) -> Vec<T> {
        self.antipode.row_combination(x)
    }

    /// `Δ^op = χ ∘ Δ`, keeping counit and antipode (the caller replaces `S` by `S⁻¹`).
    pub fn flipped_delta(&self) -> Mat<T> {
        let n = self.dim();
        Mat::from_fn(n, n * n, |i, c| self.delta[(i, (c % n) * n + c / n)].clone())
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> HopfStructure<U> {
        HopfStructure {
            delta: self.delta.map(&f),
            epsilon: LinearFunctional::new(self.epsilon.coeffs.iter().map(&f).collect()),
            antipode: self.antipode.map(&f),
        }
    }
}

/// Position of the single-factor multiplier in a product with a two-tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    /// `X (y ⊗ 1)`
    RightFirst,
    /// `X (1 ⊗ y)`
    RightSecond,
    /// `(y ⊗ 1) X`
    LeftFirst,
    /// `(1 ⊗ y) X`
    LeftSecond,
}

/// Multiplies a two-tensor by `y ⊗ 1` or `1 ⊗ y` without needing a unit.
pub fn leg_mul<T: Scalar>(alg: &StarAlgebra<T>, x: &[T], y: &[T], leg: Leg) -> Vec<T> {
    let n = alg.dim();
    let mut out = vec![T::zero(); n * n];
    for (c, xc) in x.iter().enumerate() {
        if xc.is_zero() {
            continue;
        }
        let (p, q) = (c / n, c % n);
        let basis = |k: usize| {
            let mut v = vec![T::zero(); n];
            v[k] = T::one();
            v
        };
        match leg {
            Leg::RightFirst | Leg::LeftFirst => {
                let prod = if leg == Leg::RightFirst { alg.mul(&basis(p), y) } else { alg.mul(y, &basis(p)) };
                for (r, v) in prod.into_iter().enumerate() {
                    if !v.is_zero() {
                        let o = &mut out[r * n + q];
                        *o = o.clone() + xc.clone() * v;
                    }
                }
            }
            Leg::RightSecond | Leg::LeftSecond => {
                let prod = if leg == Leg::RightSecond { alg.mul(&basis(q), y) } else { alg.mul(y, &basis(q)) };
                for (r, v) in prod.into_iter().enumerate() {
                    if !v.is_zero() {
                        let o = &mut out[p * n + r];
                        *o = o.clone() + xc.clone() * v;
                    }
                }
            }
        }
    }
    out
}

/// Rank and conditioning of one of the maps `a ⊗ b ↦ Δ(a)(b ⊗ 1)` etc.
#[derive(Clone, Debug, PartialEq)]
pub struct GaloisMap {
    pub name: &'static str,
    pub rank: usize,
    pub dim: usize,
    pub condition: f64,
}

impl GaloisMap {
    pub fn bijective(&self) -> bool {
        self.rank == self.dim
    }
}

/// Residuals of every Hopf axiom; a failed check is reported, not raised.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub coassociativity: f64,
    pub galois: Vec<GaloisMap>,
    pub delta_multiplicative: f64,
    pub delta_star: f64,
    pub counit: f64,
    pub counit_multiplicative: f64,
    pub counit_star: f64,
    pub antipode: f64,
    pub antipode_anti_multiplicative: f64,
    pub antipode_star: f64,
    pub s_squared_identity: bool,
}

impl AxiomReport {
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("coassociativity", self.coassociativity),
            ("delta_multiplicative", self.delta_multiplicative),
            ("delta_star", self.delta_star),
            ("counit", self.counit),
            ("counit_multiplicative", self.counit_multiplicative),
            ("counit_star", self.counit_star),
            ("antipode", self.antipode),
            ("antipode_anti_multiplicative", self.antipode_anti_multiplicative),
            ("antipode_star", self.antipode_star),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().map(|(_, r)| r).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.galois.iter().all(GaloisMap::bijective)
    }
}

/// An algebra together with a complete Hopf structure.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfAlgebra<T> {
    pub algebra: StarAlgebra<T>,
    pub hopf: HopfStructure<T>,
}

fn basis<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

impl<T: Scalar> HopfAlgebra<T> {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> HopfAlgebra<U> {
        HopfAlgebra { algebra: self.algebra.map_scalars(f), hopf: self.hopf.map_scalars(f) }
    }

    pub fn to_c64(&self) -> HopfAlgebra<crate::scalar::C64> {
        self.map_scalars(|x: &T| x.to_c64())
    }

    pub fn verify(&self, tol: f64) -> AxiomReport {
        let (a, h) = (&self.algebra, &self.hopf);
        let n = a.dim();
        let eps = h.epsilon();

        let mut coassoc: f64 = 0.0;
        for i in 0..n {
            let d = h.delta(&basis(n, i));
            let mut left = vec![T::zero(); n * n * n];
            let mut right = vec![T::zero(); n * n * n];
            for (c, v) in d.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let (p, q) = (c / n, c % n);
                for (e, w) in h.delta(&basis(n, p)).into_iter().enumerate() {
                    if !w.is_zero() {
                        let o = &mut left[e * n + q];
                        *o = o.clone() + v.clone() * w;
                    }
                }
                for (e, w) in h.delta(&basis(n, q)).into_iter().enumerate() {
                    if !w.is_zero() {
                        let o = &mut right[p * n * n + e];
                        *o = o.clone() + v.clone() * w;
                    }
                }
            }
            coassoc = coassoc.max(vec_dist(&left, &right));
        }

        let galois = self.galois_maps(tol);

        let mut mult: f64 = 0.0;
        let mut dstar: f64 = 0.0;
        let mut counit: f64 = 0.0;
        let mut antipode: f64 = 0.0;
        let mut anti: f64 = 0.0;
        let mut s_star: f64 = 0.0;
        for i in 0..n {
            let bi = basis(n, i);
            let di = h.delta(&bi);
            dstar = dstar.max(vec_dist(&h.delta(&a.star(&bi)), &tensor_star(a, a, &di)));
            let mut left = vec![T::zero(); n];
            let mut right = vec![T::zero(); n];
            for (c, v) in di.iter().enumerate() {
                let (p, q) = (c / n, c % n);
                left[q] = left[q].clone() + v.clone() * eps.coeffs[p].clone();
                right[p] = right[p].clone() + v.clone() * eps.coeffs[q].clone();
            }
            counit = counit.max(vec_dist(&left, &bi)).max(vec_dist(&right, &bi));
            s_star = s_star.max(vec_dist(&h.antipode(&a.star(&h.antipode(&a.star(&bi)))), &bi));
            for j in 0..n {
                let bj = basis(n, j);
                let dj = h.delta(&bj);
                let prod = a.basis_product(i, j).to_vec();
                mult = mult.max(vec_dist(&h.delta(&prod), &tensor_mul(a, a, &di, &dj)));
                anti = anti.max(vec_dist(&h.antipode(&prod), &a.mul(&h.antipode(&bj), &h.antipode(&bi))));
                let target: Vec<T> = bj.iter().map(|x| x.clone() * eps.coeffs[i].clone()).collect();
                // m(S ⊗ ι)(Δ(a)(1 ⊗ b)) and m(ι ⊗ S)((b ⊗ 1)Δ(a))
                let x = leg_mul(a, &di, &bj, Leg::RightSecond);
                let y = leg_mul(a, &di, &bj, Leg::LeftFirst);
                let mut lhs1 = vec![T::zero(); n];
                let mut lhs2 = vec![T::zero(); n];
                for c in 0..n * n {
                    let (p, q) = (c / n, c % n);
                    if !x[c].is_zero() {
                        let t = a.mul(&h.antipode(&basis(n, p)), &basis(n, q));
                        for (o, v) in lhs1.iter_mut().zip(t) {
                            *o = o.clone() + x[c].clone() * v;
                        }
                    }
                    if !y[c].is_zero() {
                        let t = a.mul(&basis(n, p), &h.antipode(&basis(n, q)));
                        for (o, v) in lhs2.iter_mut().zip(t) {
                            *o = o.clone() + y[c].clone() * v;
                        }
                    }
                }
                antipode = antipode.max(vec_dist(&lhs1, &target)).max(vec_dist(&lhs2, &target));
            }
        }

        let counit_multiplicative = a.multiplicativity_residual(eps);
        let counit_star =
            (0..n).map(|i| (eps.eval(&a.star(&basis(n, i))) - eps.coeffs[i].conj()).modulus()).fold(0.0, f64::max);
        let s2 = h.antipode_matrix().matmul(h.antipode_matrix());
        let s_squared_identity = s2.dist(&Mat::identity(n)) <= tol;

        AxiomReport {
            coassociativity: coassoc,
            galois,
            delta_multiplicative: mult,
            delta_star: dstar,
            counit,
            counit_multiplicative,
            counit_star,
            antipode,
            antipode_anti_multiplicative: anti,
            antipode_star: s_star,
            s_squared_identity,
        }
    }

    /// The four maps of the Galois condition as `n² × n²` matrices (column convention).
    pub fn galois_matrices(&self) -> Vec<(&'static str, Mat<T>)> {
        let (a, h) = (&self.algebra, &self.hopf);
        let n = a.dim();
        let specs = [
            ("Δ(a)(b⊗1)", Leg::RightFirst),
            ("Δ(a)(1⊗b)", Leg::RightSecond),
            ("(b⊗1)Δ(a)", Leg::LeftFirst),
            ("(1⊗b)Δ(a)", Leg::LeftSecond),
        ];
        specs
            .iter()
            .map(|&(name, leg)| {
                let mut m = Mat::zeros(n * n, n * n);
                for i in 0..n {
                    let di = h.delta(&basis(n, i));
                    for j in 0..n {
                        m.set_col(i * n + j, &leg_mul(a, &di, &basis(n, j), leg));
                    }
                }
                (name, m)
            })
            .collect()
    }

    fn galois_maps(&self, tol: f64) -> Vec<GaloisMap> {
        let dim = self.dim() * self.dim();
        self.galois_matrices()
            .into_iter()
            .map(|(name, m)| {
                let sv = singular_values(&m.to_c64());
                let smin = sv.last().copied().unwrap_or(0.0);
                let condition = if smin > 0.0 { sv[0] / smin } else { f64::INFINITY };
                GaloisMap { name, rank: rank(&m, tol), dim, condition }
            })
            .collect()
    }

    /// `(ω₁ ⊗ ω₂)Δ`.
    pub fn convolve(&self, w1: &LinearFunctional<T>, w2: &LinearFunctional<T>) -> LinearFunctional<T> {
        let n = self.dim();
        let pair = w1.tensor(w2);
        LinearFunctional::new((0..n).map(|i| pair.eval(&self.hopf.delta(&basis(n, i)))).collect())
    }

    /// `ω⁻¹ = ω ∘ S` for a non-zero multiplicative functional.
    pub fn mult_functional_inverse(&self, omega: &LinearFunctional<T>, tol: f64) -> Result<LinearFunctional<T>> {
        let residual = self.algebra.multiplicativity_residual(omega);
        if residual > tol || omega.coeffs.iter().all(|c| c.is_negligible(tol)) {
            return Err(Error::NotMultiplicative { residual });
        }
        Ok(self.compose_antipode(omega))
    }

    /// `ω ∘ S`.
    pub fn compose_antipode(&self, omega: &LinearFunctional<T>) -> LinearFunctional<T> {
        LinearFunctional::new(self.hopf.antipode_matrix().mul_vec(&omega.coeffs))
    }

    /// `ω * a = (ι ⊗ ω)Δ(a)`.
    pub fn left_convolve(&self, omega: &LinearFunctional<T>, x: &[T]) -> Vec<T> {
        crate::algebra::slice(crate::algebra::Side::Right, omega, &self.hopf.delta(x), (self.dim(), self.dim()))
            .expect("dimensions agree")
    }

    /// `a * ω = (ω ⊗ ι)Δ(a)`.
    pub fn right_convolve(&self, x: &[T], omega: &LinearFunctional<T>) -> Vec<T> {
        crate::algebra::slice(crate::algebra::Side::Left, omega, &self.hopf.delta(x), (self.dim(), self.dim()))
            .expect("dimensions agree")
    }

    /// `τ * a * τ′ = (τ′ ⊗ ι ⊗ τ)(Δ ⊗ ι)Δ(a)`.
    pub fn sandwich(&self, tau: &LinearFunctional<T>, x: &[T], tau_prime: &LinearFunctional<T>) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for (c, v) in self.hopf.delta(x).into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let (p, q) = (c / n, c % n);
            let t = v * tau.coeffs[q].clone();
            if t.is_zero() {
                continue;
            }
            for (e, w) in self.hopf.delta(&basis(n, p)).into_iter().enumerate() {
                let (r, s) = (e / n, e % n);
                if !w.is_zero() && !tau_prime.coeffs[r].is_zero() {
                    out[s] = out[s].clone() + t.clone() * w * tau_prime.coeffs[r].clone();
                }
            }
        }
        out
    }

    /// Residual of `(ι ⊗ φ)(Δ(a)(b ⊗ 1)) = φ(a) b` over basis pairs.
    pub fn left_invariance_residual(&self, phi: &LinearFunctional<T>) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let di = self.hopf.delta(&basis(n, i));
            for j in 0..n {
                let bj = basis(n, j);
                let x = leg_mul(&self.algebra, &di, &bj, Leg::RightFirst);
                let lhs = crate::algebra::slice(crate::algebra::Side::Right, phi, &x, (n, n)).expect("dims");
                let rhs: Vec<T> = bj.iter().map(|b| b.clone() * phi.coeffs[i].clone()).collect();
                worst = worst.max(vec_dist(&lhs, &rhs));
            }
        }
        worst
    }

    /// Residual of `(ψ ⊗ ι)(Δ(a)(1 ⊗ b)) = ψ(a) b` over basis pairs.
    pub fn right_invariance_residual(&self, psi: &LinearFunctional<T>) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let di = self.hopf.delta(&basis(n, i));
            for j in 0..n {
                let bj = basis(n, j);
                let x = leg_mul(&self.algebra, &di, &bj, Leg::RightSecond);
                let lhs = crate::algebra::slice(crate::algebra::Side::Left, psi, &x, (n, n)).expect("dims");
                let rhs: Vec<T> = bj.iter().map(|b| b.clone() * psi.coeffs[i].clone()).collect();
                worst = worst.max(vec_dist(&lhs, &rhs));
            }
        }
        worst
    }

    /// A non-zero `h` with `ah = ha = ε(a)h`, normalized by `ε(h) = 1` when possible.
    pub fn discrete_element(&self, tol: f64) -> Option<Vec<T>> {
        let n = self.dim();
        let a = &self.algebra;
        let eps = self.hopf.epsilon();
        let mut sys = Mat::zeros(2 * n * n, n);
        for i in 0..n {
            let l = a.left_mult_matrix(&basis(n, i));
            let r = a.right_mult_matrix(&basis(n, i));
            for row in 0..n {
                for col in 0..n {
                    let diag = if row == col { eps.coeffs[i].clone() } else { T::zero() };
                    sys[(i * n + row, col)] = l[(row, col)].clone() - diag.clone();
                    sys[(n * n + i * n + row, col)] = r[(row, col)].clone() - diag;
                }
            }
        }
        let h = nullspace(&sys, tol).into_iter().next()?;
        let eh = eps.eval(&h);
        if eh.is_negligible(tol) {
            return Some(h);
        }
        Some(h.into_iter().map(|x| x / eh.clone()).collect())
    }

    pub fn classify_type(&self, tol: f64) -> QgType {
        match (self.algebra.is_unital(), self.discrete_element(tol).is_some()) {
            (true, true) => QgType::Both,
            (true, false) => QgType::Compact,
            (false, true) => QgType::Discrete,
            (false, false) => QgType::Neither,
        }
    }

    /// Solves the left-invariance system for `φ` and derives `ψ` and `ρ`.
    pub fn solve_haar(&self, tol: f64) -> Result<HaarData<T>> {
        let phi = self.solve_invariant(true, tol)?;
        let pred = self.algebra.functional_predicates(&phi, PSD_THRESHOLD);
        if !pred.positive {
            return Err(Error::NotPositive { min_eigenvalue: pred.min_eigenvalue });
        }
        if !pred.faithful {
            return Err(Error::NotFaithful { min_eigenvalue: pred.min_eigenvalue });
        }
        let psi = self.compose_antipode(&phi);
        let psi_positive = self.algebra.functional_predicates(&psi, PSD_THRESHOLD).positive;
        let psi_solved = self.solve_invariant(false, tol)?;
        let rho = solve_rho(&self.algebra, &phi, tol)?;
        Ok(HaarData { phi, psi, psi_solved, psi_positive, rho })
    }

    fn solve_invariant(&self, left: bool, tol: f64) -> Result<LinearFunctional<T>> {
        let n = self.dim();
        let a = &self.algebra;
        // Unknown ω; equations indexed by (a, b, output coordinate).
        let mut sys: Mat<T> = Mat::zeros(n * n * n, n);
        for i in 0..n {
            let di = self.hopf.delta(&basis(n, i));
            for j in 0..n {
                let bj = basis(n, j);
                let leg = if left { Leg::RightFirst } else { Leg::RightSecond };
                let x = leg_mul(a, &di, &bj, leg);
                for (c, v) in x.into_iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let (p, q) = (c / n, c % n);
                    // left: (ι ⊗ ω) leaves coordinate p and weights ω_q; right: the reverse.
                    let (out, var) = if left { (p, q) } else { (q, p) };
                    let e = &mut sys[((i * n + j) * n + out, var)];
                    *e = e.clone() + v;
                }
                let e = &mut sys[((i * n + j) * n + j, i)];
                *e = e.clone() - T::one();
            }
        }
        let null = nullspace(&sys, tol);
        if null.is_empty() {
            return Err(Error::NoInvariantFunctional);
        }
        if null.len() > 1 {
            return Err(Error::NonUnique { what: "invariant functional", nullity: null.len() });
        }
        let w = LinearFunctional::new(null.into_iter().next().unwrap());
        let scale = match a.unit() {
            Some(u) if !w.eval(u).is_negligible(tol) => w.eval(u),
            _ => {
                let h = self.discrete_element(tol).ok_or(Error::NoInvariantFunctional)?;
                w.eval(&h)
            }
        };
        if scale.is_negligible(tol) {
            return Err(Error::NoInvariantFunctional);
        }
        Ok(w.scale(&(T::one() / scale)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgType {
    Compact,
    Discrete,
    Neither,
    Both,
}

impl QgType {
    pub fn compact(self) -> bool {
        matches!(self, QgType::Compact | QgType::Both)
    }

    pub fn discrete(self) -> bool {
        matches!(self, QgType::Discrete | QgType::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QgType::Compact => "compact",
            QgType::Discrete => "discrete",
            QgType::Neither => "neither",
            QgType::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HaarData<T> {
    /// Left Haar integral.
    pub phi: LinearFunctional<T>,
    /// `φ ∘ S`, right invariant.
    pub psi: LinearFunctional<T>,
    /// Right Haar integral solved from the right-invariance system.
    pub psi_solved: LinearFunctional<T>,
    pub psi_positive: bool,
    /// `φ(ab) = φ(bρ(a))`, row convention.
    pub rho: Mat<T>,
}

impl<T: Scalar> HaarData<T> {
    /// Residual of `ρ(ρ(a^*)^*) = a`.
    pub fn rho_star_residual(&self, a: &StarAlgebra<T>) -> f64 {
        let n = a.dim();
        (0..n)
            .map(|i| {
                let bi = basis(n, i);
                let r = self.rho.row_combination(&a.star(&self.rho.row_combination(&a.star(&bi))));
                vec_dist(&r, &bi)
            })
            .fold(0.0, f64::max)
    }

    pub fn rho_is_identity(&self, tol: f64) -> bool {
        self.rho.dist(&Mat::identity(self.rho.rows())) <= tol
    }
}

/// `ρ` from `φ(b_i b_j) = φ(b_j ρ(b_i))`.
pub fn solve_rho<T: Scalar>(a: &StarAlgebra<T>, phi: &LinearFunctional<T>, tol: f64) -> Result<Mat<T>> {
    let n = a.dim();
    let m = Mat::from_fn(n, n, |j, l| phi.eval(a.basis_product(j, l)));
    // Column i of the solution holds the coefficients of ρ(b_i).
    let cols = solve(&m, &m.transpose(), tol).map_err(|e| Error::from_solve("modular automorphism ρ", e))?;
    Ok(cols.transpose())
}

/// The unique counit from `(ε ⊗ ι)Δ(a) = (ι ⊗ ε)Δ(a) = a`.
pub fn solve_counit<T: Scalar>(a: &StarAlgebra<T>, delta: &Mat<T>, tol: f64) -> Result<LinearFunctional<T>> {
    let n = a.dim();
    let mut sys: Mat<T> = Mat::zeros(2 * n * n, n);
    let mut rhs = Mat::zeros(2 * n * n, 1);
    for i in 0..n {
        for p in 0..n {
            for q in 0..n {
                let v = delta[(i, p * n + q)].clone();
                sys[(i * n + q, p)] = sys[(i * n + q, p)].clone() + v.clone();
                sys[(n * n + i * n + p, q)] = sys[(n * n + i * n + p, q)].clone() + v;
            }
            if i == p {
                rhs[(i * n + p, 0)] = T::one();
                rhs[(n * n + i * n + p, 0)] = T::one();
            }
        }
    }
    let sol = solve(&sys, &rhs, tol).map_err(|e| Error::from_solve("counit", e))?;
    let eps = LinearFunctional::new(sol.col(0));
    let residual = a.multiplicativity_residual(&eps);
    let star_residual =
        (0..n).map(|i| (eps.eval(&a.star(&basis(n, i))) - eps.coeffs[i].conj()).modulus()).fold(0.0, f64::max);
    if residual.max(star_residual) > tol.max(1e-10) {
        return Err(Error::NotMultiplicative { residual: residual.max(star_residual) });
    }
    Ok(eps)
}

/// The unique antipode from `m(S ⊗ ι)(Δ(a)(1 ⊗ b)) = ε(a)b` and
/// `m(ι ⊗ S)((b ⊗ 1)Δ(a)) = ε(a)b`.
pub fn solve_antipode<T: Scalar>(
    a: &StarAlgebra<T>,
    delta: &Mat<T>,
    eps: &LinearFunctional<T>,
    tol: f64,
) -> Result<Mat<T>> {
    let n = a.dim();
    // Unknown S[p][l] at index p * n + l.
    let mut sys: Mat<T> = Mat::zeros(2 * n * n * n, n * n);
    let mut rhs = Mat::zeros(2 * n * n * n, 1);
    let half = n * n * n;
    for i in 0..n {
        let di = delta.row(i).to_vec();
        for j in 0..n {
            let bj = basis(n, j);
            let x = leg_mul(a, &di, &bj, Leg::RightSecond);
            let y = leg_mul(a, &di, &bj, Leg::LeftFirst);
            for c in 0..n * n {
                let (p, q) = (c / n, c % n);
                for l in 0..n {
                    if !x[c].is_zero() {
                        // S(b_p) b_q contributes S[p][l] b_l b_q
                        for (r, v) in a.basis_product(l, q).iter().enumerate() {
                            if !v.is_zero() {
                                let e = &mut sys[((i * n + j) * n + r, p * n + l)];
                                *e = e.clone() + x[c].clone() * v.clone();
                            }
                        }
                    }
                    if !y[c].is_zero() {
                        // b_p S(b_q) contributes S[q][l] b_p b_l
                        for (r, v) in a.basis_product(p, l).iter().enumerate() {
                            if !v.is_zero() {
                                let e = &mut sys[(half + (i * n + j) * n + r, q * n + l)];
                                *e = e.clone() + y[c].clone() * v.clone();
                            }
                        }
                    }
                }
            }
            rhs[((i * n + j) * n + j, 0)] = eps.coeffs[i].clone();
            rhs[(half + (i * n + j) * n + j, 0)] = eps.coeffs[i].clone();
        }
    }
    let sol = solve(&sys, &rhs, tol).map_err(|e| Error::from_solve("antipode", e))?;
    Ok(Mat::from_row_major(n, n, sol.col(0)))
}

/// A Hopf *-algebra with a solved positive faithful left Haar integral.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGroup<T> {
    pub algebra: StarAlgebra<T>,
    pub hopf: HopfStructure<T>,
    pub haar: HaarData<T>,
}

impl<T: Scalar> QuantumGroup<T> {
    pub fn new(h: HopfAlgebra<T>, tol: f64) -> Result<Self> {
        let haar = h.solve_haar(tol)?;
        Ok(QuantumGroup { algebra: h.algebra, hopf: h.hopf, haar })
    }

    pub fn hopf_algebra(&self) -> HopfAlgebra<T> {
        HopfAlgebra { algebra: self.algebra.clone(), hopf: self.hopf.clone() }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn phi(&self) -> &LinearFunctional<T> {
        &self.haar.phi
    }

    pub fn epsilon(&self) -> &LinearFunctional<T> {
        self.hopf.epsilon()
    }

    pub fn to_c64(&self) -> QuantumGroup<crate::scalar::C64> {
        let f = |x: &T| x.to_c64();
        QuantumGroup {
            algebra: self.algebra.map_scalars(f),
            hopf: self.hopf.map_scalars(f),
            haar: HaarData {
                phi: self.haar.phi.to_c64(),
                psi: self.haar.psi.to_c64(),
                psi_solved: self.haar.psi_solved.to_c64(),
                psi_positive: self.haar.psi_positive,
                rho: self.haar.rho.to_c64(),
            },
        }
    }

    /// `φ(xy) = φ(yx)` on basis pairs.
    pub fn is_tracial(&self, tol: f64) -> bool {
        self.algebra.trace_residual(&self.haar.phi) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, function_algebra, group_algebra, symmetric3};
    use crate::scalar::{qc, C64, QC};

    #[test]
    fn c_z2_axioms_hold_exactly() {
        let h = group_algebra::<QC>(&cyclic(2));
        let r = h.verify(0.0);
        assert_eq!(r.max_residual(), 0.0);
        assert!(r.passes(0.0));
        assert!(r.s_squared_identity);
    }

    #[test]
    fn counit_and_antipode_of_k_s3_are_solved() {
        let g = symmetric3();
        let h = function_algebra::<QC>(&g);
        let eps = solve_counit(&h.algebra, h.hopf.delta_matrix(), 0.0).unwrap();
        assert_eq!(&eps, h.hopf.epsilon());
        let s = solve_antipode(&h.algebra, h.hopf.delta_matrix(), &eps, 0.0).unwrap();
        assert_eq!(&s, h.hopf.antipode_matrix());
    }

    #[test]
    fn haar_of_group_algebra_is_delta_at_identity() {
        let h = group_algebra::<QC>(&symmetric3());
        let haar = h.solve_haar(0.0).unwrap();
        let e = symmetric3().identity();
        for (i, c) in haar.phi.coeffs.iter().enumerate() {
            assert_eq!(*c, if i == e { qc(1, 1) } else { qc(0, 1) });
        }
        assert!(haar.rho_is_identity(0.0));
    }

    #[test]
    fn convolution_unit_and_inverse() {
        let h = group_algebra::<C64>(&cyclic(2));
        let eps = h.hopf.epsilon().clone();
        let chi = LinearFunctional::new(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert_eq!(h.convolve(&eps, &chi), chi);
        let inv = h.mult_functional_inverse(&chi, 1e-12).unwrap();
        assert_eq!(h.convolve(&chi, &inv), eps);
        let phi = LinearFunctional::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(h.mult_functional_inverse(&phi, 1e-12), Err(Error::NotMultiplicative { .. })));
    }

    #[test]
    fn group_algebra_is_of_both_types() {
        let h = group_algebra::<QC>(&cyclic(3));
        assert_eq!(h.classify_type(0.0), QgType::Both);
        let bare = HopfAlgebra { algebra: h.algebra.without_unit(), hopf: h.hopf.clone() };
        assert!(!bare.classify_type(0.0).compact());
    }
}
