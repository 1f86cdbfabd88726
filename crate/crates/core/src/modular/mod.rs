//! Modular functionals `f_z`, the modular group `σ_t`, its unitary
//! implementations `F_t`, `E_t`, `V_t`, and the KMS identity for Haar states
//! of compact type.
//!
//! All checks run against [`ModularSetting`], which is implemented both for
//! finite-dimensional quantum groups and for degree truncations of
//! infinite-dimensional ones ([`FilteredAlgebra`]). On a truncation, identities
//! are only evaluated on pairs whose total degree stays within the truncation.

pub mod filtered;
pub mod rewrite;

use nalgebra::DMatrix;
use serde::Serialize;

pub use filtered::{suq2_build, FilteredAlgebra, FilteredHopfReport, RelationsSpec, RELATIONS_FORMAT, SUQ2_RELATIONS};

use crate::algebra::LinearFunctional;
use crate::amen::WDecomposition;
use crate::error::{Error, Result};
use crate::gns::{build_gns, build_opposite, build_w};
use crate::hopf::{HopfAlgebra, QuantumGroup};
use crate::matrix::{inverse, vec_dist, Mat};
use crate::scalar::C64;

/// What the modular machinery needs from a compact-type quantum group.
pub trait ModularSetting {
    fn dim(&self) -> usize;
    /// Filtration degree of `b_i`; `0` throughout in finite dimension.
    fn degree(&self, i: usize) -> usize;
    fn max_degree(&self) -> usize;
    fn basis_label(&self, i: usize) -> String;
    fn unit(&self) -> Vec<C64>;
    /// `Δ(b_i)` as `(left, right, coefficient)` triples.
    fn delta_terms(&self, i: usize) -> Vec<(usize, usize, C64)>;
    fn epsilon(&self) -> Vec<C64>;
    fn antipode(&self, x: &[C64]) -> Vec<C64>;
    fn star(&self, x: &[C64]) -> Vec<C64>;
    fn phi(&self) -> Vec<C64>;
    /// `ρ` with `φ(ab) = φ(bρ(a))`.
    fn rho(&self, x: &[C64]) -> Vec<C64>;
    /// Only called with total degree within the truncation.
    fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64>;
    /// Basis indices carrying the declared values `μ_g`.
    fn generators(&self) -> Vec<usize>;
    /// Exponent of each generator in `b_i`.
    fn exponents(&self, i: usize) -> Vec<usize>;
}

fn e(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn dot(f: &[C64], x: &[C64]) -> C64 {
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn column_matrix(n: usize, f: impl Fn(usize) -> Vec<C64>) -> Mat<C64> {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        m.set_col(i, &f(i));
    }
    m
}

/// `τ * x = (ι ⊗ τ)Δ(x)`.
pub fn left_convolve<S: ModularSetting + ?Sized>(s: &S, tau: &[C64], x: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); s.dim()];
    for (i, xi) in x.iter().enumerate() {
        if *xi == C64::new(0.0, 0.0) {
            continue;
        }
        for (l, r, c) in s.delta_terms(i) {
            out[l] += xi * c * tau[r];
        }
    }
    out
}

/// `x * τ = (τ ⊗ ι)Δ(x)`.
pub fn right_convolve<S: ModularSetting + ?Sized>(s: &S, x: &[C64], tau: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); s.dim()];
    for (i, xi) in x.iter().enumerate() {
        if *xi == C64::new(0.0, 0.0) {
            continue;
        }
        for (l, r, c) in s.delta_terms(i) {
            out[r] += xi * c * tau[l];
        }
    }
    out
}

/// `τ * x * τ′ = (τ′ ⊗ ι ⊗ τ)(Δ ⊗ ι)Δ(x)`.
pub fn sandwich<S: ModularSetting + ?Sized>(s: &S, tau: &[C64], x: &[C64], tau_prime: &[C64]) -> Vec<C64> {
    right_convolve(s, &left_convolve(s, tau, x), tau_prime)
}

/// `(f ⊗ g)Δ` on the basis.
pub fn convolve<S: ModularSetting + ?Sized>(s: &S, f: &[C64], g: &[C64]) -> Vec<C64> {
    (0..s.dim()).map(|i| s.delta_terms(i).iter().map(|(l, r, c)| c * f[*l] * g[*r]).sum()).collect()
}

fn degree_pairs<S: ModularSetting + ?Sized>(s: &S) -> Vec<(usize, usize)> {
    let n = s.dim();
    let d = s.max_degree();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| s.degree(i) + s.degree(j) <= d).collect()
}

/// The family `f_z(b) = Π_g (ε(g) μ_g^z)^{e_g(b)}`.
#[derive(Clone, Debug, Serialize)]
pub struct ModularCharacter {
    pub generators: Vec<String>,
    pub generator_index: Vec<usize>,
    pub epsilon: Vec<(f64, f64)>,
    pub mu: Vec<f64>,
    /// Rank of the exponent system determining `log μ`.
    pub rank: usize,
    pub unique: bool,
    /// `ε ∘ ρ ∘ S⁻²` on the basis.
    #[serde(skip)]
    pub f2: Vec<C64>,
    /// `max ‖ρS⁻²(b) − f₂ * b‖`.
    pub f2_convolution: f64,
    /// `max ‖f₂(b) − ε(b)μ^{2e(b)}‖`, consistency of the ansatz.
    pub ansatz_residual: f64,
    pub condition4: f64,
    pub condition5: f64,
}

impl ModularCharacter {
    pub fn generator_values(&self, z: C64) -> Vec<C64> {
        self.epsilon.iter().zip(&self.mu).map(|(&(re, im), m)| C64::new(re, im) * (z * m.ln()).exp()).collect()
    }

    /// `f_z` on the basis.
    pub fn functional<S: ModularSetting + ?Sized>(&self, s: &S, z: C64) -> Vec<C64> {
        let v = self.generator_values(z);
        (0..s.dim())
            .map(|i| s.exponents(i).iter().zip(&v).fold(C64::new(1.0, 0.0), |acc, (&k, g)| acc * g.powu(k as u32)))
            .collect()
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.mu.iter().all(|m| (m - 1.0).abs() <= tol)
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Solves for `μ_g > 0` with `f_2 = ε ∘ ρ ∘ S⁻²` (which follows from
/// `S²(a) = f₋₁ * a * f₁` and `ρ(a) = f₁ * a * f₁`), then checks those two
/// conditions for `f_{±1}`.
pub fn solve_modular_family<S: ModularSetting + ?Sized>(s: &S, tol: f64) -> Result<ModularCharacter> {
    let n = s.dim();
    let eps = s.epsilon();
    let smat = column_matrix(n, |i| s.antipode(&e(n, i)));
    let sinv = inverse(&smat, tol).map_err(|e| Error::from_solve("inverse antipode", e))?;
    let sinv2 = sinv.matmul(&sinv);
    let rho_sinv2: Vec<Vec<C64>> = (0..n).map(|i| s.rho(&sinv2.col(i))).collect();
    let f2: Vec<C64> = rho_sinv2.iter().map(|x| dot(&eps, x)).collect();
    let f2_convolution = (0..n).map(|i| vec_dist(&rho_sinv2[i], &left_convolve(s, &f2, &e(n, i)))).fold(0.0, f64::max);

    let gens = s.generators();
    let g = gens.len();
    let active: Vec<bool> = gens.iter().map(|&i| eps[i].norm() > tol.max(1e-12)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        let scale = tol.max(1e-12) * (1.0 + f2[i].norm());
        if eps[i].norm() <= tol.max(1e-12) {
            if f2[i].norm() > scale {
                return Err(Error::NoPositiveSolution(format!("f₂({}) ≠ 0 where ε vanishes", s.basis_label(i))));
            }
            continue;
        }
        let ratio = f2[i] / eps[i];
        if ratio.re <= 0.0 || ratio.im.abs() > scale {
            return Err(Error::NoPositiveSolution(format!(
                "f₂/ε = {ratio} at {} is not a positive real",
                s.basis_label(i)
            )));
        }
        rows.push(s.exponents(i).iter().map(|&k| 2.0 * k as f64).collect::<Vec<_>>());
        rhs.push(ratio.re.ln());
    }
    let (mu, rank) = if rows.is_empty() {
        (vec![1.0; g], 0)
    } else {
        let a = DMatrix::from_fn(rows.len(), g, |r, c| if active[c] { rows[r][c] } else { 0.0 });
        let b = DMatrix::from_column_slice(rhs.len(), 1, &rhs);
        let svd = a.clone().svd(true, true);
        let rank = svd.singular_values.iter().filter(|&&x| x > 1e-9 * svd.singular_values.max().max(1.0)).count();
        let sol = svd.solve(&b, 1e-12).map_err(|m| Error::InvalidStructure(m.to_string()))?;
        ((0..g).map(|c| if active[c] { sol[(c, 0)].exp() } else { 1.0 }).collect(), rank)
    };
    let unique = rank == active.iter().filter(|&&x| x).count();
    let mut ch = ModularCharacter {
        generators: gens.iter().map(|&i| s.basis_label(i)).collect(),
        generator_index: gens.clone(),
        epsilon: gens.iter().map(|&i| (eps[i].re, eps[i].im)).collect(),
        mu,
        rank,
        unique,
        f2: f2.clone(),
        f2_convolution,
        ansatz_residual: 0.0,
        condition4: 0.0,
        condition5: 0.0,
    };
    let f2_ansatz = ch.functional(s, real(2.0));
    ch.ansatz_residual = vec_dist(&f2_ansatz, &f2);
    let f1 = ch.functional(s, real(1.0));
    let fm1 = ch.functional(s, real(-1.0));
    for i in 0..n {
        let b = e(n, i);
        let s2 = s.antipode(&s.antipode(&b));
        ch.condition4 = ch.condition4.max(vec_dist(&s2, &sandwich(s, &fm1, &b, &f1)));
        ch.condition5 = ch.condition5.max(vec_dist(&s.rho(&b), &sandwich(s, &f1, &b, &f1)));
    }
    let worst = ch.condition4.max(ch.condition5).max(ch.ansatz_residual);
    if worst > tol.max(1e-10) {
        return Err(Error::NoPositiveSolution(format!(
            "the μ^z ansatz leaves a residual {worst:.3e} in the modular conditions"
        )));
    }
    Ok(ch)
}

/// `σ_t` as a matrix in basis coordinates (column `i` is `σ_t(b_i)`).
pub fn sigma_t<S: ModularSetting + ?Sized>(s: &S, f: &ModularCharacter, t: f64) -> Mat<C64> {
    let n = s.dim();
    let g = f.functional(s, C64::new(0.0, -t));
    column_matrix(n, |i| sandwich(s, &g, &e(n, i), &g))
}

/// `F_t Λ(a) = Λ(a * f₋ᵢₜ)`, `E_t Λ(a) = Λ(f₋ᵢₜ * a)` and `V_t = F_t E_t`, in
/// `Λ`-coordinates.
#[derive(Clone, Debug)]
pub struct FlowUnitaries {
    pub f: Mat<C64>,
    pub e: Mat<C64>,
    pub v: Mat<C64>,
}

pub fn flow_unitaries<S: ModularSetting + ?Sized>(s: &S, f: &ModularCharacter, t: f64) -> FlowUnitaries {
    let n = s.dim();
    let g = f.functional(s, C64::new(0.0, -t));
    FlowUnitaries {
        f: column_matrix(n, |i| right_convolve(s, &e(n, i), &g)),
        e: column_matrix(n, |i| left_convolve(s, &g, &e(n, i))),
        v: column_matrix(n, |i| sandwich(s, &g, &e(n, i), &g)),
    }
}

/// `max |φ(ab) − φ(b (f₁ * a * f₁))|` over basis pairs within the truncation,
/// and the `b = 1` case separately.
pub fn kms_check<S: ModularSetting + ?Sized>(s: &S, f: &ModularCharacter) -> (f64, f64) {
    let n = s.dim();
    let phi = s.phi();
    let f1 = f.functional(s, real(1.0));
    let mut worst: f64 = 0.0;
    for (i, j) in degree_pairs(s) {
        let (a, b) = (e(n, i), e(n, j));
        let lhs = dot(&phi, &s.product(&a, &b));
        let rhs = dot(&phi, &s.product(&b, &sandwich(s, &f1, &a, &f1)));
        worst = worst.max((lhs - rhs).norm());
    }
    let unit = (0..n).map(|i| (phi[i] - dot(&phi, &sandwich(s, &f1, &e(n, i), &f1))).norm()).fold(0.0, f64::max);
    (worst, unit)
}

/// `⟨u, v⟩ = Σ conj(v_l) u_k φ(b_l^* b_k)`, with the Gram entries restricted
/// to the truncation.
struct TruncatedGram {
    g: Mat<C64>,
}

impl TruncatedGram {
    fn new<S: ModularSetting + ?Sized>(s: &S) -> Self {
        let n = s.dim();
        let phi = s.phi();
        let mut g = Mat::zeros(n, n);
        for (k, l) in degree_pairs(s) {
            g[(k, l)] = dot(&phi, &s.product(&s.star(&e(n, l)), &e(n, k)));
        }
        TruncatedGram { g }
    }

    fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, uk) in u.iter().enumerate() {
            if *uk == C64::new(0.0, 0.0) {
                continue;
            }
            for (l, vl) in v.iter().enumerate() {
                acc += vl.conj() * uk * self.g[(k, l)];
            }
        }
        acc
    }

    /// `max |⟨Xb_i, Xb_j⟩ − ⟨b_i, b_j⟩|` over pairs within the truncation.
    fn isometry_residual<S: ModularSetting + ?Sized>(&self, s: &S, x: &Mat<C64>) -> f64 {
        let n = s.dim();
        degree_pairs(s)
            .into_iter()
            .map(|(i, j)| (self.inner(&x.col(i), &x.col(j)) - self.inner(&e(n, i), &e(n, j))).norm())
            .fold(0.0, f64::max)
    }
}

/// Grid `{±1, ±i, 1/2, i/2}` used for the functional identities.
pub fn condition_grid() -> Vec<C64> {
    vec![real(1.0), real(-1.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), real(0.5), C64::new(0.0, 0.5)]
}

pub const DEFAULT_TIMES: [f64; 3] = [0.3, 0.5, -1.1];

#[derive(Clone, Debug, Default, Serialize)]
pub struct TracialCollapse {
    pub mu_trivial: bool,
    pub rho_identity: bool,
    pub phi_tracial: bool,
    pub trace_residual: f64,
    pub equivalent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub character: ModularCharacter,
    pub times: Vec<f64>,
    pub f0_counit: f64,
    pub grid_additive: f64,
    pub grid_antipode: f64,
    pub grid_star: f64,
    pub grid_multiplicative: f64,
    pub f_it_star_hom: f64,
    pub f_it_modulus: f64,
    pub sigma_zero: f64,
    pub sigma_multiplicative: f64,
    pub sigma_star: f64,
    pub sigma_unit: f64,
    pub sigma_group_law: f64,
    pub phi_invariance: f64,
    /// `σ_t(g) = λ g` with `|λ| = 1` on generators that σ_t rescales.
    pub sigma_generator_scalars: Vec<(String, f64, f64)>,
    pub f_group_law: f64,
    pub e_group_law: f64,
    pub v_group_law: f64,
    pub unitarity: f64,
    pub commutation: f64,
    pub v_factorization: f64,
    pub f_fixes_unit: f64,
    pub v_implementation: f64,
    pub kms: f64,
    pub kms_unit: f64,
    pub w_slice_f: Option<f64>,
    pub w_slice_e: Option<f64>,
    pub tracial: TracialCollapse,
}

impl FlowReport {
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("condition4", self.character.condition4),
            ("condition5", self.character.condition5),
            ("f2_convolution", self.character.f2_convolution),
            ("f0_counit", self.f0_counit),
            ("grid_additive", self.grid_additive),
            ("grid_antipode", self.grid_antipode),
            ("grid_star", self.grid_star),
            ("grid_multiplicative", self.grid_multiplicative),
            ("f_it_star_hom", self.f_it_star_hom),
            ("f_it_modulus", self.f_it_modulus),
            ("sigma_zero", self.sigma_zero),
            ("sigma_multiplicative", self.sigma_multiplicative),
            ("sigma_star", self.sigma_star),
            ("sigma_unit", self.sigma_unit),
            ("sigma_group_law", self.sigma_group_law),
            ("phi_invariance", self.phi_invariance),
            ("f_group_law", self.f_group_law),
            ("e_group_law", self.e_group_law),
            ("v_group_law", self.v_group_law),
            ("unitarity", self.unitarity),
            ("commutation", self.commutation),
            ("v_factorization", self.v_factorization),
            ("f_fixes_unit", self.f_fixes_unit),
            ("v_implementation", self.v_implementation),
            ("kms", self.kms),
            ("kms_unit", self.kms_unit),
        ];
        if let Some(x) = self.w_slice_f {
            out.push(("w_slice_f", x));
        }
        if let Some(x) = self.w_slice_e {
            out.push(("w_slice_e", x));
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Runs every check of the modular family and flow at the sampled times.
pub fn flow_report<S: ModularSetting + ?Sized>(s: &S, times: &[f64], tol: f64) -> Result<FlowReport> {
    let n = s.dim();
    let ch = solve_modular_family(s, tol)?;
    let eps = s.epsilon();
    let phi = s.phi();
    let unit = s.unit();
    let pairs = degree_pairs(s);
    let fz = |z: C64| ch.functional(s, z);

    let f0_counit = vec_dist(&fz(real(0.0)), &eps);
    let (mut add, mut anti, mut star, mut mult) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for z in condition_grid() {
        let f = fz(z);
        for w in condition_grid() {
            add = add.max(vec_dist(&fz(z + w), &convolve(s, &f, &fz(w))));
        }
        let fneg = fz(-z);
        let fbar = fz(-z.conj());
        for i in 0..n {
            let b = e(n, i);
            anti = anti.max((dot(&f, &s.antipode(&b)) - fneg[i]).norm());
            star = star.max((dot(&f, &s.star(&b)).conj() - fbar[i]).norm());
        }
        for &(i, j) in &pairs {
            mult = mult.max((dot(&f, &s.product(&e(n, i), &e(n, j))) - f[i] * f[j]).norm());
        }
    }

    let mut f_it_star_hom: f64 = 0.0;
    let mut f_it_modulus: f64 = 0.0;
    let mut sigma_mult: f64 = 0.0;
    let mut sigma_star: f64 = 0.0;
    let mut sigma_unit: f64 = 0.0;
    let mut phi_inv: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    let mut commutation: f64 = 0.0;
    let mut v_fact: f64 = 0.0;
    let mut f_unit: f64 = 0.0;
    let mut v_impl: f64 = 0.0;
    let mut sigma_scalars = Vec::new();
    let gram = TruncatedGram::new(s);
    let flows: Vec<FlowUnitaries> = times.iter().map(|&t| flow_unitaries(s, &ch, t)).collect();
    let sigmas: Vec<Mat<C64>> = times.iter().map(|&t| sigma_t(s, &ch, t)).collect();
    for (k, &t) in times.iter().enumerate() {
        let f = fz(C64::new(0.0, t));
        for &(i, j) in &pairs {
            let p = s.product(&e(n, i), &e(n, j));
            f_it_star_hom = f_it_star_hom.max((dot(&f, &p) - f[i] * f[j]).norm());
        }
        for i in 0..n {
            f_it_star_hom = f_it_star_hom.max((dot(&f, &s.star(&e(n, i))) - f[i].conj()).norm());
        }
        for (gi, &idx) in ch.generator_index.iter().enumerate() {
            if ch.mu[gi] > 0.0 {
                f_it_modulus = f_it_modulus.max((f[idx].norm() - eps[idx].norm()).abs());
            }
        }
        let sg = &sigmas[k];
        let fl = &flows[k];
        for &(i, j) in &pairs {
            let ab = s.product(&e(n, i), &e(n, j));
            sigma_mult = sigma_mult.max(vec_dist(&sg.mul_vec(&ab), &s.product(&sg.col(i), &sg.col(j))));
        }
        for i in 0..n {
            let b = e(n, i);
            sigma_star = sigma_star.max(vec_dist(&sg.mul_vec(&s.star(&b)), &s.star(&sg.col(i))));
            phi_inv = phi_inv.max((dot(&phi, &sg.col(i)) - phi[i]).norm());
        }
        sigma_unit = sigma_unit.max(vec_dist(&sg.mul_vec(&unit), &unit));
        for x in [&fl.f, &fl.e, &fl.v] {
            unitarity = unitarity.max(gram.isometry_residual(s, x));
        }
        for other in &flows {
            commutation = commutation.max(fl.f.matmul(&other.e).dist(&other.e.matmul(&fl.f)));
        }
        v_fact = v_fact.max(fl.v.dist(&fl.f.matmul(&fl.e))).max(fl.v.dist(&fl.e.matmul(&fl.f)));
        f_unit = f_unit.max(vec_dist(&fl.f.mul_vec(&unit), &unit));
        let v_back = flow_unitaries(s, &ch, -t).v;
        for &(i, j) in &pairs {
            let lhs = fl.v.mul_vec(&s.product(&e(n, i), &v_back.col(j)));
            let rhs = s.product(&sg.col(i), &e(n, j));
            v_impl = v_impl.max(vec_dist(&lhs, &rhs));
        }
        if k == 0 {
            for (gi, &idx) in ch.generator_index.iter().enumerate() {
                let image = sg.col(idx);
                let lambda = image[idx];
                let mut rest = image.clone();
                rest[idx] -= lambda;
                if crate::matrix::vec_norm(&rest) <= tol.max(1e-12) && lambda.norm() > 0.0 {
                    sigma_scalars.push((ch.generators[gi].clone(), lambda.norm(), lambda.arg()));
                }
            }
        }
    }
    let mut f_law: f64 = 0.0;
    let mut e_law: f64 = 0.0;
    let mut v_law: f64 = 0.0;
    let mut sigma_law: f64 = 0.0;
    for (a, &s1) in times.iter().enumerate() {
        for (b, &s2) in times.iter().enumerate() {
            let sum = flow_unitaries(s, &ch, s1 + s2);
            f_law = f_law.max(sum.f.dist(&flows[a].f.matmul(&flows[b].f)));
            e_law = e_law.max(sum.e.dist(&flows[a].e.matmul(&flows[b].e)));
            v_law = v_law.max(sum.v.dist(&flows[a].v.matmul(&flows[b].v)));
            sigma_law = sigma_law.max(sigma_t(s, &ch, s1 + s2).dist(&sigmas[a].matmul(&sigmas[b])));
        }
    }
    let sigma_zero = sigma_t(s, &ch, 0.0).dist(&Mat::identity(n));
    let (kms, kms_unit) = kms_check(s, &ch);

    let rho_identity = (0..n).map(|i| vec_dist(&s.rho(&e(n, i)), &e(n, i))).fold(0.0, f64::max) <= tol.max(1e-10);
    let trace_residual = pairs
        .iter()
        .map(|&(i, j)| (dot(&phi, &s.product(&e(n, i), &e(n, j))) - dot(&phi, &s.product(&e(n, j), &e(n, i)))).norm())
        .fold(0.0, f64::max);
    let mu_trivial = ch.is_trivial(tol.max(1e-10));
    let phi_tracial = trace_residual <= tol.max(1e-10);
    let tracial = TracialCollapse {
        mu_trivial,
        rho_identity,
        phi_tracial,
        trace_residual,
        equivalent: mu_trivial == rho_identity && rho_identity == phi_tracial,
    };

    Ok(FlowReport {
        character: ch,
        times: times.to_vec(),
        f0_counit,
        grid_additive: add,
        grid_antipode: anti,
        grid_star: star,
        grid_multiplicative: mult,
        f_it_star_hom,
        f_it_modulus,
        sigma_zero,
        sigma_multiplicative: sigma_mult,
        sigma_star,
        sigma_unit,
        sigma_group_law: sigma_law,
        phi_invariance: phi_inv,
        sigma_generator_scalars: sigma_scalars,
        f_group_law: f_law,
        e_group_law: e_law,
        v_group_law: v_law,
        unitarity,
        commutation,
        v_factorization: v_fact,
        f_fixes_unit: f_unit,
        v_implementation: v_impl,
        kms,
        kms_unit,
        w_slice_f: None,
        w_slice_e: None,
        tracial,
    })
}

/// A finite-dimensional compact-type quantum group as a modular setting.
pub struct FiniteSetting {
    qg: QuantumGroup<C64>,
    unit: Vec<C64>,
    delta: Vec<Vec<(usize, usize, C64)>>,
}

impl FiniteSetting {
    pub fn new(qg: QuantumGroup<C64>) -> Result<Self> {
        let unit = qg.algebra.unit().ok_or(Error::NotCompactType)?.to_vec();
        let n = qg.dim();
        let dm = qg.hopf.delta_matrix();
        let delta = (0..n)
            .map(|i| {
                (0..n * n).filter(|&c| dm[(i, c)] != C64::new(0.0, 0.0)).map(|c| (c / n, c % n, dm[(i, c)])).collect()
            })
            .collect();
        Ok(FiniteSetting { qg, unit, delta })
    }

    pub fn quantum_group(&self) -> &QuantumGroup<C64> {
        &self.qg
    }
}

impl ModularSetting for FiniteSetting {
    fn dim(&self) -> usize {
        self.qg.dim()
    }
    fn degree(&self, _i: usize) -> usize {
        0
    }
    fn max_degree(&self) -> usize {
        0
    }
    fn basis_label(&self, i: usize) -> String {
        self.qg.algebra.labels()[i].clone()
    }
    fn unit(&self) -> Vec<C64> {
        self.unit.clone()
    }
    fn delta_terms(&self, i: usize) -> Vec<(usize, usize, C64)> {
        self.delta[i].clone()
    }
    fn epsilon(&self) -> Vec<C64> {
        self.qg.epsilon().coeffs.clone()
    }
    fn antipode(&self, x: &[C64]) -> Vec<C64> {
        self.qg.hopf.antipode(x)
    }
    fn star(&self, x: &[C64]) -> Vec<C64> {
        self.qg.algebra.star(x)
    }
    fn phi(&self) -> Vec<C64> {
        self.qg.phi().coeffs.clone()
    }
    fn rho(&self, x: &[C64]) -> Vec<C64> {
        self.qg.haar.rho.row_combination(x)
    }
    fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        self.qg.algebra.mul(x, y)
    }
    fn generators(&self) -> Vec<usize> {
        (0..self.dim()).collect()
    }
    fn exponents(&self, i: usize) -> Vec<usize> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }
}

impl ModularSetting for FilteredAlgebra<C64> {
    fn dim(&self) -> usize {
        FilteredAlgebra::dim(self)
    }
    fn degree(&self, i: usize) -> usize {
        FilteredAlgebra::degree(self, i)
    }
    fn max_degree(&self) -> usize {
        self.truncation
    }
    fn basis_label(&self, i: usize) -> String {
        self.monomial_label(i)
    }
    fn unit(&self) -> Vec<C64> {
        e(FilteredAlgebra::dim(self), self.index_of(&[]).expect("unit in basis"))
    }
    fn delta_terms(&self, i: usize) -> Vec<(usize, usize, C64)> {
        self.delta_of(i).to_vec()
    }
    fn epsilon(&self) -> Vec<C64> {
        FilteredAlgebra::epsilon(self)
    }
    fn antipode(&self, x: &[C64]) -> Vec<C64> {
        FilteredAlgebra::antipode(self, x)
    }
    fn star(&self, x: &[C64]) -> Vec<C64> {
        FilteredAlgebra::star(self, x)
    }
    fn phi(&self) -> Vec<C64> {
        self.phi.clone()
    }
    fn rho(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        for (i, xi) in x.iter().enumerate() {
            for (o, r) in out.iter_mut().zip(&self.rho[i]) {
                *o += xi * r;
            }
        }
        out
    }
    fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        FilteredAlgebra::product(self, x, y).expect("product within the truncation")
    }
    fn generators(&self) -> Vec<usize> {
        (0..self.labels.len()).map(|g| self.index_of(&[g as u8]).expect("generators are normal")).collect()
    }
    fn exponents(&self, i: usize) -> Vec<usize> {
        FilteredAlgebra::exponents(self, i)
    }
}

/// Compares `F_t` and `E_t` with the first-leg slices `(f_{it} ⊗ ι)(W)` and
/// `(f_{it} ⊗ ι)(W_op)`; returns the largest residual of each.
pub fn w_slice_crosscheck(
    setting: &FiniteSetting,
    ch: &ModularCharacter,
    times: &[f64],
    tol: f64,
) -> Result<(f64, f64)> {
    let qg = setting.quantum_group();
    let gns = build_gns(&qg.algebra, qg.phi(), tol)?;
    let w = build_w(&qg.hopf_algebra(), tol)?;
    let decomp = WDecomposition::new(&w, &gns, tol)?;
    let (_, w_op) = build_opposite(qg, tol)?;
    let decomp_op = WDecomposition::new(&w_op, &gns, tol)?;
    let (mut rf, mut re) = (0.0f64, 0.0f64);
    for &t in times {
        let fit = ch.functional(setting, C64::new(0.0, t));
        let fl = flow_unitaries(setting, ch, t);
        rf = rf.max(decomp.slice_first_leg(&fit).dist(&fl.f));
        re = re.max(decomp_op.slice_first_leg(&fit).dist(&fl.e));
    }
    Ok((rf, re))
}

/// The flow report for a finite-dimensional quantum group, including the
/// multiplicative-unitary cross-checks.
pub fn finite_flow_report(qg: &QuantumGroup<C64>, times: &[f64], tol: f64) -> Result<FlowReport> {
    let setting = FiniteSetting::new(qg.clone())?;
    let mut report = flow_report(&setting, times, tol)?;
    let (f, e) = w_slice_crosscheck(&setting, &report.character, times, tol)?;
    report.w_slice_f = Some(f);
    report.w_slice_e = Some(e);
    Ok(report)
}

/// Candidates `χ` among `characters` with `χ * χ = target`.
pub fn convolution_square_roots(
    h: &HopfAlgebra<C64>,
    characters: &[LinearFunctional<C64>],
    target: &LinearFunctional<C64>,
    tol: f64,
) -> Vec<usize> {
    characters
        .iter()
        .enumerate()
        .filter(|(_, c)| vec_dist(&h.convolve(c, c).coeffs, &target.coeffs) <= tol)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, group_algebra, symmetric3};
    use crate::scalar::qc;

    #[test]
    fn group_algebras_have_trivial_family() {
        let qg = QuantumGroup::new(group_algebra::<C64>(&symmetric3()), 1e-10).unwrap();
        let r = finite_flow_report(&qg, &DEFAULT_TIMES, 1e-10).unwrap();
        assert!(r.character.is_trivial(1e-12));
        assert!(r.max_residual() < 1e-12, "{:?}", r.residuals());
        assert!(r.tracial.equivalent && r.tracial.mu_trivial);
    }

    #[test]
    fn sign_character_has_no_square_root() {
        let g = cyclic(2);
        let h = group_algebra::<C64>(&g);
        let chars: Vec<LinearFunctional<C64>> = g.characters().into_iter().map(LinearFunctional::new).collect();
        let sign = chars.iter().position(|c| c.coeffs[1].re < 0.0).unwrap();
        assert!(convolution_square_roots(&h, &chars, &chars[sign], 1e-12).is_empty());
        assert_eq!(convolution_square_roots(&h, &chars, h.hopf.epsilon(), 1e-12).len(), 2);
    }

    #[test]
    fn suq2_flow_is_consistent() {
        let alg = suq2_build(qc(1, 2), 4, 0.0).unwrap().to_c64();
        let r = flow_report(&alg, &[0.3, 0.5], 1e-10).unwrap();
        assert!(r.max_residual() < 1e-10, "{:?}", r.residuals());
        assert!(!r.character.is_trivial(1e-6));
        assert!(r.tracial.equivalent && !r.tracial.phi_tracial);
    }
}
