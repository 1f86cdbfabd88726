//! Check suites behind each command-line subcommand. Every suite returns a
//! [`Report`]; an `Err` means the input could not be processed at all.

use std::path::Path;

use serde::Serialize;

use crate::algebra::{StarAlgebra, PSD_THRESHOLD};
use crate::amen::amen_report;
use crate::duality::{build_dual, double_dual_iso};
use crate::error::{Error, Result};
use crate::gns::{build_gns, build_w, check_implementations, check_pentagon, PENTAGON_DIM_CAP};
use crate::groups::{named_group, FiniteGroup};
use crate::hopf::{HopfAlgebra, QuantumGroup};
use crate::io::{parse_rational, real_rational, GroupTableFile, JsonScalar, ScalarJson, StructureFile};
use crate::kesten::{amen_probe, AnyGroup, AveragingElement, GroupOracle, DEFAULT_BALL_CAP};
use crate::matrix::hermitian_eigenvalues;
use crate::modular::{finite_flow_report, flow_report, FilteredAlgebra, FlowReport, RelationsSpec, RELATIONS_FORMAT};
use crate::report::Report;
use crate::scalar::{Scalar, C64, QC};

/// Identity checks on finite structures.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Predicates and floating-point estimates (norms, random samples).
pub const PREDICATE_TOL: f64 = 1e-10;
/// Modular checks, which compose several floating-point maps.
pub const MODULAR_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Options {
    pub tol: Option<f64>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { tol: None, seed: 0, samples: 1000 }
    }
}

impl Options {
    fn identity_tol(&self) -> f64 {
        self.tol.unwrap_or(IDENTITY_TOL)
    }

    fn predicate_tol(&self) -> f64 {
        self.tol.unwrap_or(PREDICATE_TOL).max(self.identity_tol())
    }
}

fn basis<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

fn encode<T: JsonScalar>(v: &[T]) -> Vec<ScalarJson> {
    v.iter().map(JsonScalar::to_json).collect()
}

/// `max |φ(b_i b_j) − φ(b_j ρ(b_i))|`.
fn modular_map_residual<T: Scalar>(qg: &QuantumGroup<T>) -> f64 {
    let n = qg.dim();
    let a = &qg.algebra;
    let phi = qg.phi();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let r = qg.haar.rho.row_combination(&basis(n, i));
        for j in 0..n {
            let bj = basis(n, j);
            let lhs = phi.eval(a.basis_product(i, j));
            let rhs = phi.eval(&a.mul(&bj, &r));
            worst = worst.max((lhs - rhs).modulus());
        }
    }
    worst
}

#[derive(Serialize)]
struct VerifyDetails {
    name: String,
    dim: usize,
    #[serde(rename = "type")]
    kind: &'static str,
    unital: bool,
    s_squared_identity: bool,
    tracial: Option<bool>,
    rho_identity: Option<bool>,
    phi: Option<Vec<ScalarJson>>,
    haar_error: Option<String>,
}

fn algebra_checks<T: Scalar>(r: &mut Report, a: &StarAlgebra<T>, tol: f64) {
    let s = a.structure_report(tol);
    r.check("associativity", "(ab)c = a(bc)", s.associativity, tol);
    r.check("involution", "(a*)* = a", s.involutive, tol);
    r.check("star_anti_multiplicative", "(ab)* = b*a*", s.anti_multiplicative, tol);
    if let Some(u) = s.unit {
        r.check("unit", "1a = a = a1", u, tol);
    }
    r.flag("non_degenerate", "ab = 0 for all b implies a = 0, and likewise on the left", s.non_degenerate());
}

const AXIOM_REFERENCES: [(&str, &str); 9] = [
    ("coassociativity", "(Δ⊗ι)Δ = (ι⊗Δ)Δ"),
    ("delta_multiplicative", "Δ(ab) = Δ(a)Δ(b)"),
    ("delta_star", "Δ(a*) = Δ(a)*"),
    ("counit", "(ε⊗ι)Δ(a) = a = (ι⊗ε)Δ(a)"),
    ("counit_multiplicative", "ε(ab) = ε(a)ε(b)"),
    ("counit_star", "ε(a*) = conj ε(a)"),
    ("antipode", "m(S⊗ι)(Δ(a)(1⊗b)) = ε(a)b = m(ι⊗S)((b⊗1)Δ(a))"),
    ("antipode_anti_multiplicative", "S(ab) = S(b)S(a)"),
    ("antipode_star", "S(S(a*)*) = a"),
];

fn hopf_checks<T: Scalar>(r: &mut Report, h: &HopfAlgebra<T>, tol: f64) -> bool {
    let axioms = h.verify(tol);
    for ((id, value), (_, reference)) in axioms.residuals().into_iter().zip(AXIOM_REFERENCES) {
        r.check(id, reference, value, tol);
    }
    let ids = ["galois_delta_b1", "galois_delta_1b", "galois_b1_delta", "galois_1b_delta"];
    for (g, id) in axioms.galois.iter().zip(ids) {
        r.flag(id, &format!("a⊗b ↦ {} is bijective", g.name), g.bijective());
    }
    axioms.s_squared_identity
}

/// Axioms of the multiplier Hopf *-algebra, the Haar integral and its modular map.
pub fn verify<T: JsonScalar>(input: &str, name: &str, h: &HopfAlgebra<T>, o: &Options) -> Report {
    let tol = o.identity_tol();
    let mut r = Report::new("verify", input);
    algebra_checks(&mut r, &h.algebra, tol);
    let s_squared_identity = hopf_checks(&mut r, h, tol);
    let mut details = VerifyDetails {
        name: name.into(),
        dim: h.dim(),
        kind: h.classify_type(tol).as_str(),
        unital: h.algebra.is_unital(),
        s_squared_identity,
        tracial: None,
        rho_identity: None,
        phi: None,
        haar_error: None,
    };
    match QuantumGroup::new(h.clone(), tol) {
        Ok(qg) => {
            r.flag("haar_solved", "a positive faithful left invariant φ exists", true);
            r.check("left_invariance", "(ι⊗φ)(Δ(a)(b⊗1)) = φ(a)b", h.left_invariance_residual(qg.phi()), tol);
            r.check(
                "right_invariance",
                "(ψ⊗ι)(Δ(a)(1⊗b)) = ψ(a)b with ψ = φ∘S",
                h.right_invariance_residual(&qg.haar.psi),
                tol,
            );
            r.check("modular_map", "φ(ab) = φ(bρ(a))", modular_map_residual(&qg), tol);
            r.check("modular_map_star", "ρ(ρ(a*)*) = a", qg.haar.rho_star_residual(&qg.algebra), tol);
            details.tracial = Some(qg.is_tracial(o.predicate_tol()));
            details.rho_identity = Some(qg.haar.rho_is_identity(o.predicate_tol()));
            details.phi = Some(encode(&qg.phi().coeffs));
        }
        Err(e) => {
            r.flag("haar_solved", "a positive faithful left invariant φ exists", false);
            details.haar_error = Some(e.to_string());
        }
    }
    r.with_details(details)
}

#[derive(Serialize)]
struct DualDetails {
    reading: &'static str,
    dual: StructureFile,
}

/// The dual `Â` with its axioms, and the double dual isomorphism `A ≅ Â^`.
pub fn dualize<T: JsonScalar>(
    input: &str,
    name: &str,
    h: &HopfAlgebra<T>,
    o: &Options,
) -> Result<(Report, StructureFile)> {
    let tol = o.identity_tol();
    let qg = QuantumGroup::new(h.clone(), tol)?;
    let dual = build_dual(&qg, tol)?;
    let mut r = Report::new("dualize", input);
    algebra_checks(&mut r, &dual.dual.algebra, tol);
    hopf_checks(&mut r, &dual.dual, tol);
    r.check(
        "dual_right_haar",
        "ψ̂(φa) = ε(a) is right invariant on Â",
        dual.dual.right_invariance_residual(&dual.haar_right),
        tol,
    );
    let iso = double_dual_iso(&qg, tol)?;
    let pt = o.predicate_tol();
    r.flag("double_dual_star_iso", "π: A → Â^, π(a)(ω) = ω(a) is a *-isomorphism", iso.star_iso);
    r.flag("double_dual_delta", "(π⊗π)Δ = Δ̂^π", iso.intertwines_delta);
    r.check("double_dual_residual", "π respects product, *, Δ, ε, S", iso.residuals.max_residual(), pt);
    let file = StructureFile::from_hopf(&format!("dual of {name}"), &dual.dual);
    let r = r.with_details(DualDetails { reading: dual.reading.formula(), dual: file.clone() });
    Ok((r, file))
}

#[derive(Serialize)]
struct GnsDetails {
    dim: usize,
    gram_min_eigenvalue: f64,
    gram: Vec<Vec<ScalarJson>>,
}

/// The GNS pair of the Haar integral and the multiplicative unitary.
pub fn gns<T: JsonScalar>(input: &str, h: &HopfAlgebra<T>, o: &Options) -> Result<Report> {
    let tol = o.identity_tol();
    let qg = QuantumGroup::new(h.clone(), tol)?;
    let pair = build_gns(&qg.algebra, qg.phi(), tol)?;
    let res = pair.invariant_residuals();
    let pt = o.predicate_tol();
    let mut r = Report::new("gns", input);
    r.check("inner_product", "⟨Λ(a), Λ(b)⟩ = φ(b*a)", res.inner_product, pt);
    r.check("representation", "π(a)Λ(b) = Λ(ab)", res.representation, pt);
    r.check("representation_star", "π(a*) = π(a)*", res.star, pt);
    let w = build_w(&qg.hopf_algebra(), tol)?;
    r.check("w_defining", "W(Λ⊗Λ)(Δ(b)(a⊗1)) = Λ(a)⊗Λ(b)", w.defining_residual(), tol);
    r.check("w_unitary", "W*W = WW* = 1", w.unitarity_residual(&pair), tol);
    let gram_min = hermitian_eigenvalues(&pair.gram.to_c64()).into_iter().fold(f64::INFINITY, f64::min);
    r.flag("gram_positive", "φ(a*a) > 0 for a ≠ 0", gram_min > -PSD_THRESHOLD);
    let gram = (0..pair.dim()).map(|i| encode(pair.gram.row(i))).collect();
    Ok(r.with_details(GnsDetails { dim: pair.dim(), gram_min_eigenvalue: gram_min, gram }))
}

/// Pentagon equation and the implementation identities of `W`.
pub fn pentagon<T: JsonScalar>(input: &str, h: &HopfAlgebra<T>, o: &Options) -> Result<Report> {
    let tol = o.identity_tol();
    let qg = QuantumGroup::new(h.clone(), tol)?;
    let w = build_w(&qg.hopf_algebra(), tol)?;
    let pair = build_gns(&qg.algebra, qg.phi(), tol)?;
    let mut r = Report::new("pentagon", input);
    r.check("pentagon", "W₁₂W₁₃W₂₃ = W₂₃W₁₂", check_pentagon(&w, Some(PENTAGON_DIM_CAP))?, tol);
    r.check("w_unitary", "W*W = WW* = 1", w.unitarity_residual(&pair), tol);
    let dual = build_dual(&qg, tol)?;
    let imp = check_implementations(&qg, &w, &pair, &dual, Some(PENTAGON_DIM_CAP), tol)?;
    r.check("implements_delta", "W*(1⊗π(a))W = (π⊗π)Δ(a)", imp.delta_r, tol);
    r.check("implements_dual_delta", "W(π̂(b)⊗1)W* = (π̂⊗π̂)Δ̂(b)", imp.delta_hat_r, tol);
    r.check("leg_formula", "W₁₂*W₂₃W₁₂ = W₁₃W₂₃", imp.leg_formula, tol);
    if let Some(u) = imp.unit {
        r.check("delta_unit", "Δ_r(1) = 1", u, tol);
    }
    r.flag("w_membership", "W lies in the span of π(A) ⊗ π̂(Â)", imp.membership);
    Ok(r)
}

/// Finite-scale co-amenability and invariant-mean checks.
pub fn amen<T: JsonScalar>(input: &str, h: &HopfAlgebra<T>, o: &Options) -> Result<Report> {
    let tol = o.identity_tol();
    let qg = QuantumGroup::new(h.clone(), tol)?;
    let pair = build_gns(&qg.algebra, qg.phi(), tol)?;
    let w = build_w(&qg.hopf_algebra(), tol)?;
    let rep = amen_report(&qg, &pair, &w, o.samples, o.seed, tol)?;
    let pt = o.predicate_tol();
    let mut r = Report::new("amen", input);
    r.check("counit_bounded", "|ε(a)| ≤ ‖π(a)‖ on seeded samples", (rep.counit_bound_ratio_max - 1.0).max(0.0), pt);
    r.check("counit_slice", "(ε⊗ι)(W) = 1", rep.slice_residual, tol);
    for (k, v) in &rep.mean_residuals {
        r.check(&format!("mean {k}"), "m((ι⊗ω)Δ(x)) = ω(1)m(x)", *v, tol);
    }
    for (k, v) in &rep.identity_residuals {
        let (reference, t) = match k.as_str() {
            "counit_multiplicative_at_w" => ("ε((ι⊗ω_v)(W)) = ω_v(1)", pt),
            "approximate_unit" => ("ε·ω = ω·ε = ω", tol),
            "counit_ratio_at_unit" => ("|ε(1)| = ‖π(1)‖", pt),
            "tracial_mean" => ("(φ⊗φ)(Δ(a)*(b⊗1)Δ(a)) = φ(b) when φ(a*a) = 1", pt),
            _ => ("", tol),
        };
        r.check(k, reference, *v, t);
    }
    Ok(r)
}

/// Resolves `finite:` arguments: a shipped name (`S3`, `D4`, `Q8`, `Z<n>`) or
/// a group table file.
pub fn load_group_table(arg: &str) -> Result<FiniteGroup> {
    if let Some(g) = named_group(arg) {
        return Ok(g);
    }
    let json = std::fs::read_to_string(arg)
        .map_err(|e| Error::InvalidStructure(format!("cannot read group table {arg:?}: {e}")))?;
    GroupTableFile::parse(&json)
}

#[derive(Clone, Debug)]
pub struct KestenArgs {
    pub group: String,
    /// `std`, or generators separated by `;`.
    pub gens: String,
    pub radius: usize,
    pub moments: usize,
}

/// Lower bounds on `‖π(h)‖` for the uniform averaging element.
pub fn kesten(args: &KestenArgs, o: &Options) -> Result<Report> {
    let g = AnyGroup::parse(&args.group, load_group_table)?;
    let gens = if args.gens.trim() == "std" {
        g.standard_generators()
    } else {
        args.gens.split(';').map(|s| g.parse(s.trim())).collect::<Result<Vec<_>>>()?
    };
    let h = AveragingElement::uniform(&g, gens)?;
    let rep = amen_probe(&g, &h, args.radius, args.moments, o.seed, DEFAULT_BALL_CAP)?;
    let pt = o.predicate_tol();
    let mut r = Report::new("kesten", &args.group);
    r.check("oracle_axioms", "xx⁻¹ = e and (x⁻¹)⁻¹ = x on sampled words", rep.oracle_violations as f64, 0.0);
    let top = rep
        .rayleigh_bounds
        .iter()
        .chain(&rep.moment_bounds)
        .chain(&rep.moment_ratio_bounds)
        .map(|p| p.1)
        .fold(0.0, f64::max);
    r.check("bounds_at_most_one", "λ ≤ ‖π(h)‖ ≤ ε(h) = 1", (top - 1.0).max(0.0), IDENTITY_TOL);
    r.flag("bounds_monotone", "λ_R and φ(h^{2n})^{1/2n} are non-decreasing", rep.monotone);
    r.check("eigenvector_identity", "Σ_s w_s(1 − Re⟨π(s)v, v⟩) = 1 − λ_R", rep.eigen_identity_residual, pt);
    if let Some(gap) = rep.moment_float_rel_gap {
        // Rounding in the floating-point walk grows with the number of steps.
        r.check("moments_exact_vs_float", "exact and floating-point φ(h^{2n}) agree (relative)", gap, pt);
    }
    Ok(r.with_details(rep))
}

pub const FLOW_REFERENCES: [(&str, &str); 28] = [
    ("condition4", "S²(a) = f₋₁ * a * f₁"),
    ("condition5", "ρ(a) = f₁ * a * f₁"),
    ("f2_convolution", "ρS⁻²(a) = f₂ * a"),
    ("f0_counit", "f₀ = ε"),
    ("grid_additive", "f_{z+w} = (f_z ⊗ f_w)Δ"),
    ("grid_antipode", "f_z(S(a)) = f₋z(a)"),
    ("grid_star", "conj f_z(a*) = f_{−z̄}(a)"),
    ("grid_multiplicative", "f_z(ab) = f_z(a)f_z(b)"),
    ("f_it_star_hom", "f_it is a unital *-homomorphism"),
    ("f_it_modulus", "|f_it(g)| = |ε(g)| on generators"),
    ("sigma_zero", "σ₀ = ι"),
    ("sigma_multiplicative", "σ_t(ab) = σ_t(a)σ_t(b)"),
    ("sigma_star", "σ_t(a*) = σ_t(a)*"),
    ("sigma_unit", "σ_t(1) = 1"),
    ("sigma_group_law", "σ_{s+t} = σ_sσ_t"),
    ("phi_invariance", "φ∘σ_t = φ"),
    ("f_group_law", "F_{s+t} = F_sF_t"),
    ("e_group_law", "E_{s+t} = E_sE_t"),
    ("v_group_law", "V_{s+t} = V_sV_t"),
    ("unitarity", "F_t, E_t, V_t preserve ⟨Λ(a), Λ(b)⟩"),
    ("commutation", "F_tE_s = E_sF_t"),
    ("v_factorization", "V_t = F_tE_t = E_tF_t"),
    ("f_fixes_unit", "F_tΛ(1) = Λ(1)"),
    ("v_implementation", "V_tπ(a)V_t* = π(σ_t(a))"),
    ("kms", "φ(ab) = φ(b(f₁ * a * f₁))"),
    ("kms_unit", "φ(a) = φ(f₁ * a * f₁)"),
    ("w_slice_f", "F_t = (f_it ⊗ ι)(W)"),
    ("w_slice_e", "E_t = (f_it ⊗ ι)(W_op)"),
];

fn flow_checks(r: &mut Report, f: &FlowReport, tol: f64) {
    for (id, value) in f.residuals() {
        let reference = FLOW_REFERENCES.iter().find(|p| p.0 == id).map(|p| p.1).unwrap_or("");
        r.check(id, reference, value, tol);
    }
    r.flag("family_unique", "log μ is determined by the exponent system", f.character.unique);
    r.flag("tracial_equivalence", "μ ≡ 1 ⟺ ρ = ι ⟺ φ tracial", f.tracial.equivalent);
}

#[derive(Clone, Debug, Default)]
pub struct ModularArgs {
    pub truncate: Option<usize>,
    /// Exact decimal or fraction.
    pub q: Option<String>,
    pub times: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct SandboxDetails {
    name: String,
    q: String,
    truncation: usize,
    dim: usize,
    gram_min_eigenvalue: f64,
    haar: Vec<(String, ScalarJson)>,
    flow: FlowReport,
}

#[derive(Serialize)]
struct FiniteModularDetails {
    name: String,
    flow: FlowReport,
}

pub const DEFAULT_TRUNCATION: usize = 4;

/// Whether a JSON document is a relations file rather than a structure file.
pub fn is_relations_file(json: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(json)
        .ok()
        .and_then(|v| v.get("format").and_then(|f| f.as_str()).map(|f| f == RELATIONS_FORMAT))
        .unwrap_or(false)
}

/// Modular family, flow and KMS checks for a structure file or a relations
/// file (the latter truncated by degree).
pub fn modular(input: &str, json: &str, args: &ModularArgs, o: &Options) -> Result<Report> {
    let tol = o.tol.unwrap_or(MODULAR_TOL);
    let times = args.times.clone().unwrap_or_else(|| crate::modular::DEFAULT_TIMES.to_vec());
    let mut r = Report::new("modular", input);
    if is_relations_file(json) {
        let spec = RelationsSpec::parse(json)?;
        let q = match (&args.q, &spec.q) {
            (Some(s), _) => {
                parse_rational(s).ok_or_else(|| Error::InvalidStructure(format!("cannot parse q = {s:?}")))?
            }
            (None, Some(q)) if q.den != 0 => crate::scalar::rational(q.num, q.den),
            _ => return Err(Error::InvalidStructure("no deformation parameter q given".into())),
        };
        let d = args.truncate.or(spec.truncate).unwrap_or(DEFAULT_TRUNCATION);
        let exact = FilteredAlgebra::<QC>::build(&spec, real_rational(q.clone()), d, 0.0)?;
        for (id, value) in exact.hopf_report.residuals() {
            r.check(id, "Hopf identities on the truncation", value, IDENTITY_TOL);
        }
        let (left, right) = exact.invariance_residuals();
        r.check("haar_left_invariance", "(ι⊗φ)Δ(a) = φ(a)1 on the truncation", left, IDENTITY_TOL);
        r.check("haar_right_invariance", "(φ⊗ι)Δ(a) = φ(a)1 on the truncation", right, IDENTITY_TOL);
        r.flag(
            "haar_positive",
            "Gram matrix of monomials of degree ≤ d/2 is positive semidefinite",
            exact.gram_min_eigenvalue >= PSD_THRESHOLD,
        );
        let alg = exact.to_c64();
        let flow = flow_report(&alg, &times, tol)?;
        flow_checks(&mut r, &flow, tol);
        let haar = (0..exact.dim()).map(|i| (exact.monomial_label(i), exact.phi[i].to_json())).collect();
        Ok(r.with_details(SandboxDetails {
            name: spec.name.clone(),
            q: q.to_string(),
            truncation: d,
            dim: exact.dim(),
            gram_min_eigenvalue: exact.gram_min_eigenvalue,
            haar,
            flow,
        }))
    } else {
        let file = StructureFile::parse(json)?;
        let h: HopfAlgebra<C64> = file.to_hopf(IDENTITY_TOL)?;
        let qg = QuantumGroup::new(h, IDENTITY_TOL)?;
        let flow = finite_flow_report(&qg, &times, tol)?;
        flow_checks(&mut r, &flow, tol);
        Ok(r.with_details(FiniteModularDetails { name: file.name, flow }))
    }
}

/// The structure file of `C(Γ)` (`kind = "C"`) or `K(Γ)` (`"K"`), or the
/// group table itself (`"table"`), as JSON.
pub fn export(kind: &str, group: &str) -> Result<String> {
    let g = load_group_table(group)?;
    let h = match kind {
        "C" => crate::groups::group_algebra::<QC>(&g),
        "K" => crate::groups::function_algebra::<QC>(&g),
        "table" => {
            let v = serde_json::to_value(GroupTableFile::from_group(&g)).expect("group tables serialize");
            return Ok(crate::io::to_json_rows(&v));
        }
        _ => return Err(Error::InvalidStructure(format!("unknown export kind {kind:?}; expected C, K or table"))),
    };
    Ok(StructureFile::from_hopf(&format!("{kind}({})", g.name), &h).to_json())
}

/// Reads a structure file from disk.
pub fn read_structure(path: &Path) -> Result<StructureFile> {
    let json = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidStructure(format!("cannot read {}: {e}", path.display())))?;
    StructureFile::parse(&json)
}
