use aqg::groups::{cyclic, dihedral4, function_algebra, group_algebra, quaternion8, symmetric3};
use aqg::hopf::QuantumGroup;
use aqg::matrix::Mat;
use aqg::modular::*;
use aqg::scalar::{c64, qc, rational, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn six_groups() -> Vec<aqg::groups::FiniteGroup> {
    vec![cyclic(2), cyclic(3), cyclic(6), symmetric3(), dihedral4(), quaternion8()]
}

fn sandbox(d: usize) -> FilteredAlgebra<C64> {
    suq2_build(qc(1, 2), d, 0.0).unwrap().to_c64()
}

#[test]
fn finite_corpus_collapses_to_the_trivial_flow() {
    for g in six_groups() {
        for h in [group_algebra::<C64>(&g), function_algebra::<C64>(&g)] {
            let qg = QuantumGroup::new(h, 1e-10).unwrap();
            let r = finite_flow_report(&qg, &DEFAULT_TIMES, 1e-10).unwrap();
            assert!(r.character.is_trivial(1e-12), "{}", g.name);
            assert!(r.tracial.equivalent && r.tracial.mu_trivial && r.tracial.rho_identity && r.tracial.phi_tracial);
            assert!(r.kms < 1e-12);
            assert!(r.w_slice_f.unwrap() <= 1e-12 && r.w_slice_e.unwrap() <= 1e-12);
            let setting = FiniteSetting::new(qg.clone()).unwrap();
            let id = Mat::<C64>::identity(qg.dim());
            for t in DEFAULT_TIMES {
                let u = flow_unitaries(&setting, &r.character, t);
                assert!(u.f.dist(&id) < 1e-12 && u.e.dist(&id) < 1e-12 && u.v.dist(&id) < 1e-12);
                assert!(sigma_t(&setting, &r.character, t).dist(&id) < 1e-12);
            }
        }
    }
}

#[test]
fn sandbox_family_at_half() {
    let alg = sandbox(4);
    let ch = solve_modular_family(&alg, 1e-10).unwrap();
    assert!(ch.unique);
    let f1 = ch.functional(&alg, c64(1.0, 0.0));
    let a = alg.monomial("a").unwrap();
    let c = alg.monomial("c").unwrap();
    assert_eq!(f1[c], c64(0.0, 0.0));
    // With S(c) = -qc one has S²(c) = q²c, which puts f_1(a) at q⁻¹.
    assert!((f1[a] - c64(2.0, 0.0)).norm() < 1e-12);
    assert!(alg.gram_min_eigenvalue >= -1e-10);
}

#[test]
fn sandbox_flow_at_half() {
    let alg = sandbox(4);
    let r = flow_report(&alg, &DEFAULT_TIMES, 1e-10).unwrap();
    assert!(r.kms <= 1e-10 && r.kms_unit <= 1e-10);
    assert!(r.max_residual() <= 1e-10, "{:?}", r.residuals());
    let ch = &r.character;
    let f = |t| flow_unitaries(&alg, ch, t).f;
    assert!(f(0.8).dist(&f(0.3).matmul(&f(0.5))) <= 1e-10);
    assert_eq!(r.sigma_generator_scalars.len(), 4);
    for (_, modulus, _) in &r.sigma_generator_scalars {
        assert!((modulus - 1.0).abs() < 1e-12);
    }
    assert!(!r.tracial.phi_tracial && r.tracial.equivalent);
}

#[test]
fn haar_values_are_stable_across_truncations() {
    for q in [qc(1, 2), qc(2, 3)] {
        let small = suq2_build(q.clone(), 4, 0.0).unwrap();
        let big = suq2_build(q, 6, 0.0).unwrap();
        for (i, w) in small.basis().iter().enumerate() {
            let j = big.index_of(w).unwrap();
            assert_eq!(small.phi[i], big.phi[j]);
        }
        let (s, b) = (small.to_c64(), big.to_c64());
        for (i, w) in s.basis().iter().enumerate() {
            assert!((s.phi[i] - b.phi[b.index_of(w).unwrap()]).norm() <= 1e-10);
        }
    }
}

#[test]
fn haar_matches_the_closed_form_on_the_torus_sector() {
    // φ((cc*)^m) = (1 - q²)/(1 - q^{2m+2}).
    let alg = suq2_build(qc(1, 2), 6, 0.0).unwrap();
    let q2 = rational(1, 4);
    for m in 0..=3usize {
        let word = [vec!["c"; m], vec!["c*"; m]].concat().join(" ");
        let i = if m == 0 { alg.index_of(&[]).unwrap() } else { alg.monomial(&word).unwrap() };
        let expected = (BigRational::from_integer(BigInt::from(1)) - &q2)
            / (BigRational::from_integer(BigInt::from(1)) - num_traits::pow(q2.clone(), m + 1));
        assert_eq!(alg.phi[i].re, expected, "m = {m}");
    }
}

#[test]
fn second_dataset_value_is_consistent() {
    let alg = suq2_build(qc(2, 3), 4, 0.0).unwrap().to_c64();
    let r = flow_report(&alg, &[0.3, -0.7], 1e-10).unwrap();
    assert!(r.max_residual() <= 1e-10);
    let a = alg.monomial("a").unwrap();
    assert!((r.character.functional(&alg, c64(1.0, 0.0))[a].re - 1.5).abs() < 1e-12);
}

#[test]
fn near_commutative_guard_is_almost_tracial() {
    let alg = suq2_build(c64(1.0 - 1e-6, 0.0), 4, 1e-9).unwrap();
    let r = flow_report(&alg, &[0.3], 1e-10).unwrap();
    assert!(r.tracial.trace_residual < 1e-5);
    assert!(r.character.mu.iter().all(|m| (m - 1.0).abs() < 1e-5));
    assert!(r.tracial.equivalent);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn family_is_additive_off_the_grid(zr in -2.0f64..2.0, zi in -2.0f64..2.0, wr in -2.0f64..2.0, wi in -2.0f64..2.0) {
        let alg = sandbox(2);
        let ch = solve_modular_family(&alg, 1e-10).unwrap();
        let (z, w) = (c64(zr, zi), c64(wr, wi));
        let lhs = ch.functional(&alg, z + w);
        let rhs = convolve(&alg, &ch.functional(&alg, z), &ch.functional(&alg, w));
        let scale = 1.0 + lhs.iter().map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert!(aqg::matrix::vec_dist(&lhs, &rhs) <= 1e-12 * scale);
    }

    #[test]
    fn sigma_is_a_one_parameter_group(s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let alg = sandbox(2);
        let ch = solve_modular_family(&alg, 1e-10).unwrap();
        let lhs = sigma_t(&alg, &ch, s + t);
        let rhs = sigma_t(&alg, &ch, s).matmul(&sigma_t(&alg, &ch, t));
        prop_assert!(lhs.dist(&rhs) <= 1e-12);
    }
}
