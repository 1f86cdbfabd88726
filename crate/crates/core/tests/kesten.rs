use aqg::groups::{dihedral4, quaternion8, symmetric3};
use aqg::kesten::*;
use aqg::scalar::rational;
use nalgebra::SymmetricEigen;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn uniform<G: GroupOracle>(g: &G) -> AveragingElement<G::Elem> {
    AveragingElement::uniform(g, g.standard_generators()).unwrap()
}

#[test]
fn z1_radius_ten_matches_dense_eigensolver() {
    let z = IntLattice { d: 1 };
    let h = uniform(&z);
    let ball = build_ball(&z, h.generators(), 10, DEFAULT_BALL_CAP).unwrap();
    let w = h.weights_f64();
    let dense = CompressedOp::new(ball.gen_actions(), &w, ball.len()).to_dense();
    let top = SymmetricEigen::new(dense).eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let lanczos = rayleigh_bound(&ball, &h, 10).unwrap();
    assert!((lanczos.value - top).abs() < 1e-10);
    assert!((lanczos.value - (std::f64::consts::PI / 22.0).cos()).abs() < 1e-9);
}

#[test]
fn z1_folner_vector_is_a_sine_profile() {
    let z = IntLattice { d: 1 };
    let h = uniform(&z);
    let ball = build_ball(&z, h.generators(), 10, DEFAULT_BALL_CAP).unwrap();
    let f = folner_vector(&ball, &h).unwrap();
    assert!(f.identity_residual < 1e-10);
    let norm: f64 = (1..=21).map(|k| (std::f64::consts::PI * k as f64 / 22.0).sin().powi(2)).sum::<f64>().sqrt();
    for (i, x) in ball.elements().iter().enumerate() {
        let k = (x[0] + 11) as f64;
        let expected = (std::f64::consts::PI * k / 22.0).sin() / norm;
        assert!((f.vector[i] - expected).abs() < 1e-8);
    }
}

#[test]
fn lattice_moments_match_central_binomials() {
    let z = IntLattice { d: 1 };
    let seq = moment_sequence(&z, &uniform(&z), 12, DEFAULT_MOMENT_CAP).unwrap();
    let z2 = IntLattice { d: 2 };
    let seq2 = moment_sequence(&z2, &uniform(&z2), 10, DEFAULT_MOMENT_CAP).unwrap();
    for r in &seq.records {
        let n = r.n as u64;
        let p = BigRational::new(binom(2 * n, n), BigInt::from(4).pow(n as u32));
        assert_eq!(r.exact, p);
        if let Some(r2) = seq2.records.get(r.n - 1) {
            assert_eq!(r2.exact, &p * &p);
        }
    }
    assert!((seq.records[0].bound - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(seq.max_float_rel_gap() < 1e-12);
    assert!(seq2.max_float_rel_gap() < 1e-12);
}

fn free_returns_by_enumeration(steps: usize) -> u64 {
    // Counts words of the given length in a, A, b, B that reduce to the identity.
    fn go(stack: &mut Vec<i8>, left: usize) -> u64 {
        if left < stack.len() {
            return 0;
        }
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for l in [1i8, -1, 2, -2] {
            if stack.last() == Some(&-l) {
                stack.pop();
                total += go(stack, left - 1);
                stack.push(-l);
            } else {
                stack.push(l);
                total += go(stack, left - 1);
                stack.pop();
            }
        }
        total
    }
    go(&mut Vec::new(), steps)
}

#[test]
fn free_group_moments_match_path_counting() {
    let f = FreeGroup::new(2).unwrap();
    let seq = moment_sequence(&f, &uniform(&f), 6, DEFAULT_MOMENT_CAP).unwrap();
    assert_eq!(seq.method, MomentMethod::FreeRadial);
    for r in &seq.records {
        let count = free_returns_by_enumeration(2 * r.n);
        assert_eq!(r.exact, BigRational::new(BigInt::from(count), BigInt::from(4).pow(2 * r.n as u32)));
    }
    assert_eq!(seq.records[0].exact, rational(1, 4));
}

#[test]
fn free_group_ball_moments_agree_in_floating_point() {
    let f = FreeGroup::new(2).unwrap();
    let h = uniform(&f);
    let records = moments::ball_moments(&f, &h, 8, DEFAULT_MOMENT_CAP).unwrap();
    for r in &records {
        let fv = r.float_value.unwrap();
        let e = moments::ratio_to_f64(&r.exact);
        assert!(((fv - e) / e).abs() < 1e-12);
    }
}

#[test]
fn free_group_bounds_stay_below_the_tree_norm() {
    let ceiling = 3f64.sqrt() / 2.0;
    let f = FreeGroup::new(2).unwrap();
    let report = amen_probe(&f, &uniform(&f), 8, 25, 7, DEFAULT_BALL_CAP).unwrap();
    assert!(report.monotone);
    assert_eq!(report.rayleigh.last().unwrap().ball_size, 2 * 3usize.pow(8) - 1);
    for (_, b) in report.rayleigh_bounds.iter().chain(&report.moment_bounds).chain(&report.moment_ratio_bounds) {
        assert!(*b <= ceiling + 1e-12);
    }
    assert!(report.best_lower_bound >= 0.80);
    assert!(report.folner_residuals.iter().all(|(_, r)| *r >= 0.3));
    assert!(report.eigen_identity_residual < 1e-10);
    assert!(report.moment_float_rel_gap.unwrap() < 1e-12);
}

#[test]
fn finite_groups_agree_with_the_gns_norm() {
    for g in [symmetric3(), dihedral4(), quaternion8()] {
        let t = TableGroup(g.clone());
        let h = uniform(&t);
        let (kesten, gns) = finite_norm_both_ways(&g, &h, 1e-10).unwrap();
        assert!((kesten - gns).abs() < 1e-10, "{}: {kesten} vs {gns}", g.name);
        let report = amen_probe(&t, &h, 6, 10, 0, DEFAULT_BALL_CAP).unwrap();
        for (_, b) in report.rayleigh_bounds.iter().chain(&report.moment_bounds) {
            assert!(*b <= gns + 1e-10);
        }
        assert!((report.rayleigh_bounds.last().unwrap().1 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn products_combine_factors() {
    let g = AnyGroup::parse("product:Z^1,F_1", |_| unreachable!()).unwrap();
    let h = uniform(&g);
    let ball = build_ball(&g, h.generators(), 3, DEFAULT_BALL_CAP).unwrap();
    // Z × Z: the diamond |x| + |y| ≤ 3.
    assert_eq!(ball.len(), 25);
}

proptest! {
    #[test]
    fn free_oracle_is_a_group(a in prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2, 3, -3]), 0..8),
                              b in prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2, 3, -3]), 0..8),
                              c in prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2, 3, -3]), 0..8)) {
        let f = FreeGroup::new(3).unwrap();
        let red = |w: &Vec<i8>| w.iter().fold(f.identity(), |acc, &l| f.mul(&acc, &vec![l]));
        let (x, y, z) = (red(&a), red(&b), red(&c));
        prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
        prop_assert_eq!(f.mul(&x, &f.inv(&x)), f.identity());
        prop_assert_eq!(f.inv(&f.inv(&x)), x.clone());
        prop_assert_eq!(f.parse(&f.format(&x)).unwrap(), x);
    }

    #[test]
    fn lattice_rayleigh_bounds_are_monotone_and_sound(d in 1usize..=3, r in 1usize..=5) {
        let z = IntLattice { d };
        let h = uniform(&z);
        let ball = build_ball(&z, h.generators(), r, DEFAULT_BALL_CAP).unwrap();
        let bounds = rayleigh_bounds(&ball, &h).unwrap();
        for pair in bounds.windows(2) {
            prop_assert!(pair[1].value >= pair[0].value - 1e-12);
        }
        prop_assert!(bounds.iter().all(|b| b.value <= 1.0 + 1e-12));
    }
}
