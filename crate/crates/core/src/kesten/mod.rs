//! Spectral probes for infinite discrete groups: lower bounds on `‖π(h)‖` for
//! a symmetric averaging element `h = Σ w_s s` of the group algebra.
//!
//! For an amenable group `‖π(h)‖ = ε(h) = 1`. Everything reported here is a
//! lower bound for `‖π(h)‖`; nothing decides amenability.

pub mod ball;
pub mod group;
pub mod lanczos;
pub mod moments;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

pub use ball::{build_ball, CayleyBall, DEFAULT_BALL_CAP, OUTSIDE};
pub use group::{AnyElem, AnyGroup, FreeGroup, GroupOracle, IntLattice, TableGroup};
pub use lanczos::{top_eigenpair, CompressedOp, Eigenpair};
pub use moments::{moment_sequence, MomentMethod, MomentRecord, MomentSequence, DEFAULT_MOMENT_CAP};

use crate::error::{Error, Result};
use crate::gns::build_gns;
use crate::groups::{group_algebra, FiniteGroup};
use crate::hopf::QuantumGroup;
use crate::matrix::op_norm;
use crate::sampling;
use crate::scalar::C64;

/// Relative accuracy of the top-eigenvalue iteration.
pub const EIGEN_REL_TOL: f64 = 1e-10;

/// `h = Σ w_s s` with `w_s > 0` and `Σ w_s = 1`.
#[derive(Clone, Debug)]
pub struct AveragingElement<E> {
    generators: Vec<E>,
    weights: Vec<BigRational>,
    symmetric: bool,
}

impl<E: Clone + Eq + Hash + Debug> AveragingElement<E> {
    pub fn uniform<G: GroupOracle<Elem = E>>(g: &G, generators: Vec<E>) -> Result<Self> {
        let n = generators.len() as i64;
        let w = vec![BigRational::new(BigInt::one(), BigInt::from(n.max(1))); generators.len()];
        Self::with_weights(g, generators, w)
    }

    pub fn with_weights<G: GroupOracle<Elem = E>>(
        g: &G,
        generators: Vec<E>,
        weights: Vec<BigRational>,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidStructure("an averaging element needs at least one generator".into()));
        }
        if weights.len() != generators.len() {
            return Err(Error::DimensionMismatch { expected: generators.len(), found: weights.len() });
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidStructure("generator weights must be positive".into()));
        }
        if weights.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::InvalidStructure("generator weights must sum to 1".into()));
        }
        let mut totals: HashMap<E, BigRational> = HashMap::new();
        for (s, w) in generators.iter().zip(&weights) {
            *totals.entry(s.clone()).or_insert_with(BigRational::zero) += w;
        }
        let symmetric = totals.iter().all(|(s, w)| totals.get(&g.inv(s)) == Some(w));
        Ok(AveragingElement { generators, weights, symmetric })
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(moments::ratio_to_f64).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.symmetric {
            Ok(())
        } else {
            Err(Error::NotSymmetric)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayleighRecord {
    pub radius: usize,
    pub ball_size: usize,
    pub value: f64,
    pub residual: f64,
    pub converged: bool,
}

/// `λ_R = sup ⟨π(h)v, v⟩` over unit vectors supported in the ball.
pub fn rayleigh_bound<E: Clone + Eq + Hash + Debug>(
    ball: &CayleyBall<E>,
    h: &AveragingElement<E>,
    radius: usize,
) -> Result<Eigenpair> {
    h.require_symmetric()?;
    let w = h.weights_f64();
    let op = CompressedOp::new(ball.gen_actions(), &w, ball.size_at(radius));
    Ok(top_eigenpair(&op, EIGEN_REL_TOL))
}

pub fn rayleigh_bounds<E: Clone + Eq + Hash + Debug>(
    ball: &CayleyBall<E>,
    h: &AveragingElement<E>,
) -> Result<Vec<RayleighRecord>> {
    (0..=ball.radius())
        .map(|r| {
            let p = rayleigh_bound(ball, h, r)?;
            Ok(RayleighRecord {
                radius: r,
                ball_size: ball.size_at(r),
                value: p.value,
                residual: p.residual,
                converged: p.converged,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FolnerVector {
    /// Unit vector on the ball with non-negative entries.
    pub vector: Vec<f64>,
    /// `⟨π(h)v, v⟩`.
    pub value: f64,
    /// `‖π(s)v − v‖` per generator.
    pub residuals: Vec<f64>,
    /// `|Σ_s w_s (1 − ⟨π(s)v, v⟩) − (1 − λ)|`.
    pub identity_residual: f64,
}

/// The top eigenvector of the compression, normalized as a Perron vector.
pub fn folner_vector<E: Clone + Eq + Hash + Debug>(
    ball: &CayleyBall<E>,
    h: &AveragingElement<E>,
) -> Result<FolnerVector> {
    let pair = rayleigh_bound(ball, h, ball.radius())?;
    let w = h.weights_f64();
    let op = CompressedOp::new(ball.gen_actions(), &w, ball.len());
    let p = lanczos::perron_normalize(&op, &pair);
    let overlaps: Vec<f64> = (0..w.len()).map(|s| op.generator_overlap(s, &p.vector)).collect();
    let residuals = overlaps.iter().map(|o| (2.0 - 2.0 * o).max(0.0).sqrt()).collect();
    let defect: f64 = w.iter().zip(&overlaps).map(|(ws, o)| ws * (1.0 - o)).sum();
    Ok(FolnerVector {
        vector: p.vector,
        value: p.value,
        residuals,
        identity_residual: (defect - (1.0 - p.value)).abs(),
    })
}

/// Sampled associativity and inverse checks of an oracle on words in `gens`.
pub fn oracle_violations<G: GroupOracle>(g: &G, gens: &[G::Elem], samples: usize, seed: u64) -> usize {
    let mut rng = sampling::rng(seed);
    let word = |rng: &mut rand_chacha::ChaCha8Rng| {
        let len = rng.gen_range(0..=6);
        (0..len).fold(g.identity(), |acc, _| g.mul(&acc, &gens[rng.gen_range(0..gens.len())]))
    };
    let mut bad = 0;
    for _ in 0..samples {
        let (x, y, z) = (word(&mut rng), word(&mut rng), word(&mut rng));
        if g.mul(&g.mul(&x, &y), &z) != g.mul(&x, &g.mul(&y, &z)) {
            bad += 1;
        }
        if g.mul(&x, &g.inv(&x)) != g.identity() || g.inv(&g.inv(&x)) != x {
            bad += 1;
        }
    }
    bad
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub group: String,
    pub generators: Vec<String>,
    pub weights: Vec<String>,
    pub symmetric: bool,
    pub oracle_violations: usize,
    pub rayleigh_bounds: Vec<(usize, f64)>,
    pub rayleigh: Vec<RayleighRecord>,
    pub moment_method: Option<MomentMethod>,
    pub moment_bounds: Vec<(usize, f64)>,
    pub moment_ratio_bounds: Vec<(usize, f64)>,
    pub moment_values: Vec<String>,
    pub moment_float_rel_gap: Option<f64>,
    pub folner_residuals: Vec<(String, f64)>,
    pub eigen_identity_residual: f64,
    pub best_lower_bound: f64,
    pub verdict_gap: f64,
    pub monotone: bool,
    pub note: String,
}

fn non_decreasing(xs: impl Iterator<Item = f64>, tol: f64) -> bool {
    let v: Vec<f64> = xs.collect();
    v.windows(2).all(|p| p[1] >= p[0] - tol)
}

/// Rayleigh bounds for `R ≤ r_max`, moment bounds for `n ≤ n_max`, and the
/// Følner vector on the largest ball.
pub fn amen_probe<G: GroupOracle>(
    g: &G,
    h: &AveragingElement<G::Elem>,
    r_max: usize,
    n_max: usize,
    seed: u64,
    ball_cap: usize,
) -> Result<SpectralReport> {
    h.require_symmetric()?;
    let violations = oracle_violations(g, h.generators(), 64, seed);
    let ball = build_ball(g, h.generators(), r_max, ball_cap)?;
    let rayleigh = rayleigh_bounds(&ball, h)?;
    let folner = folner_vector(&ball, h)?;
    let moments = if n_max > 0 { Some(moment_sequence(g, h, n_max, DEFAULT_MOMENT_CAP.min(ball_cap))?) } else { None };
    let records = moments.as_ref().map(|m| m.records.as_slice()).unwrap_or(&[]);
    let rayleigh_bounds: Vec<(usize, f64)> = rayleigh.iter().map(|r| (r.radius, r.value)).collect();
    let moment_bounds: Vec<(usize, f64)> = records.iter().map(|r| (r.n, r.bound)).collect();
    let moment_ratio_bounds: Vec<(usize, f64)> = records.iter().map(|r| (r.n, r.ratio_bound)).collect();
    let best = rayleigh_bounds
        .iter()
        .chain(&moment_bounds)
        .chain(&moment_ratio_bounds)
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let monotone = non_decreasing(rayleigh_bounds.iter().map(|p| p.1), 1e-12)
        && non_decreasing(moment_bounds.iter().map(|p| p.1), 1e-12)
        && non_decreasing(moment_ratio_bounds.iter().map(|p| p.1), 1e-12);
    Ok(SpectralReport {
        group: g.name(),
        generators: h.generators().iter().map(|s| g.format(s)).collect(),
        weights: h.weights().iter().map(|w| w.to_string()).collect(),
        symmetric: h.is_symmetric(),
        oracle_violations: violations,
        rayleigh_bounds,
        rayleigh,
        moment_method: moments.as_ref().map(|m| m.method),
        moment_bounds,
        moment_ratio_bounds,
        moment_values: records.iter().map(|r| r.exact.to_string()).collect(),
        moment_float_rel_gap: moments.as_ref().map(|m| m.max_float_rel_gap()),
        folner_residuals: h.generators().iter().map(|s| g.format(s)).zip(folner.residuals).collect(),
        eigen_identity_residual: folner.identity_residual,
        best_lower_bound: best,
        verdict_gap: 1.0 - best,
        monotone,
        note: "lower bounds on the reduced norm of h only; no amenability verdict".into(),
    })
}

/// `‖π(h)‖` for a finite group computed twice: from the dense compression on
/// the whole group, and from the GNS representation of the Haar integral on
/// the group algebra.
pub fn finite_norm_both_ways(g: &FiniteGroup, h: &AveragingElement<usize>, tol: f64) -> Result<(f64, f64)> {
    h.require_symmetric()?;
    let oracle = TableGroup(g.clone());
    let ball = build_ball(&oracle, h.generators(), g.order(), DEFAULT_BALL_CAP)?;
    let w = h.weights_f64();
    let dense = CompressedOp::new(ball.gen_actions(), &w, ball.len()).to_dense();
    let kesten = dense.symmetric_eigenvalues().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let qg = QuantumGroup::new(group_algebra::<C64>(g), tol)?;
    let gns = build_gns(&qg.algebra, qg.phi(), tol)?;
    let mut coeffs = vec![C64::zero(); g.order()];
    for (s, ws) in h.generators().iter().zip(h.weights()) {
        coeffs[*s] += C64::new(ws.to_f64().unwrap_or(0.0), 0.0);
    }
    let reduced = op_norm(&gns.pi(&coeffs));
    Ok((kesten, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::symmetric3;

    #[test]
    fn finite_group_is_saturated() {
        let g = TableGroup(symmetric3());
        let h = AveragingElement::uniform(&g, g.standard_generators()).unwrap();
        let report = amen_probe(&g, &h, 4, 6, 1, DEFAULT_BALL_CAP).unwrap();
        assert!((report.rayleigh_bounds.last().unwrap().1 - 1.0).abs() < 1e-12);
        assert!(report.folner_residuals.iter().all(|(_, r)| *r < 1e-6));
        let (a, b) = finite_norm_both_ways(&symmetric3(), &h, 1e-10).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn asymmetric_weights_are_rejected() {
        let z = IntLattice { d: 1 };
        let h = AveragingElement::uniform(&z, vec![vec![1]]).unwrap();
        assert!(!h.is_symmetric());
        let ball = build_ball(&z, h.generators(), 3, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(rayleigh_bound(&ball, &h, 3).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn trivial_group_has_no_gap() {
        let g = TableGroup(crate::groups::cyclic(1));
        let h = AveragingElement::uniform(&g, g.standard_generators()).unwrap();
        let report = amen_probe(&g, &h, 0, 3, 0, DEFAULT_BALL_CAP).unwrap();
        assert!(report.verdict_gap.abs() < 1e-15);
    }
}
