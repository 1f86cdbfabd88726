//! Return-probability moments `φ(h^{2n})`, exact in rationals with a
//! floating-point shadow computation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ball::{build_ball, OUTSIDE};
use super::group::GroupOracle;
use super::AveragingElement;
use crate::error::{Error, Result};

/// Ball cap for the exact rational path.
pub const DEFAULT_MOMENT_CAP: usize = 250_000;

/// Moments up to this order are also computed in floating point and compared.
pub const FLOAT_CHECK_ORDER: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    /// Self-convolution of the distribution of `h^n` over the ball `B_n`.
    Ball,
    /// Distance-from-identity chain on the regular tree of a free group with
    /// uniform weights on a free basis and its inverses.
    FreeRadial,
}

#[derive(Clone, Debug)]
pub struct MomentRecord {
    pub n: usize,
    /// `φ(h^{2n})`.
    pub exact: BigRational,
    /// `φ(h^{2n})^{1/2n}`.
    pub bound: f64,
    /// `(φ(h^{2n}) / φ(h^{2n-2}))^{1/2}`, also a lower bound for `‖π(h)‖`.
    pub ratio_bound: f64,
    pub float_value: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct MomentSequence {
    pub method: MomentMethod,
    pub records: Vec<MomentRecord>,
}

impl MomentSequence {
    /// Largest relative gap between the exact and floating-point moments.
    pub fn max_float_rel_gap(&self) -> f64 {
        self.records
            .iter()
            .filter_map(|r| {
                let f = r.float_value?;
                let e = ratio_to_f64(&r.exact);
                Some(((f - e) / e).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Natural logarithm of a positive rational, safe for values outside the f64 range.
pub fn ln_ratio(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        ln_ratio(x).exp()
    }
}

fn records_from(exact: Vec<BigRational>, float: Vec<Option<f64>>) -> Vec<MomentRecord> {
    let mut out = Vec::with_capacity(exact.len());
    let mut prev_ln = 0.0;
    for (i, (m, f)) in exact.into_iter().zip(float).enumerate() {
        let n = i + 1;
        let ln = ln_ratio(&m);
        out.push(MomentRecord {
            n,
            bound: (ln / (2 * n) as f64).exp(),
            ratio_bound: ((ln - prev_ln) / 2.0).exp(),
            exact: m,
            float_value: f,
        });
        prev_ln = ln;
    }
    out
}

/// `φ(h^{2n})` for `n = 1..=n_max`.
pub fn moment_sequence<G: GroupOracle>(
    g: &G,
    h: &AveragingElement<G::Elem>,
    n_max: usize,
    cap: usize,
) -> Result<MomentSequence> {
    h.require_symmetric()?;
    if let Some(k) = g.free_rank(h.generators()).filter(|_| h.is_uniform()) {
        return Ok(MomentSequence { method: MomentMethod::FreeRadial, records: free_radial(k, n_max) });
    }
    ball_moments(g, h, n_max, cap).map(|records| MomentSequence { method: MomentMethod::Ball, records })
}

/// The generic path: `h^n = Σ p_n(x) x` over `B_n` and
/// `φ(h^{2n}) = Σ_x p_n(x) p_n(x⁻¹)`.
pub fn ball_moments<G: GroupOracle>(
    g: &G,
    h: &AveragingElement<G::Elem>,
    n_max: usize,
    cap: usize,
) -> Result<Vec<MomentRecord>> {
    h.require_symmetric()?;
    let ball = build_ball(g, h.generators(), n_max, cap)?;
    let inv: Vec<usize> =
        ball.elements().iter().map(|x| ball.index_of(&g.inv(x)).ok_or(Error::NotSymmetric)).collect::<Result<_>>()?;
    let w = h.weights();
    let wf = h.weights_f64();
    let mut p = vec![BigRational::zero(); ball.len()];
    let mut pf = vec![0.0f64; ball.len()];
    p[0] = BigRational::one();
    pf[0] = 1.0;
    let mut exact = Vec::with_capacity(n_max);
    let mut float = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let support = ball.size_at(n - 1);
        let mut q = vec![BigRational::zero(); ball.len()];
        let mut qf = vec![0.0f64; ball.len()];
        for (s, act) in ball.gen_actions().iter().enumerate() {
            for x in 0..support {
                if p[x].is_zero() {
                    continue;
                }
                let y = act[x];
                debug_assert_ne!(y, OUTSIDE);
                q[y as usize] += &p[x] * &w[s];
                qf[y as usize] += pf[x] * wf[s];
            }
        }
        p = q;
        pf = qf;
        let reach = ball.size_at(n);
        let m: BigRational = (0..reach).filter(|&x| !p[x].is_zero()).map(|x| &p[x] * &p[inv[x]]).sum();
        let mf: f64 = (0..reach).map(|x| pf[x] * pf[inv[x]]).sum();
        exact.push(m);
        float.push((n <= FLOAT_CHECK_ORDER).then_some(mf));
    }
    Ok(records_from(exact, float))
}

/// Return probabilities of the simple random walk on the `2k`-regular tree via
/// its distance chain: `0 → 1` surely, `d → d+1` with `(2k−1)/2k`, `d → d−1`
/// with `1/2k`.
pub fn free_radial(k: usize, n_max: usize) -> Vec<MomentRecord> {
    let deg = BigInt::from(2 * k);
    let up = BigRational::new(BigInt::from(2 * k - 1), deg.clone());
    let down = BigRational::new(BigInt::one(), deg);
    let (upf, downf) = ((2 * k - 1) as f64 / (2 * k) as f64, 1.0 / (2 * k) as f64);
    let len = 2 * n_max + 2;
    let mut p = vec![BigRational::zero(); len];
    let mut pf = vec![0.0f64; len];
    p[0] = BigRational::one();
    pf[0] = 1.0;
    let mut exact = Vec::with_capacity(n_max);
    let mut float = Vec::with_capacity(n_max);
    for step in 1..=2 * n_max {
        let mut q = vec![BigRational::zero(); len];
        let mut qf = vec![0.0f64; len];
        for d in 0..step {
            if p[d].is_zero() {
                continue;
            }
            if d == 0 {
                q[1] += &p[0];
                qf[1] += pf[0];
            } else {
                q[d + 1] += &p[d] * &up;
                q[d - 1] += &p[d] * &down;
                qf[d + 1] += pf[d] * upf;
                qf[d - 1] += pf[d] * downf;
            }
        }
        p = q;
        pf = qf;
        if step % 2 == 0 {
            exact.push(p[0].clone());
            float.push((step / 2 <= FLOAT_CHECK_ORDER).then_some(pf[0]));
        }
    }
    records_from(exact, float)
}
