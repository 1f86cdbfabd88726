//! Scalar fields used by the kernel.
//!
//! Two implementations are provided: [`C64`] (complex double precision) and
//! [`QC`] (exact Gaussian rationals over arbitrary-precision integers). Every
//! structure that only needs field arithmetic is generic over [`Scalar`], so
//! group algebras and function algebras can be checked with residuals that
//! are exactly zero.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_complex::Complex64 as C64;

/// Exact complex rational `re + i·im`.
pub type QC = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// `true` for arithmetic without rounding.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn to_c64(&self) -> C64;
    /// Exact types convert the binary value of each component exactly.
    fn from_c64(z: C64) -> Self;
    fn from_i64(v: i64) -> Self;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Zero test used by elimination. Exact scalars ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= tol
        }
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn from_c64(z: C64) -> Self {
        z
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for QC {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn to_c64(&self) -> C64 {
        C64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
    fn from_c64(z: C64) -> Self {
        Complex::new(ratio_from_f64(z.re), ratio_from_f64(z.im))
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Very large numerator/denominator: scale down by a common power of two.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            let v = n / d;
            if r.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

pub(crate) fn ratio_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Builds an exact rational `num/den`.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Real exact scalar `num/den`.
pub fn qc(num: i64, den: i64) -> QC {
    Complex::new(rational(num, den), BigRational::zero())
}

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_conjugation_and_conversion() {
        let z = Complex::new(rational(1, 3), rational(-2, 5));
        assert_eq!(z.conj().im, rational(2, 5));
        let f = z.to_c64();
        assert!((f.re - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.im + 0.4).abs() < 1e-15);
    }

    #[test]
    fn float_round_trip_is_exact_in_binary() {
        let z = QC::from_c64(C64::new(0.5, -0.25));
        assert_eq!(z, Complex::new(rational(1, 2), rational(-1, 4)));
    }

    #[test]
    fn negligible_respects_exactness() {
        assert!(C64::new(1e-14, 0.0).is_negligible(1e-12));
        assert!(!qc(1, 1_000_000_000).is_negligible(1.0));
        assert!(QC::zero().is_negligible(0.0));
    }
}
