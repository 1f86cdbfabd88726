//! Seeded random elements for the sampled checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::StarAlgebra;
use crate::scalar::{Scalar, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect()
}

/// `(x + x^*) / 2` for a random `x`.
pub fn random_self_adjoint(a: &StarAlgebra<C64>, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let x = random_coeffs(rng, a.dim());
    let xs = a.star(&x);
    x.iter().zip(xs).map(|(u, v)| (u + v) * 0.5).collect()
}

/// A random element converted to the scalar type of the caller.
pub fn random_element<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    random_coeffs(rng, n).into_iter().map(T::from_c64).collect()
}
