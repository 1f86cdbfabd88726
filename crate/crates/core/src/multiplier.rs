//! Functions on a countable index set: finitely supported functions `K(T)`
//! and bounded total functions acting on them as multipliers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::StarAlgebra;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Scalar, C64};

/// Element of `K(T)`; zero values are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteSupportFn {
    values: BTreeMap<String, C64>,
}

impl FiniteSupportFn {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, C64)>,
        S: Into<String>,
    {
        let values =
            entries.into_iter().map(|(k, v)| (k.into(), v)).filter(|(_, v)| *v != C64::new(0.0, 0.0)).collect();
        FiniteSupportFn { values }
    }

    pub fn indicator(t: &str) -> Self {
        FiniteSupportFn::new([(t, C64::new(1.0, 0.0))])
    }

    pub fn get(&self, t: &str) -> C64 {
        self.values.get(t).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A total function `T → C` with a declared bound, i.e. an element of `F(T)`
/// when the bound is honoured. Values are checked against the bound when used.
#[derive(Clone)]
pub struct IndexFn {
    eval: Arc<dyn Fn(&str) -> C64 + Send + Sync>,
    bound: f64,
}

impl fmt::Debug for IndexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexFn").field("bound", &self.bound).finish_non_exhaustive()
    }
}

impl IndexFn {
    pub fn new(bound: f64, eval: impl Fn(&str) -> C64 + Send + Sync + 'static) -> Result<Self> {
        if !bound.is_finite() || bound < 0.0 {
            return Err(Error::Unbounded);
        }
        Ok(IndexFn { eval: Arc::new(eval), bound })
    }

    pub fn constant(c: C64) -> Self {
        IndexFn { eval: Arc::new(move |_| c), bound: c.norm() }
    }

    pub fn indicator(t: &str) -> Self {
        let t = t.to_string();
        IndexFn { eval: Arc::new(move |s| C64::new(if s == t { 1.0 } else { 0.0 }, 0.0)), bound: 1.0 }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, t: &str) -> Result<C64> {
        let v = (self.eval)(t);
        // Negated so that a NaN value counts as unbounded.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(v.norm() <= self.bound * (1.0 + 1e-12) + 1e-300) {
            return Err(Error::Unbounded);
        }
        Ok(v)
    }
}

/// The pointwise product `F · k`, which again has finite support.
pub fn multiplier_action(f: &IndexFn, k: &FiniteSupportFn) -> Result<FiniteSupportFn> {
    let mut out = Vec::with_capacity(k.len());
    for (t, v) in &k.values {
        out.push((t.clone(), f.eval(t)? * v));
    }
    Ok(FiniteSupportFn::new(out))
}

/// Outcome of checking that a pair of maps `(x, y)` is a multiplier.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierCheck {
    /// Worst defect of `x(a)^* b = a^* y(b)` over basis pairs.
    pub residual: f64,
    /// Distance between `y` and the adjoint partner solved from `x`.
    pub adjoint_residual: f64,
}

impl MultiplierCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol && self.adjoint_residual <= tol
    }
}

/// Checks `x(a)^* b = a^* y(b)` for maps given in column convention, and that
/// `y` is the unique partner of `x`.
pub fn verify_multiplier<T: Scalar>(a: &StarAlgebra<T>, x: &Mat<T>, y: &Mat<T>, tol: f64) -> Result<MultiplierCheck> {
    let residual = a.multiplier_residual(x, y);
    let partner = a.multiplier_adjoint(x, tol)?;
    Ok(MultiplierCheck { residual, adjoint_residual: partner.dist(y) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FiniteSupportFn {
        FiniteSupportFn::new([("a", C64::new(1.0, 2.0)), ("b", C64::new(-3.0, 0.0)), ("z", C64::new(0.0, 0.0))])
    }

    #[test]
    fn constant_one_is_the_unit() {
        let k = sample();
        assert_eq!(k.len(), 2);
        assert_eq!(multiplier_action(&IndexFn::constant(C64::new(1.0, 0.0)), &k).unwrap(), k);
    }

    #[test]
    fn indicator_picks_one_point() {
        let out = multiplier_action(&IndexFn::indicator("b"), &sample()).unwrap();
        assert_eq!(out, FiniteSupportFn::new([("b", C64::new(-3.0, 0.0))]));
    }

    #[test]
    fn unbounded_functions_are_rejected() {
        assert!(matches!(IndexFn::new(f64::INFINITY, |_| C64::new(1.0, 0.0)), Err(Error::Unbounded)));
        let liar = IndexFn::new(1.0, |t| C64::new(t.len() as f64, 0.0)).unwrap();
        let k = FiniteSupportFn::new([("long", C64::new(1.0, 0.0))]);
        assert!(matches!(multiplier_action(&liar, &k), Err(Error::Unbounded)));
    }
}
