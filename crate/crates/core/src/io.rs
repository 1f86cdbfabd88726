//! JSON files: structure tensors of finite quantum groups and group tables.
//!
//! A scalar is written as a JSON number, as `{"num": n, "den": d}`, or as a
//! pair `[re, im]` of those. Tensors use the same conventions as the rest of
//! the crate: `mult[i][j][k]` is the coefficient of `b_k` in `b_i b_j`, row `i`
//! of `star`, `delta` and `antipode` is the image of `b_i`, and `delta` rows
//! are indexed by `p * n + q` for `b_p ⊗ b_q`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{LinearFunctional, StarAlgebra};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::hopf::{HopfAlgebra, HopfStructure};
use crate::matrix::Mat;
use crate::scalar::{Scalar, C64, QC};

pub const STRUCTURE_FORMAT: &str = "aqg-structure";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Rational { num: i64, den: i64 },
    Number(serde_json::Number),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Pair([Component; 2]),
    Real(Component),
}

/// Scalars that can be read from and written to [`ScalarJson`].
pub trait JsonScalar: Scalar {
    fn from_json(v: &ScalarJson, path: &str) -> Result<Self>;
    fn to_json(&self) -> ScalarJson;
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn component_rational(c: &Component, path: &str) -> Result<BigRational> {
    match c {
        Component::Rational { den: 0, .. } => Err(schema(path, "zero denominator")),
        Component::Rational { num, den } => Ok(BigRational::new(BigInt::from(*num), BigInt::from(*den))),
        Component::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                let f = n.as_f64().ok_or_else(|| schema(path, "number out of range"))?;
                BigRational::from_float(f).ok_or_else(|| schema(path, "non-finite number"))
            }
        }
    }
}

fn component_f64(c: &Component, path: &str) -> Result<f64> {
    match c {
        Component::Rational { den: 0, .. } => Err(schema(path, "zero denominator")),
        Component::Rational { num, den } => Ok(*num as f64 / *den as f64),
        Component::Number(n) => n.as_f64().ok_or_else(|| schema(path, "number out of range")),
    }
}

fn split(v: &ScalarJson) -> (&Component, Option<&Component>) {
    match v {
        ScalarJson::Pair([re, im]) => (re, Some(im)),
        ScalarJson::Real(re) => (re, None),
    }
}

fn f64_component(x: f64) -> Component {
    if x == x.trunc() && x.abs() < 1e15 {
        Component::Number((x as i64).into())
    } else {
        Component::Number(serde_json::Number::from_f64(x).expect("finite residuals and coefficients"))
    }
}

fn rational_component(x: &BigRational) -> Component {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(num), Some(1)) => Component::Number(num.into()),
        (Some(num), Some(den)) => Component::Rational { num, den },
        _ => f64_component(x.to_f64().unwrap_or(f64::NAN)),
    }
}

impl JsonScalar for C64 {
    fn from_json(v: &ScalarJson, path: &str) -> Result<Self> {
        let (re, im) = split(v);
        Ok(C64::new(component_f64(re, path)?, im.map(|c| component_f64(c, path)).transpose()?.unwrap_or(0.0)))
    }

    fn to_json(&self) -> ScalarJson {
        if self.im == 0.0 {
            ScalarJson::Real(f64_component(self.re))
        } else {
            ScalarJson::Pair([f64_component(self.re), f64_component(self.im)])
        }
    }
}

impl JsonScalar for QC {
    fn from_json(v: &ScalarJson, path: &str) -> Result<Self> {
        let (re, im) = split(v);
        let im = match im {
            Some(c) => component_rational(c, path)?,
            None => BigRational::zero(),
        };
        Ok(Complex::new(component_rational(re, path)?, im))
    }

    fn to_json(&self) -> ScalarJson {
        if self.im.is_zero() {
            ScalarJson::Real(rational_component(&self.re))
        } else {
            ScalarJson::Pair([rational_component(&self.re), rational_component(&self.im)])
        }
    }
}

/// Parses JSON into `T`, reporting the field path of the first failure.
pub fn parse_json<T: DeserializeOwned>(json: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(de).map_err(|e| schema(&e.path().to_string(), e.inner().to_string()))
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Array(xs) => xs.iter().all(|x| !matches!(x, Value::Array(_) | Value::Object(_)) || is_scalar_json(x)),
        _ => false,
    }
}

fn is_scalar_json(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Object(m) => m.values().all(Value::is_number),
        Value::Array(xs) => xs.len() == 2 && xs.iter().all(|x| x.is_number() || is_scalar_json(x) && x.is_object()),
        _ => v.is_number(),
    }
}

fn write_rows(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(xs) if !xs.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_rows(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() && !is_scalar_json(v) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_rows(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(|x| serde_json::to_string(x).expect("values serialize")).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("values serialize")),
    }
}

/// Pretty JSON with innermost rows of scalars kept on one line.
pub fn to_json_rows(v: &serde_json::Value) -> String {
    let mut out = String::new();
    write_rows(v, 0, &mut out);
    out.push('\n');
    out
}

/// On-disk form of a finite-dimensional Hopf *-algebra. `epsilon` and
/// `antipode` may be omitted and are then solved for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub format: String,
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub mult: Vec<Vec<Vec<ScalarJson>>>,
    pub star: Vec<Vec<ScalarJson>>,
    pub unit: Option<Vec<ScalarJson>>,
    pub delta: Vec<Vec<ScalarJson>>,
    #[serde(default)]
    pub epsilon: Option<Vec<ScalarJson>>,
    #[serde(default)]
    pub antipode: Option<Vec<Vec<ScalarJson>>>,
}

fn vector<T: JsonScalar>(v: &[ScalarJson], len: usize, path: &str) -> Result<Vec<T>> {
    if v.len() != len {
        return Err(schema(path, format!("expected {len} entries, found {}", v.len())));
    }
    v.iter().enumerate().map(|(i, x)| T::from_json(x, &format!("{path}[{i}]"))).collect()
}

fn matrix<T: JsonScalar>(rows: &[Vec<ScalarJson>], r: usize, c: usize, path: &str) -> Result<Mat<T>> {
    if rows.len() != r {
        return Err(schema(path, format!("expected {r} rows, found {}", rows.len())));
    }
    let mut data = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        data.extend(vector::<T>(row, c, &format!("{path}[{i}]"))?);
    }
    Ok(Mat::from_row_major(r, c, data))
}

fn encode_vec<T: JsonScalar>(v: &[T]) -> Vec<ScalarJson> {
    v.iter().map(JsonScalar::to_json).collect()
}

fn encode_mat<T: JsonScalar>(m: &Mat<T>) -> Vec<Vec<ScalarJson>> {
    (0..m.rows()).map(|i| encode_vec(m.row(i))).collect()
}

impl StructureFile {
    pub fn parse(json: &str) -> Result<Self> {
        let f: StructureFile = parse_json(json)?;
        if f.format != STRUCTURE_FORMAT {
            return Err(schema("format", format!("expected {STRUCTURE_FORMAT:?}, found {:?}", f.format)));
        }
        Ok(f)
    }

    /// Validates shapes and builds the Hopf algebra, solving for a missing
    /// counit or antipode.
    pub fn to_hopf<T: JsonScalar>(&self, tol: f64) -> Result<HopfAlgebra<T>> {
        let n = self.dim;
        if n == 0 {
            return Err(schema("dim", "must be positive"));
        }
        if self.labels.len() != n {
            return Err(schema("labels", format!("expected {n} entries, found {}", self.labels.len())));
        }
        if self.mult.len() != n {
            return Err(schema("mult", format!("expected {n} entries, found {}", self.mult.len())));
        }
        let mut mult = Vec::with_capacity(n * n * n);
        for (i, block) in self.mult.iter().enumerate() {
            if block.len() != n {
                return Err(schema(&format!("mult[{i}]"), format!("expected {n} entries, found {}", block.len())));
            }
            for (j, row) in block.iter().enumerate() {
                mult.extend(vector::<T>(row, n, &format!("mult[{i}][{j}]"))?);
            }
        }
        let star = matrix::<T>(&self.star, n, n, "star")?;
        let unit = self.unit.as_ref().map(|u| vector::<T>(u, n, "unit")).transpose()?;
        let algebra = StarAlgebra::new(self.labels.clone(), mult, star, unit)?;
        let delta = matrix::<T>(&self.delta, n, n * n, "delta")?;
        let epsilon =
            self.epsilon.as_ref().map(|e| vector::<T>(e, n, "epsilon").map(LinearFunctional::new)).transpose()?;
        let antipode = self.antipode.as_ref().map(|s| matrix::<T>(s, n, n, "antipode")).transpose()?;
        let hopf = HopfStructure::complete(&algebra, delta, epsilon, antipode, tol)?;
        Ok(HopfAlgebra { algebra, hopf })
    }

    pub fn from_hopf<T: JsonScalar>(name: &str, h: &HopfAlgebra<T>) -> Self {
        let n = h.dim();
        let a = &h.algebra;
        StructureFile {
            format: STRUCTURE_FORMAT.into(),
            name: name.into(),
            dim: n,
            labels: a.labels().to_vec(),
            mult: (0..n).map(|i| (0..n).map(|j| encode_vec(a.basis_product(i, j))).collect()).collect(),
            star: encode_mat(a.star_matrix()),
            unit: a.unit().map(encode_vec),
            delta: encode_mat(h.hopf.delta_matrix()),
            epsilon: Some(encode_vec(&h.hopf.epsilon().coeffs)),
            antipode: Some(encode_mat(h.hopf.antipode_matrix())),
        }
    }

    pub fn to_json(&self) -> String {
        to_json_rows(&serde_json::to_value(self).expect("structure files serialize"))
    }
}

/// A finite group by its multiplication table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTableFile {
    pub name: String,
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupTableFile {
    pub fn parse(json: &str) -> Result<FiniteGroup> {
        let f: GroupTableFile = parse_json(json)?;
        FiniteGroup::from_table(&f.name, f.labels, f.table)
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupTableFile { name: g.name.clone(), labels: g.labels().to_vec(), table: g.table().to_vec() }
    }
}

/// Parses `3`, `-2/7` or a finite decimal such as `0.625` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or_else(|_| BigInt::zero());
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

/// Exact complex rational with the given real part.
pub fn real_rational(r: BigRational) -> QC {
    Complex::new(r, BigRational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{function_algebra, group_algebra, symmetric3};

    #[test]
    fn round_trip_is_exact() {
        let h = function_algebra::<QC>(&symmetric3());
        let f = StructureFile::from_hopf("K(S3)", &h);
        let back: HopfAlgebra<QC> = StructureFile::parse(&f.to_json()).unwrap().to_hopf(0.0).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn wrong_arity_names_the_field() {
        let mut f = StructureFile::from_hopf("C(S3)", &group_algebra::<QC>(&symmetric3()));
        f.mult[2][1].pop();
        let err = StructureFile::parse(&f.to_json()).unwrap().to_hopf::<QC>(0.0).unwrap_err();
        assert_eq!(err, Error::Schema { path: "mult[2][1]".into(), message: "expected 6 entries, found 5".into() });
    }

    #[test]
    fn parse_errors_carry_the_path() {
        let err = StructureFile::parse(r#"{"format": "aqg-structure", "name": "x", "dim": "two"}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "dim"), "{err}");
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("0.625"), Some(crate::scalar::rational(5, 8)));
        assert_eq!(parse_rational("-2/6"), Some(crate::scalar::rational(-1, 3)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1e-3"), None);
    }
}
