//! Truncations of infinite-dimensional Hopf *-algebras given by generators,
//! rewriting rules and coproduct data on generators. The shipped data set is
//! `SU_q(2)`.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;

use super::rewrite::{add_term, Poly, Rewriter, Rule, Word};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, solve, Mat};
use crate::scalar::{Scalar, C64};

/// The `SU_q(2)` relations, coproduct, counit and antipode.
pub const SUQ2_RELATIONS: &str = include_str!("../../data/suq2.json");

pub const MAX_TRUNCATION: usize = 6;

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "one")]
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
    /// Power of `q` multiplying `num / den`.
    #[serde(default)]
    pub q: i32,
    pub word: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorTermSpec {
    #[serde(default = "one")]
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
    #[serde(default)]
    pub q: i32,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub lhs: String,
    pub rhs: Vec<TermSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSpec {
    pub num: i64,
    pub den: i64,
}

/// A versioned relations file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationsSpec {
    pub format: String,
    pub version: u32,
    pub name: String,
    pub generators: Vec<String>,
    pub star: Vec<String>,
    pub rules: Vec<RuleSpec>,
    pub coproduct: BTreeMap<String, Vec<TensorTermSpec>>,
    pub counit: BTreeMap<String, i64>,
    pub antipode: BTreeMap<String, Vec<TermSpec>>,
    /// Default deformation parameter, used when none is given.
    #[serde(default)]
    pub q: Option<RationalSpec>,
    /// Default truncation degree.
    #[serde(default)]
    pub truncate: Option<usize>,
}

pub const RELATIONS_FORMAT: &str = "aqg-filtered-relations";

impl RelationsSpec {
    pub fn parse(json: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(json);
        let spec: RelationsSpec = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Schema { path: e.path().to_string(), message: e.inner().to_string() })?;
        if spec.format != RELATIONS_FORMAT {
            return Err(Error::Schema { path: "format".into(), message: format!("expected {RELATIONS_FORMAT:?}") });
        }
        if spec.version != 1 {
            return Err(Error::Schema {
                path: "version".into(),
                message: format!("unsupported version {}", spec.version),
            });
        }
        Ok(spec)
    }

    pub fn builtin_suq2() -> Self {
        Self::parse(SUQ2_RELATIONS).expect("shipped relations parse")
    }

    fn letter(&self, name: &str, path: &str) -> Result<u8> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(|i| i as u8)
            .ok_or_else(|| Error::Schema { path: path.into(), message: format!("unknown generator {name:?}") })
    }

    fn word(&self, s: &str, path: &str) -> Result<Word> {
        s.split_whitespace().map(|t| self.letter(t, path)).collect()
    }

    fn per_generator<'a, V>(&self, map: &'a BTreeMap<String, V>, field: &str) -> Result<Vec<&'a V>> {
        for k in map.keys() {
            self.letter(k, &format!("{field}.{k}"))?;
        }
        self.generators
            .iter()
            .map(|g| {
                map.get(g)
                    .ok_or_else(|| Error::Schema { path: format!("{field}.{g}"), message: "missing generator".into() })
            })
            .collect()
    }
}

fn q_power<T: Scalar>(q: &T, k: i32) -> T {
    let mut out = T::one();
    for _ in 0..k.unsigned_abs() {
        out = out * q.clone();
    }
    if k < 0 {
        T::one() / out
    } else {
        out
    }
}

fn coefficient<T: Scalar>(q: &T, num: i64, den: i64, k: i32) -> Result<T> {
    if den == 0 {
        return Err(Error::Schema { path: "den".into(), message: "zero denominator".into() });
    }
    Ok(T::from_i64(num) / T::from_i64(den) * q_power(q, k))
}

fn tensor_add<T: Scalar>(p: &mut BTreeMap<(Word, Word), T>, key: (Word, Word), c: T) {
    if c.is_zero() {
        return;
    }
    let zero = {
        let e = p.entry(key.clone()).or_insert_with(T::zero);
        *e = e.clone() + c;
        e.is_zero()
    };
    if zero {
        p.remove(&key);
    }
}

fn poly_norm<T: Scalar>(p: &Poly<T>) -> f64 {
    p.values().map(|c| c.modulus().powi(2)).sum::<f64>().sqrt()
}

fn poly_sub<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let mut out = a.clone();
    for (w, c) in b {
        add_term(&mut out, w.clone(), T::zero() - c.clone());
    }
    out
}

/// Residuals of the Hopf *-algebra identities on the truncation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FilteredHopfReport {
    pub confluent_words: usize,
    pub relations_star_closed: f64,
    pub delta_respects_relations: f64,
    pub counit_respects_relations: f64,
    pub antipode_respects_relations: f64,
    pub coassociativity: f64,
    pub delta_star: f64,
    pub counit: f64,
    pub antipode: f64,
}

impl FilteredHopfReport {
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("relations_star_closed", self.relations_star_closed),
            ("delta_respects_relations", self.delta_respects_relations),
            ("counit_respects_relations", self.counit_respects_relations),
            ("antipode_respects_relations", self.antipode_respects_relations),
            ("coassociativity", self.coassociativity),
            ("delta_star", self.delta_star),
            ("counit", self.counit),
            ("antipode", self.antipode),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// The span of normal monomials of degree at most `d`, with the Hopf
/// structure maps restricted to it and the Haar state solved on it.
#[derive(Clone, Debug)]
pub struct FilteredAlgebra<T> {
    pub name: String,
    pub labels: Vec<String>,
    pub q: T,
    pub truncation: usize,
    rewriter: Rewriter<T>,
    star_gen: Vec<u8>,
    delta_gen: Vec<Vec<(T, u8, u8)>>,
    eps_gen: Vec<T>,
    s_gen: Vec<Poly<T>>,
    basis: Vec<Word>,
    index: HashMap<Word, usize>,
    /// `Δ(b_i)` as `(left, right, coefficient)` triples over the basis.
    delta: Vec<Vec<(usize, usize, T)>>,
    pub hopf_report: FilteredHopfReport,
    pub phi: Vec<T>,
    /// `ρ(b_i)` as basis coefficients.
    pub rho: Vec<Vec<T>>,
    /// Smallest eigenvalue of the Gram matrix on monomials of degree `≤ d/2`.
    pub gram_min_eigenvalue: f64,
}

/// `SU_q(2)` truncated at degree `d`, with exact arithmetic when `T` is exact.
pub fn suq2_build<T: Scalar>(q: T, d: usize, tol: f64) -> Result<FilteredAlgebra<T>> {
    let qc = q.to_c64();
    if qc.im != 0.0 || !(qc.re > 0.0 && qc.re < 1.0) {
        return Err(Error::InvalidStructure(format!("q must lie in (0, 1), got {qc}")));
    }
    FilteredAlgebra::build(&RelationsSpec::builtin_suq2(), q, d, tol)
}

impl<T: Scalar> FilteredAlgebra<T> {
    pub fn build(spec: &RelationsSpec, q: T, d: usize, tol: f64) -> Result<Self> {
        if !(2..=MAX_TRUNCATION).contains(&d) {
            return Err(Error::InvalidStructure(format!("truncation degree must be in 2..={MAX_TRUNCATION}, got {d}")));
        }
        let g = spec.generators.len();
        if g == 0 || g > 16 {
            return Err(Error::Schema { path: "generators".into(), message: "expected 1 to 16 generators".into() });
        }
        if spec.star.len() != g {
            return Err(Error::Schema { path: "star".into(), message: format!("expected {g} entries") });
        }
        let star_gen: Vec<u8> =
            spec.star.iter().enumerate().map(|(i, s)| spec.letter(s, &format!("star[{i}]"))).collect::<Result<_>>()?;
        let mut rules = Vec::new();
        for (i, r) in spec.rules.iter().enumerate() {
            let path = format!("rules[{i}]");
            let lhs = spec.word(&r.lhs, &path)?;
            if lhs.is_empty() {
                return Err(Error::Schema { path, message: "empty left-hand side".into() });
            }
            let rhs = r
                .rhs
                .iter()
                .map(|t| Ok((coefficient(&q, t.num, t.den, t.q)?, spec.word(&t.word, &path)?)))
                .collect::<Result<Vec<_>>>()?;
            rules.push(Rule { lhs, rhs });
        }
        let rewriter = Rewriter::new(rules);
        let delta_gen = spec
            .per_generator(&spec.coproduct, "coproduct")?
            .into_iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|t| {
                        let l = spec.letter(&t.left, "coproduct")?;
                        let r = spec.letter(&t.right, "coproduct")?;
                        Ok((coefficient(&q, t.num, t.den, t.q)?, l, r))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let eps_gen = spec.per_generator(&spec.counit, "counit")?.into_iter().map(|&v| T::from_i64(v)).collect();
        let s_gen = spec
            .per_generator(&spec.antipode, "antipode")?
            .into_iter()
            .map(|terms| {
                let mut p = Poly::new();
                for t in terms {
                    add_term(&mut p, spec.word(&t.word, "antipode")?, coefficient(&q, t.num, t.den, t.q)?);
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;

        let confluent_words = rewriter.check_confluence(g, 4, tol)?;

        let mut basis: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..d {
            let next: Vec<Word> = layer
                .iter()
                .flat_map(|w| {
                    (0..g as u8).map(move |l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .filter(|w| rewriter.is_normal(w))
                .collect();
            basis.extend(next.iter().cloned());
            layer = next;
        }
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

        let mut alg = FilteredAlgebra {
            name: spec.name.clone(),
            labels: spec.generators.clone(),
            q,
            truncation: d,
            rewriter,
            star_gen,
            delta_gen,
            eps_gen,
            s_gen,
            basis,
            index,
            delta: Vec::new(),
            hopf_report: FilteredHopfReport { confluent_words, ..Default::default() },
            phi: Vec::new(),
            rho: Vec::new(),
            gram_min_eigenvalue: 0.0,
        };
        alg.delta = (0..alg.dim())
            .map(|i| {
                let w = alg.basis[i].clone();
                alg.word_delta(&w)
                    .into_iter()
                    .map(|((l, r), c)| {
                        let li = alg
                            .index_of(&l)
                            .ok_or_else(|| Error::InvalidStructure("coproduct leaves the filtration".into()))?;
                        let ri = alg
                            .index_of(&r)
                            .ok_or_else(|| Error::InvalidStructure("coproduct leaves the filtration".into()))?;
                        Ok((li, ri, c))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        alg.hopf_report = alg.verify_hopf(confluent_words);
        if alg.hopf_report.max_residual() > tol.max(1e-12) {
            let worst = alg.hopf_report.residuals().into_iter().fold(("", 0.0), |a, b| if b.1 > a.1 { b } else { a });
            return Err(Error::InvalidStructure(format!(
                "Hopf identity {} fails on the truncation (residual {:.3e})",
                worst.0, worst.1
            )));
        }
        alg.phi = alg.solve_haar(tol)?;
        alg.gram_min_eigenvalue = alg.gram_min_eigenvalue(d / 2);
        if alg.gram_min_eigenvalue < crate::algebra::PSD_THRESHOLD {
            return Err(Error::NotPsd { min_eigenvalue: alg.gram_min_eigenvalue });
        }
        alg.rho = alg.solve_rho(tol)?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].len()
    }

    pub fn generators(&self) -> usize {
        self.labels.len()
    }

    pub fn rewriter(&self) -> &Rewriter<T> {
        &self.rewriter
    }

    /// Display name of a basis monomial, e.g. `a c c*`; `1` for the unit.
    pub fn monomial_label(&self, i: usize) -> String {
        if self.basis[i].is_empty() {
            "1".into()
        } else {
            self.basis[i].iter().map(|&l| self.labels[l as usize].as_str()).collect::<Vec<_>>().join(" ")
        }
    }

    /// Index of the monomial written as space-separated generator names.
    pub fn monomial(&self, s: &str) -> Option<usize> {
        let w: Option<Word> =
            s.split_whitespace().map(|t| self.labels.iter().position(|g| g == t).map(|i| i as u8)).collect();
        self.index_of(&w?)
    }

    /// Exponent of each generator in the monomial `b_i`.
    pub fn exponents(&self, i: usize) -> Vec<usize> {
        let mut e = vec![0; self.generators()];
        for &l in &self.basis[i] {
            e[l as usize] += 1;
        }
        e
    }

    pub fn to_poly(&self, x: &[T]) -> Poly<T> {
        let mut p = Poly::new();
        for (i, c) in x.iter().enumerate() {
            add_term(&mut p, self.basis[i].clone(), c.clone());
        }
        p
    }

    /// Coordinates of a normal-form polynomial; `None` above the truncation.
    pub fn to_coords(&self, p: &Poly<T>) -> Option<Vec<T>> {
        let mut out = vec![T::zero(); self.dim()];
        for (w, c) in p {
            let i = self.index_of(w)?;
            out[i] = out[i].clone() + c.clone();
        }
        Some(out)
    }

    pub fn product(&self, x: &[T], y: &[T]) -> Option<Vec<T>> {
        self.to_coords(&self.rewriter.mul(&self.to_poly(x), &self.to_poly(y)))
    }

    pub fn word_delta(&self, w: &[u8]) -> BTreeMap<(Word, Word), T> {
        let mut acc: BTreeMap<(Word, Word), T> = BTreeMap::new();
        acc.insert((Vec::new(), Vec::new()), T::one());
        for &l in w {
            let mut next = BTreeMap::new();
            for ((x, y), c) in &acc {
                for (d, a, b) in &self.delta_gen[l as usize] {
                    let mut xa = x.clone();
                    xa.push(*a);
                    let mut yb = y.clone();
                    yb.push(*b);
                    tensor_add(&mut next, (xa, yb), c.clone() * d.clone());
                }
            }
            acc = next;
        }
        let mut out = BTreeMap::new();
        for ((x, y), c) in acc {
            let nx = self.rewriter.normal_form(&x);
            let ny = self.rewriter.normal_form(&y);
            for (u, a) in &nx {
                for (v, b) in &ny {
                    tensor_add(&mut out, (u.clone(), v.clone()), c.clone() * a.clone() * b.clone());
                }
            }
        }
        out
    }

    fn poly_delta(&self, p: &Poly<T>) -> BTreeMap<(Word, Word), T> {
        let mut out = BTreeMap::new();
        for (w, c) in p {
            for (k, v) in self.word_delta(w) {
                tensor_add(&mut out, k, v * c.clone());
            }
        }
        out
    }

    pub fn word_epsilon(&self, w: &[u8]) -> T {
        w.iter().fold(T::one(), |acc, &l| acc * self.eps_gen[l as usize].clone())
    }

    fn poly_epsilon(&self, p: &Poly<T>) -> T {
        p.iter().fold(T::zero(), |acc, (w, c)| acc + c.clone() * self.word_epsilon(w))
    }

    pub fn word_antipode(&self, w: &[u8]) -> Poly<T> {
        let mut acc = Poly::new();
        acc.insert(Vec::new(), T::one());
        for &l in w {
            acc = self.rewriter.mul(&self.s_gen[l as usize], &acc);
        }
        acc
    }

    fn poly_antipode(&self, p: &Poly<T>) -> Poly<T> {
        let mut out = Poly::new();
        for (w, c) in p {
            for (v, x) in self.word_antipode(w) {
                add_term(&mut out, v, x * c.clone());
            }
        }
        out
    }

    pub fn word_star(&self, w: &[u8]) -> Poly<T> {
        let rev: Word = w.iter().rev().map(|&l| self.star_gen[l as usize]).collect();
        self.rewriter.normal_form(&rev)
    }

    fn poly_star(&self, p: &Poly<T>) -> Poly<T> {
        let mut out = Poly::new();
        for (w, c) in p {
            for (v, x) in self.word_star(w) {
                add_term(&mut out, v, x * c.conj());
            }
        }
        out
    }

    pub fn star(&self, x: &[T]) -> Vec<T> {
        self.to_coords(&self.poly_star(&self.to_poly(x))).expect("star preserves degree")
    }

    pub fn antipode(&self, x: &[T]) -> Vec<T> {
        self.to_coords(&self.poly_antipode(&self.to_poly(x))).expect("antipode preserves degree")
    }

    pub fn epsilon(&self) -> Vec<T> {
        self.basis.iter().map(|w| self.word_epsilon(w)).collect()
    }

    /// `Δ(b_i)` as `(left, right, coefficient)` triples.
    pub fn delta_of(&self, i: usize) -> &[(usize, usize, T)] {
        &self.delta[i]
    }

    fn verify_hopf(&self, confluent_words: usize) -> FilteredHopfReport {
        let mut r = FilteredHopfReport { confluent_words, ..Default::default() };
        let tensor_dist = |a: &BTreeMap<(Word, Word), T>, b: &BTreeMap<(Word, Word), T>| {
            let mut diff = a.clone();
            for (k, v) in b {
                tensor_add(&mut diff, k.clone(), T::zero() - v.clone());
            }
            diff.values().map(|c| c.modulus().powi(2)).sum::<f64>().sqrt()
        };
        for rule in self.rewriter.rules() {
            let mut lhs = Poly::new();
            lhs.insert(rule.lhs.clone(), T::one());
            let mut rhs = Poly::new();
            for (c, w) in &rule.rhs {
                add_term(&mut rhs, w.clone(), c.clone());
            }
            let star_l = self.poly_star(&lhs);
            let star_r = self.poly_star(&rhs);
            r.relations_star_closed = r.relations_star_closed.max(poly_norm(&poly_sub(&star_l, &star_r)));
            r.delta_respects_relations =
                r.delta_respects_relations.max(tensor_dist(&self.poly_delta(&lhs), &self.poly_delta(&rhs)));
            r.counit_respects_relations =
                r.counit_respects_relations.max((self.poly_epsilon(&lhs) - self.poly_epsilon(&rhs)).modulus());
            r.antipode_respects_relations = r
                .antipode_respects_relations
                .max(poly_norm(&poly_sub(&self.poly_antipode(&lhs), &self.poly_antipode(&rhs))));
        }
        for terms in &self.delta_gen {
            let mut left: BTreeMap<(Word, Word, Word), T> = BTreeMap::new();
            let mut right: BTreeMap<(Word, Word, Word), T> = BTreeMap::new();
            for (c, a, b) in terms {
                for (d, x, y) in &self.delta_gen[*a as usize] {
                    let e = left.entry((vec![*x], vec![*y], vec![*b])).or_insert_with(T::zero);
                    *e = e.clone() + c.clone() * d.clone();
                }
                for (d, x, y) in &self.delta_gen[*b as usize] {
                    let e = right.entry((vec![*a], vec![*x], vec![*y])).or_insert_with(T::zero);
                    *e = e.clone() + c.clone() * d.clone();
                }
            }
            for (k, v) in &right {
                let e = left.entry(k.clone()).or_insert_with(T::zero);
                *e = e.clone() - v.clone();
            }
            let res = left.values().map(|c| c.modulus().powi(2)).sum::<f64>().sqrt();
            r.coassociativity = r.coassociativity.max(res);
        }
        for (i, w) in self.basis.iter().enumerate() {
            let d = &self.delta[i];
            let mut x = Poly::new();
            x.insert(w.clone(), T::one());
            // Counit on both legs.
            let mut left = Poly::new();
            let mut right = Poly::new();
            for (l, rr, c) in d {
                add_term(&mut left, self.basis[*rr].clone(), c.clone() * self.word_epsilon(&self.basis[*l]));
                add_term(&mut right, self.basis[*l].clone(), c.clone() * self.word_epsilon(&self.basis[*rr]));
            }
            r.counit = r.counit.max(poly_norm(&poly_sub(&left, &x)).max(poly_norm(&poly_sub(&right, &x))));
            // Antipode on both legs.
            let mut unit = Poly::new();
            add_term(&mut unit, Vec::new(), self.word_epsilon(w));
            let mut sl = Poly::new();
            let mut sr = Poly::new();
            for (l, rr, c) in d {
                let mut b = Poly::new();
                b.insert(self.basis[*rr].clone(), c.clone());
                for (v, y) in self.rewriter.mul(&self.word_antipode(&self.basis[*l]), &b) {
                    add_term(&mut sl, v, y);
                }
                let mut a = Poly::new();
                a.insert(self.basis[*l].clone(), c.clone());
                for (v, y) in self.rewriter.mul(&a, &self.word_antipode(&self.basis[*rr])) {
                    add_term(&mut sr, v, y);
                }
            }
            r.antipode = r.antipode.max(poly_norm(&poly_sub(&sl, &unit)).max(poly_norm(&poly_sub(&sr, &unit))));
            // Δ(x*) = (* ⊗ *)Δ(x).
            let ds = self.poly_delta(&self.word_star(w));
            let mut starred = BTreeMap::new();
            for (l, rr, c) in d {
                for (u, a) in self.word_star(&self.basis[*l]) {
                    for (v, b) in self.word_star(&self.basis[*rr]) {
                        tensor_add(&mut starred, (u.clone(), v), c.conj() * a.clone() * b);
                    }
                }
            }
            r.delta_star = r.delta_star.max(tensor_dist(&ds, &starred));
        }
        r
    }

    /// Solves `(ι ⊗ φ)Δ(x) = φ(x)1` on the truncation with `φ(1) = 1`.
    fn solve_haar(&self, tol: f64) -> Result<Vec<T>> {
        let n = self.dim();
        let unit = self.index_of(&[]).expect("unit in basis");
        let mut elim = SparseEchelon::new(n, tol);
        let mut norm_row = BTreeMap::new();
        norm_row.insert(unit, T::one());
        norm_row.insert(n, T::one());
        elim.insert(norm_row)?;
        // Every equation is inserted so that inconsistencies surface.
        for x in 0..n {
            let mut rows: BTreeMap<usize, BTreeMap<usize, T>> = BTreeMap::new();
            for (l, r, c) in &self.delta[x] {
                let row = rows.entry(*l).or_default();
                let e = row.entry(*r).or_insert_with(T::zero);
                *e = e.clone() + c.clone();
            }
            let row = rows.entry(unit).or_default();
            let e = row.entry(x).or_insert_with(T::zero);
            *e = e.clone() - T::one();
            for (_, row) in rows {
                elim.insert(row)?;
            }
        }
        if elim.rank() < n {
            return Err(Error::HaarSystemInconsistent(format!(
                "rank {} of {n}: the invariance system is underdetermined",
                elim.rank()
            )));
        }
        Ok(elim.solution())
    }

    pub fn phi_of(&self, x: &[T]) -> T {
        x.iter().zip(&self.phi).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// `max |(ι ⊗ φ)Δ(x) − φ(x)1|` and the same for `(φ ⊗ ι)Δ`.
    pub fn invariance_residuals(&self) -> (f64, f64) {
        let n = self.dim();
        let unit = self.index_of(&[]).expect("unit in basis");
        let (mut left, mut right) = (0.0f64, 0.0f64);
        for x in 0..n {
            let mut l = vec![T::zero(); n];
            let mut r = vec![T::zero(); n];
            for (a, b, c) in &self.delta[x] {
                l[*a] = l[*a].clone() + c.clone() * self.phi[*b].clone();
                r[*b] = r[*b].clone() + c.clone() * self.phi[*a].clone();
            }
            l[unit] = l[unit].clone() - self.phi[x].clone();
            r[unit] = r[unit].clone() - self.phi[x].clone();
            left = left.max(l.iter().map(|v| v.modulus()).fold(0.0, f64::max));
            right = right.max(r.iter().map(|v| v.modulus()).fold(0.0, f64::max));
        }
        (left, right)
    }

    /// Gram matrix `φ(b_j^* b_i)` over monomials of degree at most `k`.
    pub fn gram(&self, k: usize) -> Mat<T> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) <= k).collect();
        Mat::from_fn(idx.len(), idx.len(), |a, b| {
            let bi = &self.basis[idx[a]];
            let bj_star = self.word_star(&self.basis[idx[b]]);
            let mut bi_poly = Poly::new();
            bi_poly.insert(bi.clone(), T::one());
            let prod = self.rewriter.mul(&bj_star, &bi_poly);
            let coords = self.to_coords(&prod).expect("degree within truncation");
            self.phi_of(&coords)
        })
    }

    fn gram_min_eigenvalue(&self, k: usize) -> f64 {
        let g = self.gram(k).to_c64();
        let herm = Mat::from_fn(g.rows(), g.cols(), |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
        hermitian_eigenvalues(&herm).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `ρ` with `φ(xy) = φ(yρ(x))`: solved on generators within the degree-one
    /// span, then extended multiplicatively.
    fn solve_rho(&self, tol: f64) -> Result<Vec<Vec<T>>> {
        let d = self.truncation;
        let low: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) <= 1).collect();
        let tests: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) < d).collect();
        let e = |i: usize| {
            let mut v = vec![T::zero(); self.dim()];
            v[i] = T::one();
            v
        };
        let m = Mat::from_fn(tests.len(), low.len(), |r, c| {
            self.phi_of(&self.product(&e(tests[r]), &e(low[c])).expect("degree within truncation"))
        });
        let mut rho_gen = Vec::new();
        for gi in 0..self.generators() {
            let x = self.index_of(&[gi as u8]).expect("generators are normal");
            let rhs = Mat::from_fn(tests.len(), 1, |r, _| {
                self.phi_of(&self.product(&e(x), &e(tests[r])).expect("degree within truncation"))
            });
            let sol = solve(&m, &rhs, tol).map_err(|e| Error::from_solve("modular automorphism ρ on generators", e))?;
            let mut p = Poly::new();
            for (k, &b) in low.iter().enumerate() {
                add_term(&mut p, self.basis[b].clone(), sol[(k, 0)].clone());
            }
            rho_gen.push(p);
        }
        Ok(self
            .basis
            .iter()
            .map(|w| {
                let mut acc = Poly::new();
                acc.insert(Vec::new(), T::one());
                for &l in w {
                    acc = self.rewriter.mul(&acc, &rho_gen[l as usize]);
                }
                self.to_coords(&acc).expect("ρ preserves degree")
            })
            .collect())
    }

    pub fn to_c64(&self) -> FilteredAlgebra<C64> {
        let c = |x: &T| x.to_c64();
        let poly = |p: &Poly<T>| p.iter().map(|(w, x)| (w.clone(), c(x))).collect::<Poly<C64>>();
        let rules = self
            .rewriter
            .rules()
            .iter()
            .map(|r| Rule { lhs: r.lhs.clone(), rhs: r.rhs.iter().map(|(x, w)| (c(x), w.clone())).collect() })
            .collect();
        FilteredAlgebra {
            name: self.name.clone(),
            labels: self.labels.clone(),
            q: c(&self.q),
            truncation: self.truncation,
            rewriter: Rewriter::new(rules),
            star_gen: self.star_gen.clone(),
            delta_gen: self.delta_gen.iter().map(|t| t.iter().map(|(x, a, b)| (c(x), *a, *b)).collect()).collect(),
            eps_gen: self.eps_gen.iter().map(c).collect(),
            s_gen: self.s_gen.iter().map(poly).collect(),
            basis: self.basis.clone(),
            index: self.index.clone(),
            delta: self.delta.iter().map(|t| t.iter().map(|(a, b, x)| (*a, *b, c(x))).collect()).collect(),
            hopf_report: self.hopf_report.clone(),
            phi: self.phi.iter().map(c).collect(),
            rho: self.rho.iter().map(|r| r.iter().map(c).collect()).collect(),
            gram_min_eigenvalue: self.gram_min_eigenvalue,
        }
    }
}

/// Incremental sparse Gaussian elimination for `n` unknowns; column `n`
/// holds the right-hand side.
struct SparseEchelon<T> {
    n: usize,
    tol: f64,
    rows: Vec<(usize, BTreeMap<usize, T>)>,
    pivot_of: HashMap<usize, usize>,
}

impl<T: Scalar> SparseEchelon<T> {
    fn new(n: usize, tol: f64) -> Self {
        SparseEchelon { n, tol, rows: Vec::new(), pivot_of: HashMap::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: BTreeMap<usize, T>) -> Result<()> {
        loop {
            row.retain(|_, v| !v.is_negligible(self.tol));
            let hit = row.keys().copied().find(|c| *c < self.n && self.pivot_of.contains_key(c));
            let Some(col) = hit else { break };
            let factor = row[&col].clone();
            let (_, prow) = &self.rows[self.pivot_of[&col]];
            for (k, v) in prow {
                let e = row.entry(*k).or_insert_with(T::zero);
                *e = e.clone() - factor.clone() * v.clone();
            }
            row.remove(&col);
        }
        let pivot = row
            .iter()
            .filter(|(c, _)| **c < self.n)
            .max_by(|a, b| a.1.modulus().partial_cmp(&b.1.modulus()).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(c, _)| *c);
        match pivot {
            None => {
                if let Some(v) = row.get(&self.n) {
                    return Err(Error::HaarSystemInconsistent(format!(
                        "an invariance equation reduces to 0 = {:.3e}",
                        v.modulus()
                    )));
                }
                Ok(())
            }
            Some(p) => {
                let inv = T::one() / row[&p].clone();
                let row: BTreeMap<usize, T> = row.into_iter().map(|(k, v)| (k, v * inv.clone())).collect();
                self.pivot_of.insert(p, self.rows.len());
                self.rows.push((p, row));
                Ok(())
            }
        }
    }

    /// Back substitution; requires full rank.
    fn solution(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.n];
        for (p, row) in self.rows.iter().rev() {
            let mut v = row.get(&self.n).cloned().unwrap_or_else(T::zero);
            for (k, c) in row {
                if *k != *p && *k < self.n {
                    v = v - c.clone() * x[*k].clone();
                }
            }
            x[*p] = v;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qc, QC};

    #[test]
    fn low_degree_haar_values() {
        let alg: FilteredAlgebra<QC> = suq2_build(qc(1, 2), 2, 0.0).unwrap();
        assert_eq!(alg.dim(), 1 + 4 + 9);
        assert_eq!(alg.phi[alg.monomial("").unwrap()], qc(1, 1));
        for g in ["a", "a*", "c", "c*"] {
            assert_eq!(alg.phi[alg.monomial(g).unwrap()], qc(0, 1));
        }
        assert_eq!(alg.phi[alg.monomial("c c*").unwrap()], qc(4, 5));
        assert_eq!(alg.hopf_report.max_residual(), 0.0);
    }
}
