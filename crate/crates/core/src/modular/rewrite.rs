//! Normal forms for algebras presented by generators and rewriting rules.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A word in the generators, as generator indices.
pub type Word = Vec<u8>;

/// A sparse linear combination of words.
pub type Poly<T> = BTreeMap<Word, T>;

pub fn add_term<T: Scalar>(p: &mut Poly<T>, w: Word, c: T) {
    if c.is_zero() {
        return;
    }
    let zero = {
        let e = p.entry(w.clone()).or_insert_with(T::zero);
        *e = e.clone() + c;
        e.is_zero()
    };
    if zero {
        p.remove(&w);
    }
}

pub fn scale_poly<T: Scalar>(p: &Poly<T>, c: &T) -> Poly<T> {
    let mut out = Poly::new();
    for (w, v) in p {
        add_term(&mut out, w.clone(), v.clone() * c.clone());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug)]
pub struct Rule<T> {
    pub lhs: Word,
    pub rhs: Vec<(T, Word)>,
}

/// A rewriting system; normal forms are memoized per strategy.
#[derive(Debug)]
pub struct Rewriter<T> {
    rules: Vec<Rule<T>>,
    cache: RefCell<HashMap<(Strategy, Word), Poly<T>>>,
}

impl<T: Clone> Clone for Rewriter<T> {
    fn clone(&self) -> Self {
        Rewriter { rules: self.rules.clone(), cache: RefCell::new(HashMap::new()) }
    }
}

const MAX_REWRITE_DEPTH: usize = 10_000;

impl<T: Scalar> Rewriter<T> {
    pub fn new(rules: Vec<Rule<T>>) -> Self {
        Rewriter { rules, cache: RefCell::new(HashMap::new()) }
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    fn find(&self, w: &[u8], strategy: Strategy) -> Option<(usize, usize)> {
        let mut hits = (0..w.len()).flat_map(|p| {
            self.rules.iter().enumerate().filter(move |(_, r)| w[p..].starts_with(&r.lhs)).map(move |(i, _)| (p, i))
        });
        match strategy {
            Strategy::Leftmost => hits.next(),
            Strategy::Rightmost => hits.last(),
        }
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.find(w, Strategy::Leftmost).is_none()
    }

    pub fn normal_form_with(&self, w: &[u8], strategy: Strategy) -> Poly<T> {
        self.nf(w, strategy, 0)
    }

    fn nf(&self, w: &[u8], strategy: Strategy, depth: usize) -> Poly<T> {
        assert!(depth < MAX_REWRITE_DEPTH, "rewriting does not terminate on {w:?}");
        let key = (strategy, w.to_vec());
        if let Some(p) = self.cache.borrow().get(&key) {
            return p.clone();
        }
        let out = match self.find(w, strategy) {
            None => {
                let mut p = Poly::new();
                p.insert(w.to_vec(), T::one());
                p
            }
            Some((pos, r)) => {
                let rule = &self.rules[r];
                let mut acc = Poly::new();
                for (c, rw) in &rule.rhs {
                    let mut nw = w[..pos].to_vec();
                    nw.extend_from_slice(rw);
                    nw.extend_from_slice(&w[pos + rule.lhs.len()..]);
                    for (v, x) in self.nf(&nw, strategy, depth + 1) {
                        add_term(&mut acc, v, x * c.clone());
                    }
                }
                acc
            }
        };
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn normal_form(&self, w: &[u8]) -> Poly<T> {
        self.normal_form_with(w, Strategy::Leftmost)
    }

    pub fn normalize(&self, p: &Poly<T>) -> Poly<T> {
        let mut out = Poly::new();
        for (w, c) in p {
            for (v, x) in self.normal_form(w) {
                add_term(&mut out, v, x * c.clone());
            }
        }
        out
    }

    pub fn mul(&self, x: &Poly<T>, y: &Poly<T>) -> Poly<T> {
        let mut out = Poly::new();
        for (u, a) in x {
            for (v, b) in y {
                let mut w = u.clone();
                w.extend_from_slice(v);
                for (z, c) in self.normal_form(&w) {
                    add_term(&mut out, z, c * a.clone() * b.clone());
                }
            }
        }
        out
    }

    /// Compares leftmost and rightmost reduction on every word of length at
    /// most `max_len` over `gens` letters.
    pub fn check_confluence(&self, gens: usize, max_len: usize, tol: f64) -> Result<usize> {
        let mut words: Vec<Word> = vec![Vec::new()];
        let mut checked = 0;
        for _ in 0..max_len {
            words = words
                .iter()
                .flat_map(|w| {
                    (0..gens as u8).map(move |g| {
                        let mut v = w.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
            for w in &words {
                let l = self.normal_form_with(w, Strategy::Leftmost);
                let r = self.normal_form_with(w, Strategy::Rightmost);
                let mut diff = l.clone();
                for (v, c) in r {
                    add_term(&mut diff, v, T::zero() - c);
                }
                if diff.values().any(|c| !c.is_negligible(tol)) {
                    return Err(Error::NonConfluentRelations(format!("word {w:?}")));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, QC};
    use num_complex::Complex;

    fn q(num: i64, den: i64) -> QC {
        Complex::new(rational(num, den), rational(0, 1))
    }

    #[test]
    fn commutation_rules_are_confluent() {
        // y x -> 2 x y over two letters.
        let rw = Rewriter::new(vec![Rule { lhs: vec![1, 0], rhs: vec![(q(2, 1), vec![0, 1])] }]);
        assert_eq!(rw.check_confluence(2, 4, 0.0).unwrap(), 2 + 4 + 8 + 16);
        let nf = rw.normal_form(&[1, 1, 0]);
        assert_eq!(nf.get(&vec![0, 1, 1]), Some(&q(4, 1)));
    }

    #[test]
    fn inconsistent_rules_are_detected() {
        // x x -> y and x x -> 0 disagree depending on which overlap fires first.
        let rw = Rewriter::new(vec![
            Rule { lhs: vec![0, 0], rhs: vec![(q(1, 1), vec![1])] },
            Rule { lhs: vec![0, 0, 0], rhs: vec![] },
        ]);
        assert!(matches!(rw.check_confluence(2, 4, 0.0), Err(Error::NonConfluentRelations(_))));
    }
}
