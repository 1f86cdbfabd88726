//! Group oracles: element arithmetic without materializing the group algebra.

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

pub trait GroupOracle {
    type Elem: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// The symmetric standard generating set.
    fn standard_generators(&self) -> Vec<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// `Some(k)` when `gens` is exactly a free basis of rank `k` together with
    /// its inverses, so that the Cayley graph is the `2k`-regular tree.
    fn free_rank(&self, _gens: &[Self::Elem]) -> Option<usize> {
        None
    }
}

/// `Z^d` with elements as integer vectors, written `[x,y,…]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    pub d: usize,
}

impl GroupOracle for IntLattice {
    type Elem = Vec<i64>;

    fn name(&self) -> String {
        format!("Z^{}", self.d)
    }
    fn identity(&self) -> Vec<i64> {
        vec![0; self.d]
    }
    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }
    fn standard_generators(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(2 * self.d);
        for i in 0..self.d {
            for s in [1, -1] {
                let mut e = vec![0; self.d];
                e[i] = s;
                out.push(e);
            }
        }
        out
    }
    fn format(&self, a: &Vec<i64>) -> String {
        let parts: Vec<String> = a.iter().map(i64::to_string).collect();
        format!("[{}]", parts.join(","))
    }
    fn parse(&self, s: &str) -> Result<Vec<i64>> {
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']'));
        let inner = inner.ok_or_else(|| {
            Error::InvalidStructure(format!("expected [x,…] for an element of Z^{}, got {s:?}", self.d))
        })?;
        let v: std::result::Result<Vec<i64>, _> = inner.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let v = v.map_err(|e| Error::InvalidStructure(format!("bad lattice element {s:?}: {e}")))?;
        if v.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: v.len() });
        }
        Ok(v)
    }
}

/// Free group on `k` letters; reduced words with letters `±1 … ±k`, written
/// with `a, b, …` and upper case for inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    pub k: usize,
}

impl FreeGroup {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > 26 {
            return Err(Error::InvalidStructure(format!("free group rank must be in 1..=26, got {k}")));
        }
        Ok(FreeGroup { k })
    }
}

impl GroupOracle for FreeGroup {
    type Elem = Vec<i8>;

    fn name(&self) -> String {
        format!("F_{}", self.k)
    }
    fn identity(&self) -> Vec<i8> {
        Vec::new()
    }
    fn mul(&self, a: &Vec<i8>, b: &Vec<i8>) -> Vec<i8> {
        let mut out = a.clone();
        for &l in b {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }
    fn inv(&self, a: &Vec<i8>) -> Vec<i8> {
        a.iter().rev().map(|l| -l).collect()
    }
    fn standard_generators(&self) -> Vec<Vec<i8>> {
        (1..=self.k as i8).flat_map(|l| [vec![l], vec![-l]]).collect()
    }
    fn format(&self, a: &Vec<i8>) -> String {
        if a.is_empty() {
            return "e".into();
        }
        a.iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() - 1)) as char;
                if l > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }
    fn parse(&self, s: &str) -> Result<Vec<i8>> {
        let s = s.trim();
        if s == "e" {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        for c in s.chars() {
            let l = c.to_ascii_lowercase();
            if !l.is_ascii_lowercase() || (l as u8 - b'a') as usize >= self.k {
                return Err(Error::InvalidStructure(format!("letter {c:?} is not a generator of F_{}", self.k)));
            }
            let v = (l as u8 - b'a' + 1) as i8;
            word = self.mul(&word, &vec![if c.is_ascii_uppercase() { -v } else { v }]);
        }
        Ok(word)
    }

    fn free_rank(&self, gens: &[Vec<i8>]) -> Option<usize> {
        let std = self.standard_generators();
        let same = gens.len() == std.len() && std.iter().all(|s| gens.contains(s));
        same.then_some(self.k)
    }
}

/// A finite group from its Cayley table; elements are indices, written by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup(pub FiniteGroup);

impl GroupOracle for TableGroup {
    type Elem = usize;

    fn name(&self) -> String {
        self.0.name.clone()
    }
    fn identity(&self) -> usize {
        self.0.identity()
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.0.mul(*a, *b)
    }
    fn inv(&self, a: &usize) -> usize {
        self.0.inv(*a)
    }
    fn standard_generators(&self) -> Vec<usize> {
        if self.0.order() == 1 {
            return vec![self.0.identity()];
        }
        let mut out = Vec::new();
        for g in self.0.generators() {
            for x in [g, self.0.inv(g)] {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }
    fn format(&self, a: &usize) -> String {
        self.0.labels()[*a].clone()
    }
    fn parse(&self, s: &str) -> Result<usize> {
        self.0
            .index_of(s.trim())
            .ok_or_else(|| Error::InvalidStructure(format!("unknown element {s:?} of {}", self.0.name)))
    }
}

/// Any shipped oracle, possibly a direct product; used by the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyGroup {
    Lattice(IntLattice),
    Free(FreeGroup),
    Finite(TableGroup),
    Product(Vec<AnyGroup>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyElem {
    Lattice(Vec<i64>),
    Word(Vec<i8>),
    Index(usize),
    Tuple(Vec<AnyElem>),
}

impl AnyGroup {
    /// Parses `Z^d`, `F_k`, `finite:<file or shipped name>` or
    /// `product:<spec>,<spec>,…`.
    pub fn parse(spec: &str, load_table: impl Fn(&str) -> Result<FiniteGroup> + Copy) -> Result<AnyGroup> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("product:") {
            let parts: Result<Vec<AnyGroup>> = rest.split(',').map(|p| AnyGroup::parse(p, load_table)).collect();
            let parts = parts?;
            if parts.len() < 2 {
                return Err(Error::InvalidStructure("a product needs at least two factors".into()));
            }
            return Ok(AnyGroup::Product(parts));
        }
        if let Some(rest) = spec.strip_prefix("finite:") {
            return Ok(AnyGroup::Finite(TableGroup(load_table(rest)?)));
        }
        if let Some(d) = spec.strip_prefix("Z^") {
            let d: usize = d.parse().map_err(|_| Error::InvalidStructure(format!("bad lattice rank in {spec:?}")))?;
            if d == 0 {
                return Err(Error::InvalidStructure("lattice rank must be positive".into()));
            }
            return Ok(AnyGroup::Lattice(IntLattice { d }));
        }
        if let Some(k) = spec.strip_prefix("F_") {
            let k: usize = k.parse().map_err(|_| Error::InvalidStructure(format!("bad free rank in {spec:?}")))?;
            return Ok(AnyGroup::Free(FreeGroup::new(k)?));
        }
        Err(Error::InvalidStructure(format!("unknown group spec {spec:?}")))
    }

    fn split_tuple(s: &str) -> Option<Vec<&str>> {
        let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
        Some(inner.split('|').collect())
    }
}

impl GroupOracle for AnyGroup {
    type Elem = AnyElem;

    fn name(&self) -> String {
        match self {
            AnyGroup::Lattice(g) => g.name(),
            AnyGroup::Free(g) => g.name(),
            AnyGroup::Finite(g) => g.name(),
            AnyGroup::Product(gs) => gs.iter().map(|g| g.name()).collect::<Vec<_>>().join(" x "),
        }
    }

    fn identity(&self) -> AnyElem {
        match self {
            AnyGroup::Lattice(g) => AnyElem::Lattice(g.identity()),
            AnyGroup::Free(g) => AnyElem::Word(g.identity()),
            AnyGroup::Finite(g) => AnyElem::Index(g.identity()),
            AnyGroup::Product(gs) => AnyElem::Tuple(gs.iter().map(|g| g.identity()).collect()),
        }
    }

    fn mul(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        match (self, a, b) {
            (AnyGroup::Lattice(g), AnyElem::Lattice(x), AnyElem::Lattice(y)) => AnyElem::Lattice(g.mul(x, y)),
            (AnyGroup::Free(g), AnyElem::Word(x), AnyElem::Word(y)) => AnyElem::Word(g.mul(x, y)),
            (AnyGroup::Finite(g), AnyElem::Index(x), AnyElem::Index(y)) => AnyElem::Index(g.mul(x, y)),
            (AnyGroup::Product(gs), AnyElem::Tuple(x), AnyElem::Tuple(y)) => {
                AnyElem::Tuple(gs.iter().zip(x.iter().zip(y)).map(|(g, (p, q))| g.mul(p, q)).collect())
            }
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    fn inv(&self, a: &AnyElem) -> AnyElem {
        match (self, a) {
            (AnyGroup::Lattice(g), AnyElem::Lattice(x)) => AnyElem::Lattice(g.inv(x)),
            (AnyGroup::Free(g), AnyElem::Word(x)) => AnyElem::Word(g.inv(x)),
            (AnyGroup::Finite(g), AnyElem::Index(x)) => AnyElem::Index(g.inv(x)),
            (AnyGroup::Product(gs), AnyElem::Tuple(x)) => {
                AnyElem::Tuple(gs.iter().zip(x).map(|(g, p)| g.inv(p)).collect())
            }
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    fn standard_generators(&self) -> Vec<AnyElem> {
        match self {
            AnyGroup::Lattice(g) => g.standard_generators().into_iter().map(AnyElem::Lattice).collect(),
            AnyGroup::Free(g) => g.standard_generators().into_iter().map(AnyElem::Word).collect(),
            AnyGroup::Finite(g) => g.standard_generators().into_iter().map(AnyElem::Index).collect(),
            AnyGroup::Product(gs) => {
                let ids: Vec<AnyElem> = gs.iter().map(|g| g.identity()).collect();
                let mut out = Vec::new();
                for (i, g) in gs.iter().enumerate() {
                    for s in g.standard_generators() {
                        let mut t = ids.clone();
                        t[i] = s;
                        out.push(AnyElem::Tuple(t));
                    }
                }
                out
            }
        }
    }

    fn format(&self, a: &AnyElem) -> String {
        match (self, a) {
            (AnyGroup::Lattice(g), AnyElem::Lattice(x)) => g.format(x),
            (AnyGroup::Free(g), AnyElem::Word(x)) => g.format(x),
            (AnyGroup::Finite(g), AnyElem::Index(x)) => g.format(x),
            (AnyGroup::Product(gs), AnyElem::Tuple(x)) => {
                format!("({})", gs.iter().zip(x).map(|(g, p)| g.format(p)).collect::<Vec<_>>().join("|"))
            }
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    fn free_rank(&self, gens: &[AnyElem]) -> Option<usize> {
        let AnyGroup::Free(f) = self else { return None };
        let words: Option<Vec<Vec<i8>>> = gens
            .iter()
            .map(|e| match e {
                AnyElem::Word(w) => Some(w.clone()),
                _ => None,
            })
            .collect();
        f.free_rank(&words?)
    }

    fn parse(&self, s: &str) -> Result<AnyElem> {
        match self {
            AnyGroup::Lattice(g) => g.parse(s).map(AnyElem::Lattice),
            AnyGroup::Free(g) => g.parse(s).map(AnyElem::Word),
            AnyGroup::Finite(g) => g.parse(s).map(AnyElem::Index),
            AnyGroup::Product(gs) => {
                let parts = AnyGroup::split_tuple(s).ok_or_else(|| {
                    Error::InvalidStructure(format!("expected (x|y|…) for a product element, got {s:?}"))
                })?;
                if parts.len() != gs.len() {
                    return Err(Error::DimensionMismatch { expected: gs.len(), found: parts.len() });
                }
                let elems: Result<Vec<AnyElem>> = gs.iter().zip(parts).map(|(g, p)| g.parse(p)).collect();
                Ok(AnyElem::Tuple(elems?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::symmetric3;

    #[test]
    fn free_words_reduce() {
        let f = FreeGroup::new(2).unwrap();
        let x = f.parse("abA").unwrap();
        assert_eq!(f.mul(&x, &f.inv(&x)), f.identity());
        assert_eq!(f.format(&f.parse("aA").unwrap()), "e");
        assert!(f.parse("c").is_err());
    }

    #[test]
    fn product_elements_round_trip() {
        let g = AnyGroup::parse("product:Z^1,finite:S3", |_| Ok(symmetric3())).unwrap();
        let x = g.parse("([2]|(12))").unwrap();
        assert_eq!(g.format(&x), "([2]|(12))");
        assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        let s3 = TableGroup(symmetric3()).standard_generators().len();
        assert_eq!(g.standard_generators().len(), 2 + s3);
    }
}
