//! Small finite groups and the two Hopf *-algebras attached to them: the
//! group algebra `C(Γ)` and the function algebra `K(Γ)`.

use std::collections::HashMap;

use crate::algebra::{LinearFunctional, StarAlgebra};
use crate::error::{Error, Result};
use crate::hopf::{HopfAlgebra, HopfStructure};
use crate::matrix::Mat;
use crate::scalar::{Scalar, C64};

/// A finite group given by its Cayley table; element 0 need not be the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, associativity, identity, inverses.
    pub fn from_table(name: &str, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidStructure("group must be non-empty".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidStructure(format!("group table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&k| k >= n) {
            return Err(Error::InvalidStructure("group table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidStructure("group table has no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidStructure(format!("element {} has no inverse", labels[x])))?;
            inverse.push(inv);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::InvalidStructure("group table is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), labels, table, identity, inverse })
    }

    /// Closes a set of generating elements under an associative product.
    pub fn generate<E: Clone + Eq + std::hash::Hash>(
        name: &str,
        identity: E,
        generators: &[E],
        mul: impl Fn(&E, &E) -> E,
        label: impl Fn(&E) -> String,
    ) -> Self {
        let mut elems = vec![identity];
        let mut index: HashMap<E, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            head += 1;
            for g in generators {
                let y = mul(&x, g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        let table = elems.iter().map(|x| elems.iter().map(|y| index[&mul(x, y)]).collect()).collect();
        let labels = elems.iter().map(label).collect();
        FiniteGroup::from_table(name, labels, table).expect("closure of generators is a group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.table[x][y] == self.table[y][x]))
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in 0..self.order() {
            if span.contains(&x) {
                continue;
            }
            gens.push(x);
            span = self.closure(&gens);
            if span.len() == self.order() {
                break;
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![self.identity];
        seen[self.identity] = true;
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Direct product, with labels `(x,y)`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let labels = (0..n * m).map(|k| format!("({},{})", self.labels[k / m], other.labels[k % m])).collect();
        let table = (0..n * m)
            .map(|p| (0..n * m).map(|q| self.mul(p / m, q / m) * m + other.mul(p % m, q % m)).collect())
            .collect();
        FiniteGroup::from_table(&format!("{}x{}", self.name, other.name), labels, table)
            .expect("product of groups is a group")
    }

    /// All one-dimensional unitary representations, as value vectors.
    pub fn characters(&self) -> Vec<Vec<C64>> {
        let n = self.order();
        let gens = self.generators();
        let roots: Vec<C64> =
            (0..n).map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)).collect();
        let mut out: Vec<Vec<C64>> = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(chi) = self.extend_character(&gens, &choice, &roots) {
                if !out.iter().any(|c| c.iter().zip(&chi).all(|(a, b)| (a - b).norm() < 1e-9)) {
                    out.push(chi);
                }
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return out;
                }
                choice[k] += 1;
                if choice[k] < n {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn extend_character(&self, gens: &[usize], choice: &[usize], roots: &[C64]) -> Option<Vec<C64>> {
        let n = self.order();
        let mut val: Vec<Option<C64>> = vec![None; n];
        val[self.identity] = Some(C64::new(1.0, 0.0));
        let mut queue = vec![self.identity];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (g, &c) in gens.iter().zip(choice) {
                let y = self.mul(x, *g);
                let v = val[x].unwrap() * roots[c];
                match val[y] {
                    None => {
                        val[y] = Some(v);
                        queue.push(y);
                    }
                    Some(w) if (w - v).norm() > 1e-9 => return None,
                    _ => {}
                }
            }
        }
        let chi: Vec<C64> = val.into_iter().map(|v| v.unwrap()).collect();
        for x in 0..n {
            for y in 0..n {
                if (chi[self.mul(x, y)] - chi[x] * chi[y]).norm() > 1e-9 {
                    return None;
                }
            }
        }
        Some(chi)
    }
}

/// Cyclic group `Z_n` with labels `e, g, g2, …`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let labels = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g{k}"),
        })
        .collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table(&format!("Z{n}"), labels, table).expect("cyclic group")
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p q)(i) = p(q(i)): apply q first.
    q.iter().map(|&i| p[i]).collect()
}

fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Symmetric group on three letters, labelled in cycle notation.
pub fn symmetric3() -> FiniteGroup {
    FiniteGroup::generate(
        "S3",
        vec![0, 1, 2],
        &[vec![1, 0, 2], vec![0, 2, 1]],
        |p, q| compose(p, q),
        |p| cycle_label(p),
    )
}

/// Dihedral group of order 8: rotations `r^k` and reflections `s r^k`.
pub fn dihedral4() -> FiniteGroup {
    // (reflect, k) represents s^reflect r^k; r s = s r^{-1}.
    let mul = |x: &(u8, u8), y: &(u8, u8)| {
        let k = if y.0 == 1 { (4 - x.1) % 4 } else { x.1 };
        ((x.0 + y.0) % 2, (k + y.1) % 4)
    };
    let label = |x: &(u8, u8)| match x {
        (0, 0) => "e".to_string(),
        (0, 1) => "r".to_string(),
        (0, k) => format!("r{k}"),
        (1, 0) => "s".to_string(),
        (1, 1) => "sr".to_string(),
        (_, k) => format!("sr{k}"),
    };
    FiniteGroup::generate("D4", (0, 0), &[(0, 1), (1, 0)], mul, label)
}

/// Quaternion group `{±1, ±i, ±j, ±k}`.
pub fn quaternion8() -> FiniteGroup {
    // (sign, unit) with unit 0 = 1, 1 = i, 2 = j, 3 = k.
    let mul = |x: &(bool, u8), y: &(bool, u8)| {
        let (s, u) = match (x.1, y.1) {
            (0, b) => (false, b),
            (a, 0) => (false, a),
            (a, b) if a == b => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        };
        (x.0 ^ y.0 ^ s, u)
    };
    let label = |x: &(bool, u8)| format!("{}{}", if x.0 { "-" } else { "" }, ["1", "i", "j", "k"][x.1 as usize]);
    FiniteGroup::generate("Q8", (false, 0), &[(false, 1), (false, 2)], mul, label)
}

/// Looks a shipped group up by name (`Z<n>`, `S3`, `D4`, `Q8`).
pub fn named_group(name: &str) -> Option<FiniteGroup> {
    match name {
        "S3" => Some(symmetric3()),
        "D4" => Some(dihedral4()),
        "Q8" => Some(quaternion8()),
        _ => name.strip_prefix('Z').and_then(|n| n.parse().ok()).filter(|&n| n >= 1).map(cyclic),
    }
}

/// The group algebra `C(Γ)`: `Δ(x) = x ⊗ x`, `ε(x) = 1`, `S(x) = x⁻¹`.
pub fn group_algebra<T: Scalar>(g: &FiniteGroup) -> HopfAlgebra<T> {
    let n = g.order();
    let algebra = StarAlgebra::from_table(g.labels.clone(), |i, j| Some(g.mul(i, j)), |i| g.inv(i), Some(g.identity));
    let delta = Mat::from_fn(n, n * n, |i, c| if c == i * n + i { T::one() } else { T::zero() });
    let epsilon = LinearFunctional::new(vec![T::one(); n]);
    let antipode = Mat::from_fn(n, n, |i, k| if k == g.inv(i) { T::one() } else { T::zero() });
    HopfAlgebra { algebra, hopf: HopfStructure::new(delta, epsilon, antipode) }
}

/// The function algebra `K(Γ)` in the basis of point indicators `e_x`:
/// `Δ(e_x) = Σ_{yz = x} e_y ⊗ e_z`, `ε(e_x) = δ_{x,1}`, `S(e_x) = e_{x⁻¹}`.
pub fn function_algebra<T: Scalar>(g: &FiniteGroup) -> HopfAlgebra<T> {
    let n = g.order();
    let labels: Vec<String> = g.labels.iter().map(|l| format!("e[{l}]")).collect();
    let algebra = StarAlgebra::new(
        labels,
        {
            let mut m = vec![T::zero(); n * n * n];
            for i in 0..n {
                m[(i * n + i) * n + i] = T::one();
            }
            m
        },
        Mat::identity(n),
        Some(vec![T::one(); n]),
    )
    .expect("function algebra dimensions");
    let delta = Mat::from_fn(n, n * n, |x, c| if g.mul(c / n, c % n) == x { T::one() } else { T::zero() });
    let epsilon = LinearFunctional::new((0..n).map(|x| if x == g.identity { T::one() } else { T::zero() }).collect());
    let antipode = Mat::from_fn(n, n, |i, k| if k == g.inv(i) { T::one() } else { T::zero() });
    HopfAlgebra { algebra, hopf: HopfStructure::new(delta, epsilon, antipode) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_groups_have_expected_orders() {
        assert_eq!(cyclic(6).order(), 6);
        assert_eq!(symmetric3().order(), 6);
        assert_eq!(dihedral4().order(), 8);
        assert_eq!(quaternion8().order(), 8);
        assert!(!symmetric3().is_abelian());
        assert!(!quaternion8().is_abelian());
        assert!(cyclic(3).is_abelian());
    }

    #[test]
    fn character_counts_match_abelianizations() {
        assert_eq!(cyclic(2).characters().len(), 2);
        assert_eq!(cyclic(3).characters().len(), 3);
        assert_eq!(symmetric3().characters().len(), 2);
        assert_eq!(dihedral4().characters().len(), 4);
        assert_eq!(quaternion8().characters().len(), 4);
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion8();
        let i = q.index_of("i").unwrap();
        let j = q.index_of("j").unwrap();
        assert_eq!(q.labels()[q.mul(i, j)], "k");
        assert_eq!(q.labels()[q.mul(j, i)], "-k");
        assert_eq!(q.labels()[q.mul(i, i)], "-1");
    }

    #[test]
    fn bad_table_is_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::from_table("bad", labels, vec![vec![0, 0], vec![0, 0]]).is_err());
    }
}
