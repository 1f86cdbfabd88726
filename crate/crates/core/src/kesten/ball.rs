//! Cayley balls: BFS enumeration of products of at most `R` generators.

use std::collections::HashMap;

use super::group::GroupOracle;
use crate::error::{Error, Result};

pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// Marks a generator action that leaves the ball.
pub const OUTSIDE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct CayleyBall<E> {
    radius: usize,
    elements: Vec<E>,
    index: HashMap<E, u32>,
    /// Sphere `r` occupies `sphere_starts[r]..sphere_starts[r + 1]`.
    sphere_starts: Vec<usize>,
    /// `gen_actions[s][x]` is the index of `x·s`, or [`OUTSIDE`].
    gen_actions: Vec<Vec<u32>>,
}

impl<E: Clone + Eq + std::hash::Hash> CayleyBall<E> {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.index.get(x).map(|&i| i as usize)
    }

    /// Number of elements of word length at most `r`; balls are prefixes.
    pub fn size_at(&self, r: usize) -> usize {
        self.sphere_starts[r.min(self.radius) + 1]
    }

    pub fn sphere_starts(&self) -> &[usize] {
        &self.sphere_starts
    }

    pub fn gen_actions(&self) -> &[Vec<u32>] {
        &self.gen_actions
    }

    /// Word length of the element at index `i`.
    pub fn length_of(&self, i: usize) -> usize {
        self.sphere_starts.partition_point(|&s| s <= i) - 1
    }
}

/// Enumerates the ball of radius `radius` under right multiplication by `gens`.
pub fn build_ball<G: GroupOracle>(g: &G, gens: &[G::Elem], radius: usize, cap: usize) -> Result<CayleyBall<G::Elem>> {
    let id = g.identity();
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0u32);
    let mut sphere_starts = vec![0, 1];
    let mut gen_actions: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    for r in 0..=radius {
        let (lo, hi) = (sphere_starts[r], sphere_starts[r + 1]);
        for x in lo..hi {
            for (s, gen) in gens.iter().enumerate() {
                let y = g.mul(&elements[x], gen);
                let j = match index.get(&y) {
                    Some(&j) => j,
                    None if r < radius => {
                        if elements.len() >= cap || elements.len() >= OUTSIDE as usize {
                            return Err(Error::BallTooLarge { cap });
                        }
                        let j = elements.len() as u32;
                        index.insert(y.clone(), j);
                        elements.push(y);
                        j
                    }
                    None => OUTSIDE,
                };
                gen_actions[s].push(j);
            }
        }
        if r < radius {
            sphere_starts.push(elements.len());
        }
    }
    Ok(CayleyBall { radius, elements, index, sphere_starts, gen_actions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kesten::group::{FreeGroup, IntLattice};

    #[test]
    fn small_balls() {
        let z = IntLattice { d: 1 };
        assert_eq!(build_ball(&z, &z.standard_generators(), 10, DEFAULT_BALL_CAP).unwrap().len(), 21);
        let f = FreeGroup::new(2).unwrap();
        let b = build_ball(&f, &f.standard_generators(), 2, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(b.len(), 17);
        assert_eq!(b.size_at(1), 5);
        assert_eq!(b.length_of(16), 2);
        let z2 = IntLattice { d: 2 };
        assert_eq!(build_ball(&z2, &z2.standard_generators(), 2, DEFAULT_BALL_CAP).unwrap().len(), 13);
    }

    #[test]
    fn actions_match_oracle() {
        let f = FreeGroup::new(2).unwrap();
        let gens = f.standard_generators();
        let b = build_ball(&f, &gens, 3, DEFAULT_BALL_CAP).unwrap();
        for (s, act) in b.gen_actions().iter().enumerate() {
            for (x, &y) in act.iter().enumerate() {
                let prod = f.mul(&b.elements()[x], &gens[s]);
                match b.index_of(&prod) {
                    Some(j) => assert_eq!(j as u32, y),
                    None => assert_eq!(y, OUTSIDE),
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = FreeGroup::new(2).unwrap();
        assert_eq!(build_ball(&f, &f.standard_generators(), 5, 100).unwrap_err(), Error::BallTooLarge { cap: 100 });
    }
}
