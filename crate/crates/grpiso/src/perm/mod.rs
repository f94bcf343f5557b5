//! Permutation groups: Schreier-Sims with base and strong generating set, and
//! the usual toolkit built on it (stabilizers, kernels, blocks, cosets).

mod blocks;
mod bsgs;
mod coset;

pub use blocks::{minimal_blocks, Blocks};
pub use bsgs::{orbits, PermGroup, Word};
pub use coset::{coset_intersection, transversal, PermCoset, TRANSVERSAL_CAP};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("generator has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("image array is not a permutation")]
    NotAPermutation,
    #[error("the given images do not define an action")]
    NotAnAction,
    #[error("group is not transitive")]
    NotTransitive,
    #[error("second group is not a subgroup of the first")]
    NotSubgroup,
    #[error("index {index} exceeds the transversal cap {cap}")]
    IndexGuardExceeded { index: u128, cap: usize },
}

/// A permutation of `0..m`, stored as its image array. Composition follows
/// function notation: `a.compose(b)` maps `i` to `a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm((0..m as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x >= m || seen[x] {
                return Err(PermError::NotAPermutation);
            }
            seen[x] = true;
        }
        Ok(Perm(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Self {
        let mut p = Perm::identity(m);
        for c in cycles.iter().rev() {
            let mut img: Vec<usize> = (0..m).collect();
            for i in 0..c.len() {
                img[c[i]] = c[(i + 1) % c.len()];
            }
            p = Perm::from_images(img).expect("cycle").compose(&p);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &x)| i as u32 != x)
    }

    pub fn pow(&self, e: usize) -> Perm {
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut l = 1usize;
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            l = l / crate::arith::gcd(l as u64, len as u64) as usize * len;
        }
        l
    }

    /// Concatenate `self` on `0..m` with `other` acting on `m..m+m'`.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let m = self.0.len() as u32;
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + m));
        Perm(v)
    }

    /// Restriction to `range`, which must be invariant, renumbered from 0.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Perm {
        let st = range.start as u32;
        Perm(self.0[range].iter().map(|&x| x - st).collect())
    }
}
