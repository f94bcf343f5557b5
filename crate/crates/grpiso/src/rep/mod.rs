//! Representations of elementary abelian groups `Z_q^ℓ` over `F_p` with
//! `p ≠ q`: irreducible labels, decomposition, and indexing tuples.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, mod_inv};
use crate::exec;
use crate::fp::{FpMatrix, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("need distinct primes, got q = {q}, p = {p}")]
    NotCoprime { q: u64, p: u64 },
    #[error("images do not define a homomorphism")]
    NotAHomomorphism,
    #[error("representations live on different domains or fields")]
    Incompatible,
}

/// A representation of `Z_q^ℓ` on `F_p^k`, stored as the image of every
/// element. Element index `Σ u_i q^i` corresponds to the vector `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MatRep {
    q: u64,
    l: usize,
    p: u64,
    k: usize,
    images: Vec<FpMatrix>,
}

fn check_primes(q: u64, p: u64) -> Result<(), RepError> {
    if q == p || !is_prime(q) || !is_prime(p) {
        return Err(RepError::NotCoprime { q, p });
    }
    Ok(())
}

impl MatRep {
    /// From the images of the standard basis vectors.
    pub fn from_generators(q: u64, l: usize, p: u64, k: usize, gens: &[FpMatrix]) -> Result<Self, RepError> {
        if gens.len() != l || gens.iter().any(|g| g.rows() != k || g.cols() != k || g.p() != p) {
            return Err(RepError::NotAHomomorphism);
        }
        let id = FpMatrix::identity(p, k);
        for (i, a) in gens.iter().enumerate() {
            if a.pow(q) != id || gens[..i].iter().any(|b| a.mul(b) != b.mul(a)) {
                return Err(RepError::NotAHomomorphism);
            }
        }
        let n = (q as usize).pow(l as u32);
        let mut images = Vec::with_capacity(n);
        for idx in 0..n {
            let u = vector_of(q, l, idx);
            let mut m = id.clone();
            for (g, &c) in gens.iter().zip(&u) {
                m = m.mul(&g.pow(c));
            }
            images.push(m);
        }
        Ok(MatRep { q, l, p, k, images })
    }

    pub fn trivial(q: u64, l: usize, p: u64, k: usize) -> Self {
        let n = (q as usize).pow(l as u32);
        MatRep { q, l, p, k, images: vec![FpMatrix::identity(p, k); n] }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.l
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn group_order(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, u: &[u64]) -> &FpMatrix {
        &self.images[index_of(self.q, u)]
    }

    pub fn images(&self) -> &[FpMatrix] {
        &self.images
    }

    pub fn generator_images(&self) -> Vec<FpMatrix> {
        (0..self.l).map(|i| self.images[(self.q as usize).pow(i as u32)].clone()).collect()
    }

    pub fn traces(&self) -> Vec<u64> {
        self.images.iter().map(|m| (0..self.k).fold(0, |t, i| (t + m.get(i, i)) % self.p)).collect()
    }

    /// `X⁻¹ ρ(u) X` for every `u`.
    pub fn conjugate(&self, x: &FpMatrix) -> Option<MatRep> {
        let xi = x.inverse()?;
        Some(MatRep { images: self.images.iter().map(|m| xi.mul(m).mul(x)).collect(), ..self.clone() })
    }

    pub fn direct_sum(&self, other: &MatRep) -> Result<MatRep, RepError> {
        if (self.q, self.l, self.p) != (other.q, other.l, other.p) {
            return Err(RepError::Incompatible);
        }
        let k = self.k + other.k;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut m = FpMatrix::zeros(self.p, k, k);
                for i in 0..self.k {
                    for j in 0..self.k {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..other.k {
                    for j in 0..other.k {
                        m.set(self.k + i, self.k + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        Ok(MatRep { images, k, ..self.clone() })
    }

    /// `u ↦ ρ(φ u)` for an `ℓ × ℓ` matrix `φ` over `F_q`.
    pub fn precompose(&self, phi: &FpMatrix) -> MatRep {
        let images = (0..self.images.len())
            .map(|idx| {
                let u = vector_of(self.q, self.l, idx);
                self.images[index_of(self.q, &phi.mul_vec(&u))].clone()
            })
            .collect();
        MatRep { images, ..self.clone() }
    }

    fn block(&self, range: std::ops::Range<usize>, basis_change: &FpMatrix) -> MatRep {
        let xi = basis_change.inverse().expect("invertible");
        let idx: Vec<usize> = range.collect();
        let images = self.images.iter().map(|m| xi.mul(m).mul(basis_change).select_rows(&idx).select_columns(&idx)).collect();
        MatRep { k: idx.len(), images, ..self.clone() }
    }
}

pub(crate) fn vector_of(q: u64, l: usize, mut idx: usize) -> Vec<u64> {
    (0..l)
        .map(|_| {
            let c = (idx % q as usize) as u64;
            idx /= q as usize;
            c
        })
        .collect()
}

pub(crate) fn index_of(q: u64, u: &[u64]) -> usize {
    u.iter().rev().fold(0, |acc, &c| acc * q as usize + (c % q) as usize)
}

/// Monic irreducible factors of the `q`-th cyclotomic polynomial over `F_p`,
/// in ascending order.
pub fn factor_cyclotomic(q: u64, p: u64) -> Result<Vec<Poly>, RepError> {
    check_primes(q, p)?;
    Ok(Poly::new(p, vec![1; q as usize]).berlekamp())
}

/// Companion matrix of the least cyclotomic factor.
fn base_matrix(q: u64, p: u64) -> FpMatrix {
    let g = factor_cyclotomic(q, p).expect("distinct primes");
    FpMatrix::companion(&g[0])
}

/// The irreducible representation labelled by `v`: `u ↦ M^{v·u mod q}`, and
/// the one-dimensional trivial representation for `v = 0`.
pub fn irreducible_rep(v: &[u64], q: u64, l: usize, p: u64) -> MatRep {
    if v.iter().all(|&c| c % q == 0) {
        return MatRep::trivial(q, l, p, 1);
    }
    let m = base_matrix(q, p);
    let powers: Vec<FpMatrix> = (0..q).map(|h| m.pow(h)).collect();
    let n = (q as usize).pow(l as u32);
    let images = (0..n)
        .map(|idx| {
            let u = vector_of(q, l, idx);
            let h = v.iter().zip(&u).map(|(a, b)| a * b).sum::<u64>() % q;
            powers[h as usize].clone()
        })
        .collect();
    MatRep { q, l, p, k: m.rows(), images }
}

/// Basis (as columns) of the smallest invariant subspace containing `x`.
fn orbit_span(rep: &MatRep, x: &[u64]) -> FpMatrix {
    let rows: Vec<Vec<u64>> = rep.images.iter().map(|m| m.mul_vec(x)).collect();
    FpMatrix::from_rows(rep.p, &rows).row_space_basis().transpose()
}

fn nonzero_vectors(p: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as usize).pow(k as u32);
    (1..total).map(move |mut i| {
        (0..k)
            .map(|_| {
                let c = (i % p as usize) as u64;
                i /= p as usize;
                c
            })
            .collect()
    })
}

/// A proper non-zero invariant subspace of least dimension, if any.
fn minimal_invariant(rep: &MatRep) -> Option<FpMatrix> {
    let mut best: Option<FpMatrix> = None;
    for x in nonzero_vectors(rep.p, rep.k) {
        exec::tick(1);
        let w = orbit_span(rep, &x);
        if w.cols() < best.as_ref().map_or(rep.k, |b| b.cols()) {
            let done = w.cols() == 1;
            best = Some(w);
            if done {
                break;
            }
        }
    }
    best
}

/// True iff every non-zero vector's orbit spans the whole space.
pub fn is_irreducible(rep: &MatRep) -> bool {
    rep.k > 0 && minimal_invariant(rep).is_none()
}

/// An invariant complement of the invariant subspace spanned by the columns
/// of `w`, by averaging a projection over the group.
fn invariant_complement(rep: &MatRep, w: &FpMatrix) -> FpMatrix {
    let (p, k) = (rep.p, rep.k);
    let mut basis = w.clone();
    for e in 0..k {
        let mut col = FpMatrix::zeros(p, k, 1);
        col.set(e, 0, 1);
        let cand = basis.hstack(&col);
        if cand.rank() > basis.cols() {
            basis = cand;
        }
    }
    let mut d = FpMatrix::zeros(p, k, k);
    for i in 0..w.cols() {
        d.set(i, i, 1);
    }
    let p0 = basis.mul(&d).mul(&basis.inverse().unwrap());
    let mut sum = FpMatrix::zeros(p, k, k);
    for m in &rep.images {
        sum = sum.add(&m.mul(&p0).mul(&m.inverse().unwrap()));
    }
    let n_inv = mod_inv(rep.images.len() as u64 % p, p).expect("coprime order");
    let proj = sum.scale(n_inv);
    let ker = proj.right_kernel();
    FpMatrix::from_rows(p, &ker).transpose()
}

fn split(rep: MatRep, out: &mut Vec<MatRep>) {
    let Some(w) = minimal_invariant(&rep) else {
        out.push(rep);
        return;
    };
    let c = invariant_complement(&rep, &w);
    let x = w.hstack(&c);
    let d = w.cols();
    out.push(rep.block(0..d, &x));
    split(rep.block(d..rep.k, &x), out);
}

/// Irreducible constituents grouped by equivalence, with multiplicities.
/// Classes are ordered by decreasing multiplicity, then first appearance.
pub fn decompose_rep(rep: &MatRep) -> Result<Vec<(MatRep, usize)>, RepError> {
    check_primes(rep.q, rep.p)?;
    let mut parts = Vec::new();
    if rep.k > 0 {
        split(rep.clone(), &mut parts);
    }
    let mut classes: Vec<(MatRep, usize)> = Vec::new();
    for c in parts {
        match classes.iter_mut().find(|(r, _)| chars_equal(r, &c)) {
            Some(entry) => entry.1 += 1,
            None => classes.push((c, 1)),
        }
    }
    classes.sort_by_key(|(_, m)| std::cmp::Reverse(*m));
    Ok(classes)
}

/// Equal dimension and equal trace at every element. Decides equivalence of
/// irreducible representations when `p ∤ q`; for reducible ones use
/// [`reps_equivalent`], since traces only see multiplicities mod `p`.
pub fn chars_equal(a: &MatRep, b: &MatRep) -> bool {
    (a.q, a.l, a.p, a.k) == (b.q, b.l, b.p, b.k) && a.traces() == b.traces()
}

/// Equivalence through matching irreducible constituents and multiplicities.
pub fn reps_equivalent(a: &MatRep, b: &MatRep) -> Result<bool, RepError> {
    if (a.q, a.l, a.p, a.k) != (b.q, b.l, b.p, b.k) {
        return Ok(false);
    }
    let (da, db) = (decompose_rep(a)?, decompose_rep(b)?);
    let mut used = vec![false; db.len()];
    for (r, m) in &da {
        let Some(j) = (0..db.len()).find(|&j| !used[j] && db[j].1 == *m && chars_equal(r, &db[j].0)) else {
            return Ok(false);
        };
        used[j] = true;
    }
    Ok(used.iter().all(|&u| u))
}

/// Whether `f_u` and `f_v` are equivalent: `u = s·v` for some `s` with
/// `M^s` and `M` sharing a characteristic polynomial.
pub fn labels_equivalent(u: &[u64], v: &[u64], q: u64, p: u64) -> bool {
    let zu = u.iter().all(|&c| c % q == 0);
    let zv = v.iter().all(|&c| c % q == 0);
    if zu || zv {
        return zu && zv;
    }
    let m = base_matrix(q, p);
    let cp = m.charpoly();
    (1..q).any(|s| {
        u.iter().zip(v).all(|(&a, &b)| a % q == (s * b) % q) && m.pow(s).charpoly() == cp
    })
}

/// One label per irreducible class, grouped by multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexingTuple {
    pub by_multiplicity: BTreeMap<usize, Vec<Vec<u64>>>,
}

impl IndexingTuple {
    /// Image under `φ ∈ GL_ℓ(F_q)`: each label `v` becomes `φᵀ v`.
    pub fn transform(&self, phi: &FpMatrix) -> IndexingTuple {
        let t = phi.transpose();
        let by_multiplicity = self
            .by_multiplicity
            .iter()
            .map(|(&w, vs)| {
                let mut out: Vec<Vec<u64>> = vs.iter().map(|v| t.mul_vec(v)).collect();
                out.sort();
                (w, out)
            })
            .collect();
        IndexingTuple { by_multiplicity }
    }
}

/// For each irreducible class of `rep`: its multiplicity and every label
/// `v` with `f_v` in the class, sorted.
pub fn label_classes(rep: &MatRep) -> Result<Vec<(usize, Vec<Vec<u64>>)>, RepError> {
    let classes = decompose_rep(rep)?;
    let n = rep.group_order();
    let labels: Vec<(Vec<u64>, MatRep)> =
        exec::par_range(n, |idx| {
            let v = vector_of(rep.q, rep.l, idx);
            let f = irreducible_rep(&v, rep.q, rep.l, rep.p);
            (v, f)
        });
    Ok(classes
        .iter()
        .map(|(c, m)| {
            let mut vs: Vec<Vec<u64>> =
                labels.iter().filter(|(_, f)| chars_equal(c, f)).map(|(v, _)| v.clone()).collect();
            vs.sort();
            (*m, vs)
        })
        .collect())
}

/// Every indexing tuple, the lexicographically least choice first.
pub fn indexing_tuples(rep: &MatRep) -> Result<Vec<IndexingTuple>, RepError> {
    let classes = label_classes(rep)?;
    let mut out = Vec::new();
    let mut choice = vec![0usize; classes.len()];
    loop {
        let mut by_multiplicity: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
        for (c, &i) in classes.iter().zip(&choice) {
            by_multiplicity.entry(c.0).or_default().push(c.1[i].clone());
        }
        for vs in by_multiplicity.values_mut() {
            vs.sort();
        }
        out.push(IndexingTuple { by_multiplicity });
        // Odometer step, last class fastest.
        let mut pos = classes.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < classes[pos].1.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}
