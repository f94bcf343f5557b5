//! Integer matrices of automorphisms of abelian p-groups, and their reduction
//! to block-diagonal matrices over F_p.

use rand::Rng;

use super::CoprimeError;
use crate::arith::prime_power;
use crate::fp::FpMatrix;
use crate::group::{AbelianBasis, CayleyTable};

/// Matrix of an endomorphism of `Z_{p^e_1} × … × Z_{p^e_s}` (exponents ascending).
/// Column `j` holds the coordinates of the image of basis element `j`; entry
/// `(i, j)` lives modulo `p^e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RanumMatrix {
    p: u64,
    exps: Vec<u32>,
    entries: Vec<Vec<u64>>,
}

impl RanumMatrix {
    pub fn new(p: u64, exps: Vec<u32>, entries: Vec<Vec<u64>>) -> Result<Self, CoprimeError> {
        let s = exps.len();
        if exps.windows(2).any(|w| w[0] > w[1]) {
            return Err(CoprimeError::ConstraintViolated("exponents must ascend".into()));
        }
        if entries.len() != s || entries.iter().any(|r| r.len() != s) {
            return Err(CoprimeError::ConstraintViolated("matrix is not square".into()));
        }
        for i in 0..s {
            for j in 0..s {
                let u = entries[i][j];
                if u >= p.pow(exps[i]) {
                    return Err(CoprimeError::ConstraintViolated(format!("entry ({i},{j}) out of range")));
                }
                let need = p.pow(exps[i] - exps[i].min(exps[j]));
                if u % need != 0 {
                    return Err(CoprimeError::ConstraintViolated(format!(
                        "entry ({i},{j}) = {u} is not divisible by {need}"
                    )));
                }
            }
        }
        Ok(RanumMatrix { p, exps, entries })
    }

    pub fn identity(p: u64, exps: Vec<u32>) -> Self {
        let s = exps.len();
        let entries = (0..s).map(|i| (0..s).map(|j| u64::from(i == j)).collect()).collect();
        RanumMatrix { p, exps, entries }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.exps.len()
    }

    fn modulus(&self, i: usize) -> u64 {
        self.p.pow(self.exps[i])
    }

    /// Image of the element with coordinates `x`.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        (0..self.size())
            .map(|i| {
                let m = self.modulus(i);
                (0..self.size()).fold(0, |acc, j| (acc + self.entries[i][j] * (x[j] % m)) % m)
            })
            .collect()
    }

    /// `self * other`, the matrix of `self ∘ other`.
    pub fn star(&self, other: &RanumMatrix) -> RanumMatrix {
        let s = self.size();
        let mut entries = vec![vec![0; s]; s];
        for (j, col) in (0..s).map(|j| (j, other.entries.iter().map(|r| r[j]).collect::<Vec<_>>())) {
            let img = self.apply(&col);
            for i in 0..s {
                entries[i][j] = img[i];
            }
        }
        RanumMatrix { p: self.p, exps: self.exps.clone(), entries }
    }

    /// Exponent blocks as index ranges, in ascending exponent order.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        exponent_blocks(&self.exps)
    }

    pub fn is_invertible(&self) -> bool {
        psi_p(self).iter().all(|b| b.is_invertible())
    }

    /// Multiplicative order in `R(A)`, or `None` if not invertible.
    pub fn order(&self) -> Option<usize> {
        if !self.is_invertible() {
            return None;
        }
        let id = RanumMatrix::identity(self.p, self.exps.clone());
        let mut x = self.clone();
        let mut t = 1;
        while x != id {
            x = x.star(self);
            t += 1;
        }
        Some(t)
    }

    pub fn inverse(&self) -> Option<RanumMatrix> {
        let t = self.order()?;
        let mut x = RanumMatrix::identity(self.p, self.exps.clone());
        for _ in 1..t {
            x = x.star(self);
        }
        Some(x)
    }

    /// A uniformly random element of `R(A)`.
    pub fn random<R: Rng>(p: u64, exps: &[u32], rng: &mut R) -> RanumMatrix {
        let s = exps.len();
        loop {
            let entries = (0..s)
                .map(|i| {
                    (0..s)
                        .map(|j| {
                            let step = p.pow(exps[i] - exps[i].min(exps[j]));
                            rng.gen_range(0..p.pow(exps[i].min(exps[j]))) * step
                        })
                        .collect()
                })
                .collect();
            let u = RanumMatrix { p, exps: exps.to_vec(), entries };
            if u.is_invertible() {
                return u;
            }
        }
    }

    /// Every element of `R(A)`.
    pub fn enumerate(p: u64, exps: &[u32]) -> Vec<RanumMatrix> {
        let s = exps.len();
        let ranges: Vec<(u64, u64)> = (0..s * s)
            .map(|k| {
                let (i, j) = (k / s, k % s);
                (p.pow(exps[i].min(exps[j])), p.pow(exps[i] - exps[i].min(exps[j])))
            })
            .collect();
        let mut out = Vec::new();
        let mut digits = vec![0u64; s * s];
        loop {
            let entries = (0..s)
                .map(|i| (0..s).map(|j| digits[i * s + j] * ranges[i * s + j].1).collect())
                .collect();
            let u = RanumMatrix { p, exps: exps.to_vec(), entries };
            if u.is_invertible() {
                out.push(u);
            }
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return out;
                }
                digits[k] += 1;
                if digits[k] < ranges[k].0 {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }
}

pub(crate) fn exponent_blocks(exps: &[u32]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=exps.len() {
        if i == exps.len() || exps[i] != exps[start] {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn pgroup_exponents(basis: &AbelianBasis) -> Result<(u64, Vec<u32>), CoprimeError> {
    let mut prime = None;
    let mut exps = Vec::new();
    for &o in &basis.orders {
        let (p, e) = prime_power(o)
            .ok_or_else(|| CoprimeError::ConstraintViolated(format!("basis order {o} is not a prime power")))?;
        if *prime.get_or_insert(p) != p {
            return Err(CoprimeError::ConstraintViolated("group is not a p-group".into()));
        }
        exps.push(e);
    }
    Ok((prime.unwrap_or(2), exps))
}

/// Matrix of the automorphism `alpha` of the abelian p-subgroup with the given basis.
pub fn ranum_matrix(basis: &AbelianBasis, alpha: impl Fn(usize) -> usize) -> Result<RanumMatrix, CoprimeError> {
    let (p, exps) = pgroup_exponents(basis)?;
    let s = exps.len();
    let mut entries = vec![vec![0; s]; s];
    for (j, &gj) in basis.generators.iter().enumerate() {
        let c = basis
            .coords(alpha(gj))
            .ok_or_else(|| CoprimeError::ConstraintViolated("image leaves the subgroup".into()))?;
        for i in 0..s {
            entries[i][j] = c[i];
        }
    }
    RanumMatrix::new(p, exps, entries)
}

/// `U` applied to the element `x` of the subgroup spanned by `basis`.
pub fn ranum_apply(u: &RanumMatrix, g: &CayleyTable, basis: &AbelianBasis, x: usize) -> Option<usize> {
    let c = basis.coords(x)?;
    Some(basis.element(g, &u.apply(c)))
}

/// The diagonal exponent blocks of `U`, reduced mod p.
pub fn psi_p(u: &RanumMatrix) -> Vec<FpMatrix> {
    u.blocks()
        .into_iter()
        .map(|r| {
            let rows: Vec<Vec<u64>> =
                r.clone().map(|i| r.clone().map(|j| u.entries[i][j] % u.p).collect()).collect();
            FpMatrix::from_rows(u.p, &rows)
        })
        .collect()
}
