//! Permutation equivalence of linear codes over prime fields.
//!
//! A permutation `σ` acts on columns by sending column `j` to position `σ(j)`.
//! Codes `C1, C2` are equivalent through `σ` when the row space of `C1^σ`
//! equals that of `C2`, i.e. `B = T·A·P(σ)` for an invertible `T`. With this
//! action `C^{a∘b} = (C^b)^a`, so all equivalences form the left coset
//! `σ₀ ∘ Aut(C1)`.

use thiserror::Error;

use crate::arith::is_prime;
use crate::exec;
use crate::fp::FpMatrix;
use crate::graph::{colored_bipartite_iso, BipartiteColorMatrix};
use crate::perm::{coset_intersection, Perm, PermCoset, PermGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("matrix is not of the form [I | A1]")]
    NotSystematic,
    #[error("codes over F_{0} and F_{1}")]
    FieldMismatch(u64, u64),
    #[error("codes of length {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("permutation group has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A linear code given by a generator matrix in reduced row echelon form with
/// zero rows removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCode {
    generator: FpMatrix,
}

impl LinearCode {
    pub fn new(generator: &FpMatrix) -> Result<Self, CodeError> {
        if !is_prime(generator.p()) {
            return Err(CodeError::NotPrime(generator.p()));
        }
        Ok(LinearCode { generator: generator.row_space_basis() })
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self, CodeError> {
        Self::new(&FpMatrix::from_rows(p, rows))
    }

    pub fn p(&self) -> u64 {
        self.generator.p()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn generator(&self) -> &FpMatrix {
        &self.generator
    }

    /// The code with its columns moved by `sigma`.
    pub fn permuted(&self, sigma: &Perm) -> LinearCode {
        LinearCode { generator: permute_columns(&self.generator, sigma).row_space_basis() }
    }

    /// Parse `p d m` followed by `d` rows of `m` digits, whitespace optional.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, msg: &str| CodeError::Parse { line: line + 1, msg: msg.into() };
        let (ln, header) = lines.next().ok_or_else(|| perr(0, "missing header"))?;
        let h: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(ln, "bad integer")))
            .collect::<Result<_, _>>()?;
        let [p, d, m] = h[..] else {
            return Err(perr(ln, "header must be `p d m`"));
        };
        let mut rows = Vec::new();
        for _ in 0..d {
            let (ln, l) = lines.next().ok_or_else(|| perr(ln, "missing row"))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            let row: Vec<u64> = if toks.len() == m as usize {
                toks.iter().map(|t| t.parse().map_err(|_| perr(ln, "bad entry"))).collect::<Result<_, _>>()?
            } else {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(10).map(u64::from).ok_or_else(|| perr(ln, "bad digit")))
                    .collect::<Result<_, _>>()?
            };
            if row.len() != m as usize || row.iter().any(|&x| x >= p) {
                return Err(perr(ln, "row has the wrong length or an entry out of range"));
            }
            rows.push(row);
        }
        if p < 2 {
            return Err(perr(ln, "p must be prime"));
        }
        let g = FpMatrix::from_rows(p, &rows);
        let g = if d == 0 { FpMatrix::zeros(p, 0, m as usize) } else { g };
        Self::new(&g)
    }
}

/// `M^σ`: column `j` of `m` becomes column `σ(j)`.
pub fn permute_columns(m: &FpMatrix, sigma: &Perm) -> FpMatrix {
    let mut out = FpMatrix::zeros(m.p(), m.rows(), m.cols());
    for j in 0..m.cols() {
        let t = sigma.apply(j);
        for i in 0..m.rows() {
            out.set(i, t, m.get(i, j));
        }
    }
    out
}

/// An invertible `T` with `T·A·P(σ) = B`, if there is one.
pub fn solve_transform(a: &FpMatrix, b: &FpMatrix, sigma: &Perm) -> Option<FpMatrix> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let t = permute_columns(a, sigma).solve_left(b)?;
    t.is_invertible().then_some(t)
}

/// Equivalences `C1 → C2` as `rep ∘ Aut(C1)`.
#[derive(Clone, Debug)]
pub struct CodeEqCoset {
    pub rep: Option<Perm>,
    pub autgroup: PermGroup,
}

impl CodeEqCoset {
    pub fn is_empty(&self) -> bool {
        self.rep.is_none()
    }

    pub fn size(&self) -> u128 {
        if self.is_empty() {
            0
        } else {
            self.autgroup.order()
        }
    }

    pub fn contains(&self, sigma: &Perm) -> bool {
        self.rep.as_ref().is_some_and(|r| self.autgroup.contains(&r.inverse().compose(sigma)))
    }

    pub fn to_coset(&self) -> PermCoset {
        PermCoset { rep: self.rep.clone(), group: self.autgroup.clone() }
    }
}

fn check_systematic(a: &FpMatrix) -> Result<(), CodeError> {
    let d = a.rows();
    if d > a.cols() || a.select_columns(&(0..d).collect::<Vec<_>>()) != FpMatrix::identity(a.p(), d) {
        return Err(CodeError::NotSystematic);
    }
    Ok(())
}

fn right_block(a: &FpMatrix) -> BipartiteColorMatrix {
    let (d, m) = (a.rows(), a.cols());
    let mut data = Vec::with_capacity(d * (m - d));
    for i in 0..d {
        data.extend((d..m).map(|j| a.get(i, j)));
    }
    BipartiteColorMatrix::new(d, m - d, data)
}

/// Equivalences between systematic matrices that keep the first `d` columns
/// in place as a set, as permutations of `0..m`.
pub fn basic_equivalences(a: &FpMatrix, b: &FpMatrix) -> Result<PermCoset, CodeError> {
    check_systematic(a)?;
    check_systematic(b)?;
    if a.p() != b.p() {
        return Err(CodeError::FieldMismatch(a.p(), b.p()));
    }
    if a.cols() != b.cols() || a.rows() != b.rows() {
        return Err(CodeError::LengthMismatch(a.cols(), b.cols()));
    }
    Ok(colored_bipartite_iso(&right_block(a), &right_block(b)).expect("same shape"))
}

/// The permutation sending `first` (in order) to `0..d` and the rest, in
/// increasing order, to `d..m`.
fn front_perm(m: usize, first: &[usize]) -> Perm {
    let mut images = vec![usize::MAX; m];
    for (i, &c) in first.iter().enumerate() {
        images[c] = i;
    }
    let mut next = first.len();
    for im in images.iter_mut() {
        if *im == usize::MAX {
            *im = next;
            next += 1;
        }
    }
    Perm::from_images(images).unwrap()
}

/// Equivalences `A → B` for systematic `A` that send `0..d` onto `subset`.
fn through_subset(a: &FpMatrix, b: &FpMatrix, subset: &[usize]) -> Option<PermCoset> {
    exec::tick(1);
    let b0 = b.select_columns(subset);
    let inv = b0.inverse()?;
    let rho = front_perm(b.cols(), subset);
    let c = permute_columns(&inv.mul(b), &rho);
    let basic = basic_equivalences(a, &c).expect("both systematic");
    let r = basic.rep?;
    Some(PermCoset::new(rho.inverse().compose(&r), basic.group))
}

fn subsets(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..d).rev().find(|&i| cur[i] != i + m - d) else {
            return out;
        };
        cur[i] += 1;
        for k in i + 1..d {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

fn validate_pair(c1: &LinearCode, c2: &LinearCode) -> Result<(), CodeError> {
    if c1.p() != c2.p() {
        return Err(CodeError::FieldMismatch(c1.p(), c2.p()));
    }
    if c1.length() != c2.length() {
        return Err(CodeError::LengthMismatch(c1.length(), c2.length()));
    }
    Ok(())
}

/// Full coset of column permutations carrying `C1` onto `C2`.
pub fn code_equivalence(c1: &LinearCode, c2: &LinearCode) -> Result<CodeEqCoset, CodeError> {
    validate_pair(c1, c2)?;
    let (m, d) = (c1.length(), c1.dimension());
    // Move pivot columns to the front to reach systematic form.
    let pivots_of = |c: &LinearCode| c.generator.rref().pivots;
    let pi1 = front_perm(m, &pivots_of(c1));
    let a = permute_columns(&c1.generator, &pi1);
    let aut_a = automorphisms_systematic(&a);
    let conj = |g: &PermGroup| -> PermGroup {
        let gens: Vec<Perm> =
            g.generators().iter().map(|x| pi1.inverse().compose(x).compose(&pi1)).collect();
        PermGroup::new(&gens, m).unwrap()
    };
    let autgroup = conj(&aut_a);
    if c2.dimension() != d {
        return Ok(CodeEqCoset { rep: None, autgroup });
    }
    let pi2 = front_perm(m, &pivots_of(c2));
    let b = permute_columns(&c2.generator, &pi2);
    let subs = subsets(m, d);
    let tau = exec::par_find_first(&subs, |s| through_subset(&a, &b, s).and_then(|c| c.rep));
    let rep = tau.map(|t| pi2.inverse().compose(&t).compose(&pi1));
    debug_assert!(rep.as_ref().is_none_or(|r| solve_transform(c1.generator(), c2.generator(), r).is_some()));
    Ok(CodeEqCoset { rep, autgroup })
}

/// Permutation automorphisms of a systematic matrix.
fn automorphisms_systematic(a: &FpMatrix) -> PermGroup {
    let (d, m) = (a.rows(), a.cols());
    let basic = basic_equivalences(a, a).expect("systematic");
    let subs = subsets(m, d);
    let reps = exec::par_map(&subs[1..], |s| through_subset(a, a, s).and_then(|c| c.rep));
    let mut gens: Vec<Perm> = basic.group.generators().to_vec();
    gens.extend(reps.into_iter().flatten());
    gens.retain(|p| !p.is_identity());
    let g = PermGroup::new(&gens, m).unwrap().reduced();
    debug_assert!(g.generators().iter().all(|p| solve_transform(a, a, p).is_some()));
    g
}

/// Equivalences `C1 → C2` that lie in the permutation group `s`.
pub fn generalized_code_equivalence(
    c1: &LinearCode,
    c2: &LinearCode,
    s: &PermGroup,
) -> Result<PermCoset, CodeError> {
    if s.degree() != c1.length() {
        return Err(CodeError::DegreeMismatch { expected: c1.length(), found: s.degree() });
    }
    let eq = code_equivalence(c1, c2)?;
    if eq.is_empty() {
        return Ok(PermCoset::empty(c1.length()));
    }
    Ok(coset_intersection(&eq.to_coset(), &PermCoset::from_group(s.clone())))
}
