//! Dense linear algebra and polynomials over prime fields.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::mod_inv;

#[inline]
fn inv(a: u64, p: u64) -> u64 {
    mod_inv(a, p).expect("division by zero in F_p")
}

/// Row operation recorded by [`FpMatrix::rref`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    /// Multiply a row by a non-zero scalar.
    Scale(usize, u64),
    /// `row[target] += factor * row[source]`.
    AddMul { target: usize, source: usize, factor: u64 },
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub ops: Vec<RowOp>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.p, self.to_rows())
    }
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows; entries are reduced mod `p`. All rows must have equal length.
    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().map(|&x| x % p));
        }
        FpMatrix { p, rows: r, cols: c, data }
    }

    pub fn from_i64_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
            .collect();
        Self::from_rows(p, &conv)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.p, other.p, "field mismatch");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| (acc + a * b) % self.p))
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                *o = (*o + a * b) % self.p;
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % self.p).collect();
        FpMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + p - b) % p).collect();
        FpMatrix { data, ..*self }
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let p = self.p;
        FpMatrix { data: self.data.iter().map(|a| a * (c % p) % p).collect(), ..*self }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert!(self.is_square());
        let mut acc = FpMatrix::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Columns in the given order (repetition allowed).
    pub fn select_columns(&self, cols: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.get(i, j);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            out.data[ii * self.cols..(ii + 1) * self.cols].copy_from_slice(self.row(i));
        }
        out
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut rows = self.to_rows();
        for (r, o) in rows.iter_mut().zip(other.to_rows()) {
            r.extend(o);
        }
        if self.rows == 0 {
            return FpMatrix::zeros(self.p, 0, self.cols + other.cols);
        }
        FpMatrix::from_rows(self.p, &rows)
    }

    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    fn apply_op(&mut self, op: RowOp) {
        let p = self.p;
        let c = self.cols;
        match op {
            RowOp::Swap(a, b) => {
                if a != b {
                    for j in 0..c {
                        self.data.swap(a * c + j, b * c + j);
                    }
                }
            }
            RowOp::Scale(i, s) => {
                for x in &mut self.data[i * c..(i + 1) * c] {
                    *x = *x * s % p;
                }
            }
            RowOp::AddMul { target, source, factor } => {
                for j in 0..c {
                    let v = self.data[source * c + j];
                    let t = &mut self.data[target * c + j];
                    *t = (*t + factor * v) % p;
                }
            }
        }
    }

    fn inverse_op(&self, op: RowOp) -> RowOp {
        match op {
            RowOp::Swap(a, b) => RowOp::Swap(a, b),
            RowOp::Scale(i, s) => RowOp::Scale(i, inv(s, self.p)),
            RowOp::AddMul { target, source, factor } => RowOp::AddMul {
                target,
                source,
                factor: (self.p - factor) % self.p,
            },
        }
    }

    /// Reduced row echelon form with the row operations that produced it.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        let p = self.p;
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            if piv != r {
                ops.push(RowOp::Swap(piv, r));
                m.apply_op(RowOp::Swap(piv, r));
            }
            let lead = m.get(r, col);
            if lead != 1 {
                let op = RowOp::Scale(r, inv(lead, p));
                ops.push(op);
                m.apply_op(op);
            }
            for i in 0..self.rows {
                if i != r {
                    let v = m.get(i, col);
                    if v != 0 {
                        let op = RowOp::AddMul { target: i, source: r, factor: p - v };
                        ops.push(op);
                        m.apply_op(op);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref { matrix: m, pivots, ops }
    }

    /// Undo recorded row operations, mapping an rref back to its source.
    pub fn undo_ops(&self, ops: &[RowOp]) -> FpMatrix {
        let mut m = self.clone();
        for &op in ops.iter().rev() {
            let iop = m.inverse_op(op);
            m.apply_op(iop);
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Non-zero rows of the rref: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> FpMatrix {
        let r = self.rref();
        let k = r.rank();
        r.matrix.select_rows(&(0..k).collect::<Vec<_>>())
    }

    pub fn same_row_space(&self, other: &FpMatrix) -> bool {
        self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&FpMatrix::identity(self.p, n));
        let r = aug.rref();
        if r.pivots.len() < n || (n > 0 && r.pivots[n - 1] != n - 1) {
            return None;
        }
        Some(r.matrix.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> u64 {
        assert!(self.is_square());
        let p = self.p;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| m.get(i, col) != 0) else {
                return 0;
            };
            if piv != col {
                m.apply_op(RowOp::Swap(piv, col));
                det = (p - det) % p;
            }
            let lead = m.get(col, col);
            det = det * lead % p;
            let li = inv(lead, p);
            for i in col + 1..n {
                let v = m.get(i, col);
                if v != 0 {
                    m.apply_op(RowOp::AddMul { target: i, source: col, factor: (p - v) * li % p });
                }
            }
        }
        det
    }

    /// Basis of `{x : M x = 0}` as vectors.
    pub fn right_kernel(&self) -> Vec<Vec<u64>> {
        let r = self.rref();
        let p = self.p;
        let pivset: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in r.pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivset[free].is_some() {
                continue;
            }
            let mut x = vec![0; self.cols];
            x[free] = 1;
            for (row, &c) in r.pivots.iter().enumerate() {
                x[c] = (p - r.matrix.get(row, free)) % p;
            }
            basis.push(x);
        }
        basis
    }

    /// Basis of `{y : y M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u64>> {
        self.transpose().right_kernel()
    }

    /// Some `X` with `X * self = b`, if one exists.
    pub fn solve_left(&self, b: &FpMatrix) -> Option<FpMatrix> {
        // X A = B  <=>  A^T X^T = B^T
        let xt = self.transpose().solve_right(&b.transpose())?;
        Some(xt.transpose())
    }

    /// Some `X` with `self * X = b`, if one exists.
    pub fn solve_right(&self, b: &FpMatrix) -> Option<FpMatrix> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let aug = self.hstack(b);
        let r = aug.rref();
        if r.pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = FpMatrix::zeros(self.p, n, b.cols);
        for (row, &c) in r.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, r.matrix.get(row, n + j));
            }
        }
        Some(x)
    }

    /// Characteristic polynomial `det(xI - M)` via Hessenberg reduction.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let p = self.p;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
                continue;
            };
            if i != m {
                h.apply_op(RowOp::Swap(i, m));
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let ti = inv(h.get(m, m - 1), p);
            for i in m + 1..n {
                let u = h.get(i, m - 1) * ti % p;
                if u == 0 {
                    continue;
                }
                h.apply_op(RowOp::AddMul { target: i, source: m, factor: p - u });
                for r in 0..n {
                    let v = (h.get(r, m) + u * h.get(r, i)) % p;
                    h.set(r, m, v);
                }
            }
        }
        let mut polys: Vec<Poly> = vec![Poly::one(p)];
        for m in 1..=n {
            let hmm = h.get(m - 1, m - 1);
            let mut pm = polys[m - 1].mul(&Poly::new(p, vec![(p - hmm) % p, 1]));
            let mut prod = 1u64;
            for i in (1..m).rev() {
                prod = prod * h.get(i, i - 1) % p;
                let coef = h.get(i - 1, m - 1) * prod % p;
                if coef != 0 {
                    pm = pm.sub(&polys[i - 1].scale(coef));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }

    /// Companion matrix of a monic polynomial, acting on column vectors.
    pub fn companion(g: &Poly) -> FpMatrix {
        let p = g.p();
        let d = g.degree().expect("non-zero polynomial");
        assert_eq!(g.lead(), 1, "companion of non-monic polynomial");
        let mut m = FpMatrix::zeros(p, d, d);
        for i in 1..d {
            m.set(i, i - 1, 1);
        }
        for i in 0..d {
            m.set(i, d - 1, (p - g.coeff(i)) % p);
        }
        m
    }
}

/// Polynomial over `F_p`, coefficients from the constant term upward.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    p: u64,
    c: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let coef = if a == 1 && i > 0 { String::new() } else { a.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the constant term upward.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.cmp(&other.c))
    }
}

impl Poly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { p, c }
    }
    pub fn zero(p: u64) -> Self {
        Poly { p, c: vec![] }
    }
    pub fn one(p: u64) -> Self {
        Poly::new(p, vec![1])
    }
    pub fn x(p: u64) -> Self {
        Poly::new(p, vec![0, 1])
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(self.p, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(self.p, (0..n).map(|i| self.coeff(i) + self.p - o.coeff(i)).collect())
    }

    pub fn scale(&self, a: u64) -> Poly {
        Poly::new(self.p, self.c.iter().map(|x| x * (a % self.p)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let mut out = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        Poly::new(self.p, out)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let li = inv(d.lead(), p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i] * li % p;
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.c.iter().enumerate() {
                let t = &mut r[i - dd + j];
                *t = (*t + p - c * b % p) % p;
            }
        }
        (Poly::new(p, q), Poly::new(p, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv(self.lead(), self.p))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.p).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (acc * x + a) % self.p)
    }

    /// Factor a monic square-free polynomial into monic irreducibles (Berlekamp),
    /// returned in ascending [`Ord`] order.
    pub fn berlekamp(&self) -> Vec<Poly> {
        let p = self.p;
        let n = self.degree().expect("non-zero polynomial");
        if n <= 1 {
            return vec![self.monic()];
        }
        let f = self.monic();
        // rows: x^{ip} mod f
        let xp = Poly::x(p).powmod(p, &f);
        let mut rows = Vec::with_capacity(n);
        let mut cur = Poly::one(p);
        for _ in 0..n {
            rows.push((0..n).map(|j| cur.coeff(j)).collect::<Vec<_>>());
            cur = cur.mul(&xp).rem(&f);
        }
        let qm = FpMatrix::from_rows(p, &rows).sub(&FpMatrix::identity(p, n));
        let kernel = qm.left_kernel();
        let r = kernel.len();
        let mut factors = vec![f.clone()];
        for v in &kernel {
            if factors.len() == r {
                break;
            }
            let g = Poly::new(p, v.clone());
            if g.degree().unwrap_or(0) == 0 {
                continue;
            }
            let mut next = Vec::new();
            for h in factors {
                if h.degree() == Some(1) {
                    next.push(h);
                    continue;
                }
                let mut rest = h.clone();
                for s in 0..p {
                    if rest.degree() == Some(0) {
                        break;
                    }
                    let d = rest.gcd(&g.sub(&Poly::new(p, vec![s])));
                    if d.degree().unwrap_or(0) >= 1 && d != rest {
                        next.push(d.clone());
                        rest = rest.divrem(&d).0.monic();
                    }
                }
                if rest.degree().unwrap_or(0) >= 1 {
                    next.push(rest);
                }
            }
            factors = next;
        }
        factors.sort();
        factors
    }
}
