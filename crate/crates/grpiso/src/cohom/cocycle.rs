use crate::group::{CayleyTable, GroupHom};

/// A 2-cochain `Q × Q → ∏ Z/m_i` stored as a `k × |Q|²` matrix. Column
/// `a·|Q| + b` holds the value at the pair `(a, b)`; row `i` is reduced mod `m_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CocycleMatrix {
    moduli: Vec<u64>,
    q: usize,
    rows: Vec<Vec<u64>>,
}

impl CocycleMatrix {
    pub fn zero(moduli: &[u64], q: usize) -> Self {
        CocycleMatrix { moduli: moduli.to_vec(), q, rows: vec![vec![0; q * q]; moduli.len()] }
    }

    /// Rows must have length `q²`; entries are reduced.
    pub fn from_rows(moduli: &[u64], q: usize, rows: Vec<Vec<u64>>) -> Self {
        assert_eq!(rows.len(), moduli.len(), "one row per modulus");
        let rows = rows
            .into_iter()
            .zip(moduli)
            .map(|(r, &m)| {
                assert_eq!(r.len(), q * q, "row length must be |Q|^2");
                r.into_iter().map(|x| x % m).collect()
            })
            .collect();
        CocycleMatrix { moduli: moduli.to_vec(), q, rows }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }
    pub fn quotient_order(&self) -> usize {
        self.q
    }
    pub fn k(&self) -> usize {
        self.moduli.len()
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, a: usize, b: usize) -> u64 {
        self.rows[i][a * self.q + b]
    }

    pub fn set(&mut self, i: usize, a: usize, b: usize, v: u64) {
        self.rows[i][a * self.q + b] = v % self.moduli[i];
    }

    pub fn value(&self, a: usize, b: usize) -> Vec<u64> {
        (0..self.k()).map(|i| self.get(i, a, b)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x == 0)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.q).all(|a| (0..self.k()).all(|i| self.get(i, 0, a) == 0 && self.get(i, a, 0) == 0))
    }

    /// First triple violating `f(a,b) + f(ab,c) = f(b,c) + f(a,bc)`, if any.
    pub fn cocycle_violation(&self, qg: &CayleyTable) -> Option<(usize, usize, usize)> {
        let n = self.q;
        for a in 0..n {
            for b in 0..n {
                let ab = qg.mul(a, b);
                for c in 0..n {
                    let bc = qg.mul(b, c);
                    for (i, &m) in self.moduli.iter().enumerate() {
                        let l = (self.get(i, a, b) + self.get(i, ab, c)) % m;
                        let r = (self.get(i, b, c) + self.get(i, a, bc)) % m;
                        if l != r {
                            return Some((a, b, c));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self, qg: &CayleyTable) -> bool {
        self.cocycle_violation(qg).is_none()
    }

    pub fn add(&self, other: &CocycleMatrix) -> CocycleMatrix {
        assert_eq!(self.moduli, other.moduli);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .zip(&self.moduli)
            .map(|((a, b), &m)| a.iter().zip(b).map(|(x, y)| (x + y) % m).collect())
            .collect();
        CocycleMatrix { moduli: self.moduli.clone(), q: self.q, rows }
    }

    /// `(a, b) ↦ f(β(a), β(b))`.
    pub fn pull_back(&self, beta: &GroupHom) -> CocycleMatrix {
        let n = self.q;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        out[a * n + b] = r[beta.apply(a) * n + beta.apply(b)];
                    }
                }
                out
            })
            .collect();
        CocycleMatrix { moduli: self.moduli.clone(), q: self.q, rows }
    }

    /// Apply an integer matrix to the value vectors: `f'(a,b) = T f(a,b)`, row `i`
    /// reduced mod `m_i`.
    pub fn transform(&self, t: &[Vec<u64>]) -> CocycleMatrix {
        let k = self.k();
        let cols = self.q * self.q;
        let mut rows = vec![vec![0; cols]; k];
        for (i, out) in rows.iter_mut().enumerate() {
            let m = self.moduli[i];
            for (j, src) in self.rows.iter().enumerate() {
                let c = t[i][j] % m;
                if c == 0 {
                    continue;
                }
                for (o, &x) in out.iter_mut().zip(src) {
                    *o = (*o + c * x) % m;
                }
            }
        }
        CocycleMatrix { moduli: self.moduli.clone(), q: self.q, rows }
    }
}
