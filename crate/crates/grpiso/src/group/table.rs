use super::GroupError;

/// A row or column of a table, for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Col(usize),
}

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    order: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CayleyTable(n={})", self.n)
    }
}

impl CayleyTable {
    /// Validate a raw grid. Checks are run in the order: shape, range, Latin
    /// rows, Latin columns, identity, associativity (first witness triple in
    /// lexicographic order).
    pub fn validate(raw: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = raw.len();
        if n == 0 || raw.iter().any(|r| r.len() != n) {
            return Err(GroupError::Malformed);
        }
        for (i, row) in raw.iter().enumerate() {
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(GroupError::OutOfRange { row: i, col: j });
            }
        }
        let mut seen = vec![usize::MAX; n];
        for (i, row) in raw.iter().enumerate() {
            for &x in row {
                if seen[x] == i {
                    return Err(GroupError::NotLatin(Line::Row(i)));
                }
                seen[x] = i;
            }
        }
        seen.fill(usize::MAX);
        for j in 0..n {
            for (i, row) in raw.iter().enumerate() {
                let _ = i;
                let x = row[j];
                if seen[x] == j {
                    return Err(GroupError::NotLatin(Line::Col(j)));
                }
                seen[x] = j;
            }
        }
        if (0..n).any(|a| raw[0][a] != a || raw[a][0] != a) {
            return Err(GroupError::NoIdentity);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = raw[a][b];
                for c in 0..n {
                    if raw[ab][c] != raw[a][raw[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let table: Vec<u32> = raw.iter().flatten().map(|&x| x as u32).collect();
        Ok(Self::from_trusted(n, table))
    }

    /// Build from a product function already known to define a group with
    /// identity 0. Only cheap checks are repeated.
    pub(crate) fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(f(a, b) as u32);
            }
        }
        Self::from_trusted(n, table)
    }

    fn from_trusted(n: usize, table: Vec<u32>) -> Self {
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let mut order = vec![0u32; n];
        for g in 0..n {
            let mut x = g;
            let mut t = 1;
            while x != 0 {
                x = table[x * n + g] as usize;
                t += 1;
            }
            order[g] = t;
        }
        CayleyTable { n, table, inv, order, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^-1 g x`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), g), x)
    }

    pub fn pow(&self, g: usize, e: u64) -> usize {
        let e = e % self.element_order(g) as u64;
        let mut x = 0;
        for _ in 0..e {
            x = self.mul(x, g);
        }
        x
    }

    /// Least `t >= 1` with `g^t` the identity.
    #[inline]
    pub fn element_order(&self, g: usize) -> usize {
        self.order[g] as usize
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Sorted multiset of element orders; a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.order.iter().map(|&x| x as usize).collect();
        v.sort_unstable();
        v
    }
}
