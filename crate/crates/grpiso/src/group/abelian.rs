use std::collections::BTreeMap;

use super::{CayleyTable, GroupError, Subgroup};
use crate::arith::factorize;

/// A basis of an abelian group: prime-power order generators whose cyclic
/// subgroups form an internal direct product decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianBasis {
    pub generators: Vec<usize>,
    pub orders: Vec<u64>,
    coords: BTreeMap<usize, Vec<u64>>,
}

impl AbelianBasis {
    /// Exponent vector of `x` with respect to the basis.
    pub fn coords(&self, x: usize) -> Option<&[u64]> {
        self.coords.get(&x).map(|v| v.as_slice())
    }

    /// `∏ g_i^{c_i}`.
    pub fn element(&self, g: &CayleyTable, c: &[u64]) -> usize {
        self.generators
            .iter()
            .zip(c)
            .fold(0, |acc, (&gi, &ci)| g.mul(acc, g.pow(gi, ci)))
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Basis of the abelian subgroup `a` of `g`, orders ascending.
pub fn abelian_basis(g: &CayleyTable, a: &Subgroup) -> Result<AbelianBasis, GroupError> {
    let el = a.elements();
    for &x in el {
        for &y in el {
            if g.mul(x, y) != g.mul(y, x) {
                return Err(GroupError::NotAbelian);
            }
        }
    }
    let mut basis: Vec<(u64, usize)> = Vec::new();
    for (p, _) in factorize(a.order() as u64) {
        let part: Vec<usize> = el
            .iter()
            .copied()
            .filter(|&x| is_power_of(g.element_order(x) as u64, p))
            .collect();
        for x in pgroup_basis(g, &part) {
            basis.push((g.element_order(x) as u64, x));
        }
    }
    basis.sort();
    let generators: Vec<usize> = basis.iter().map(|b| b.1).collect();
    let orders: Vec<u64> = basis.iter().map(|b| b.0).collect();
    let mut coords = BTreeMap::new();
    let total: u64 = orders.iter().product();
    assert_eq!(total as usize, a.order(), "basis orders do not multiply to |A|");
    for idx in 0..total {
        let mut rem = idx;
        let mut c = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            c[i] = rem % orders[i];
            rem /= orders[i];
        }
        let x = generators
            .iter()
            .zip(&c)
            .fold(0, |acc, (&gi, &ci)| g.mul(acc, g.pow(gi, ci)));
        let prev = coords.insert(x, c);
        assert!(prev.is_none(), "basis product map is not injective");
    }
    Ok(AbelianBasis { generators, orders, coords })
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Basis of an abelian p-group given by its element set. Repeatedly takes an
/// element of maximal order modulo the span so far and corrects it so that its
/// order equals its order in the quotient.
fn pgroup_basis(g: &CayleyTable, part: &[usize]) -> Vec<usize> {
    let n = g.order();
    let mut span = vec![false; n];
    span[0] = true;
    let mut span_list = vec![0usize];
    let mut basis = Vec::new();
    while span_list.len() < part.len() {
        // order of each element modulo the current span
        let qorder = |x: usize| {
            let mut y = x;
            let mut t = 1;
            while !span[y] {
                y = g.mul(y, x);
                t += 1;
            }
            (t, y)
        };
        let mut best: Option<(usize, usize)> = None;
        for &x in part {
            if span[x] {
                continue;
            }
            let (t, _) = qorder(x);
            if best.map_or(true, |(bt, _)| t > bt) {
                best = Some((t, x));
            }
        }
        let (t, _) = best.expect("non-empty quotient");
        let mut chosen = None;
        for &x in part {
            if span[x] || qorder(x).0 != t {
                continue;
            }
            let (_, h) = qorder(x);
            if let Some(&c) = span_list.iter().find(|&&c| g.pow(c, t as u64) == h) {
                chosen = Some(g.mul(x, g.inv(c)));
                break;
            }
        }
        let x = chosen.expect("maximal quotient element admits a correction");
        debug_assert_eq!(g.element_order(x), t);
        basis.push(x);
        let mut next = Vec::with_capacity(span_list.len() * t);
        let mut xp = 0;
        for _ in 0..t {
            for &s in &span_list {
                next.push(g.mul(s, xp));
            }
            xp = g.mul(xp, x);
        }
        for &y in &next {
            span[y] = true;
        }
        span_list = next;
    }
    basis
}
