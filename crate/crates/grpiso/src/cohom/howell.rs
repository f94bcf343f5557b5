//! Howell normal form of row spans over `Z/p^μ`.
//!
//! Over a chain ring every entry is a unit times a power of `p`, so the usual
//! echelon step picks the entry of least valuation. After each pivot the row
//! times `p^{μ-v}` (which vanishes in the pivot column) goes back into the pool;
//! that is what makes the form canonical for the span.

use crate::arith::mod_inv;

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Canonical generating rows of the span of `rows` in `(Z/p^μ)^n`: echelon,
/// pivots powers of `p`, entries above each pivot reduced below it.
pub fn howell_form(rows: &[Vec<u64>], p: u64, mu: u32) -> Vec<Vec<u64>> {
    let m = p.pow(mu);
    let n = rows.first().map_or(0, |r| r.len());
    let mut pool: Vec<Vec<u64>> =
        rows.iter().map(|r| r.iter().map(|&x| x % m).collect::<Vec<u64>>()).filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut out: Vec<(usize, Vec<u64>)> = Vec::new();
    for col in 0..n {
        if pool.is_empty() {
            break;
        }
        let Some((bi, _)) = pool
            .iter()
            .enumerate()
            .filter(|(_, r)| r[col] != 0)
            .min_by_key(|(i, r)| (valuation(r[col], p), *i))
        else {
            continue;
        };
        let mut piv = pool.swap_remove(bi);
        let v = valuation(piv[col], p);
        let pv = p.pow(v);
        let unit = mod_inv((piv[col] / pv) % m, m).expect("unit part is invertible");
        for x in piv.iter_mut() {
            *x = *x * unit % m;
        }
        debug_assert_eq!(piv[col], pv);
        for r in pool.iter_mut() {
            let c = r[col] / pv;
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(&piv) {
                    *x = (*x + (m - c % m) * y) % m;
                }
            }
        }
        if v > 0 {
            let scale = p.pow(mu - v);
            let ann: Vec<u64> = piv.iter().map(|&x| x * scale % m).collect();
            pool.push(ann);
        }
        pool.retain(|r| r.iter().any(|&x| x != 0));
        out.push((col, piv));
    }
    // reduce entries above each pivot
    for j in 0..out.len() {
        let (col, pj) = (out[j].0, out[j].1.clone());
        let pv = pj[col];
        for (_, ri) in out.iter_mut().take(j) {
            let c = ri[col] / pv;
            if c != 0 {
                for (x, &y) in ri.iter_mut().zip(&pj) {
                    *x = (*x + (m - c % m) * y) % m;
                }
            }
        }
    }
    out.into_iter().map(|(_, r)| r).collect()
}

/// Whether `x` lies in the span whose Howell form is `form`.
pub fn in_span(form: &[Vec<u64>], x: &[u64], p: u64, mu: u32) -> bool {
    let m = p.pow(mu);
    let mut x: Vec<u64> = x.iter().map(|&v| v % m).collect();
    for r in form {
        let col = r.iter().position(|&v| v != 0).expect("non-zero row");
        let pv = r[col];
        if x[col] % pv != 0 {
            return false;
        }
        let c = x[col] / pv;
        for (a, &b) in x.iter_mut().zip(r) {
            *a = (*a + (m - c % m) * b) % m;
        }
    }
    x.iter().all(|&v| v == 0)
}
