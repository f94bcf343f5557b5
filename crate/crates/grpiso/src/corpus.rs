//! Generated test corpora: the coprime sweep, named small cases and the two
//! central extensions of Z2 by A5.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fp::FpMatrix;
use crate::group::{generating_set, CayleyTable, GroupDescriptor};
use crate::rep::{irreducible_rep, labels_equivalent};

/// One corpus group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub descriptor: GroupDescriptor,
    /// Groups with equal family come from the same `(q, ℓ, p, k)` sweep cell.
    pub family: String,
    /// Index of the entry this one is a disguised copy of.
    pub duplicate_of: Option<usize>,
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

/// One label per irreducible class of `Z_q^ℓ` over `F_p`, with its dimension.
fn irreducible_labels(q: u64, l: usize, p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut reps: Vec<(Vec<u64>, usize)> = Vec::new();
    let total = (q as usize).pow(l as u32);
    for idx in 0..total {
        let v: Vec<u64> = (0..l).map(|i| ((idx / (q as usize).pow(i as u32)) % q as usize) as u64).collect();
        if !reps.iter().any(|(u, _)| labels_equivalent(u, &v, q, p)) {
            let dim = irreducible_rep(&v, q, l, p).dim();
            reps.push((v, dim));
        }
    }
    reps
}

/// Multisets (as non-decreasing index lists) of items with the given sizes summing to `k`.
fn multisets(sizes: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..sizes.len() {
            if sizes[i] <= k {
                cur.push(i);
                go(sizes, k - sizes[i], i, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(sizes, k, 0, &mut Vec::new(), &mut out);
    out
}

fn block_diagonal(p: u64, blocks: &[FpMatrix]) -> FpMatrix {
    let k: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut m = FpMatrix::zeros(p, k, k);
    let mut at = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(at + i, at + j, b.get(i, j));
            }
        }
        at += b.rows();
    }
    m
}

fn to_i64(m: &FpMatrix) -> Vec<Vec<i64>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
}

fn random_invertible(rng: &mut ChaCha8Rng, p: u64, k: usize) -> FpMatrix {
    loop {
        let rows: Vec<Vec<u64>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(0..p)).collect()).collect();
        let m = FpMatrix::from_rows(p, &rows);
        if m.is_invertible() {
            return m;
        }
    }
}

/// `Z_q^ℓ ⋉ F_p^k` for every module class with `q^ℓ·p^k ≤ max_order`, `q ≠ p`
/// in {2, 3, 5, 7}. Every `duplicate_every`-th group is followed by a copy
/// whose action is conjugated by a random matrix.
pub fn coprime_corpus(max_order: usize, duplicate_every: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CorpusEntry> = Vec::new();
    for &q in &PRIMES {
        for &p in &PRIMES {
            if p == q {
                continue;
            }
            for l in 1.. {
                let hq = (q as usize).pow(l as u32);
                if hq * p as usize > max_order {
                    break;
                }
                let labels = irreducible_labels(q, l, p);
                let sizes: Vec<usize> = labels.iter().map(|x| x.1).collect();
                for k in 1.. {
                    if hq * (p as usize).pow(k as u32) > max_order {
                        break;
                    }
                    let family = format!("q{q}l{l}p{p}k{k}");
                    for (n, ms) in multisets(&sizes, k).into_iter().enumerate() {
                        let reps: Vec<_> = ms.iter().map(|&i| irreducible_rep(&labels[i].0, q, l, p)).collect();
                        let gens: Vec<FpMatrix> = (0..l)
                            .map(|j| {
                                let blocks: Vec<FpMatrix> = reps.iter().map(|r| r.generator_images()[j].clone()).collect();
                                block_diagonal(p, &blocks)
                            })
                            .collect();
                        let action: Vec<Vec<Vec<i64>>> = gens.iter().map(to_i64).collect();
                        let idx = out.len();
                        out.push(CorpusEntry {
                            name: format!("{family}_{n}"),
                            descriptor: GroupDescriptor::semidirect_elem(q, l, p, k, action),
                            family: family.clone(),
                            duplicate_of: None,
                        });
                        if duplicate_every > 0 && idx % duplicate_every == 0 {
                            let x = random_invertible(&mut rng, p, k);
                            let xi = x.inverse().expect("invertible");
                            let action = gens.iter().map(|m| to_i64(&x.mul(m).mul(&xi))).collect();
                            out.push(CorpusEntry {
                                name: format!("{family}_{n}_conj"),
                                descriptor: GroupDescriptor::semidirect_elem(q, l, p, k, action),
                                family: family.clone(),
                                duplicate_of: Some(idx),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn named(name: &str, family: &str, d: &str) -> CorpusEntry {
    CorpusEntry {
        name: name.into(),
        descriptor: crate::group::parse_descriptor(d).expect("well-formed corpus descriptor"),
        family: family.into(),
        duplicate_of: None,
    }
}

/// Small hand-picked coprime groups, including non-elementary normal parts.
pub fn named_coprime() -> Vec<CorpusEntry> {
    vec![
        named("z18", "order18", "semidirect(q=2,l=1,moduli=[9],action=[[1]])"),
        named("z3_x_s3", "order18", "semidirect(q=2,l=1,moduli=[3,3],action=[[1,0],[0,-1]])"),
        named("z3sq_minus_i", "order18", "semidirect(q=2,l=1,moduli=[3,3],action=[[-1,0],[0,-1]])"),
        named("z21", "order21", "semidirect(q=3,l=1,p=7,k=1,action=[[1]])"),
        named("z7_by_z3", "order21", "semidirect(q=3,l=1,p=7,k=1,action=[[2]])"),
        named("d30", "order30", "semidirect(q=2,l=1,moduli=[3,5],action=[[-1,0],[0,-1]])"),
        named("z3_x_d10", "order30", "semidirect(q=2,l=1,moduli=[3,5],action=[[1,0],[0,-1]])"),
        named("z5_x_s3", "order30", "semidirect(q=2,l=1,moduli=[3,5],action=[[-1,0],[0,1]])"),
        named("d18", "order18", "semidirect(q=2,l=1,moduli=[9],action=[[-1]])"),
        named("s3_x_z9", "order54", "semidirect(q=2,l=1,moduli=[3,9],action=[[-1,0],[0,1]])"),
        named("z3_x_d18", "order54", "semidirect(q=2,l=1,moduli=[3,9],action=[[1,0],[0,-1]])"),
        named("z2sq_z9_a", "order36", "semidirect(q=2,l=2,moduli=[9],action=[[[-1]],[[1]]])"),
        named("z2sq_z9_b", "order36", "semidirect(q=2,l=2,moduli=[9],action=[[[-1]],[[-1]]])"),
        named("z3_by_z2sq_z4", "order48", "semidirect(q=3,l=1,moduli=[2,2,4],action=[[1,0,0],[0,1,0],[0,0,1]])"),
        named("a4_x_z4", "order48", "semidirect(q=3,l=1,moduli=[2,2,4],action=[[0,1,0],[1,1,0],[0,0,1]])"),
    ]
}

/// The two extension classes of Z2 by A5.
pub fn central_corpus() -> Vec<CorpusEntry> {
    vec![
        named("sl2_5", "z2_by_a5", "sl2(5)"),
        named("z2_x_a5", "z2_by_a5", "direct_product(cyclic(2),alt(5))"),
    ]
}

/// Index pairs `i < j` of equal order within the same family.
pub fn family_pairs(entries: &[CorpusEntry]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if entries[i].family == entries[j].family && entries[i].descriptor.order() == entries[j].descriptor.order() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Product over the generators of `g` of the number of same-order candidates
/// in `h`: a bound on the oracle's search tree width. Pairs the oracle rejects
/// up front on order statistics cost 1.
pub fn oracle_cost(g: &CayleyTable, h: &CayleyTable) -> f64 {
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return 1.0;
    }
    let mut counts = std::collections::HashMap::new();
    for y in 0..h.order() {
        *counts.entry(h.element_order(y)).or_insert(0usize) += 1;
    }
    generating_set(g).iter().map(|&x| *counts.get(&g.element_order(x)).unwrap_or(&0) as f64).product()
}
