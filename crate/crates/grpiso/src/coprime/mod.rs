//! Isomorphism of coprime extensions `H ⋉ N` with `N` abelian and `H`
//! elementary abelian.
//!
//! Each group is split along its abelian normal Hall subgroup. The action of a
//! complement on every exponent layer of every Sylow subgroup of `N` becomes a
//! representation of `Z_q^ℓ` over `F_p`; two groups are isomorphic iff one change
//! of basis of `Z_q^ℓ` makes all those representations equivalent at once. That
//! joint condition is a generalized code equivalence on the label matrices.

mod ranum;

pub use ranum::{psi_p, ranum_apply, ranum_matrix, RanumMatrix};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{mod_inv, prime_divisors, prime_power};
use crate::code::{generalized_code_equivalence, permute_columns, LinearCode};
use crate::exec;
use crate::fp::FpMatrix;
use crate::group::{
    abelian_basis, closure, is_subgroup, quotient, sylow_elements, AbelianBasis, CayleyTable, GroupError,
    GroupHom, Subgroup,
};
use crate::perm::{Perm, PermGroup};
use crate::rep::{index_of, indexing_tuples, vector_of, IndexingTuple, MatRep, RepError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoprimeError {
    #[error("not in class: {0}")]
    NotInClass(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Most specific coprime class of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CoprimeClass {
    /// `N` elementary abelian.
    Elementary,
    /// Every Sylow subgroup of `N` elementary abelian.
    ProductOfElementary,
    /// `N` abelian.
    Abelian,
}

/// `G` split along its abelian normal Hall subgroup.
#[derive(Clone, Debug)]
pub struct CoprimeDecomposition {
    pub normal: Subgroup,
    pub quotient: CayleyTable,
    pub projection: GroupHom,
    /// `action[h][x]`: conjugate `r x r⁻¹` of `x ∈ N` by any preimage `r` of `h`.
    /// Entries outside `N` are `usize::MAX`.
    pub action: Vec<Vec<usize>>,
}

/// The product of all abelian normal Sylow subgroups and the quotient by it.
/// `None` when no Sylow subgroup qualifies in a non-trivial group.
pub fn decompose_coprime(g: &CayleyTable) -> Option<CoprimeDecomposition> {
    let n = g.order();
    let mut gens = Vec::new();
    for p in prime_divisors(n as u64) {
        let s = sylow_elements(g, p);
        if is_subgroup(g, &s) && s.iter().all(|&x| s.iter().all(|&y| g.mul(x, y) == g.mul(y, x))) {
            gens.extend(s);
        }
    }
    let normal = closure(g, &gens);
    if normal.order() == 1 && n > 1 {
        return None;
    }
    let (quotient, projection) = quotient(g, &normal).ok()?;
    let mut action = vec![vec![usize::MAX; n]; quotient.order()];
    let mut seen = vec![false; quotient.order()];
    for r in 0..n {
        let h = projection.apply(r);
        if seen[h] {
            continue;
        }
        seen[h] = true;
        for &x in normal.elements() {
            action[h][x] = g.mul(g.mul(r, x), g.inv(r));
        }
    }
    Some(CoprimeDecomposition { normal, quotient, projection, action })
}

/// One exponent layer of one Sylow subgroup of `N`, as a representation.
#[derive(Clone, Debug)]
struct Layer {
    p: u64,
    exp: u32,
    rep: MatRep,
}

/// Everything the isomorphism test needs about one group.
#[derive(Clone, Debug)]
struct Prepared {
    class: CoprimeClass,
    normal: Subgroup,
    /// Abelian invariants of `N`, ascending.
    invariants: Vec<u64>,
    /// `(q, ℓ)` of the complement; `None` when the complement is trivial.
    complement: Option<(u64, usize)>,
    /// Commuting lifts `c_1, …, c_ℓ` of a basis of `G/N`.
    lifts: Vec<usize>,
    /// `c^u = ∏ c_j^{u_j}` by `index_of(u)`.
    powers: Vec<usize>,
    /// For each element `x`, the index `u` with `x ∈ c^u N`.
    part: Vec<usize>,
    layers: Vec<Layer>,
}

fn not_in_class(msg: &str) -> CoprimeError {
    CoprimeError::NotInClass(msg.to_string())
}

fn prepare(g: &CayleyTable) -> Result<Prepared, CoprimeError> {
    let dec = decompose_coprime(g).ok_or_else(|| not_in_class("no abelian normal Hall subgroup"))?;
    let normal = dec.normal;
    let nb = abelian_basis(g, &normal)?;
    let invariants = nb.orders.clone();
    let primes = prime_divisors(normal.order() as u64);
    let class = classify_invariants(&invariants, primes.len());
    let hq = &dec.quotient;
    if hq.order() == 1 {
        return Ok(Prepared {
            class,
            normal,
            invariants,
            complement: None,
            lifts: vec![],
            powers: vec![0],
            part: vec![0; g.order()],
            layers: vec![],
        });
    }
    let (q, l) = prime_power(hq.order() as u64).ok_or_else(|| not_in_class("complement is not a q-group"))?;
    let l = l as usize;
    if !hq.is_abelian() || (0..hq.order()).any(|h| hq.element_order(h) as u64 > q) {
        return Err(not_in_class("complement is not elementary abelian"));
    }
    let hb = abelian_basis(hq, &Subgroup::whole(hq))?;
    let lifts = complement_lifts(g, &normal, &dec.projection, &hb.generators, q)?;
    let mut powers = Vec::with_capacity(q.pow(l as u32) as usize);
    for idx in 0..q.pow(l as u32) as usize {
        let u = vector_of(q, l, idx);
        powers.push(lifts.iter().zip(&u).fold(0, |acc, (&c, &e)| g.mul(acc, g.pow(c, e))));
    }
    let mut part = vec![usize::MAX; g.order()];
    for (idx, &c) in powers.iter().enumerate() {
        for &x in normal.elements() {
            part[g.mul(c, x)] = idx;
        }
    }
    debug_assert!(part.iter().all(|&u| u != usize::MAX));
    let mut layers = Vec::new();
    for p in primes {
        let sy: Vec<usize> = normal
            .elements()
            .iter()
            .copied()
            .filter(|&x| prime_power(g.element_order(x) as u64).map_or(x == 0, |(r, _)| r == p))
            .collect();
        let basis = abelian_basis(g, &Subgroup::from_elements(g, sy))?;
        let blocks: Vec<Vec<FpMatrix>> = lifts
            .iter()
            .map(|&c| {
                let u = ranum_matrix(&basis, |x| g.mul(g.mul(c, x), g.inv(c)))?;
                Ok(psi_p(&u))
            })
            .collect::<Result<_, CoprimeError>>()?;
        let exps: Vec<u32> = basis.orders.iter().map(|&o| prime_power(o).expect("p-power").1).collect();
        for (b, range) in ranum::exponent_blocks(&exps).into_iter().enumerate() {
            let gens: Vec<FpMatrix> = blocks.iter().map(|bl| bl[b].clone()).collect();
            let rep = MatRep::from_generators(q, l, p, range.len(), &gens)?;
            layers.push(Layer { p, exp: exps[range.start], rep });
        }
    }
    Ok(Prepared {
        class,
        normal,
        invariants,
        complement: Some((q, l)),
        lifts,
        powers,
        part,
        layers,
    })
}

fn classify_invariants(invariants: &[u64], primes: usize) -> CoprimeClass {
    let elementary = invariants.iter().all(|&o| prime_power(o).map_or(false, |(_, e)| e == 1));
    match (elementary, primes) {
        (true, 0 | 1) => CoprimeClass::Elementary,
        (true, _) => CoprimeClass::ProductOfElementary,
        _ => CoprimeClass::Abelian,
    }
}

/// Commuting elements of order `q` mapping onto `targets`. Each is found among
/// the coset `g^m N`, where `m ≡ 1 (mod q)` and `m ≡ 0 (mod |N|)` makes `g^m` a
/// `q`-element; a Sylow `q`-subgroup containing the earlier lifts always has
/// a suitable element, so the greedy choice never gets stuck.
fn complement_lifts(
    g: &CayleyTable,
    normal: &Subgroup,
    proj: &GroupHom,
    targets: &[usize],
    q: u64,
) -> Result<Vec<usize>, CoprimeError> {
    let nord = normal.order() as u64;
    let m = nord * mod_inv(nord % q, q).ok_or_else(|| not_in_class("quotient order shares a prime with N"))?;
    let mut lifts: Vec<usize> = Vec::new();
    for &h in targets {
        let pre = (0..g.order()).find(|&x| proj.apply(x) == h).expect("projection is onto");
        let base = g.pow(pre, m);
        let c = normal
            .elements()
            .iter()
            .map(|&n| g.mul(base, n))
            .find(|&c| {
                exec::tick(1);
                g.pow(c, q) == 0 && lifts.iter().all(|&d| g.mul(c, d) == g.mul(d, c))
            })
            .ok_or_else(|| not_in_class("no commuting complement lift"))?;
        lifts.push(c);
    }
    Ok(lifts)
}

/// The coprime class of `g`, or why it has none.
pub fn coprime_class(g: &CayleyTable) -> Result<CoprimeClass, CoprimeError> {
    Ok(prepare(g)?.class)
}

/// Isomorphism for `N` elementary abelian. `Some(witness G1 → G2)` iff isomorphic.
pub fn iso_hee(g1: &CayleyTable, g2: &CayleyTable) -> Result<Option<GroupHom>, CoprimeError> {
    iso_within(g1, g2, CoprimeClass::Elementary)
}

/// Isomorphism for `N` a product of elementary abelian groups.
pub fn iso_hprode(g1: &CayleyTable, g2: &CayleyTable) -> Result<Option<GroupHom>, CoprimeError> {
    iso_within(g1, g2, CoprimeClass::ProductOfElementary)
}

/// Isomorphism for `N` abelian.
pub fn iso_hae(g1: &CayleyTable, g2: &CayleyTable) -> Result<Option<GroupHom>, CoprimeError> {
    iso_within(g1, g2, CoprimeClass::Abelian)
}

fn iso_within(g1: &CayleyTable, g2: &CayleyTable, class: CoprimeClass) -> Result<Option<GroupHom>, CoprimeError> {
    let a = prepare(g1)?;
    let b = prepare(g2)?;
    for x in [&a, &b] {
        if x.class > class {
            return Err(CoprimeError::NotInClass(format!("normal Hall subgroup is only {:?}", x.class)));
        }
    }
    Ok(iso_prepared(g1, &a, g2, &b))
}

fn iso_prepared(g1: &CayleyTable, a: &Prepared, g2: &CayleyTable, b: &Prepared) -> Option<GroupHom> {
    if g1.order() != g2.order() || a.invariants != b.invariants || a.complement != b.complement {
        return None;
    }
    let Some((q, l)) = a.complement else {
        return abelian_iso(g1, &a.normal, g2, &b.normal);
    };
    // Labels of G1: one fixed indexing tuple per layer. Labels of G2: all of them.
    let fixed: Vec<IndexingTuple> = a
        .layers
        .iter()
        .map(|x| indexing_tuples(&x.rep).map(|mut t| t.swap_remove(0)))
        .collect::<Result<_, _>>()
        .ok()?;
    let options: Vec<Vec<IndexingTuple>> =
        b.layers.iter().map(|x| indexing_tuples(&x.rep)).collect::<Result<_, _>>().ok()?;
    debug_assert!(a.layers.iter().zip(&b.layers).all(|(x, y)| (x.p, x.exp) == (y.p, y.exp)));
    let shape = |t: &IndexingTuple| t.by_multiplicity.iter().map(|(&w, v)| (w, v.len())).collect::<Vec<_>>();
    if fixed.iter().zip(&options).any(|(f, o)| shape(f) != shape(&o[0])) {
        return None;
    }
    let target = label_matrix(q, l, fixed.iter());
    let m = target.cols();
    let mut parts = Vec::new();
    let mut start = 0;
    for t in &fixed {
        for v in t.by_multiplicity.values() {
            parts.push((start..start + v.len()).collect::<Vec<_>>());
            start += v.len();
        }
    }
    let allowed = PermGroup::young(m, &parts);
    let target_code = LinearCode::new(&target).ok()?;
    let combos = odometer(&options.iter().map(|o| o.len()).collect::<Vec<_>>());
    exec::par_find_first(&combos, |choice| {
        exec::tick(1);
        let source = label_matrix(q, l, choice.iter().zip(&options).map(|(&i, o)| &o[i]));
        let coset = generalized_code_equivalence(&LinearCode::new(&source).ok()?, &target_code, &allowed).ok()?;
        let sigma = coset.rep.as_ref()?;
        let t = row_transform(&source, &target, sigma)?;
        // t·source^σ = target means each label v of G2 becomes t·v, so
        // G1's representations are G2's precomposed with φ = tᵀ.
        let phi = t.transpose();
        assemble(g1, a, g2, b, &phi)
    })
}

fn odometer(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut c = vec![0; sizes.len()];
    if sizes.iter().any(|&s| s == 0) {
        return out;
    }
    loop {
        out.push(c.clone());
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            c[k] += 1;
            if c[k] < sizes[k] {
                break;
            }
            c[k] = 0;
        }
    }
}

/// `ℓ × m` matrix over `F_q` whose columns are the tuple labels, layer by layer
/// and multiplicity by multiplicity.
fn label_matrix<'a>(q: u64, l: usize, tuples: impl Iterator<Item = &'a IndexingTuple>) -> FpMatrix {
    let cols: Vec<Vec<u64>> = tuples.flat_map(|t| t.by_multiplicity.values().flatten().cloned()).collect();
    let mut m = FpMatrix::zeros(q, l, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..l {
            m.set(i, j, c[i]);
        }
    }
    m
}

/// Invertible `P` with `P·m` in reduced row echelon form.
fn echelon_transform(m: &FpMatrix) -> FpMatrix {
    let n = m.rows();
    let r = m.hstack(&FpMatrix::identity(m.p(), n)).rref();
    r.matrix.select_columns(&(m.cols()..m.cols() + n).collect::<Vec<_>>())
}

/// Invertible `T` with `T·source^σ = target`, if the row spaces agree. Works
/// when the matrices are rank-deficient, where `T` is not unique.
fn row_transform(source: &FpMatrix, target: &FpMatrix, sigma: &Perm) -> Option<FpMatrix> {
    let s = permute_columns(source, sigma);
    let (ps, pt) = (echelon_transform(&s), echelon_transform(target));
    if ps.mul(&s) != pt.mul(target) {
        return None;
    }
    let t = pt.inverse()?.mul(&ps);
    debug_assert_eq!(t.mul(&s), *target);
    Some(t)
}

/// Build `c1^u n ↦ c2^{φu} β(n)` for a module isomorphism `β` found by search.
fn assemble(g1: &CayleyTable, a: &Prepared, g2: &CayleyTable, b: &Prepared, phi: &FpMatrix) -> Option<GroupHom> {
    let q = phi.p();
    let l = phi.rows();
    let twisted: Vec<usize> = (0..l)
        .map(|j| {
            let mut e = vec![0; l];
            e[j] = 1;
            b.powers[index_of(q, &phi.mul_vec(&e))]
        })
        .collect();
    let beta = module_iso(g1, &a.normal, &a.lifts, g2, &b.normal, &twisted)?;
    let mut image = vec![0; g1.order()];
    for x in 0..g1.order() {
        let ui = a.part[x];
        let n = g1.mul(g1.inv(a.powers[ui]), x);
        let v = phi.mul_vec(&vector_of(q, l, ui));
        image[x] = g2.mul(b.powers[index_of(q, &v)], beta[n]);
    }
    let hom = GroupHom::new(image, g2.order());
    hom.is_isomorphism(g1, g2).then_some(hom)
}

/// A bijection `β: N1 → N2` with `β(xy) = β(x)β(y)` and
/// `β(c_j x c_j⁻¹) = d_j β(x) d_j⁻¹`, by backtracking over generator images.
fn module_iso(
    g1: &CayleyTable,
    n1: &Subgroup,
    c: &[usize],
    g2: &CayleyTable,
    n2: &Subgroup,
    d: &[usize],
) -> Option<Vec<usize>> {
    let basis = abelian_basis(g1, n1).ok()?;
    let search = ModuleSearch { g1, c, g2, n2, d, gens: &basis.generators };
    search.extend(&mut Vec::new())
}

struct ModuleSearch<'a> {
    g1: &'a CayleyTable,
    c: &'a [usize],
    g2: &'a CayleyTable,
    n2: &'a Subgroup,
    d: &'a [usize],
    gens: &'a [usize],
}

impl ModuleSearch<'_> {
    fn extend(&self, assigned: &mut Vec<(usize, usize)>) -> Option<Vec<usize>> {
        let (fwd, bwd) = self.close(assigned)?;
        let Some(&x) = self.gens.iter().find(|&&x| fwd[x] == usize::MAX) else {
            return Some(fwd);
        };
        let ord = self.g1.element_order(x);
        for &y in self.n2.elements() {
            if bwd[y] != usize::MAX || self.g2.element_order(y) != ord {
                continue;
            }
            assigned.push((x, y));
            if let Some(done) = self.extend(assigned) {
                return Some(done);
            }
            assigned.pop();
        }
        None
    }

    /// The partial isomorphism generated by `assigned`, or `None` on a clash.
    fn close(&self, assigned: &[(usize, usize)]) -> Option<(Vec<usize>, Vec<usize>)> {
        let (g1, g2) = (self.g1, self.g2);
        exec::tick(1);
        // orbit of the assigned pairs under the paired conjugations
        let mut pairs: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stack: Vec<(usize, usize)> = assigned.to_vec();
        while let Some((x, y)) = stack.pop() {
            match pairs.get(&x) {
                Some(&y0) if y0 != y => return None,
                Some(_) => continue,
                None => {}
            }
            pairs.insert(x, y);
            for (&cj, &dj) in self.c.iter().zip(self.d) {
                stack.push((g1.mul(g1.mul(cj, x), g1.inv(cj)), g2.mul(g2.mul(dj, y), g2.inv(dj))));
            }
        }
        let mut fwd = vec![usize::MAX; g1.order()];
        let mut bwd = vec![usize::MAX; g2.order()];
        fwd[0] = 0;
        bwd[0] = 0;
        let mut queue = vec![(0usize, 0usize)];
        while let Some((x, y)) = queue.pop() {
            for (&a, &b) in &pairs {
                let (xa, yb) = (g1.mul(x, a), g2.mul(y, b));
                match (fwd[xa], bwd[yb]) {
                    (usize::MAX, usize::MAX) => {
                        fwd[xa] = yb;
                        bwd[yb] = xa;
                        queue.push((xa, yb));
                    }
                    (f, _) if f == yb => {}
                    _ => return None,
                }
            }
        }
        Some((fwd, bwd))
    }
}

/// Abelian groups: compare invariants and map basis to basis.
fn abelian_iso(g1: &CayleyTable, n1: &Subgroup, g2: &CayleyTable, n2: &Subgroup) -> Option<GroupHom> {
    let (b1, b2): (AbelianBasis, AbelianBasis) = (abelian_basis(g1, n1).ok()?, abelian_basis(g2, n2).ok()?);
    if b1.orders != b2.orders {
        return None;
    }
    let image = (0..g1.order()).map(|x| b2.element(g2, b1.coords(x).expect("abelian"))).collect();
    let hom = GroupHom::new(image, g2.order());
    debug_assert!(hom.is_isomorphism(g1, g2));
    Some(hom)
}

#[cfg(test)]
mod tests;
