//! Central extensions: extension data, coboundaries, class comparison and the
//! isomorphism test for groups whose radical is central.

mod cocycle;
mod howell;

pub use cocycle::CocycleMatrix;
pub use howell::{howell_form, in_span};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::{mod_inv, prime_power};
use crate::exec;
use crate::fp::FpMatrix;
use crate::group::{
    abelian_basis, center, generating_set, oracle_aut, oracle_iso, quotient, AbelianBasis, CayleyTable,
    GroupError, GroupHom, Subgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("subgroup is not central")]
    NotCentral,
    #[error("moduli differ: {0:?} vs {1:?}")]
    ModuliMismatch(Vec<u64>, Vec<u64>),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `G` as a central extension of `A` by `Q = G/A`, with the section of least
/// coset representatives. Cocycle values are computed on demand so that large
/// quotients do not need a `|Q|²` table.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub a: Subgroup,
    pub basis: AbelianBasis,
    pub moduli: Vec<u64>,
    pub quotient: CayleyTable,
    pub projection: GroupHom,
    pub section: Vec<usize>,
}

impl ExtensionData {
    pub fn k(&self) -> usize {
        self.moduli.len()
    }

    /// `f(x, y) = s(x) s(y) s(xy)⁻¹` in basis coordinates.
    pub fn value(&self, g: &CayleyTable, x: usize, y: usize) -> Vec<u64> {
        let s = &self.section;
        let xy = self.quotient.mul(x, y);
        let z = g.mul(g.mul(s[x], s[y]), g.inv(s[xy]));
        self.basis.coords(z).expect("cocycle value lies in A").to_vec()
    }

    /// The whole cocycle as a matrix.
    pub fn cocycle(&self, g: &CayleyTable) -> CocycleMatrix {
        let n = self.quotient.order();
        let mut f = CocycleMatrix::zero(&self.moduli, n);
        for x in 0..n {
            for y in 0..n {
                for (i, v) in self.value(g, x, y).into_iter().enumerate() {
                    f.set(i, x, y, v);
                }
            }
        }
        f
    }

    /// `x = a · s(q)`: the coordinates of `a` and `q`.
    pub fn split(&self, g: &CayleyTable, x: usize) -> (Vec<u64>, usize) {
        let q = self.projection.apply(x);
        let a = g.mul(x, g.inv(self.section[q]));
        (self.basis.coords(a).expect("element of A").to_vec(), q)
    }

    /// `a · s(q)`.
    pub fn element(&self, g: &CayleyTable, a: &[u64], q: usize) -> usize {
        g.mul(self.basis.element(g, a), self.section[q])
    }
}

/// Extension data of `g` over the central subgroup `a`.
pub fn extension_data(g: &CayleyTable, a: &Subgroup) -> Result<ExtensionData, CohomError> {
    let central = a.elements().iter().all(|&z| (0..g.order()).all(|x| g.mul(z, x) == g.mul(x, z)));
    if !central {
        return Err(CohomError::NotCentral);
    }
    let basis = abelian_basis(g, a)?;
    let (quotient, projection) = quotient(g, a)?;
    let mut section = vec![usize::MAX; quotient.order()];
    for x in 0..g.order() {
        let q = projection.apply(x);
        if section[q] == usize::MAX {
            section[q] = x;
        }
    }
    debug_assert_eq!(section[0], 0);
    Ok(ExtensionData { moduli: basis.orders.clone(), a: a.clone(), basis, quotient, projection, section })
}

/// The coboundaries `δu_q` of the indicator functions `u_q`, `q ∈ Q`, with
/// values in `Z/p^μ`. `δu(x, y) = u(x) + u(y) − u(xy)`.
pub fn coboundary_basis(q: &CayleyTable, p: u64, mu: u32) -> Vec<CocycleMatrix> {
    let m = p.pow(mu);
    coboundary_rows(q, m).into_iter().map(|r| CocycleMatrix::from_rows(&[m], q.order(), vec![r])).collect()
}

fn coboundary_rows(q: &CayleyTable, m: u64) -> Vec<Vec<u64>> {
    let n = q.order();
    (0..n)
        .map(|t| {
            let mut row = vec![0u64; n * n];
            for x in 0..n {
                for y in 0..n {
                    let v = u64::from(x == t) + u64::from(y == t) + (m - u64::from(q.mul(x, y) == t));
                    row[x * n + y] = v % m;
                }
            }
            row
        })
        .collect()
}

/// Projection of `C²(Q, F_p^k)` onto the span of the coordinates that are not
/// pivots of the coboundary space, along `B²`. Applied row by row, so it
/// commutes with `GL_k(F_p)` acting on the left.
#[derive(Clone, Debug)]
pub struct Projection {
    p: u64,
    k: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

pub fn invariant_projection(q: &CayleyTable, p: u64, k: usize) -> Projection {
    let rows = coboundary_rows(q, p);
    let r = FpMatrix::from_rows(p, &rows).rref();
    let rank = r.rank();
    let basis = r.matrix.select_rows(&(0..rank).collect::<Vec<_>>());
    let piv: BTreeSet<usize> = r.pivots.iter().copied().collect();
    let n2 = q.order() * q.order();
    let free = (0..n2).filter(|c| !piv.contains(c)).collect();
    Projection { p, k, basis, pivots: r.pivots, free }
}

impl Projection {
    /// Number of rows `k` this projection was built for.
    pub fn rank_of_values(&self) -> usize {
        self.k
    }

    /// Dimension of the complement `W_0`.
    pub fn width(&self) -> usize {
        self.free.len()
    }

    pub fn coboundary_rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_coordinates(&self) -> &[usize] {
        &self.free
    }

    fn reduce(&self, row: &mut [u64]) {
        let p = self.p;
        for (i, &c) in self.pivots.iter().enumerate() {
            let v = row[c];
            if v != 0 {
                for (x, &b) in row.iter_mut().zip(self.basis.row(i)) {
                    *x = (*x + (p - v) * b) % p;
                }
            }
        }
    }

    /// `π(f)` as a cochain.
    pub fn apply(&self, f: &CocycleMatrix) -> CocycleMatrix {
        let rows = f
            .rows()
            .iter()
            .map(|r| {
                let mut r: Vec<u64> = r.iter().map(|&x| x % self.p).collect();
                self.reduce(&mut r);
                r
            })
            .collect();
        CocycleMatrix::from_rows(&vec![self.p; f.k()], f.quotient_order(), rows)
    }

    /// `π(f)` in `W_0` coordinates: a `k × width` matrix.
    pub fn coordinates(&self, f: &CocycleMatrix) -> FpMatrix {
        let pf = self.apply(f);
        let rows: Vec<Vec<u64>> = pf.rows().iter().map(|r| self.free.iter().map(|&c| r[c]).collect()).collect();
        if rows.is_empty() {
            return FpMatrix::zeros(self.p, 0, self.width());
        }
        FpMatrix::from_rows(self.p, &rows)
    }
}

/// Compares cohomology classes up to `Aut(A)` for a fixed `Q` and moduli,
/// keeping the coboundary spans between calls.
pub struct ClassComparer {
    moduli: Vec<(u64, u32)>,
    parts: Vec<Part>,
}

enum Part {
    Prime { p: u64, proj: Projection },
    PrimePower { p: u64, mu: u32, boundary: Vec<Vec<u64>> },
}

impl ClassComparer {
    pub fn new(q: &CayleyTable, moduli: &[u64]) -> Result<Self, CohomError> {
        let pm: Vec<(u64, u32)> = moduli
            .iter()
            .map(|&m| prime_power(m).ok_or_else(|| CohomError::HypothesisFailed(format!("{m} is not a prime power"))))
            .collect::<Result<_, _>>()?;
        let kinds: BTreeSet<(u64, u32)> = pm.iter().copied().collect();
        let parts = kinds
            .into_iter()
            .map(|(p, mu)| {
                if mu == 1 {
                    Part::Prime { p, proj: invariant_projection(q, p, 1) }
                } else {
                    Part::PrimePower { p, mu, boundary: howell_form(&coboundary_rows(q, p.pow(mu)), p, mu) }
                }
            })
            .collect();
        Ok(ClassComparer { moduli: pm, parts })
    }

    /// Generators of `{χ ∘ f : χ ∈ Hom(A, Z/p^μ)}`.
    fn images(&self, f: &CocycleMatrix, p: u64, mu: u32) -> Vec<Vec<u64>> {
        let m = p.pow(mu);
        f.rows()
            .iter()
            .zip(&self.moduli)
            .filter(|(_, &(pj, _))| pj == p)
            .map(|(r, &(_, muj))| {
                if muj >= mu {
                    r.iter().map(|&x| x % m).collect()
                } else {
                    let s = p.pow(mu - muj);
                    r.iter().map(|&x| x * s % m).collect()
                }
            })
            .collect()
    }

    pub fn equal(&self, f1: &CocycleMatrix, f2: &CocycleMatrix) -> Result<bool, CohomError> {
        if f1.moduli() != f2.moduli() {
            return Err(CohomError::ModuliMismatch(f1.moduli().to_vec(), f2.moduli().to_vec()));
        }
        for part in &self.parts {
            exec::tick(1);
            let same = match part {
                Part::Prime { p, proj } => {
                    let span = |f: &CocycleMatrix| {
                        let rows = self.images(f, *p, 1);
                        let n = f.quotient_order();
                        let c = CocycleMatrix::from_rows(&vec![*p; rows.len()], n, rows);
                        proj.coordinates(&c).row_space_basis()
                    };
                    span(f1) == span(f2)
                }
                Part::PrimePower { p, mu, boundary } => {
                    let span = |f: &CocycleMatrix| {
                        let mut rows = boundary.clone();
                        rows.extend(self.images(f, *p, *mu));
                        howell_form(&rows, *p, *mu)
                    };
                    span(f1) == span(f2)
                }
            };
            if !same {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether `f1` and `α ∘ f2` are cohomologous for some `α ∈ Aut(A)`.
pub fn class_equal_up_to_aut_a(q: &CayleyTable, f1: &CocycleMatrix, f2: &CocycleMatrix) -> Result<bool, CohomError> {
    ClassComparer::new(q, f1.moduli())?.equal(f1, f2)
}

/// All automorphisms of `q` by generator enumeration.
pub fn enumerate_aut(q: &CayleyTable) -> Result<Vec<GroupHom>, CohomError> {
    Ok(oracle_aut(q)?)
}

/// `(dim Z²(Q, F_p), rank B²(Q, F_p))`. The cocycle identity is imposed only for
/// the third argument in a generating set, which suffices: the set of `c` for
/// which the twisted product is associative is closed under multiplication.
pub fn cocycle_dimensions(q: &CayleyTable, p: u64) -> (usize, usize) {
    let n = q.order();
    let gens = generating_set(q);
    let rank_b = invariant_projection(q, p, 1).coboundary_rank();
    let mut eqs: Vec<[(usize, u64); 4]> = Vec::with_capacity(n * n * gens.len());
    for a in 0..n {
        for b in 0..n {
            let ab = q.mul(a, b);
            for &c in &gens {
                // f(a,b) + f(ab,c) - f(b,c) - f(a,bc) = 0
                eqs.push([(a * n + b, 1), (ab * n + c, 1), (b * n + c, p - 1), (a * n + q.mul(b, c), p - 1)]);
            }
        }
    }
    let rank = if p == 2 { rank_gf2(n * n, &eqs) } else { rank_dense(p, n * n, &eqs) };
    (n * n - rank, rank_b)
}

fn rank_gf2(cols: usize, eqs: &[[(usize, u64); 4]]) -> usize {
    let words = cols.div_ceil(64);
    let mut pivot: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    for e in eqs {
        let mut row = vec![0u64; words];
        for &(c, _) in e {
            row[c / 64] ^= 1 << (c % 64);
        }
        loop {
            let Some(w) = row.iter().position(|&x| x != 0) else { break };
            let lead = w * 64 + row[w].trailing_zeros() as usize;
            match &pivot[lead] {
                Some(pr) => {
                    for (x, y) in row.iter_mut().zip(pr).skip(w) {
                        *x ^= y;
                    }
                }
                None => {
                    pivot[lead] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn rank_dense(p: u64, cols: usize, eqs: &[[(usize, u64); 4]]) -> usize {
    let mut pivot: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    for e in eqs {
        let mut row = vec![0u64; cols];
        for &(c, v) in e {
            row[c] = (row[c] + v) % p;
        }
        loop {
            let Some(lead) = row.iter().position(|&x| x != 0) else { break };
            match &pivot[lead] {
                Some(pr) => {
                    let c = row[lead];
                    for (x, y) in row.iter_mut().zip(pr) {
                        *x = (*x + (p - c) * y) % p;
                    }
                }
                None => {
                    let inv = mod_inv(row[lead], p).expect("prime modulus");
                    for x in row.iter_mut() {
                        *x = *x * inv % p;
                    }
                    pivot[lead] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Solutions `u: Q → F_p` of `u(x s) = u(x) + u(s) − t(x, s)` for `s` in `gens`,
/// found by propagating affine expressions in the unknowns `u(s)` along the
/// Cayley graph. Returns one solution and a basis of the homogeneous solutions
/// (the homomorphisms `Q → F_p`).
pub(crate) fn solve_coboundary(
    q: &CayleyTable,
    gens: &[usize],
    p: u64,
    t: &dyn Fn(usize, usize) -> u64,
) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let n = q.order();
    let m = gens.len();
    // expression: coefficients of the m unknowns, then the constant
    let mut expr: Vec<Option<Vec<u64>>> = vec![None; n];
    let mut start = vec![0; m + 1];
    start[m] = t(0, 0) % p;
    expr[0] = Some(start);
    let mut eqs: Vec<Vec<u64>> = Vec::new();
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let ex = expr[x].clone().expect("visited");
        for (j, &s) in gens.iter().enumerate() {
            let y = q.mul(x, s);
            let mut ey = ex.clone();
            ey[j] = (ey[j] + 1) % p;
            ey[m] = (ey[m] + p - t(x, s) % p) % p;
            match &expr[y] {
                None => {
                    expr[y] = Some(ey);
                    queue.push(y);
                }
                Some(old) => {
                    let diff: Vec<u64> = ey.iter().zip(old).map(|(a, b)| (a + p - b) % p).collect();
                    if diff.iter().any(|&d| d != 0) {
                        eqs.push(diff);
                    }
                }
            }
        }
    }
    // u(s_j) is the unknown v_j itself
    for (j, &s) in gens.iter().enumerate() {
        let mut d = expr[s].clone().expect("generators are reached");
        d[j] = (d[j] + p - 1) % p;
        if d.iter().any(|&x| x != 0) {
            eqs.push(d);
        }
    }
    let (v, kernel) = if eqs.is_empty() {
        let kernel = (0..m).map(|j| (0..m).map(|i| u64::from(i == j)).collect()).collect();
        (vec![0; m], kernel)
    } else {
        let a = FpMatrix::from_rows(p, &eqs.iter().map(|e| e[..m].to_vec()).collect::<Vec<_>>());
        let b = FpMatrix::from_rows(p, &eqs.iter().map(|e| vec![(p - e[m]) % p]).collect::<Vec<_>>());
        let sol = a.solve_right(&b)?;
        ((0..m).map(|i| sol.get(i, 0)).collect(), a.right_kernel())
    };
    let eval = |coef: &[u64], with_const: bool| -> Vec<u64> {
        expr.iter()
            .map(|e| {
                let e = e.as_ref().expect("Cayley graph is connected");
                let mut s = if with_const { e[m] } else { 0 };
                for i in 0..m {
                    s = (s + e[i] * coef[i]) % p;
                }
                s
            })
            .collect()
    };
    let particular = eval(&v, true);
    let homs = kernel.iter().map(|kv| eval(kv, false)).collect();
    Some((particular, homs))
}

/// The map `a·s1(q) ↦ α(a)·u(q)·s2(β(q))` where `u` corrects `α∘f1 − f2∘β` to
/// zero, if such `u` exists and the map is an isomorphism. `A` must be
/// elementary abelian of exponent `p`.
pub(crate) fn lift_map(
    g1: &CayleyTable,
    e1: &ExtensionData,
    g2: &CayleyTable,
    e2: &ExtensionData,
    alpha: &FpMatrix,
    beta: &GroupHom,
) -> Option<GroupHom> {
    let k = e1.k();
    let q1 = &e1.quotient;
    let gens = generating_set(q1);
    let p = e1.moduli.first().copied().unwrap_or(2);
    let mut u: Vec<Vec<u64>> = vec![vec![0; k]; q1.order()];
    if k > 0 {
        // one pass over the needed cocycle values
        let mut pairs: Vec<(usize, usize)> = vec![(0, 0)];
        for x in 0..q1.order() {
            for &s in &gens {
                pairs.push((x, s));
            }
        }
        let vals: std::collections::HashMap<(usize, usize), Vec<u64>> = pairs
            .iter()
            .map(|&(x, s)| {
                let a = alpha.mul_vec(&e1.value(g1, x, s));
                let b = e2.value(g2, beta.apply(x), beta.apply(s));
                ((x, s), a.iter().zip(&b).map(|(x, y)| (x + p - y) % p).collect())
            })
            .collect();
        for i in 0..k {
            let t = |x: usize, s: usize| vals[&(x, s)][i];
            let (ui, _) = solve_coboundary(q1, &gens, p, &t)?;
            for (x, v) in ui.into_iter().enumerate() {
                u[x][i] = v;
            }
        }
    }
    let image: Vec<usize> = (0..g1.order())
        .map(|x| {
            let (a, qx) = e1.split(g1, x);
            let mut b = if k > 0 { alpha.mul_vec(&a) } else { vec![] };
            for (bi, ui) in b.iter_mut().zip(&u[qx]) {
                *bi = (*bi + ui) % p;
            }
            e2.element(g2, &b, beta.apply(qx))
        })
        .collect();
    let hom = GroupHom::new(image, g2.order());
    exec::tick(1);
    hom.is_isomorphism(g1, g2).then_some(hom)
}

/// Invertible `X` with `X·m1 = m2`, when the row spaces agree.
pub(crate) fn row_span_transform(m1: &FpMatrix, m2: &FpMatrix) -> Option<FpMatrix> {
    if m1.rows() != m2.rows() || m1.cols() != m2.cols() {
        return None;
    }
    let echelon = |m: &FpMatrix| {
        let n = m.rows();
        m.hstack(&FpMatrix::identity(m.p(), n)).rref().matrix.select_columns(&(m.cols()..m.cols() + n).collect::<Vec<_>>())
    };
    let (p1, p2) = (echelon(m1), echelon(m2));
    if p1.mul(m1) != p2.mul(m2) {
        return None;
    }
    Some(p2.inverse()?.mul(&p1))
}

/// Generators of `{X ∈ GL_k(F_p) : X·m = m}`: in a basis starting with a
/// basis of the column space `B`, the block matrices `[[I, *], [0, ν]]`.
pub(crate) fn stabilizer_generators(m: &FpMatrix) -> Vec<FpMatrix> {
    let (p, k) = (m.p(), m.rows());
    let colspace = m.transpose().row_space_basis();
    let b = colspace.rows();
    let mut basis: Vec<Vec<u64>> = colspace.to_rows();
    for i in 0..k {
        let mut e = vec![0; k];
        e[i] = 1;
        let mut trial = basis.clone();
        trial.push(e.clone());
        if FpMatrix::from_rows(p, &trial).rank() == trial.len() {
            basis = trial;
        }
    }
    // columns of `e` are the new basis vectors
    let e = FpMatrix::from_rows(p, &basis).transpose();
    let einv = e.inverse().expect("basis");
    let mut ys = Vec::new();
    let unit = |i: usize, j: usize| {
        let mut y = FpMatrix::identity(p, k);
        y.set(i, j, 1);
        y
    };
    for i in 0..k {
        for j in b..k {
            if i != j {
                ys.push(unit(i, j));
            }
        }
    }
    if b < k && p > 2 {
        let w = (2..p).find(|&w| crate::arith::mult_order(w, p) == Some(p - 1)).expect("primitive root");
        let mut y = FpMatrix::identity(p, k);
        y.set(b, b, w);
        ys.push(y);
    }
    let out: Vec<FpMatrix> = ys.iter().map(|y| e.mul(y).mul(&einv)).collect();
    debug_assert!(out.iter().all(|x| x.mul(m) == *m));
    out
}

pub(crate) fn elementary_center(g: &CayleyTable) -> Result<(Subgroup, u64), CohomError> {
    let z = center(g);
    let orders: BTreeSet<usize> = z.elements().iter().map(|&x| g.element_order(x)).filter(|&o| o > 1).collect();
    match orders.len() {
        0 => Ok((z, 2)),
        1 if crate::arith::is_prime(*orders.first().unwrap() as u64) => {
            let p = *orders.first().unwrap() as u64;
            Ok((z, p))
        }
        _ => Err(CohomError::HypothesisFailed("center is not elementary abelian".into())),
    }
}

/// Isomorphism by cohomology classes: `G_i` as central extensions of
/// `A_i = charfun(G_i)` (default: the center). The subgroup must be
/// characteristic for the verdict to be meaningful.
pub fn iso_central_generic(
    g1: &CayleyTable,
    g2: &CayleyTable,
    charfun: Option<&dyn Fn(&CayleyTable) -> Subgroup>,
) -> Result<bool, CohomError> {
    let pick = |g: &CayleyTable| match charfun {
        Some(f) => f(g),
        None => center(g),
    };
    let (a1, a2) = (pick(g1), pick(g2));
    let e1 = extension_data(g1, &a1).map_err(|_| CohomError::HypothesisFailed("A1 is not central".into()))?;
    let e2 = extension_data(g2, &a2).map_err(|_| CohomError::HypothesisFailed("A2 is not central".into()))?;
    if g1.order() != g2.order() || e1.moduli != e2.moduli {
        return Ok(false);
    }
    let Some(gamma) = oracle_iso(&e1.quotient, &e2.quotient) else {
        return Ok(false);
    };
    let f1 = e1.cocycle(g1);
    let f2 = e2.cocycle(g2);
    let cmp = ClassComparer::new(&e1.quotient, &e1.moduli)?;
    let auts = enumerate_aut(&e1.quotient)?;
    let hit = exec::par_find_first(&auts, |beta| {
        let f2b = f2.pull_back(&beta.then(&gamma));
        cmp.equal(&f1, &f2b).ok().filter(|&b| b)
    });
    Ok(hit.is_some())
}

/// Result of the elementary-abelian central computation.
#[derive(Clone, Debug)]
pub struct CentralIso {
    pub isomorphism: Option<GroupHom>,
    /// Generators of `Aut(G1)`.
    pub automorphisms: Vec<GroupHom>,
}

/// Decide `G1 ≅ G2` and compute generators of `Aut(G1)` for groups with an
/// elementary abelian center, viewed as central extensions of the center.
pub fn iso_coset_central_elemab(g1: &CayleyTable, g2: &CayleyTable) -> Result<CentralIso, CohomError> {
    let (a1, p) = elementary_center(g1)?;
    let e1 = extension_data(g1, &a1)?;
    let q1 = &e1.quotient;
    let k = e1.k();
    let proj = invariant_projection(q1, p, k);
    let f1 = e1.cocycle(g1);
    let m1 = proj.coordinates(&f1);
    let auts = enumerate_aut(q1)?;
    let automorphisms = central_automorphisms(g1, &e1, &m1, &proj, &auts, p);

    let isomorphism = (|| {
        let (a2, p2) = elementary_center(g2).ok()?;
        let e2 = extension_data(g2, &a2).ok()?;
        if g1.order() != g2.order() || e1.moduli != e2.moduli || (k > 0 && p2 != p) {
            return None;
        }
        let gamma = oracle_iso(q1, &e2.quotient)?;
        let f2 = e2.cocycle(g2);
        exec::par_find_first(&auts, |beta| {
            let gb = beta.then(&gamma);
            let m2 = proj.coordinates(&f2.pull_back(&gb));
            let alpha = if k == 0 { FpMatrix::zeros(p, 0, 0) } else { row_span_transform(&m1, &m2)? };
            lift_map(g1, &e1, g2, &e2, &alpha, &gb)
        })
    })();
    Ok(CentralIso { isomorphism, automorphisms })
}

fn central_automorphisms(
    g: &CayleyTable,
    e: &ExtensionData,
    m: &FpMatrix,
    proj: &Projection,
    auts: &[GroupHom],
    p: u64,
) -> Vec<GroupHom> {
    let k = e.k();
    let q = &e.quotient;
    let f = e.cocycle(g);
    let mut gens: Vec<GroupHom> = Vec::new();
    // (i) a·s(q) ↦ a·δ(q)·s(q) for homomorphisms δ: Q → A
    if k > 0 {
        let qgens = generating_set(q);
        let zero = |_: usize, _: usize| 0u64;
        let (_, homs) = solve_coboundary(q, &qgens, p, &zero).expect("homogeneous system is solvable");
        for h in &homs {
            for i in 0..k {
                let image = (0..g.order())
                    .map(|x| {
                        let (mut a, qx) = e.split(g, x);
                        a[i] = (a[i] + h[qx]) % p;
                        e.element(g, &a, qx)
                    })
                    .collect();
                gens.push(GroupHom::new(image, g.order()));
            }
        }
    }
    // (ii) lifts of (α, β) for every β ∈ Aut(Q) that admits some α
    let lifts = exec::par_map(auts, |beta| {
        let alpha = if k == 0 {
            FpMatrix::zeros(p, 0, 0)
        } else {
            row_span_transform(m, &proj.coordinates(&f.pull_back(beta)))?
        };
        lift_map(g, e, g, e, &alpha, beta)
    });
    gens.extend(lifts.into_iter().flatten());
    // (iii) α fixing π(f)
    if k > 0 {
        let id = GroupHom::identity(q.order());
        for x in stabilizer_generators(m) {
            if let Some(h) = lift_map(g, e, g, e, &x, &id) {
                gens.push(h);
            }
        }
    }
    gens.retain(|h| h.is_isomorphism(g, g));
    gens.sort();
    gens.dedup();
    gens
}

#[cfg(test)]
mod tests;
