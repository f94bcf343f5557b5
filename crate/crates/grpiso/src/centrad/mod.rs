//! Groups whose solvable radical is the center, elementary abelian, with
//! quotient a direct product of non-abelian simple (or small perfect) factors.
//!
//! The extension class over such a quotient is determined by its restrictions
//! to the factors, so each group is summarized by a `k × ℓD` matrix: one block
//! of projected cocycle coordinates per factor. Isomorphism becomes a search
//! over per-factor automorphisms (diagonals) and class-preserving permutations
//! of the blocks.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cohom::{
    elementary_center, extension_data, invariant_projection, lift_map, row_span_transform, solve_coboundary,
    stabilizer_generators, CocycleMatrix, CohomError, ExtensionData, Projection,
};
use crate::exec;
use crate::fp::FpMatrix;
use crate::group::{
    closure, generating_set, oracle_aut, oracle_iso, quotient, CayleyTable, GroupError, GroupHom, Subgroup,
};

/// Default bound on the order of a perfect quotient accepted as one factor when
/// it does not split into minimal normal subgroups.
pub const PERFECT_FACTOR_BOUND: usize = 60;

/// Refuse to enumerate more diagonals than this.
pub const MAX_DIAGONALS: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CentradError {
    #[error("not central-radical: {0}")]
    NotCentralRadical(RadicalFailure),
    #[error("matrix shapes do not match")]
    ShapeMismatch,
    #[error("{0} diagonals exceed the enumeration limit")]
    TooLarge(usize),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

/// Why a group is outside the class.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum RadicalFailure {
    #[error("center is not elementary abelian")]
    CenterNotElementary,
    #[error("quotient by the center has an abelian normal subgroup")]
    RadicalNotCentral,
    #[error("quotient is not a product of simple factors")]
    FactorsNotFound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorKind {
    Simple,
    PerfectBounded,
}

/// `G` over its center with `G/Z(G) = T_1 × … × T_ℓ`.
#[derive(Clone, Debug)]
pub struct SocleDecomposition {
    pub center: Subgroup,
    pub p: u64,
    pub k: usize,
    pub ext: ExtensionData,
    pub kind: FactorKind,
    /// Factors as subgroups of the quotient.
    pub factors: Vec<Subgroup>,
    /// Factor `i` as a table; local index `j` is `factors[i].elements()[j]`.
    pub factor_tables: Vec<CayleyTable>,
    /// Factor indices grouped by isomorphism type.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Preimages of the factors in `G`.
    pub preimages: Vec<Subgroup>,
    /// Isomorphism from the first factor of the class onto factor `i`.
    pub reference: Vec<GroupHom>,
    /// Local coordinates of each quotient element.
    coords: Vec<Vec<usize>>,
}

impl SocleDecomposition {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Local coordinates of a quotient element.
    pub fn coordinates(&self, q: usize) -> &[usize] {
        &self.coords[q]
    }

    /// The quotient element with the given local coordinates.
    pub fn compose(&self, local: &[usize]) -> usize {
        let q = &self.ext.quotient;
        local.iter().enumerate().fold(0, |acc, (i, &t)| q.mul(acc, self.factors[i].elements()[t]))
    }

    fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }
}

/// One automorphism per factor, each of that factor's own table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonal {
    pub parts: Vec<GroupHom>,
}

/// Cocycle restricted to each factor, on local indices.
#[derive(Clone, Debug)]
pub struct ProdCocycle {
    pub blocks: Vec<CocycleMatrix>,
}

impl ProdCocycle {
    pub fn from_extension(g: &CayleyTable, dec: &SocleDecomposition) -> Self {
        let blocks = (0..dec.len()).map(|i| factor_block(g, dec, i)).collect();
        ProdCocycle { blocks }
    }

    /// `(x, y) ↦ Σ_i f_i(x_i, y_i)` on the whole quotient.
    pub fn to_cocycle(&self, dec: &SocleDecomposition) -> CocycleMatrix {
        let n = dec.ext.quotient.order();
        let moduli = dec.ext.moduli.clone();
        let mut f = CocycleMatrix::zero(&moduli, n);
        for x in 0..n {
            for y in 0..n {
                for (r, &m) in moduli.iter().enumerate() {
                    let v = self
                        .blocks
                        .iter()
                        .enumerate()
                        .map(|(i, b)| b.get(r, dec.coords[x][i], dec.coords[y][i]))
                        .sum::<u64>();
                    f.set(r, x, y, v % m);
                }
            }
        }
        f
    }
}

fn factor_block(g: &CayleyTable, dec: &SocleDecomposition, i: usize) -> CocycleMatrix {
    let elems = dec.factors[i].elements();
    let t = elems.len();
    let mut f = CocycleMatrix::zero(&dec.ext.moduli, t);
    for x in 0..t {
        for y in 0..t {
            for (r, v) in dec.ext.value(g, elems[x], elems[y]).into_iter().enumerate() {
                f.set(r, x, y, v);
            }
        }
    }
    f
}

/// Conjugacy classes of `g`, each sorted, in order of least element.
fn conjugacy_classes(g: &CayleyTable) -> Vec<Vec<usize>> {
    let gens = generating_set(g);
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        seen[x] = true;
        let mut class = vec![x];
        let mut i = 0;
        while i < class.len() {
            let y = class[i];
            for &s in &gens {
                let z = g.conj(y, s);
                if !seen[z] {
                    seen[z] = true;
                    class.push(z);
                }
            }
            i += 1;
        }
        class.sort_unstable();
        out.push(class);
    }
    out
}

fn is_abelian_set(g: &CayleyTable, s: &[usize]) -> bool {
    s.iter().all(|&a| s.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// Whether no non-trivial normal subgroup of `g` is abelian: the normal closure
/// of every element of prime order is non-abelian.
pub fn no_abelian_normal(g: &CayleyTable) -> bool {
    conjugacy_classes(g).iter().all(|c| {
        let x = c[0];
        if x == 0 || !crate::arith::is_prime(g.element_order(x) as u64) {
            return true;
        }
        !is_abelian_set(g, closure(g, c).elements())
    })
}

fn is_perfect(g: &CayleyTable) -> bool {
    let n = g.order();
    let mut comms = Vec::new();
    let mut mark = vec![false; n];
    for a in 0..n {
        for b in 0..n {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if !mark[c] {
                mark[c] = true;
                comms.push(c);
            }
        }
    }
    closure(g, &comms).order() == n
}

/// Minimal normal subgroups among normal closures of conjugacy classes.
fn minimal_normals(q: &CayleyTable) -> Vec<Subgroup> {
    let mut closures: Vec<Subgroup> = conjugacy_classes(q)
        .iter()
        .filter(|c| c[0] != 0)
        .map(|c| closure(q, c))
        .collect();
    closures.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    closures.dedup();
    let mut out: Vec<Subgroup> = Vec::new();
    for n in closures {
        if !out.iter().any(|m| m.elements().iter().all(|&x| n.contains(x))) {
            out.push(n);
        }
    }
    out
}

/// Local coordinates of every element if the factors form a direct product.
fn direct_coordinates(q: &CayleyTable, factors: &[Subgroup]) -> Option<Vec<Vec<usize>>> {
    if factors.iter().map(|f| f.order()).product::<usize>() != q.order() {
        return None;
    }
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            let commute = a.elements().iter().all(|&x| b.elements().iter().all(|&y| q.mul(x, y) == q.mul(y, x)));
            if !commute {
                return None;
            }
        }
    }
    let mut coords: Vec<Option<Vec<usize>>> = vec![None; q.order()];
    let mut local = vec![0usize; factors.len()];
    loop {
        let x = local.iter().enumerate().fold(0, |acc, (i, &t)| q.mul(acc, factors[i].elements()[t]));
        if coords[x].is_some() {
            return None;
        }
        coords[x] = Some(local.clone());
        let mut i = 0;
        loop {
            if i == local.len() {
                return coords.into_iter().collect();
            }
            local[i] += 1;
            if local[i] < factors[i].order() {
                break;
            }
            local[i] = 0;
            i += 1;
        }
    }
}

/// Decompose `g` over its center, or say why it is outside the class.
pub fn check_central_radical(g: &CayleyTable) -> Result<SocleDecomposition, RadicalFailure> {
    let (center, p) = elementary_center(g).map_err(|_| RadicalFailure::CenterNotElementary)?;
    let ext = extension_data(g, &center).map_err(|_| RadicalFailure::CenterNotElementary)?;
    let q = &ext.quotient;
    if !no_abelian_normal(q) {
        return Err(RadicalFailure::RadicalNotCentral);
    }
    let (kind, factors, coords) = if q.order() == 1 {
        (FactorKind::Simple, Vec::new(), vec![Vec::new()])
    } else {
        let mins = minimal_normals(q);
        match direct_coordinates(q, &mins) {
            Some(c) => (FactorKind::Simple, mins, c),
            None if q.order() <= PERFECT_FACTOR_BOUND && is_perfect(q) => {
                let whole = Subgroup::whole(q);
                let coords = (0..q.order()).map(|x| vec![x]).collect();
                (FactorKind::PerfectBounded, vec![whole], coords)
            }
            None => return Err(RadicalFailure::FactorsNotFound),
        }
    };
    let factor_tables: Vec<CayleyTable> = factors.iter().map(|f| f.to_table(q)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = Vec::new();
    let mut reference = Vec::new();
    for (i, t) in factor_tables.iter().enumerate() {
        let hit = classes.iter().enumerate().find_map(|(c, members)| {
            oracle_iso(&factor_tables[members[0]], t).map(|iso| (c, iso))
        });
        match hit {
            Some((c, iso)) => {
                classes[c].push(i);
                class_of.push(c);
                reference.push(iso);
            }
            None => {
                class_of.push(classes.len());
                classes.push(vec![i]);
                reference.push(GroupHom::identity(t.order()));
            }
        }
    }
    let preimages = factors
        .iter()
        .map(|f| {
            let elems = (0..g.order()).filter(|&x| f.contains(ext.projection.apply(x))).collect();
            Subgroup::from_elements(g, elems)
        })
        .collect();
    let k = ext.k();
    Ok(SocleDecomposition { center, p, k, ext, kind, factors, factor_tables, classes, class_of, preimages, reference, coords })
}

/// Every diagonal, in lexicographic order of the per-factor automorphism lists.
pub fn enumerate_diagonals(dec: &SocleDecomposition) -> Result<Vec<Diagonal>, CentradError> {
    let auts: Vec<Vec<GroupHom>> = dec.factor_tables.iter().map(oracle_aut).collect::<Result<_, _>>()?;
    let total = auts.iter().map(|a| a.len()).try_fold(1usize, |acc, n| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if total > MAX_DIAGONALS {
        return Err(CentradError::TooLarge(total));
    }
    Ok(odometer(&auts.iter().map(|a| a.len()).collect::<Vec<_>>())
        .into_iter()
        .map(|idx| Diagonal { parts: idx.iter().enumerate().map(|(i, &a)| auts[i][a].clone()).collect() })
        .collect())
}

/// All index tuples below `sizes`, last coordinate fastest.
fn odometer(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out.into_iter().flat_map(|v| (0..s).map(move |i| [v.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Projections for each factor class, computed on the class's first factor.
pub fn class_projections(dec: &SocleDecomposition) -> Vec<Projection> {
    dec.classes.iter().map(|c| invariant_projection(&dec.factor_tables[c[0]], dec.p, dec.k)).collect()
}

fn block_width(projections: &[Projection]) -> usize {
    projections.iter().map(|p| p.width()).max().unwrap_or(0)
}

fn padded(m: FpMatrix, width: usize) -> FpMatrix {
    let extra = width - m.cols();
    if extra == 0 {
        return m;
    }
    m.hstack(&FpMatrix::zeros(m.p(), m.rows(), extra))
}

fn hstack_all(p: u64, k: usize, blocks: &[FpMatrix]) -> FpMatrix {
    blocks.iter().fold(FpMatrix::zeros(p, k, 0), |acc, b| acc.hstack(b))
}

/// The block matrix of `f` after applying `δ` to each factor: block `i` holds
/// the projected coordinates of `f_i ∘ δ_i`, read through the reference
/// identification of factor `i` with the first factor of its class.
pub fn prod_projection(dec: &SocleDecomposition, delta: &Diagonal, f: &ProdCocycle, projections: &[Projection]) -> FpMatrix {
    let width = block_width(projections);
    let blocks: Vec<FpMatrix> = (0..dec.len())
        .map(|i| {
            let proj = &projections[dec.class_of[i]];
            let pulled = f.blocks[i].pull_back(&dec.reference[i].then(&delta.parts[i]));
            padded(proj.coordinates(&pulled), width)
        })
        .collect();
    hstack_all(dec.p, dec.k, &blocks)
}

/// A block permutation with its matrix: block `i` of `X·M1` is block
/// `sigma[i]` of `M2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatch {
    pub sigma: Vec<usize>,
    pub x: FpMatrix,
}

fn block_columns(width: usize, blocks: &[usize]) -> Vec<usize> {
    blocks.iter().flat_map(|&b| b * width..(b + 1) * width).collect()
}

/// All class-preserving block permutations `σ` admitting an invertible `X`
/// with `X·M1_i = M2_σ(i)` for every block `i`, one `X` each. `classes[i]` is
/// the class label of block `i`.
pub fn block_code_equiv(m1: &FpMatrix, m2: &FpMatrix, classes: &[usize]) -> Result<Vec<BlockMatch>, CentradError> {
    let l = classes.len();
    if m1.rows() != m2.rows() || m1.cols() != m2.cols() || (l == 0 && m1.cols() != 0) || (l > 0 && m1.cols() % l != 0) {
        return Err(CentradError::ShapeMismatch);
    }
    let width = if l == 0 { 0 } else { m1.cols() / l };
    let (p, k) = (m1.p(), m1.rows());
    let rank = |m: &FpMatrix, i: usize| m.select_columns(&block_columns(width, &[i])).rank();
    let rank1: Vec<usize> = (0..l).map(|i| rank(m1, i)).collect();
    let rank2: Vec<usize> = (0..l).map(|i| rank(m2, i)).collect();
    let mut out = Vec::new();
    // depth-first over σ, pruned by row spaces of the assigned prefix
    fn walk(
        st: &mut (Vec<usize>, Vec<bool>),
        ctx: &(&[usize], &[usize], &[usize], &FpMatrix, &FpMatrix, usize, u64, usize),
        out: &mut Vec<BlockMatch>,
    ) {
        let (classes, rank1, rank2, m1, m2, width, p, k) = *ctx;
        let i = st.0.len();
        let l = classes.len();
        if i == l {
            let target = m2.select_columns(&block_columns(width, &st.0));
            let x = if k == 0 { Some(FpMatrix::zeros(p, 0, 0)) } else { row_span_transform(m1, &target) };
            if let Some(x) = x {
                out.push(BlockMatch { sigma: st.0.clone(), x });
            }
            return;
        }
        for j in 0..l {
            if st.1[j] || classes[j] != classes[i] || rank1[i] != rank2[j] {
                continue;
            }
            st.0.push(j);
            let ok = k == 0 || {
                let a = m1.select_columns(&block_columns(width, &(0..=i).collect::<Vec<_>>()));
                let b = m2.select_columns(&block_columns(width, &st.0));
                a.row_space_basis() == b.row_space_basis()
            };
            if ok {
                st.1[j] = true;
                walk(st, ctx, out);
                st.1[j] = false;
            }
            st.0.pop();
        }
    }
    let mut st = (Vec::new(), vec![false; l]);
    walk(&mut st, &(classes, &rank1, &rank2, m1, m2, width, p, k), &mut out);
    exec::tick(out.len() as u64 + 1);
    Ok(out)
}

/// Split off a direct factor of the center: if the block matrix has rank
/// `r < k`, the center contains `A'` of rank `k − r` with `G ≅ A' × G/A'`.
/// Returns `A'` and `G/A'`.
pub fn split_off_center(g: &CayleyTable, dec: &SocleDecomposition) -> Result<Option<(Subgroup, CayleyTable)>, CentradError> {
    let projections = class_projections(dec);
    let m = prod_projection(dec, &identity_diagonal(dec), &ProdCocycle::from_extension(g, dec), &projections);
    let k = dec.k;
    let r = m.rank();
    if r == k {
        return Ok(None);
    }
    // P·M is in echelon form with zero rows r..k; new coordinates are P·c
    let pm = m.hstack(&FpMatrix::identity(dec.p, k)).rref().matrix;
    let pt = pm.select_columns(&(m.cols()..m.cols() + k).collect::<Vec<_>>());
    let inv = pt.inverse().expect("echelon transform is invertible");
    let gens: Vec<usize> =
        (r..k).map(|j| dec.ext.basis.element(g, &inv.column(j))).collect();
    let a = closure(g, &gens);
    let (reduced, _) = quotient(g, &a)?;
    Ok(Some((a, reduced)))
}

fn identity_diagonal(dec: &SocleDecomposition) -> Diagonal {
    Diagonal { parts: dec.factor_tables.iter().map(|t| GroupHom::identity(t.order())).collect() }
}

/// Precomputed comparison data for `G1` against `G2`.
struct Matching {
    /// Class labels of the blocks of `G1` and of `G2`, in `G1`'s numbering.
    labels1: Vec<usize>,
    labels2: Vec<usize>,
    m1: FpMatrix,
    /// For each factor `j` of `G2`: its automorphisms and, per automorphism, the
    /// id of the resulting block.
    auts2: Vec<Vec<GroupHom>>,
    block_ids: Vec<Vec<usize>>,
    blocks: Vec<Vec<FpMatrix>>,
    /// Isomorphism from `G1`'s class reference onto factor `j` of `G2`.
    reference2: Vec<GroupHom>,
}

fn prepare(
    g1: &CayleyTable,
    d1: &SocleDecomposition,
    g2: &CayleyTable,
    d2: &SocleDecomposition,
) -> Result<Option<Matching>, CentradError> {
    if g1.order() != g2.order() || d1.ext.moduli != d2.ext.moduli || d1.len() != d2.len() {
        return Ok(None);
    }
    if d1.class_sizes().len() != d2.class_sizes().len() {
        return Ok(None);
    }
    // match classes through their first factors
    let mut class_map = vec![usize::MAX; d1.classes.len()];
    let mut bridge = Vec::new();
    for (c, members) in d1.classes.iter().enumerate() {
        let r1 = &d1.factor_tables[members[0]];
        let hit = d2.classes.iter().enumerate().find_map(|(c2, m2)| {
            if m2.len() != members.len() || class_map.contains(&c2) {
                return None;
            }
            oracle_iso(r1, &d2.factor_tables[m2[0]]).map(|iso| (c2, iso))
        });
        let Some((c2, iso)) = hit else { return Ok(None) };
        class_map[c] = c2;
        bridge.push(iso);
    }
    let inverse_map: BTreeMap<usize, usize> = class_map.iter().enumerate().map(|(c, &c2)| (c2, c)).collect();
    let classes2: Vec<usize> = d2.class_of.iter().map(|c2| inverse_map[c2]).collect();
    let reference2: Vec<GroupHom> =
        (0..d2.len()).map(|j| bridge[classes2[j]].then(&d2.reference[j])).collect();
    let projections = class_projections(d1);
    let width = block_width(&projections);
    let m1 = prod_projection(d1, &identity_diagonal(d1), &ProdCocycle::from_extension(g1, d1), &projections);
    let f2 = ProdCocycle::from_extension(g2, d2);
    let auts2: Vec<Vec<GroupHom>> = d2.factor_tables.iter().map(oracle_aut).collect::<Result<_, _>>()?;
    let total = auts2.iter().map(|a| a.len()).try_fold(1usize, |acc, n| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if total > MAX_DIAGONALS {
        return Err(CentradError::TooLarge(total));
    }
    let mut block_ids = Vec::new();
    let mut blocks = Vec::new();
    for j in 0..d2.len() {
        let proj = &projections[classes2[j]];
        let mats = exec::par_map(&auts2[j], |d| {
            padded(proj.coordinates(&f2.blocks[j].pull_back(&reference2[j].then(d))), width)
        });
        let mut distinct: Vec<FpMatrix> = Vec::new();
        let ids = mats
            .into_iter()
            .map(|m| match distinct.iter().position(|x| *x == m) {
                Some(i) => i,
                None => {
                    distinct.push(m);
                    distinct.len() - 1
                }
            })
            .collect();
        block_ids.push(ids);
        blocks.push(distinct);
    }
    Ok(Some(Matching { labels1: d1.class_of.clone(), labels2: classes2, m1, auts2, block_ids, blocks, reference2 }))
}

impl Matching {
    fn l(&self) -> usize {
        self.auts2.len()
    }

    fn m2(&self, key: &[usize]) -> FpMatrix {
        let k = self.m1.rows();
        let p = self.m1.p();
        let blocks: Vec<FpMatrix> = key.iter().enumerate().map(|(j, &id)| self.blocks[j][id].clone()).collect();
        hstack_all(p, k, &blocks)
    }

    /// Block matches for `M2` given by per-factor block ids. Blocks of `G2` are
    /// relabelled so that `σ` reads as a map from `G1`'s blocks to `G2`'s.
    fn matches(&self, key: &[usize]) -> Vec<BlockMatch> {
        let m2 = self.m2(key);
        let (a, b) = (&self.labels1[..], &self.labels2[..]);
        let l = self.l();
        if a.iter().zip(b).all(|(x, y)| x == y) {
            return block_code_equiv(&self.m1, &m2, a).unwrap_or_default();
        }
        // reorder M2's blocks to line up with M1's labels, then undo the reorder
        let mut order: Vec<usize> = Vec::with_capacity(l);
        let mut taken = vec![false; l];
        for &c in a {
            let j = (0..l).find(|&j| !taken[j] && b[j] == c).expect("class counts agree");
            taken[j] = true;
            order.push(j);
        }
        let width = if l == 0 { 0 } else { m2.cols() / l };
        let m2r = m2.select_columns(&block_columns(width, &order));
        block_code_equiv(&self.m1, &m2r, a)
            .unwrap_or_default()
            .into_iter()
            .map(|bm| BlockMatch { sigma: bm.sigma.iter().map(|&s| order[s]).collect(), x: bm.x })
            .collect()
    }
}

/// The quotient isomorphism `Q1 → Q2` sending factor `i` to factor `σ(i)` via
/// `t ↦ d_σ(i)(ρ2_σ(i)(ρ1_i⁻¹(t)))`.
fn quotient_map(d1: &SocleDecomposition, d2: &SocleDecomposition, mt: &Matching, diag: &[usize], sigma: &[usize]) -> GroupHom {
    let l = d1.len();
    let local: Vec<GroupHom> = (0..l)
        .map(|i| {
            let j = sigma[i];
            let inv = d1.reference[i].inverse().expect("reference is bijective");
            inv.then(&mt.reference2[j]).then(&mt.auts2[j][diag[j]])
        })
        .collect();
    let q1 = &d1.ext.quotient;
    let image = (0..q1.order())
        .map(|x| {
            let c = d1.coordinates(x);
            let mut target = vec![0; l];
            for i in 0..l {
                target[sigma[i]] = local[i].apply(c[i]);
            }
            d2.compose(&target)
        })
        .collect();
    GroupHom::new(image, d2.ext.quotient.order())
}

fn decompose_pair(g1: &CayleyTable, g2: &CayleyTable) -> Result<Option<(SocleDecomposition, SocleDecomposition)>, CentradError> {
    match (check_central_radical(g1), check_central_radical(g2)) {
        (Ok(a), Ok(b)) => Ok(Some((a, b))),
        (Err(e), Err(_)) => Err(CentradError::NotCentralRadical(e)),
        _ => Ok(None),
    }
}

/// Search the diagonals of `G2` for a block match, lifting the first success.
fn find_isomorphism(
    g1: &CayleyTable,
    d1: &SocleDecomposition,
    g2: &CayleyTable,
    d2: &SocleDecomposition,
) -> Result<Option<GroupHom>, CentradError> {
    let Some(mt) = prepare(g1, d1, g2, d2)? else { return Ok(None) };
    let diagonals = odometer(&mt.auts2.iter().map(|a| a.len()).collect::<Vec<_>>());
    exec::tick(diagonals.len() as u64);
    let mut first_of: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut keys: Vec<Vec<usize>> = Vec::new();
    for (n, diag) in diagonals.iter().enumerate() {
        let key: Vec<usize> = diag.iter().enumerate().map(|(j, &a)| mt.block_ids[j][a]).collect();
        if !first_of.contains_key(&key) {
            first_of.insert(key.clone(), n);
            keys.push(key);
        }
    }
    let verdicts = exec::par_map(&keys, |key| mt.matches(key));
    for (key, found) in keys.iter().zip(verdicts) {
        let diag = &diagonals[first_of[key]];
        for bm in found {
            let beta = quotient_map(d1, d2, &mt, diag, &bm.sigma);
            if let Some(h) = lift_map(g1, &d1.ext, g2, &d2.ext, &bm.x, &beta) {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}

/// Decide isomorphism of two central-radical groups.
pub fn iso_centrad(g1: &CayleyTable, g2: &CayleyTable) -> Result<bool, CentradError> {
    let Some((d1, d2)) = decompose_pair(g1, g2)? else { return Ok(false) };
    Ok(find_isomorphism(g1, &d1, g2, &d2)?.is_some())
}

/// An isomorphism `G1 → G2` of two central-radical groups, if one exists.
pub fn iso_centrad_witness(g1: &CayleyTable, g2: &CayleyTable) -> Result<Option<GroupHom>, CentradError> {
    let Some((d1, d2)) = decompose_pair(g1, g2)? else { return Ok(None) };
    find_isomorphism(g1, &d1, g2, &d2)
}

/// An isomorphism `G1 → G2` if one exists, and generators of `Aut(G1)`.
pub fn aut_coset_centrad(g1: &CayleyTable, g2: &CayleyTable) -> Result<(Option<GroupHom>, Vec<GroupHom>), CentradError> {
    let d1 = check_central_radical(g1).map_err(CentradError::NotCentralRadical)?;
    let iso = match check_central_radical(g2) {
        Ok(d2) => find_isomorphism(g1, &d1, g2, &d2)?,
        Err(_) => None,
    };
    Ok((iso, automorphism_generators(g1, &d1)?))
}

/// Canonical id of `d·Inn(t)`: the least image vector over the coset.
fn outer_class(t: &CayleyTable, d: &GroupHom) -> Vec<usize> {
    (0..t.order())
        .map(|s| (0..t.order()).map(|x| d.apply(t.conj(x, s))).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn automorphism_generators(g: &CayleyTable, d: &SocleDecomposition) -> Result<Vec<GroupHom>, CentradError> {
    let n = g.order();
    let (p, k) = (d.p, d.k);
    let e = &d.ext;
    let mut gens: Vec<GroupHom> = Vec::new();
    // inner automorphisms cover the inner automorphisms of the quotient
    let mut checked: Vec<GroupHom> = Vec::new();
    for s in generating_set(g) {
        checked.push(GroupHom::new((0..n).map(|x| g.conj(x, s)).collect(), n));
    }
    // shears by homomorphisms Q → A
    if k > 0 {
        let q = &e.quotient;
        let zero = |_: usize, _: usize| 0u64;
        let (_, homs) = solve_coboundary(q, &generating_set(q), p, &zero)
            .ok_or_else(|| CentradError::HypothesisFailed("homogeneous system".into()))?;
        for h in &homs {
            for i in 0..k {
                let image = (0..n)
                    .map(|x| {
                        let (mut a, qx) = e.split(g, x);
                        a[i] = (a[i] + h[qx]) % p;
                        e.element(g, &a, qx)
                    })
                    .collect();
                checked.push(GroupHom::new(image, n));
            }
        }
    }
    if let Some(bad) = checked.iter().position(|h| !h.is_isomorphism(g, g)) {
        return Err(CentradError::HypothesisFailed(format!("generator {bad} is not an automorphism")));
    }
    // lifts are verified inside lift_map
    gens.extend(checked);
    // one lift per outer class of admissible quotient automorphisms
    if let Some(mt) = prepare(g, d, g, d)? {
        let outer: Vec<Vec<Vec<usize>>> = (0..d.len())
            .map(|j| mt.auts2[j].iter().map(|a| outer_class(&d.factor_tables[j], a)).collect())
            .collect();
        let diagonals = odometer(&mt.auts2.iter().map(|a| a.len()).collect::<Vec<_>>());
        let mut cache: HashMap<Vec<usize>, Vec<BlockMatch>> = HashMap::new();
        let mut done: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
        for diag in &diagonals {
            let key: Vec<usize> = diag.iter().enumerate().map(|(j, &a)| mt.block_ids[j][a]).collect();
            let found = cache.entry(key.clone()).or_insert_with(|| mt.matches(&key)).clone();
            for bm in found {
                let tag = (bm.sigma.clone(), diag.iter().enumerate().map(|(j, &a)| outer[j][a].clone()).collect());
                if done.contains(&tag) {
                    continue;
                }
                done.push(tag);
                let beta = quotient_map(d, d, &mt, diag, &bm.sigma);
                if let Some(h) = lift_map(g, e, g, e, &bm.x, &beta) {
                    gens.push(h);
                }
            }
        }
        // automorphisms of A fixing the class
        if k > 0 {
            let id = GroupHom::identity(e.quotient.order());
            for x in stabilizer_generators(&mt.m1) {
                if let Some(h) = lift_map(g, e, g, e, &x, &id) {
                    gens.push(h);
                }
            }
        }
    }
    gens.sort();
    gens.dedup();
    Ok(gens)
}
