use std::collections::BTreeMap;

use super::GraphError;
use crate::exec;
use crate::perm::{
    coset_intersection, minimal_blocks, orbits, transversal, Blocks, Perm, PermCoset, PermGroup,
    TRANSVERSAL_CAP,
};

/// A coloring of the points `0..colors.len()` restricted to attention on
/// `points`. Points outside `points` are ignored by [`color_coset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDomain {
    pub points: Vec<usize>,
    pub colors: Vec<usize>,
}

impl ColoredDomain {
    pub fn new(points: Vec<usize>, colors: Vec<usize>) -> Self {
        ColoredDomain { points, colors }
    }
}

/// All `π` in `coset` with `target.colors[π(b)] == domain.colors[b]` for every
/// `b` in `domain.points`. The point set must be stable under the coset's group.
/// A non-empty result is a left coset of the color-preserving subgroup.
pub fn color_coset(domain: &ColoredDomain, target: &ColoredDomain, coset: &PermCoset) -> PermCoset {
    let Some(rep) = &coset.rep else {
        return coset.clone();
    };
    debug_assert!(domain.points.iter().all(|&b| coset
        .group
        .generators()
        .iter()
        .all(|g| domain.points.contains(&g.apply(b)))));
    let mut b = domain.points.clone();
    b.sort_unstable();
    b.dedup();
    let ctx = Ctx { src: &domain.colors, dst: &target.colors };
    ctx.run(&b, rep, &coset.group)
}

struct Ctx<'a> {
    src: &'a [usize],
    dst: &'a [usize],
}

impl Ctx<'_> {
    fn run(&self, b: &[usize], sigma: &Perm, g: &PermGroup) -> PermCoset {
        exec::tick(b.len() as u64);
        let n = g.degree();
        if b.is_empty() {
            return PermCoset::new(sigma.clone(), g.clone());
        }
        // Color histograms must agree before anything else.
        let mut hist: BTreeMap<usize, i64> = BTreeMap::new();
        for &x in b {
            *hist.entry(self.src[x]).or_default() += 1;
            *hist.entry(self.dst[sigma.apply(x)]).or_default() -= 1;
        }
        if hist.values().any(|&c| c != 0) {
            return PermCoset::empty(n);
        }
        if b.iter().all(|&x| self.src[x] == self.src[b[0]]) {
            // One color on both sides after the histogram test: every element qualifies.
            return PermCoset::new(sigma.clone(), g.clone());
        }
        if b.len() == 1 {
            // The group fixes the single point, so the histogram test decided it.
            return PermCoset::new(sigma.clone(), g.pointwise_stabilizer(b));
        }
        let parts: Vec<Vec<usize>> = orbits(g).into_iter().filter(|o| b.contains(&o[0])).collect();
        if parts.len() > 1 {
            let pieces = exec::par_map(&parts, |z| self.run(z, sigma, g));
            return intersect_all(pieces, n);
        }
        self.transitive(b, sigma, g)
    }

    fn transitive(&self, b: &[usize], sigma: &Perm, g: &PermGroup) -> PermCoset {
        let n = g.degree();
        let pos: BTreeMap<usize, usize> = b.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let local: Vec<Perm> = g
            .generators()
            .iter()
            .map(|s| Perm::from_images(b.iter().map(|&x| pos[&s.apply(x)]).collect()).unwrap())
            .collect();
        let on_b = PermGroup::new(&local, b.len()).unwrap();
        let blocks = match minimal_blocks(&on_b).expect("transitive on the point set") {
            Blocks::System(s) => s,
            Blocks::Primitive => (0..b.len()).map(|i| vec![i]).collect(),
        };
        let mut block_of = vec![0; b.len()];
        for (i, blk) in blocks.iter().enumerate() {
            for &x in blk {
                block_of[x] = i;
            }
        }
        let images: Vec<Perm> = local
            .iter()
            .map(|s| Perm::from_images(blocks.iter().map(|blk| block_of[s.apply(blk[0])]).collect()).unwrap())
            .collect();
        let kernel = g.kernel_of_action(&images).expect("block action");
        let taus = transversal(g, &kernel, TRANSVERSAL_CAP).expect("transversal within cap");
        let pieces = exec::par_map(&taus, |t| self.run(b, &sigma.compose(t), &kernel));
        union_of(pieces, n)
    }
}

/// Pairwise intersections in a balanced tree, left to right.
fn intersect_all(mut pieces: Vec<PermCoset>, n: usize) -> PermCoset {
    if pieces.iter().any(|c| c.is_empty()) {
        return PermCoset::empty(n);
    }
    while pieces.len() > 1 {
        let mut next = Vec::with_capacity(pieces.len().div_ceil(2));
        let mut it = pieces.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(c) => {
                    let r = coset_intersection(&a, &c);
                    if r.is_empty() {
                        return r;
                    }
                    next.push(r);
                }
                None => next.push(a),
            }
        }
        pieces = next;
    }
    pieces.pop().unwrap_or_else(|| PermCoset::empty(n))
}

/// The union of cosets of one common subgroup, which is itself a coset.
fn union_of(pieces: Vec<PermCoset>, n: usize) -> PermCoset {
    let mut first: Option<Perm> = None;
    let mut gens: Vec<Perm> = Vec::new();
    for c in pieces {
        let Some(r) = c.rep else { continue };
        match &first {
            None => first = Some(r),
            Some(f) => gens.push(f.inverse().compose(&r)),
        }
        gens.extend(c.group.generators().iter().cloned());
    }
    match first {
        None => PermCoset::empty(n),
        Some(f) => {
            gens.retain(|p| !p.is_identity());
            PermCoset::new(f, PermGroup::new(&gens, n).unwrap().reduced())
        }
    }
}

/// A `rows × cols` matrix of edge colors between row and column vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteColorMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BipartiteColorMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        BipartiteColorMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        BipartiteColorMatrix::new(r, c, rows.concat())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
}

/// Row points `0..d` and column points `d..d+k` of both matrices, colored by
/// iterated refinement: a row's new color is its old color together with the
/// multiset of (column color, entry) along it, and likewise for columns. The
/// colors are isomorphism invariants and comparable between `a` and `b`.
fn refined_classes(
    a: &BipartiteColorMatrix,
    b: &BipartiteColorMatrix,
) -> (BTreeMap<usize, Vec<usize>>, BTreeMap<usize, Vec<usize>>) {
    let (d, k) = a.shape();
    let m = d + k;
    let mut colors = [vec![0usize; m], vec![0usize; m]];
    for j in 0..k {
        colors[0][d + j] = 1;
        colors[1][d + j] = 1;
    }
    let mut count = 2;
    loop {
        let keys: Vec<Vec<(usize, Vec<(usize, u64)>)>> = [a, b]
            .iter()
            .zip(&colors)
            .map(|(x, c)| {
                (0..m)
                    .map(|p| {
                        let mut sig: Vec<(usize, u64)> = if p < d {
                            (0..k).map(|j| (c[d + j], x.get(p, j))).collect()
                        } else {
                            (0..d).map(|i| (c[i], x.get(i, p - d))).collect()
                        };
                        sig.sort_unstable();
                        (c[p], sig)
                    })
                    .collect()
            })
            .collect();
        let ids: BTreeMap<&(usize, Vec<(usize, u64)>), usize> = keys
            .iter()
            .flatten()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(n, key)| (key, n))
            .collect();
        for (side, ks) in keys.iter().enumerate() {
            for (p, key) in ks.iter().enumerate() {
                colors[side][p] = ids[key];
            }
        }
        // refinement only splits classes, so an unchanged count means stable
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }
    let group = |c: &[usize]| {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (p, &x) in c.iter().enumerate() {
            out.entry(x).or_default().push(p);
        }
        out
    };
    (group(&colors[0]), group(&colors[1]))
}

/// All `(row perm, column perm)` pairs carrying `a` onto `b`, i.e.
/// `b[σ₀(i)][σ₁(j)] == a[i][j]`. Pairs are encoded as permutations of
/// `0..rows+cols` with rows first.
pub fn colored_bipartite_iso(
    a: &BipartiteColorMatrix,
    b: &BipartiteColorMatrix,
) -> Result<PermCoset, GraphError> {
    if a.shape() != b.shape() {
        return Err(GraphError::DimensionMismatch(a.shape(), b.shape()));
    }
    let (d, k) = a.shape();
    let m = d + k;
    if d == 0 || k == 0 {
        let g = PermGroup::young(m, &[(0..d).collect(), (d..m).collect()]);
        return Ok(PermCoset::from_group(g));
    }
    let cell = |i: usize, j: usize| m + i * k + j;
    let lift = |p: &Perm| {
        let mut im: Vec<usize> = p.images();
        for i in 0..d {
            for j in 0..k {
                im.push(cell(p.apply(i), p.apply(d + j) - d));
            }
        }
        Perm::from_images(im).unwrap()
    };
    // Start from the coset matching refined classes instead of the whole
    // Sym(d) × Sym(k).
    let (ca, cb) = refined_classes(a, b);
    if ca.len() != cb.len() || ca.iter().zip(&cb).any(|((ka, pa), (kb, pb))| ka != kb || pa.len() != pb.len()) {
        return Ok(PermCoset::empty(m));
    }
    let mut images = vec![0; m];
    for (pa, pb) in ca.values().zip(cb.values()) {
        for (&x, &y) in pa.iter().zip(pb) {
            images[x] = y;
        }
    }
    let rep = lift(&Perm::from_images(images).unwrap());
    let parts: Vec<Vec<usize>> = ca.into_values().collect();
    let base = PermGroup::young(m, &parts);
    let gens: Vec<Perm> = base.generators().iter().map(lift).collect();
    let total = m + d * k;
    let g = PermGroup::new(&gens, total).unwrap();

    // Intern the colors so both matrices share one palette.
    let mut palette: BTreeMap<u64, usize> = BTreeMap::new();
    for &x in a.data.iter().chain(&b.data) {
        let next = palette.len() + 1;
        palette.entry(x).or_insert(next);
    }
    let mut src = vec![0; total];
    let mut dst = vec![0; total];
    for i in 0..d {
        for j in 0..k {
            src[cell(i, j)] = palette[&a.get(i, j)];
            dst[cell(i, j)] = palette[&b.get(i, j)];
        }
    }
    let points: Vec<usize> = (m..total).collect();
    let res = color_coset(
        &ColoredDomain::new(points.clone(), src),
        &ColoredDomain::new(points, dst),
        &PermCoset::new(rep, g),
    );
    Ok(match res.rep {
        None => PermCoset::empty(m),
        Some(r) => {
            let hg: Vec<Perm> = res.group.generators().iter().map(|p| p.restrict(0..m)).collect();
            PermCoset::new(r.restrict(0..m), PermGroup::new(&hg, m).unwrap())
        }
    })
}
