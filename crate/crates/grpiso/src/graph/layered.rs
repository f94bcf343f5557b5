use std::collections::{BTreeMap, HashMap};

use super::color::{color_coset, ColoredDomain};
use super::{Graph, GraphError};
use crate::exec;
use crate::perm::{Perm, PermCoset, PermGroup};

const UNREACHED: usize = usize::MAX;

fn check_size(x: &Graph) -> Result<(), GraphError> {
    if x.order() > 64 {
        return Err(GraphError::Invalid("at most 64 vertices are supported".into()));
    }
    Ok(())
}

fn check_edge(x: &Graph, e: (usize, usize)) -> Result<(), GraphError> {
    check_size(x)?;
    if e.0 >= x.order() || e.1 >= x.order() || !x.has_edge(e.0, e.1) {
        return Err(GraphError::EdgeMissing(e.0, e.1));
    }
    Ok(())
}

/// BFS distance of every vertex from the endpoints of `e`.
fn distances(x: &Graph, e: (usize, usize)) -> Vec<usize> {
    let mut d = vec![UNREACHED; x.order()];
    d[e.0] = 0;
    d[e.1] = 0;
    let mut queue = vec![e.0, e.1];
    let mut i = 0;
    while i < queue.len() {
        let v = queue[i];
        for w in x.neighbors(v) {
            if d[w] == UNREACHED {
                d[w] = d[v] + 1;
                queue.push(w);
            }
        }
        i += 1;
    }
    d
}

fn in_layer(d: &[usize], e: (usize, usize), u: usize, v: usize, r: usize) -> bool {
    let (du, dv) = (d[u], d[v]);
    if du == UNREACHED || dv == UNREACHED {
        return false;
    }
    if (u.min(v), u.max(v)) == (e.0.min(e.1), e.0.max(e.1)) {
        return true;
    }
    if du == dv {
        du + 2 <= r
    } else {
        du.max(dv) < r
    }
}

/// The union of all paths through `e` with at most `r` edges, on the same
/// vertex labels. `r = 1` gives the edge alone.
pub fn layered_subgraph(x: &Graph, e: (usize, usize), r: usize) -> Result<Graph, GraphError> {
    check_edge(x, e)?;
    let d = distances(x, e);
    let edges: Vec<(usize, usize)> = x.edges().filter(|&(u, v)| in_layer(&d, e, u, v, r.max(1))).collect();
    let mut g = Graph::new(x.order(), &edges)?;
    g.colors = x.colors.clone();
    Ok(g)
}

fn mask_of(vs: impl IntoIterator<Item = usize>) -> u64 {
    vs.into_iter().fold(0, |m, v| m | (1u64 << v))
}

fn map_mask(p: &[usize], mask: u64) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        out |= 1u64 << p[v];
        rest &= rest - 1;
    }
    out
}

/// What appears when passing from layer `r` to layer `r + 1`.
struct Step {
    /// New vertices grouped by their set of neighbors in the old layer.
    children: BTreeMap<u64, Vec<usize>>,
    /// Edges of the next layer between old vertices that are not yet present.
    new_edges: Vec<u64>,
    new_count: usize,
}

fn step(x: &Graph, d: &[usize], r: usize) -> Step {
    let mut children: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut new_count = 0;
    for v in 0..x.order() {
        if d[v] == r {
            let fathers = x.neighbors(v).into_iter().filter(|&w| d[w] + 1 == r);
            children.entry(mask_of(fathers)).or_default().push(v);
            new_count += 1;
        }
    }
    for kids in children.values_mut() {
        kids.sort_by_key(|&v| (x.color(v), v));
    }
    let new_edges = if r >= 2 {
        x.edges().filter(|&(u, v)| d[u] == r - 1 && d[v] == r - 1).map(|(u, v)| mask_of([u, v])).collect()
    } else {
        Vec::new()
    };
    Step { children, new_edges, new_count }
}

fn transposition_and_cycle(m: usize, pts: &[usize]) -> Vec<Perm> {
    if pts.len() < 2 {
        return Vec::new();
    }
    let mut out = vec![Perm::from_cycles(m, &[&pts[..2]])];
    if pts.len() > 2 {
        out.push(Perm::from_cycles(m, &[pts]));
    }
    out
}

fn kernel_gens(x: &Graph, s: &Step) -> Vec<Perm> {
    let mut out = Vec::new();
    for kids in s.children.values() {
        for chunk in kids.chunk_by(|&u, &v| x.color(u) == x.color(v)) {
            out.extend(transposition_and_cycle(x.order(), chunk));
        }
    }
    out
}

/// Generators of the automorphisms of layer `r + 1` that fix layer `r`
/// pointwise: the full symmetric groups on new vertices sharing both their
/// neighbors in layer `r` and their color.
pub fn kernel_layer_generators(x: &Graph, e: (usize, usize), r: usize) -> Result<Vec<Perm>, GraphError> {
    check_edge(x, e)?;
    let d = distances(x, e);
    Ok(kernel_gens(x, &step(x, &d, r)))
}

/// Fill in a partial map by pairing unused sources with unused targets in order.
fn complete(partial: &[Option<usize>]) -> Perm {
    let m = partial.len();
    let mut used = vec![false; m];
    for &t in partial.iter().flatten() {
        used[t] = true;
    }
    let mut free = (0..m).filter(|&t| !used[t]);
    Perm::from_images(partial.iter().map(|t| t.unwrap_or_else(|| free.next().unwrap())).collect())
        .expect("partial map is injective")
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kind {
    Father,
    Edge,
}

/// Isomorphisms from the component of `e` in `x` onto the component of `f` in
/// `y` that carry `e` onto `f`. Vertices outside the components are paired in
/// increasing order by the representative and fixed by the group.
pub(crate) fn edge_iso_coset(x: &Graph, e: (usize, usize), y: &Graph, f: (usize, usize)) -> PermCoset {
    let m = x.order();
    if y.order() != m {
        return PermCoset::empty(m);
    }
    let (dx, dy) = (distances(x, e), distances(y, f));
    let (a, b) = e;
    let (a2, b2) = f;
    let mut partial = vec![None; m];
    if x.color(a) == y.color(a2) && x.color(b) == y.color(b2) {
        partial[a] = Some(a2);
        partial[b] = Some(b2);
    } else if x.color(a) == y.color(b2) && x.color(b) == y.color(a2) {
        partial[a] = Some(b2);
        partial[b] = Some(a2);
    } else {
        return PermCoset::empty(m);
    }
    let mut sigma = complete(&partial);
    let mut gens: Vec<Perm> = if x.color(a) == x.color(b) { vec![Perm::from_cycles(m, &[&[a, b]])] } else { vec![] };
    let maxd = dx.iter().chain(&dy).filter(|&&v| v != UNREACHED).max().copied().unwrap_or(0);

    for r in 1..=maxd + 1 {
        exec::tick(1);
        let sx = step(x, &dx, r);
        let sy = step(y, &dy, r);
        if sx.new_count != sy.new_count || sx.new_edges.len() != sy.new_edges.len() {
            return PermCoset::empty(m);
        }
        if sx.new_count == 0 && sx.new_edges.is_empty() {
            continue;
        }
        let Some((rho, hgens)) = extendable(x, y, &sx, &sy, &sigma, &gens) else {
            return PermCoset::empty(m);
        };
        let lift = |p: &Perm, g: &Graph, st: &Step| -> Perm {
            let mut partial = vec![None; m];
            for v in 0..m {
                if dx[v] < r {
                    partial[v] = Some(p.apply(v));
                }
            }
            let pi = p.images();
            for (&mask, kids) in &sx.children {
                let tk = &st.children[&map_mask(&pi, mask)];
                debug_assert!(kids.iter().zip(tk).all(|(&u, &v)| x.color(u) == g.color(v)));
                for (&u, &v) in kids.iter().zip(tk) {
                    partial[u] = Some(v);
                }
            }
            // Old vertices map inside the old target layer, so the free
            // sources and targets are exactly the far vertices on each side.
            debug_assert!((0..m).all(|v| partial[v].is_none() || dx[v] <= r));
            complete(&partial)
        };
        let mut next: Vec<Perm> = hgens.iter().map(|h| lift(h, x, &sx)).collect();
        next.extend(kernel_gens(x, &sx));
        sigma = lift(&rho, y, &sy);
        next.retain(|p| !p.is_identity());
        gens = PermGroup::new(&next, m).unwrap().reduce_generators();
    }
    let group = PermGroup::new(&gens, m).unwrap();
    debug_assert!(group.generators().iter().all(|g| x.is_isomorphism(x, &g.images())));
    PermCoset::new(sigma, group)
}

/// The part of `sigma ∘ ⟨gens⟩` that extends to the next layer: a new
/// representative and generators of the extendable subgroup.
fn extendable(
    x: &Graph,
    y: &Graph,
    sx: &Step,
    sy: &Step,
    sigma: &Perm,
    gens: &[Perm],
) -> Option<(Perm, Vec<Perm>)> {
    let m = x.order();
    let gi: Vec<Vec<usize>> = gens.iter().map(|g| g.images()).collect();
    let si = sigma.images();
    let mut index: HashMap<(Kind, u64), usize> = HashMap::new();
    let mut points: Vec<(Kind, u64)> = Vec::new();
    let mut push = |key: (Kind, u64), points: &mut Vec<(Kind, u64)>| {
        if !index.contains_key(&key) {
            index.insert(key, points.len());
            points.push(key);
        }
    };
    for &mask in sx.children.keys() {
        push((Kind::Father, mask), &mut points);
    }
    for &mask in &sx.new_edges {
        push((Kind::Edge, mask), &mut points);
    }
    // Close under the group to get the attended points, then under the
    // representative as well so every permutation acts on the same set.
    let mut i = 0;
    while i < points.len() {
        let (k, mask) = points[i];
        for g in &gi {
            push((k, map_mask(g, mask)), &mut points);
        }
        i += 1;
    }
    let attended = points.len();
    let mut i = 0;
    while i < points.len() {
        let (k, mask) = points[i];
        for g in gi.iter().chain(std::iter::once(&si)) {
            push((k, map_mask(g, mask)), &mut points);
        }
        i += 1;
    }
    let ext = |p: &[usize]| -> Perm {
        let mut im = p.to_vec();
        im.extend(points.iter().map(|&(k, mask)| m + index[&(k, map_mask(p, mask))]));
        Perm::from_images(im).unwrap()
    };
    let total = m + points.len();

    let mut palette: BTreeMap<(Kind, Vec<usize>), usize> = BTreeMap::new();
    let mut color_of = |key: (Kind, Vec<usize>)| {
        let next = palette.len() + 1;
        *palette.entry(key).or_insert(next)
    };
    let mut src = vec![0; total];
    let mut dst = vec![0; total];
    for (i, &(k, mask)) in points.iter().enumerate() {
        let (cs, cd) = match k {
            Kind::Father => {
                let cx = sx.children.get(&mask).map_or(vec![], |v| v.iter().map(|&u| x.color(u)).collect());
                let cy = sy.children.get(&mask).map_or(vec![], |v| v.iter().map(|&u| y.color(u)).collect());
                (color_of((k, cx)), color_of((k, cy)))
            }
            Kind::Edge => {
                let ix = sx.new_edges.contains(&mask) as usize;
                let iy = sy.new_edges.contains(&mask) as usize;
                (color_of((k, vec![ix])), color_of((k, vec![iy])))
            }
        };
        src[m + i] = cs;
        dst[m + i] = cd;
    }
    let egens: Vec<Perm> = gi.iter().map(|g| ext(g)).collect();
    let coset = PermCoset::new(ext(&si), PermGroup::new(&egens, total).unwrap());
    let b: Vec<usize> = (m..m + attended).collect();
    let res = color_coset(&ColoredDomain::new(b.clone(), src), &ColoredDomain::new(b, dst), &coset);
    let rep = res.rep?;
    let h = res.group.generators().iter().map(|p| p.restrict(0..m)).collect();
    Some((rep.restrict(0..m), h))
}

/// Automorphisms of `x` that map the edge `e` to itself, possibly reversed.
pub fn aut_edge_fixed(x: &Graph, e: (usize, usize)) -> Result<PermGroup, GraphError> {
    check_edge(x, e)?;
    let m = x.order();
    let own = edge_iso_coset(x, e, x, e);
    let mut gens = own.group.generators().to_vec();
    let d = distances(x, e);
    if d.iter().any(|&v| v == UNREACHED) {
        // Everything outside the component of `e` moves independently.
        let top = (0..m).map(|v| x.color(v)).max().unwrap_or(0) + 1;
        let colors: Vec<usize> = (0..m).map(|v| if d[v] == UNREACHED { x.color(v) } else { top + v }).collect();
        let rest: Vec<(usize, usize)> = x.edges().filter(|&(u, _)| d[u] == UNREACHED).collect();
        let rest = Graph::new(m, &rest)?.with_colors(colors)?;
        gens.extend(graph_automorphisms(&rest)?.generators().iter().cloned());
    }
    Ok(PermGroup::new(&gens, m).unwrap())
}

fn edge_orbit(gens: &[Perm], e: (usize, usize)) -> Vec<(usize, usize)> {
    let n = |(u, v): (usize, usize)| (u.min(v), u.max(v));
    let mut out = vec![n(e)];
    let mut i = 0;
    while i < out.len() {
        let (u, v) = out[i];
        for g in gens {
            let f = n((g.apply(u), g.apply(v)));
            if !out.contains(&f) {
                out.push(f);
            }
        }
        i += 1;
    }
    out
}

/// The full color-preserving automorphism group.
pub fn graph_automorphisms(x: &Graph) -> Result<PermGroup, GraphError> {
    check_size(x)?;
    let m = x.order();
    let comps = x.components();
    let mut gens: Vec<Perm> = Vec::new();
    let mut isolated: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    // Representatives of isomorphism classes of non-trivial components.
    let mut classes: Vec<(usize, (usize, usize))> = Vec::new();
    for (ci, comp) in comps.iter().enumerate() {
        if comp.len() == 1 {
            isolated.entry(x.color(comp[0])).or_default().push(comp[0]);
            continue;
        }
        let edges: Vec<(usize, usize)> = x.edges().filter(|&(u, _)| comp.binary_search(&u).is_ok()).collect();
        let e0 = edges[0];
        let mut local = edge_iso_coset(x, e0, x, e0).group.generators().to_vec();
        let mut orbit = edge_orbit(&local, e0);
        for &f in &edges {
            if orbit.contains(&f) {
                continue;
            }
            if let Some(r) = edge_iso_coset(x, e0, x, f).rep {
                local.push(r);
                orbit = edge_orbit(&local, e0);
            }
        }
        gens.extend(local);
        let mut matched = false;
        for &(rj, rf) in &classes {
            let other = &comps[rj];
            if other.len() != comp.len() {
                continue;
            }
            if let Some(phi) = component_iso(x, rf, other, x, comp) {
                // Swap the two components through the isomorphism.
                let mut im: Vec<usize> = (0..m).collect();
                for (&u, &v) in other.iter().zip(&phi) {
                    im[u] = v;
                    im[v] = u;
                }
                gens.push(Perm::from_images(im).unwrap());
                matched = true;
                break;
            }
        }
        if !matched {
            classes.push((ci, e0));
        }
    }
    for pts in isolated.values() {
        gens.extend(transposition_and_cycle(m, pts));
    }
    gens.retain(|p| !p.is_identity());
    Ok(PermGroup::new(&gens, m).unwrap().reduced())
}

/// Images of the vertices of `cx` (in order) under some isomorphism onto the
/// component `cy` of `y`, if one exists. `e` is an edge of `cx`.
fn component_iso(x: &Graph, e: (usize, usize), cx: &[usize], y: &Graph, cy: &[usize]) -> Option<Vec<usize>> {
    let targets: Vec<(usize, usize)> = y.edges().filter(|&(u, _)| cy.binary_search(&u).is_ok()).collect();
    exec::par_find_first(&targets, |&f| {
        edge_iso_coset(x, e, y, f).rep.map(|r| cx.iter().map(|&v| r.apply(v)).collect())
    })
}

fn signature(g: &Graph, comp: &[usize]) -> (usize, usize, Vec<(usize, usize)>) {
    let mut dc: Vec<(usize, usize)> = comp.iter().map(|&v| (g.degree(v), g.color(v))).collect();
    dc.sort_unstable();
    let edges = dc.iter().map(|p| p.0).sum::<usize>() / 2;
    (comp.len(), edges, dc)
}

/// A color-preserving isomorphism `x → y`, if one exists.
pub fn graph_iso(x: &Graph, y: &Graph) -> Result<Option<Perm>, GraphError> {
    check_size(x)?;
    check_size(y)?;
    let m = x.order();
    if y.order() != m || x.edge_count() != y.edge_count() {
        return Ok(None);
    }
    let (cxs, cys) = (x.components(), y.components());
    if cxs.len() != cys.len() {
        return Ok(None);
    }
    let sig_y: Vec<_> = cys.iter().map(|c| signature(y, c)).collect();
    let mut used = vec![false; cys.len()];
    let mut images = vec![usize::MAX; m];
    for cx in &cxs {
        let sx = signature(x, cx);
        let mut found = false;
        for (j, cy) in cys.iter().enumerate() {
            if used[j] || sig_y[j] != sx {
                continue;
            }
            let phi = if cx.len() == 1 {
                Some(vec![cy[0]])
            } else {
                let e = x.edges().find(|&(u, _)| cx.binary_search(&u).is_ok()).unwrap();
                component_iso(x, e, cx, y, cy)
            };
            if let Some(phi) = phi {
                for (&u, &v) in cx.iter().zip(&phi) {
                    images[u] = v;
                }
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    let p = Perm::from_images(images).expect("components partition the vertices");
    debug_assert!(x.is_isomorphism(y, &p.images()));
    Ok(Some(p))
}
