use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::perm::{Perm, PermCoset, PermGroup};

fn all_perms(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    permute(&mut cur, 0, &mut out);
    out
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn brute_edge_aut(x: &Graph, e: (usize, usize)) -> u128 {
    all_perms(x.order())
        .iter()
        .filter(|p| x.is_isomorphism(x, p) && (x.has_edge(p[e.0], p[e.1]) && [p[e.0], p[e.1]].contains(&e.0) && [p[e.0], p[e.1]].contains(&e.1)))
        .count() as u128
}

fn brute_iso(x: &Graph, y: &Graph) -> bool {
    all_perms(x.order()).iter().any(|p| x.is_isomorphism(y, p))
}

fn random_graph(rng: &mut ChaCha8Rng, m: usize, p: f64, colors: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::new(m, &edges).unwrap();
    if colors > 1 {
        g.with_colors((0..m).map(|_| rng.gen_range(0..colors)).collect()).unwrap()
    } else {
        g
    }
}

/// Edges lying on some simple path through `e` with at most `r` edges.
fn brute_layer(x: &Graph, e: (usize, usize), r: usize) -> Vec<(usize, usize)> {
    let mut hit = std::collections::BTreeSet::new();
    fn grow(x: &Graph, path: &mut Vec<usize>, r: usize, e: (usize, usize), hit: &mut std::collections::BTreeSet<(usize, usize)>) {
        let has_e = path.windows(2).any(|w| (w[0].min(w[1]), w[0].max(w[1])) == e);
        if has_e {
            for w in path.windows(2) {
                hit.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        if path.len() > r {
            return;
        }
        let last = *path.last().unwrap();
        for w in x.neighbors(last) {
            if !path.contains(&w) {
                path.push(w);
                grow(x, path, r, e, hit);
                path.pop();
            }
        }
    }
    for s in 0..x.order() {
        grow(x, &mut vec![s], r, e, &mut hit);
    }
    hit.into_iter().collect()
}

#[test]
fn layer_examples() {
    let e = Graph::new(2, &[(0, 1)]).unwrap();
    assert_eq!(layered_subgraph(&e, (0, 1), 1).unwrap().edge_count(), 1);
    let p = Graph::path(3);
    assert_eq!(layered_subgraph(&p, (0, 1), 1).unwrap().edge_count(), 1);
    assert_eq!(layered_subgraph(&p, (0, 1), 2).unwrap(), p);
    let c = Graph::cycle(7);
    assert_eq!(layered_subgraph(&c, (0, 1), 6).unwrap(), c);
    assert_eq!(layered_subgraph(&p, (0, 2), 1), Err(GraphError::EdgeMissing(0, 2)));
}

#[test]
fn layers_match_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let m = rng.gen_range(2..8);
        let x = random_graph(&mut rng, m, 0.4, 1);
        let Some(e) = x.edges().next() else { continue };
        for r in 1..m {
            let got: Vec<_> = layered_subgraph(&x, e, r).unwrap().edges().collect();
            assert_eq!(got, brute_layer(&x, e, r), "{x:?} r={r}");
        }
    }
}

#[test]
fn kernel_examples() {
    // Distinct father sets.
    assert!(kernel_layer_generators(&Graph::path(3), (0, 1), 1).unwrap().is_empty());
    // Two and three leaves on vertex 1, beyond edge (0, 1).
    let two = Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
    assert_eq!(kernel_layer_generators(&two, (0, 1), 1).unwrap(), vec![Perm::from_cycles(4, &[&[2, 3]])]);
    let three = Graph::new(5, &[(0, 1), (1, 2), (1, 3), (1, 4)]).unwrap();
    let k = kernel_layer_generators(&three, (0, 1), 1).unwrap();
    assert_eq!(k.len(), 2);
    assert_eq!(PermGroup::new(&k, 5).unwrap().order(), 6);
}

#[test]
fn aut_examples() {
    let e = Graph::new(2, &[(0, 1)]).unwrap();
    assert_eq!(aut_edge_fixed(&e, (0, 1)).unwrap().order(), 2);
    assert_eq!(aut_edge_fixed(&Graph::path(3), (0, 1)).unwrap().order(), 1);
    let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    assert_eq!(aut_edge_fixed(&star, (0, 1)).unwrap().order(), 2);
    assert_eq!(brute_edge_aut(&star, (0, 1)), 2);
    assert_eq!(graph_automorphisms(&Graph::cycle(6)).unwrap().order(), 12);
    assert_eq!(graph_automorphisms(&star).unwrap().order(), 6);
}

#[test]
fn aut_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..150 {
        let m = rng.gen_range(2..7);
        let x = random_graph(&mut rng, m, [0.3, 0.5, 0.7][i % 3], if i % 4 == 0 { 2 } else { 1 });
        let full = graph_automorphisms(&x).unwrap();
        let brute_full = all_perms(m).iter().filter(|p| x.is_isomorphism(&x, p)).count() as u128;
        assert_eq!(full.order(), brute_full, "{x:?}");
        for e in x.edges() {
            let g = aut_edge_fixed(&x, e).unwrap();
            assert!(g.generators().iter().all(|p| x.is_isomorphism(&x, &p.images())));
            assert_eq!(g.order(), brute_edge_aut(&x, e), "{x:?} e={e:?}");
        }
    }
}

#[test]
fn iso_examples() {
    let c5 = Graph::cycle(5);
    let perm = vec![3, 0, 4, 1, 2];
    let y = c5.permuted(&perm);
    let p = graph_iso(&c5, &y).unwrap().unwrap();
    assert!(c5.is_isomorphism(&y, &p.images()));
    assert_eq!(graph_iso(&c5, &Graph::path(5)).unwrap(), None);
    let two_tri = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    assert_eq!(graph_iso(&Graph::cycle(6), &two_tri).unwrap(), None);
    assert!(!brute_iso(&Graph::cycle(6), &two_tri));
}

#[test]
fn iso_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..300 {
        let m = rng.gen_range(1..7);
        let x = random_graph(&mut rng, m, 0.5, if i % 5 == 0 { 2 } else { 1 });
        let y = if i % 2 == 0 {
            let mut p: Vec<usize> = (0..m).collect();
            p.shuffle(&mut rng);
            x.permuted(&p)
        } else {
            // Same edge count, so the cheap filter does not decide it.
            let mut y = random_graph(&mut rng, m, 0.5, 1);
            while y.edge_count() != x.edge_count() {
                y = random_graph(&mut rng, m, 0.5, 1);
            }
            match x.colors() {
                Some(c) => y.with_colors(c.to_vec()).unwrap(),
                None => y,
            }
        };
        let got = graph_iso(&x, &y).unwrap();
        assert_eq!(got.is_some(), brute_iso(&x, &y), "{x:?} {y:?}");
        if let Some(p) = got {
            assert!(x.is_isomorphism(&y, &p.images()));
        }
    }
}

fn brute_color_coset(d: &ColoredDomain, t: &ColoredDomain, c: &PermCoset) -> Vec<Perm> {
    let mut v: Vec<Perm> = c
        .elements()
        .into_iter()
        .filter(|p| d.points.iter().all(|&b| t.colors[p.apply(b)] == d.colors[b]))
        .collect();
    v.sort_by_key(|p| p.images());
    v
}

#[test]
fn color_coset_examples() {
    let g = PermGroup::symmetric(4);
    let one = ColoredDomain::new(vec![0, 1, 2, 3], vec![0; 4]);
    assert_eq!(color_coset(&one, &one, &PermCoset::from_group(g)).size(), 24);
    let src = ColoredDomain::new(vec![0], vec![1, 0]);
    let dst = ColoredDomain::new(vec![0], vec![0, 1]);
    assert!(color_coset(&src, &dst, &PermCoset::from_group(PermGroup::trivial(2))).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn color_coset_matches_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 6;
        let gens: Vec<Perm> = (0..rng.gen_range(1..3))
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                let k = rng.gen_range(2..=n);
                p[..k].shuffle(&mut rng);
                Perm::from_images(p).unwrap()
            })
            .collect();
        let k = PermGroup::new(&gens, n).unwrap();
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut rng);
        let coset = PermCoset::new(Perm::from_images(sigma).unwrap(), k.clone());
        // A stable point set: a random union of orbits.
        let orbs = crate::perm::orbits(&k);
        let mut pts: Vec<usize> = orbs.iter().filter(|_| rng.gen_bool(0.7)).flatten().copied().collect();
        pts.sort_unstable();
        let src: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        // Half the time the target is a relabeled source, so solutions exist.
        let dst: Vec<usize> = if rng.gen_bool(0.5) {
            let e = coset.elements();
            let pi = &e[rng.gen_range(0..e.len())];
            let mut d = vec![0; n];
            for i in 0..n { d[pi.apply(i)] = src[i]; }
            d
        } else {
            (0..n).map(|_| rng.gen_range(0..3)).collect()
        };
        let dom = ColoredDomain::new(pts.clone(), src);
        let tgt = ColoredDomain::new(pts, dst);
        let got = color_coset(&dom, &tgt, &coset);
        let want = brute_color_coset(&dom, &tgt, &coset);
        let mut have = got.elements();
        have.sort_by_key(|p| p.images());
        prop_assert_eq!(have, want);
    }
}

/// Every `(row, column)` pair as a permutation of `0..d+k`, rows first.
fn brute_bipartite_pairs(a: &BipartiteColorMatrix, b: &BipartiteColorMatrix) -> Vec<Perm> {
    let (d, k) = a.shape();
    let mut out = Vec::new();
    for r in all_perms(d) {
        for c in all_perms(k) {
            if (0..d).all(|i| (0..k).all(|j| b.get(r[i], c[j]) == a.get(i, j))) {
                let images: Vec<usize> = r.iter().copied().chain(c.iter().map(|&x| d + x)).collect();
                out.push(Perm::from_images(images).unwrap());
            }
        }
    }
    out
}

fn brute_bipartite(a: &BipartiteColorMatrix, b: &BipartiteColorMatrix) -> u128 {
    brute_bipartite_pairs(a, b).len() as u128
}

#[test]
fn bipartite_examples() {
    let z = BipartiteColorMatrix::from_rows(&[vec![0, 0, 0], vec![0, 0, 0]]);
    assert_eq!(colored_bipartite_iso(&z, &z).unwrap().size(), 12);
    let o = BipartiteColorMatrix::from_rows(&[vec![0, 0, 1], vec![0, 0, 0]]);
    assert!(colored_bipartite_iso(&z, &o).unwrap().is_empty());
    let i2 = BipartiteColorMatrix::from_rows(&[vec![1, 0], vec![0, 1]]);
    let sw = BipartiteColorMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    let c = colored_bipartite_iso(&i2, &sw).unwrap();
    assert!(c.contains(&Perm::from_images(vec![1, 0, 2, 3]).unwrap()));
    assert!(c.contains(&Perm::from_images(vec![0, 1, 3, 2]).unwrap()));
    // Enumerating all four row/column pairs leaves exactly these two.
    assert_eq!(c.size(), brute_bipartite(&i2, &sw));
    assert_eq!(c.size(), 2);
    let bad = BipartiteColorMatrix::from_rows(&[vec![0, 1, 1]]);
    assert!(matches!(colored_bipartite_iso(&i2, &bad), Err(GraphError::DimensionMismatch(..))));
}

#[test]
fn bipartite_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let d = rng.gen_range(1..4);
        let k = rng.gen_range(1..6);
        let q = rng.gen_range(2..4);
        let a: Vec<Vec<u64>> = (0..d).map(|_| (0..k).map(|_| rng.gen_range(0..q)).collect()).collect();
        let b = if rng.gen_bool(0.5) {
            let mut r: Vec<usize> = (0..d).collect();
            let mut c: Vec<usize> = (0..k).collect();
            r.shuffle(&mut rng);
            c.shuffle(&mut rng);
            let mut b = vec![vec![0; k]; d];
            for i in 0..d {
                for j in 0..k {
                    b[r[i]][c[j]] = a[i][j];
                }
            }
            b
        } else {
            (0..d).map(|_| (0..k).map(|_| rng.gen_range(0..q)).collect()).collect()
        };
        let (a, b) = (BipartiteColorMatrix::from_rows(&a), BipartiteColorMatrix::from_rows(&b));
        let got = colored_bipartite_iso(&a, &b).unwrap();
        let want = brute_bipartite_pairs(&a, &b);
        assert_eq!(got.size(), want.len() as u128);
        assert!(want.iter().all(|p| got.contains(p)));
    }
}

#[test]
fn text_round_trip() {
    let g = Graph::cycle(4).with_colors(vec![0, 1, 0, 1]).unwrap();
    assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    assert!(matches!(Graph::parse("3 1\n0 x\n"), Err(GraphError::Parse { line: 2, .. })));
}
