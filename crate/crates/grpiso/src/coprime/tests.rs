use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::group::{build_group, oracle_aut, oracle_iso, parse_descriptor, relabel_table, GroupDescriptor};

fn g(d: &str) -> CayleyTable {
    build_group(&parse_descriptor(d).unwrap()).unwrap()
}

fn agree(a: &str, b: &str) -> bool {
    let (x, y) = (g(a), g(b));
    let got = iso_hae(&x, &y).unwrap();
    if let Some(w) = &got {
        assert!(w.is_isomorphism(&x, &y), "{a} vs {b}: bad witness");
    }
    let want = oracle_iso(&x, &y).is_some();
    assert_eq!(got.is_some(), want, "{a} vs {b}");
    want
}

#[test]
fn decomposition_examples() {
    let s3 = g("sym(3)");
    let d = decompose_coprime(&s3).unwrap();
    assert_eq!(d.normal.order(), 3);
    assert_eq!(d.quotient.order(), 2);
    let h = (0..2).find(|&h| h != 0).unwrap();
    for &x in d.normal.elements() {
        assert_eq!(d.action[h][x], s3.inv(x));
    }
    let z12 = g("cyclic(12)");
    let d = decompose_coprime(&z12).unwrap();
    assert_eq!((d.normal.order(), d.quotient.order()), (12, 1));
    assert!(decompose_coprime(&g("sym(4)")).is_none());
    assert!(decompose_coprime(&g("alt(5)")).is_none());
}

#[test]
fn action_is_well_defined_on_cosets() {
    for name in [
        "sym(3)",
        "dihedral(30)",
        "semidirect(q=3,l=1,p=7,k=1,action=[[2]])",
        "semidirect(q=2,l=1,moduli=[3,9],action=[[-1,0],[0,1]])",
        "direct_product(sym(3),dihedral(10))",
    ] {
        let t = g(name);
        let d = decompose_coprime(&t).unwrap();
        for x in 0..t.order() {
            let h = d.projection.apply(x);
            for &n in d.normal.elements() {
                assert_eq!(t.mul(t.mul(x, n), t.inv(x)), d.action[h][n], "{name}");
            }
        }
    }
}

#[test]
fn classes() {
    assert_eq!(coprime_class(&g("sym(3)")), Ok(CoprimeClass::Elementary));
    assert_eq!(coprime_class(&g("dihedral(30)")), Ok(CoprimeClass::ProductOfElementary));
    assert_eq!(coprime_class(&g("cyclic(12)")), Ok(CoprimeClass::Abelian));
    assert_eq!(coprime_class(&g("dihedral(18)")), Ok(CoprimeClass::Abelian));
    assert!(matches!(coprime_class(&g("dihedral(8)")), Err(CoprimeError::NotInClass(_))));
    assert!(matches!(coprime_class(&g("sym(4)")), Err(CoprimeError::NotInClass(_))));
    // Z_3 ⋊ Z_4 has a cyclic complement of order 4
    let t = (0..12)
        .map(|x: usize| (0..12).map(|y: usize| {
            // (a, b) ∈ Z_4 × Z_3 with b ↦ -b under the generator of Z_4
            let (a1, b1, a2, b2) = (x / 3, x % 3, y / 3, y % 3);
            let b2t = if a1 % 2 == 1 { (3 - b2) % 3 } else { b2 };
            ((a1 + a2) % 4) * 3 + (b1 + b2t) % 3
        }).collect())
        .collect::<Vec<Vec<usize>>>();
    let dic12 = CayleyTable::validate(&t).unwrap();
    assert!(matches!(coprime_class(&dic12), Err(CoprimeError::NotInClass(_))));
    assert!(matches!(iso_hee(&g("dihedral(30)"), &g("dihedral(30)")), Err(CoprimeError::NotInClass(_))));
}

#[test]
fn worked_examples() {
    assert!(!agree("semidirect(q=3,l=1,p=7,k=1,action=[[2]])", "cyclic(21)"));
    assert!(agree("semidirect(q=3,l=1,p=7,k=1,action=[[2]])", "semidirect(q=3,l=1,p=7,k=1,action=[[4]])"));
    let minus = "semidirect(q=2,l=1,p=3,k=2,action=[[-1,0],[0,-1]])";
    assert!(agree(minus, "semidirect(q=2,l=1,p=3,k=2,action=[[2,0],[0,2]])"));
    assert!(!agree(minus, "semidirect(q=2,l=1,p=3,k=2,action=[[1,0],[0,-1]])"));
    // the order-18 triple
    assert!(!agree("cyclic(18)", "direct_product(cyclic(3),sym(3))"));
    assert!(!agree("cyclic(18)", minus));
    assert!(!agree("direct_product(cyclic(3),sym(3))", minus));
    // order 30
    let both = "semidirect(q=2,l=1,moduli=[3,5],action=[[-1,0],[0,-1]])";
    assert!(!agree(both, "semidirect(q=2,l=1,moduli=[3,5],action=[[-1,0],[0,1]])"));
    assert!(agree(both, "dihedral(30)"));
    // Z_9 ⋊ Z_2
    assert!(!agree("dihedral(18)", "cyclic(18)"));
    assert!(agree("dihedral(18)", "relabel(dihedral(18),seed=5)"));
    // order 48: Z_3 acting on the Z_2^2 part of Z_2^2 × Z_4
    assert!(!agree(
        "semidirect(q=3,l=1,moduli=[2,2,4],action=[[0,1,0],[1,1,0],[0,0,1]])",
        "direct_product(cyclic(3),elem_abelian(2,2),cyclic(4))"
    ));
    assert!(!agree("direct_product(cyclic(3),cyclic(2),cyclic(4))", "cyclic(24)"));
    assert!(agree("direct_product(cyclic(3),cyclic(8))", "cyclic(24)"));
}

#[test]
fn prime_by_prime_verdicts_are_not_enough() {
    // Each Sylow layer matches on its own, but no single change of basis of the
    // complement serves both primes.
    let a = "direct_product(sym(3),dihedral(10))";
    let b = "direct_product(cyclic(2),dihedral(30))";
    assert!(!agree(a, b));
    let (x, y) = (prepare(&g(a)).unwrap(), prepare(&g(b)).unwrap());
    for (lx, ly) in x.layers.iter().zip(&y.layers) {
        let tx = indexing_tuples(&lx.rep).unwrap();
        let ty = indexing_tuples(&ly.rep).unwrap();
        let (q, l) = x.complement.unwrap();
        let some_phi = gl(q, l).into_iter().any(|phi| ty.contains(&tx[0].transform(&phi)));
        assert!(some_phi);
    }
}

#[test]
fn exponent_layers_are_kept_apart() {
    // S_3 × Z_9 and Z_3 × D_18: the involution inverts the Z_3 layer in one and
    // the Z_9 layer in the other.
    assert!(!agree(
        "direct_product(sym(3),cyclic(9))",
        "direct_product(cyclic(3),dihedral(18))"
    ));
    assert!(agree(
        "semidirect(q=2,l=1,moduli=[3,9],action=[[-1,0],[0,1]])",
        "direct_product(sym(3),cyclic(9))"
    ));
}

#[test]
fn ranum_examples() {
    let a = g("direct_product(cyclic(2),cyclic(4))");
    let basis = abelian_basis(&a, &Subgroup::whole(&a)).unwrap();
    assert_eq!(basis.orders, vec![2, 4]);
    let id = ranum_matrix(&basis, |x| x).unwrap();
    assert_eq!(id, RanumMatrix::identity(2, vec![1, 2]));
    // g1 ↦ g1, g2 ↦ g1 g2
    let (g1, g2) = (basis.generators[0], basis.generators[1]);
    let alpha = |x: usize| {
        let c = basis.coords(x).unwrap();
        basis.element(&a, &[(c[0] + c[1]) % 2, c[1]])
    };
    let u = ranum_matrix(&basis, alpha).unwrap();
    assert_eq!(u.entries(), &[vec![1, 1], vec![0, 1]]);
    assert_eq!(alpha(g2), a.mul(g1, g2));
    for x in 0..8 {
        assert_eq!(ranum_apply(&u, &a, &basis, x), Some(alpha(x)));
    }
    // the (2,1) entry must be even
    assert!(RanumMatrix::new(2, vec![1, 2], vec![vec![1, 0], vec![1, 1]]).is_err());
    assert!(RanumMatrix::new(2, vec![1, 2], vec![vec![1, 0], vec![2, 1]]).is_ok());
}

#[test]
fn ranum_matrices_are_the_automorphisms() {
    for (name, p, exps) in [
        ("direct_product(cyclic(2),cyclic(4))", 2, vec![1, 2]),
        ("direct_product(cyclic(3),cyclic(9))", 3, vec![1, 2]),
        ("direct_product(cyclic(2),cyclic(2),cyclic(4))", 2, vec![1, 1, 2]),
        ("elem_abelian(3,2)", 3, vec![1, 1]),
    ] {
        let a = g(name);
        let basis = abelian_basis(&a, &Subgroup::whole(&a)).unwrap();
        let auts = oracle_aut(&a).unwrap();
        let mut from_auts: Vec<RanumMatrix> =
            auts.iter().map(|f| ranum_matrix(&basis, |x| f.apply(x)).unwrap()).collect();
        from_auts.sort_by(|x, y| x.entries().cmp(y.entries()));
        let mut all = RanumMatrix::enumerate(p, &exps);
        all.sort_by(|x, y| x.entries().cmp(y.entries()));
        assert_eq!(from_auts, all, "{name}");
        for f in auts.iter().take(12) {
            for h in auts.iter().take(12) {
                let fh = f.then(h);
                let (uf, uh, ufh) = (
                    ranum_matrix(&basis, |x| f.apply(x)).unwrap(),
                    ranum_matrix(&basis, |x| h.apply(x)).unwrap(),
                    ranum_matrix(&basis, |x| fh.apply(x)).unwrap(),
                );
                // `then` applies f first
                assert_eq!(ufh, uh.star(&uf));
                assert_eq!(psi_p(&ufh), psi_p(&uh).iter().zip(psi_p(&uf)).map(|(x, y)| x.mul(&y)).collect::<Vec<_>>());
            }
        }
    }
    assert_eq!(RanumMatrix::enumerate(3, &[1, 2]).len(), 108);
    assert_eq!(RanumMatrix::enumerate(2, &[1, 1, 2]).len(), 192);
}

#[test]
fn psi_examples() {
    let id = RanumMatrix::identity(3, vec![1, 2, 2]);
    assert_eq!(psi_p(&id), vec![FpMatrix::identity(3, 1), FpMatrix::identity(3, 2)]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let exps = [1, 2, 2];
        let u = RanumMatrix::random(3, &exps, &mut rng);
        let psi = RanumMatrix::random(3, &exps, &mut rng);
        let conj = psi.star(&u).star(&psi.inverse().unwrap());
        let (pu, pp, pc) = (psi_p(&u), psi_p(&psi), psi_p(&conj));
        for b in 0..2 {
            assert_eq!(pc[b], pp[b].mul(&pu[b]).mul(&pp[b].inverse().unwrap()));
        }
    }
}

fn random_action(rng: &mut ChaCha8Rng, q: u64, l: usize, p: u64, exps: &[u32]) -> Vec<RanumMatrix> {
    // Powers of one element of order q (or the identity).
    let id = RanumMatrix::identity(p, exps.to_vec());
    let x = RanumMatrix::random(p, exps, rng);
    let t = x.order().unwrap();
    let pow = |u: &RanumMatrix, e: usize| (0..e).fold(id.clone(), |acc, _| acc.star(u));
    let y = if t % q as usize == 0 { pow(&x, t / q as usize) } else { id.clone() };
    (0..l).map(|_| pow(&y, rng.gen_range(0..q as usize))).collect()
}

/// Every invertible `l × l` matrix over `F_q`.
fn gl(q: u64, l: usize) -> Vec<FpMatrix> {
    let n = (q as usize).pow((l * l) as u32);
    (0..n)
        .map(|idx| {
            let v = vector_of(q, l * l, idx);
            FpMatrix::from_rows(q, &v.chunks(l).map(|c| c.to_vec()).collect::<Vec<_>>())
        })
        .filter(|m| m.is_invertible())
        .collect()
}

fn descriptor(q: u64, l: usize, p: u64, exps: &[u32], action: &[RanumMatrix]) -> GroupDescriptor {
    GroupDescriptor::Semidirect {
        q,
        l,
        moduli: exps.iter().map(|&e| p.pow(e)).collect(),
        action: action.iter().map(|u| u.entries().iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect()).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_pairs_match_oracle(seed in any::<u64>(),
                                 (q, l, p, exps) in prop::sample::select(vec![
                                     (2u64, 1usize, 3u64, vec![1u32, 1]),
                                     (2, 2, 3, vec![1, 2]),
                                     (3, 1, 2, vec![1, 1, 2]),
                                     (3, 1, 7, vec![1]),
                                     (2, 2, 5, vec![1]),
                                     (3, 2, 2, vec![1, 1]),
                                     (2, 1, 3, vec![2]),
                                 ])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a1 = random_action(&mut rng, q, l, p, &exps);
        let a2 = random_action(&mut rng, q, l, p, &exps);
        let x = build_group(&descriptor(q, l, p, &exps, &a1)).unwrap();
        let y = build_group(&descriptor(q, l, p, &exps, &a2)).unwrap();
        let (y, _) = relabel_table(&y, seed);
        let got = iso_hae(&x, &y).unwrap();
        prop_assert_eq!(got.is_some(), oracle_iso(&x, &y).is_some());
        if let Some(w) = got {
            prop_assert!(w.is_isomorphism(&x, &y));
        }
        let (z, _) = relabel_table(&x, seed ^ 1);
        let w = iso_hae(&x, &z).unwrap();
        prop_assert!(w.is_some_and(|w| w.is_isomorphism(&x, &z)));
    }
}
