//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails. Every check compares against an independent
//! brute-force computation written in this file or against the oracle.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use grpiso::centrad::{aut_coset_centrad, check_central_radical, iso_centrad, iso_centrad_witness};
use grpiso::code::{code_equivalence, LinearCode};
use grpiso::cohom::{cocycle_dimensions, iso_central_generic, iso_coset_central_elemab};
use grpiso::coprime::{iso_hae, psi_p, RanumMatrix};
use grpiso::corpus::{central_corpus, coprime_corpus, family_pairs, named_coprime, oracle_cost, CorpusEntry};
use grpiso::exec::{self, Cost};
use grpiso::fp::FpMatrix;
use grpiso::graph::{aut_edge_fixed, graph_iso, Graph};
use grpiso::group::{build_group, oracle_aut, oracle_iso, parse_descriptor, relabel_table, CayleyTable, GroupHom};
use grpiso::perm::{coset_intersection, minimal_blocks, orbits, transversal, Blocks, Perm, PermCoset, PermGroup, TRANSVERSAL_CAP};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;
const ORACLE_BUDGET: f64 = 1e5;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table(d: &str) -> CayleyTable {
    build_group(&parse_descriptor(d).unwrap()).unwrap()
}

fn all_perms(m: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            go(cur, k + 1, out);
            cur.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..m).collect(), 0, &mut out);
    out
}

fn random_perm(rng: &mut ChaCha8Rng, m: usize) -> Perm {
    let mut v: Vec<usize> = (0..m).collect();
    v.shuffle(rng);
    Perm::from_images(v).unwrap()
}

struct CoprimeSuite {
    entries: Vec<CorpusEntry>,
    tables: Vec<CayleyTable>,
    /// Family pairs the oracle can settle within budget.
    pairs: Vec<(usize, usize)>,
}

fn coprime_suite() -> CoprimeSuite {
    let mut entries = coprime_corpus(200, 5, SEED);
    entries.extend(named_coprime());
    let tables: Vec<CayleyTable> = entries.iter().map(|e| build_group(&e.descriptor).unwrap()).collect();
    let pairs = family_pairs(&entries)
        .into_iter()
        .filter(|&(i, j)| oracle_cost(&tables[i], &tables[j]) <= ORACLE_BUDGET)
        .collect();
    CoprimeSuite { entries, tables, pairs }
}

fn criterion_1(s: &CoprimeSuite) -> Outcome {
    let t = Instant::now();
    for fam in ["order18", "order21", "order30"] {
        let members: Vec<usize> = (0..s.entries.len()).filter(|&i| s.entries[i].family == fam).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                check(s.pairs.contains(&(i, j)), || format!("{fam} pair {i},{j} missing from the suite"))?;
            }
        }
    }
    check(s.entries.iter().any(|e| e.name == "z3sq_minus_i"), || "order-18 triple incomplete".into())?;
    let mut agree = 0;
    let mut iso = 0;
    for &(i, j) in &s.pairs {
        let (g, h) = (&s.tables[i], &s.tables[j]);
        let want = oracle_iso(g, h).is_some();
        let got = iso_hae(g, h).map_err(|e| format!("{}: {e}", s.entries[i].name))?;
        check(got.is_some() == want, || format!("{} vs {}: iso_hae {} oracle {want}", s.entries[i].name, s.entries[j].name, got.is_some()))?;
        if let Some(w) = got {
            check(w.is_isomorphism(g, h), || format!("{} vs {}: invalid witness", s.entries[i].name, s.entries[j].name))?;
            iso += 1;
        }
        agree += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    check(agree >= 50, || format!("only {agree} pairs"))?;
    check(secs <= 600.0, || format!("{secs:.0} s exceeds 10 min"))?;
    Ok(format!("{agree} pairs agree ({iso} isomorphic), {secs:.1} s"))
}

fn criterion_2(s: &CoprimeSuite) -> Outcome {
    let t = Instant::now();
    let mut runs = 0;
    for (e, g) in s.entries.iter().zip(&s.tables) {
        for r in 0..20u64 {
            let (h, _) = relabel_table(g, SEED ^ (r * 7919 + runs as u64));
            let w = iso_hae(g, &h).map_err(|err| format!("{}: {err}", e.name))?;
            check(w.is_some_and(|w| w.is_isomorphism(g, &h)), || format!("{} relabel {r} failed", e.name))?;
            runs += 1;
        }
    }
    for e in central_corpus() {
        let g = build_group(&e.descriptor).unwrap();
        for r in 0..20u64 {
            let (h, _) = relabel_table(&g, SEED + r);
            let w = iso_centrad_witness(&g, &h).map_err(|err| format!("{}: {err}", e.name))?;
            check(w.is_some_and(|w| w.is_isomorphism(&g, &h)), || format!("{} relabel {r} failed", e.name))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} relabelings of {} groups, {:.1} s", s.entries.len() + 2, t.elapsed().as_secs_f64()))
}

fn codewords(c: &LinearCode) -> BTreeSet<Vec<u64>> {
    let g = c.generator();
    let (d, m, p) = (g.rows(), g.cols(), c.p());
    let mut out = BTreeSet::new();
    for idx in 0..p.pow(d as u32) {
        let coef: Vec<u64> = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
        out.insert((0..m).map(|j| (0..d).map(|i| coef[i] * g.get(i, j)).sum::<u64>() % p).collect());
    }
    out
}

/// All column permutations taking the codewords of `c1` onto those of `c2`.
/// Column `j` moves to position `σ(j)`.
fn brute_equivalences(c1: &LinearCode, c2: &LinearCode) -> Vec<Perm> {
    let (w1, w2) = (codewords(c1), codewords(c2));
    if w1.len() != w2.len() {
        return Vec::new();
    }
    all_perms(c1.length())
        .into_iter()
        .filter(|s| {
            w1.iter().all(|w| {
                let mut v = vec![0; w.len()];
                for (j, &x) in w.iter().enumerate() {
                    v[s[j]] = x;
                }
                w2.contains(&v)
            })
        })
        .map(|s| Perm::from_images(s).unwrap())
        .collect()
}

fn random_code(rng: &mut ChaCha8Rng, p: u64, d: usize, m: usize) -> LinearCode {
    let rows: Vec<Vec<u64>> = (0..d).map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect()).collect();
    LinearCode::from_rows(p, &rows).unwrap()
}

fn code_instances() -> Vec<(LinearCode, LinearCode)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..240)
        .map(|i| {
            let p = [2, 3][i % 2];
            let m = rng.gen_range(1..=6);
            let d = rng.gen_range(1..=3usize).min(m);
            let c1 = random_code(&mut rng, p, d, m);
            let c2 = if i % 3 == 0 { random_code(&mut rng, p, d, m) } else { c1.permuted(&random_perm(&mut rng, m)) };
            (c1, c2)
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut equivalent = 0;
    let instances = code_instances();
    for (n, (c1, c2)) in instances.iter().enumerate() {
        let want = brute_equivalences(c1, c2);
        let got = code_equivalence(c1, c2).map_err(|e| format!("instance {n}: {e}"))?;
        check(got.rep.is_some() == !want.is_empty(), || format!("instance {n}: decision differs"))?;
        if let Some(r) = &got.rep {
            check(want.contains(r), || format!("instance {n}: representative is not an equivalence"))?;
            equivalent += 1;
        }
        check(got.size() == want.len() as u128, || format!("instance {n}: coset size {} vs {}", got.size(), want.len()))?;
        check(want.iter().all(|s| got.contains(s)), || format!("instance {n}: coset misses an equivalence"))?;
    }
    Ok(format!("{} instances ({equivalent} equivalent)", instances.len()))
}

fn random_graph(rng: &mut ChaCha8Rng, m: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(m, &edges).unwrap()
}

fn graph_suite() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for m in 1..=7 {
        out.push(Graph::cycle(m.max(3)));
        out.push(Graph::path(m));
        for i in 0..12 {
            let g = random_graph(&mut rng, m, [0.3, 0.5, 0.7][i % 3]);
            let images = random_perm(&mut rng, m).images();
            out.push(g.permuted(&images));
            out.push(g);
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let graphs = graph_suite();
    let mut edges = 0;
    for x in graphs.iter().filter(|g| g.order() <= 7) {
        let perms = all_perms(x.order());
        for e in x.edges() {
            let want = perms
                .iter()
                .filter(|p| x.is_isomorphism(x, p) && BTreeSet::from([p[e.0], p[e.1]]) == BTreeSet::from([e.0, e.1]))
                .count() as u128;
            let got = aut_edge_fixed(x, e).map_err(|err| err.to_string())?;
            check(got.order() == want, || format!("{x:?} edge {e:?}: {} vs {want}", got.order()))?;
            edges += 1;
        }
    }
    let small: Vec<&Graph> = graphs.iter().filter(|g| g.order() <= 6).collect();
    let mut pairs = 0;
    for x in &small {
        let perms = all_perms(x.order());
        for y in small.iter().filter(|y| y.order() == x.order()) {
            let want = perms.iter().any(|p| x.is_isomorphism(y, p));
            let got = graph_iso(x, y).map_err(|err| err.to_string())?;
            check(got.is_some() == want, || format!("{x:?} vs {y:?}"))?;
            if let Some(p) = got {
                check(x.is_isomorphism(y, &p.images()), || format!("{x:?} vs {y:?}: bad witness"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{edges} edge stabilizers, {pairs} isomorphism pairs"))
}

fn closure(gens: &[Perm], m: usize) -> HashSet<Perm> {
    let id = Perm::identity(m);
    let mut seen = HashSet::from([id.clone()]);
    let mut todo = vec![id];
    while let Some(x) = todo.pop() {
        for s in gens {
            let y = s.compose(&x);
            if seen.insert(y.clone()) {
                todo.push(y);
            }
        }
    }
    seen
}

/// Smallest minimal block through 0, ties broken lexicographically.
fn brute_min_block(elems: &HashSet<Perm>, m: usize) -> Option<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for mask in (1u32..(1 << m)).filter(|x| x & 1 == 1) {
        let b: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        if b.len() == 1 || b.len() == m {
            continue;
        }
        let set: BTreeSet<usize> = b.iter().copied().collect();
        if elems.iter().all(|x| {
            let img: BTreeSet<usize> = b.iter().map(|&i| x.apply(i)).collect();
            img == set || img.is_disjoint(&set)
        }) {
            blocks.push(b);
        }
    }
    blocks
        .iter()
        .filter(|b| !blocks.iter().any(|c| c.len() < b.len() && c.iter().all(|x| b.contains(x))))
        .min_by(|a, b| (a.len(), *a).cmp(&(b.len(), *b)))
        .cloned()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut groups = 0;
    for n in 0..64 {
        let m = 1 + n % 8;
        let mut gens: Vec<Perm> = (0..rng.gen_range(0..=2)).map(|_| random_perm(&mut rng, m)).collect();
        if m >= 2 && n % 3 == 0 {
            gens.push(Perm::from_cycles(m, &[&[0, 1]]));
        }
        let g = PermGroup::new(&gens, m).map_err(|e| e.to_string())?;
        let elems = closure(&gens, m);
        let tag = format!("group {n} (degree {m})");
        check(g.order() == elems.len() as u128, || format!("{tag}: order"))?;
        for _ in 0..20 {
            let x = random_perm(&mut rng, m);
            check(g.contains(&x) == elems.contains(&x), || format!("{tag}: membership"))?;
        }
        let orbs = orbits(&g);
        let mut brute_orbs: Vec<Vec<usize>> = Vec::new();
        for a in 0..m {
            if !brute_orbs.iter().any(|o| o.contains(&a)) {
                let o: BTreeSet<usize> = elems.iter().map(|x| x.apply(a)).collect();
                brute_orbs.push(o.into_iter().collect());
            }
        }
        check(orbs == brute_orbs, || format!("{tag}: orbits {orbs:?} vs {brute_orbs:?}"))?;
        if orbs.len() == 1 {
            let got = match minimal_blocks(&g).map_err(|e| e.to_string())? {
                Blocks::Primitive => None,
                Blocks::System(s) => Some(s[0].clone()),
            };
            check(got == brute_min_block(&elems, m), || format!("{tag}: blocks"))?;
        }
        let pts: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.4)).collect();
        let stab = g.pointwise_stabilizer(&pts);
        let brute_stab: HashSet<Perm> = elems.iter().filter(|x| pts.iter().all(|&p| x.apply(p) == p)).cloned().collect();
        check(stab.order() == brute_stab.len() as u128, || format!("{tag}: stabilizer order"))?;
        check(brute_stab.iter().all(|x| stab.contains(x)), || format!("{tag}: stabilizer elements"))?;

        let hgens: Vec<Perm> = (0..rng.gen_range(0..=2)).map(|_| random_perm(&mut rng, m)).collect();
        let h = PermGroup::new(&hgens, m).unwrap();
        let helems = closure(&hgens, m);
        let (x, y) = (random_perm(&mut rng, m), random_perm(&mut rng, m));
        let y = if n % 2 == 0 { x.clone() } else { y };
        let c1: HashSet<Perm> = elems.iter().map(|a| x.compose(a)).collect();
        let c2: HashSet<Perm> = helems.iter().map(|a| y.compose(a)).collect();
        let want: HashSet<Perm> = c1.intersection(&c2).cloned().collect();
        let got = coset_intersection(&PermCoset::new(x, g.clone()), &PermCoset::new(y, h.clone()));
        check(got.size() == want.len() as u128, || format!("{tag}: coset intersection size"))?;
        check(want.iter().all(|s| got.contains(s)), || format!("{tag}: coset intersection elements"))?;

        let k_elems: Vec<Perm> = elems.iter().filter(|a| helems.contains(a)).cloned().collect();
        let k = PermGroup::new(&k_elems, m).unwrap();
        let t = transversal(&g, &k, TRANSVERSAL_CAP).map_err(|e| e.to_string())?;
        check(t.len() * k_elems.len() == elems.len(), || format!("{tag}: transversal length"))?;
        let mut covered = HashSet::new();
        for r in &t {
            check(elems.contains(r), || format!("{tag}: transversal leaves the group"))?;
            for a in &k_elems {
                check(covered.insert(r.compose(a)), || format!("{tag}: transversal repeats a coset"))?;
            }
        }
        groups += 1;
    }
    Ok(format!("{groups} subgroups of Sym(1..8)"))
}

fn criterion_6() -> Outcome {
    let a5 = table("alt(5)");
    let (z, b) = cocycle_dimensions(&a5, 2);
    check(z - b == 1, || format!("dim Z2 - rank B2 = {z} - {b}"))?;
    let sl = table("sl2(5)");
    let za = table("direct_product(cyclic(2),alt(5))");
    check(sl.order() == 120 && za.order() == 120 && oracle_iso(&sl, &za).is_none(), || "extension classes not distinct".into())?;
    let mut worst: f64 = 0.0;
    let mut timed = |f: &dyn Fn() -> Result<bool, String>| -> Result<bool, String> {
        let t = Instant::now();
        let r = f();
        worst = worst.max(t.elapsed().as_secs_f64());
        r
    };
    let cases = [
        (&sl, za.clone(), false),
        (&sl, relabel_table(&sl, SEED).0, true),
        (&za, relabel_table(&za, SEED).0, true),
    ];
    for (g, h, want) in &cases {
        let a = timed(&|| iso_central_generic(g, h, None).map_err(|e| e.to_string()))?;
        check(a == *want, || format!("iso_central_generic gave {a}, expected {want}"))?;
        let b = timed(&|| iso_centrad(g, h).map_err(|e| e.to_string()))?;
        check(b == *want, || format!("iso_centrad gave {b}, expected {want}"))?;
    }
    check(worst <= 300.0, || format!("slowest pair took {worst:.0} s"))?;
    Ok(format!("dim Z2 = {z}, rank B2 = {b}; slowest pair {worst:.2} s"))
}

fn generated_order(g: &CayleyTable, gens: &[GroupHom]) -> Result<u128, String> {
    for a in gens {
        check(a.is_isomorphism(g, g), || "generator is not an automorphism".into())?;
    }
    let perms: Vec<Perm> = gens.iter().map(|a| Perm::from_images(a.image.clone()).unwrap()).collect();
    Ok(PermGroup::new(&perms, g.order()).unwrap().order())
}

fn criterion_7() -> Outcome {
    let sl = table("sl2(5)");
    let za = table("direct_product(cyclic(2),alt(5))");
    // |Aut(Z2 × A5)| = |Aut(A5)| · |Hom(A5, Z2)| · |Aut(Z2)| and A5 is perfect
    for (name, g, want) in [("SL(2,5)", &sl, 120u128), ("Z2xA5", &za, 120)] {
        let central = iso_coset_central_elemab(g, g).map_err(|e| e.to_string())?;
        let got = generated_order(g, &central.automorphisms)?;
        check(got == want, || format!("{name}: central generators give {got}"))?;
        let (_, gens) = aut_coset_centrad(g, g).map_err(|e| e.to_string())?;
        let got = generated_order(g, &gens)?;
        check(got == want, || format!("{name}: central-radical generators give {got}"))?;
    }
    let mut checked = Vec::new();
    for d in [
        "cyclic(2)", "elem_abelian(2,3)", "elem_abelian(3,2)", "sym(3)", "dihedral(8)", "dihedral(10)",
        "direct_product(cyclic(2),sym(3))", "alt(4)", "sym(4)", "direct_product(elem_abelian(2,2),sym(3))",
        "direct_product(cyclic(3),alt(4))", "alt(5)", "sl2(5)", "direct_product(cyclic(2),alt(5))",
    ] {
        let g = table(d);
        if g.order() > 128 {
            continue;
        }
        let want = oracle_aut(&g).map_err(|e| e.to_string())?.len() as u128;
        if let Ok(c) = iso_coset_central_elemab(&g, &g) {
            let got = generated_order(&g, &c.automorphisms)?;
            check(got == want, || format!("{d}: central generators give {got}, oracle {want}"))?;
            checked.push(d);
        }
        if check_central_radical(&g).is_ok() {
            let (_, gens) = aut_coset_centrad(&g, &g).map_err(|e| e.to_string())?;
            let got = generated_order(&g, &gens)?;
            check(got == want, || format!("{d}: central-radical generators give {got}, oracle {want}"))?;
        }
    }
    check(checked.len() >= 8, || format!("only {} in-class groups", checked.len()))?;
    Ok(format!("orders 120 and 120; {} in-class groups match the oracle", checked.len()))
}

fn gl(p: u64, k: usize) -> Vec<FpMatrix> {
    (0..p.pow((k * k) as u32))
        .map(|idx| {
            let v: Vec<u64> = (0..k * k).map(|i| idx / p.pow(i as u32) % p).collect();
            FpMatrix::from_rows(p, &v.chunks(k).map(|c| c.to_vec()).collect::<Vec<_>>())
        })
        .filter(|m| m.is_invertible())
        .collect()
}

/// Blockwise conjugacy in `Π GL_{k_i}(F_p)`, by exhaustion per block.
fn blocks_conjugate(a: &[FpMatrix], b: &[FpMatrix]) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let (p, k) = (x.p(), x.rows());
        gl(p, k).iter().any(|g| g.mul(x).mul(&g.inverse().unwrap()) == *y)
    })
}

fn conj_in_ranum(all: &[RanumMatrix], u: &RanumMatrix, v: &RanumMatrix) -> bool {
    all.iter().any(|s| s.star(u).star(&s.inverse().unwrap()) == *v)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shapes: [(u64, Vec<u32>); 3] = [(2, vec![1, 2]), (3, vec![1, 2]), (2, vec![1, 1, 2])];
    let mut conj_pairs = 0;
    for (p, exps) in &shapes {
        for _ in 0..40 {
            let u = RanumMatrix::random(*p, exps, &mut rng);
            let s = RanumMatrix::random(*p, exps, &mut rng);
            let v = s.star(&u).star(&s.inverse().unwrap());
            check(blocks_conjugate(&psi_p(&u), &psi_p(&v)), || format!("p={p} {exps:?}: images not conjugate"))?;
            conj_pairs += 1;
        }
    }
    let mut coprime_pairs = 0;
    let mut non_conj = 0;
    for (p, exps) in &shapes {
        let all = RanumMatrix::enumerate(*p, exps);
        let coprime: Vec<&RanumMatrix> = all.iter().filter(|u| u.order().is_some_and(|o| o as u64 % p != 0)).collect();
        for u in &coprime {
            for v in &coprime {
                let lhs = conj_in_ranum(&all, u, v);
                let rhs = blocks_conjugate(&psi_p(u), &psi_p(v));
                check(lhs == rhs, || format!("p={p} {exps:?}: conjugacy {lhs} but images {rhs}"))?;
                coprime_pairs += 1;
                non_conj += usize::from(!lhs);
            }
        }
    }
    check(non_conj > 0, || "no non-conjugate pairs exercised".into())?;
    Ok(format!("{conj_pairs} conjugate pairs; {coprime_pairs} coprime-order pairs ({non_conj} non-conjugate) agree"))
}

/// Verdicts, witnesses and counters of a fixed workload.
fn fingerprint(s: &CoprimeSuite) -> Vec<(String, Cost)> {
    let mut out = Vec::new();
    for &(i, j) in s.pairs.iter().step_by(s.pairs.len().div_ceil(120).max(1)) {
        let (r, c) = exec::measure(|| iso_hae(&s.tables[i], &s.tables[j]).unwrap().map(|w| w.image));
        out.push((format!("{r:?}"), c));
    }
    let (g, h) = (&s.tables[0], &relabel_table(&s.tables[0], 1).0);
    let (r, c) = exec::measure(|| iso_hae(g, h).unwrap().map(|w| w.image));
    out.push((format!("{r:?}"), c));
    for (c1, c2) in code_instances().iter().take(60) {
        let (r, c) = exec::measure(|| {
            let e = code_equivalence(c1, c2).unwrap();
            (e.size(), e.rep.map(|p| p.images()))
        });
        out.push((format!("{r:?}"), c));
    }
    let sl = table("sl2(5)");
    let za = table("direct_product(cyclic(2),alt(5))");
    let slr = relabel_table(&sl, 3).0;
    for (g, h) in [(&sl, &za), (&sl, &slr)] {
        let (r, c) = exec::measure(|| iso_centrad_witness(g, h).unwrap().map(|w| w.image));
        out.push((format!("{r:?}"), c));
        let (r, c) = exec::measure(|| iso_central_generic(g, h, None).unwrap());
        out.push((format!("{r:?}"), c));
    }
    out
}

fn criterion_9(s: &CoprimeSuite) -> Outcome {
    let runs: Vec<Vec<(String, Cost)>> = [1, 2, 8].iter().map(|&w| exec::with_workers(w, || fingerprint(s))).collect();
    check(runs[0] == runs[1] && runs[0] == runs[2], || {
        let k = (0..runs[0].len()).find(|&k| runs[0][k] != runs[1][k] || runs[0][k] != runs[2][k]).unwrap_or(0);
        format!("run {k} differs across worker counts")
    })?;
    check(runs[0].iter().all(|(_, c)| c.span <= c.work), || "span exceeds work".into())?;

    // span of code_equivalence on random binary codes of dimension 3
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut fit = Vec::new();
    for m in [8usize, 12, 16] {
        let c1 = random_code(&mut rng, 2, 3, m);
        let c2 = c1.permuted(&random_perm(&mut rng, m));
        let (_, cost) = exec::measure(|| code_equivalence(&c1, &c2).unwrap().size());
        check(cost.span <= cost.work, || format!("m={m}: span exceeds work"))?;
        fit.push((m, cost.span, cost.span as f64 / (m * m * m) as f64));
    }
    let c = fit.iter().map(|x| x.2).fold(0.0, f64::max);
    let spans: Vec<String> = fit.iter().map(|(m, s, r)| format!("m={m}: span {s} ({r:.3}·m³)")).collect();
    Ok(format!("{} runs identical for 1/2/8 workers; {}; C = {c:.3}", runs[0].len(), spans.join(", ")))
}

fn main() {
    // no command-line filtering: the suite always runs in full
    let suite = coprime_suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("coprime oracle agreement", Box::new(|| criterion_1(&suite))),
        ("relabeling invariance", Box::new(|| criterion_2(&suite))),
        ("code equivalence vs m! search", Box::new(criterion_3)),
        ("graph machinery vs exhaustion", Box::new(criterion_4)),
        ("permutation engine vs enumeration", Box::new(criterion_5)),
        ("cohomology of Z2 by A5", Box::new(criterion_6)),
        ("automorphism generators", Box::new(criterion_7)),
        ("block reduction conjugacy", Box::new(criterion_8)),
        ("determinism and span laws", Box::new(|| criterion_9(&suite))),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} [{secs:.1} s]", n + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} [{secs:.1} s]", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
