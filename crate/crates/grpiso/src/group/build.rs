use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CayleyTable, GroupError};
use crate::cohom::CocycleMatrix;

/// Constructor expressions for the groups used in tests and the corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Cyclic(usize),
    ElemAbelian { p: u64, k: usize },
    Sym(usize),
    Alt(usize),
    /// Dihedral group of order `n`.
    Dihedral(usize),
    Sl2(u64),
    DirectProduct(Vec<GroupDescriptor>),
    /// `Z_q^l ⋉ (Z_{m_1} × … × Z_{m_k})`. Basis vector `i` of `Z_q^l` acts by the
    /// integer matrix `action[i]` on column vectors.
    Semidirect { q: u64, l: usize, moduli: Vec<u64>, action: Vec<Vec<Vec<i64>>> },
    /// Central extension of the quotient by `∏ Z_{m_i}` with a normalized cocycle.
    CentralExt { quotient: Box<GroupDescriptor>, cocycle: CocycleMatrix },
    Relabel(Box<GroupDescriptor>, u64),
}

impl GroupDescriptor {
    pub fn semidirect_elem(q: u64, l: usize, p: u64, k: usize, action: Vec<Vec<Vec<i64>>>) -> Self {
        GroupDescriptor::Semidirect { q, l, moduli: vec![p; k], action }
    }

    pub fn relabel(self, seed: u64) -> Self {
        GroupDescriptor::Relabel(Box::new(self), seed)
    }

    /// Order predicted from the descriptor alone.
    pub fn order(&self) -> usize {
        use GroupDescriptor::*;
        match self {
            Cyclic(n) | Dihedral(n) => *n,
            ElemAbelian { p, k } => p.pow(*k as u32) as usize,
            Sym(n) => (1..=*n).product(),
            Alt(n) => ((1..=*n).product::<usize>() / 2).max(1),
            Sl2(p) => (p * (p * p - 1)) as usize,
            DirectProduct(v) => v.iter().map(|d| d.order()).product(),
            Semidirect { q, l, moduli, .. } => {
                q.pow(*l as u32) as usize * moduli.iter().product::<u64>() as usize
            }
            CentralExt { quotient, cocycle } => {
                quotient.order() * cocycle.moduli().iter().product::<u64>() as usize
            }
            Relabel(d, _) => d.order(),
        }
    }
}

fn fmt_matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupDescriptor::*;
        match self {
            Cyclic(n) => write!(f, "cyclic({n})"),
            ElemAbelian { p, k } => write!(f, "elem_abelian({p},{k})"),
            Sym(n) => write!(f, "sym({n})"),
            Alt(n) => write!(f, "alt({n})"),
            Dihedral(n) => write!(f, "dihedral({n})"),
            Sl2(p) => write!(f, "sl2({p})"),
            DirectProduct(v) => {
                let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
                write!(f, "direct_product({})", parts.join(","))
            }
            Semidirect { q, l, moduli, action } => {
                let act = if action.len() == 1 {
                    fmt_matrix(&action[0])
                } else {
                    format!("[{}]", action.iter().map(|m| fmt_matrix(m)).collect::<Vec<_>>().join(","))
                };
                let uniform = moduli.windows(2).all(|w| w[0] == w[1])
                    && moduli.first().is_some_and(|&m| crate::arith::is_prime(m));
                if uniform {
                    write!(f, "semidirect(q={q},l={l},p={},k={},action={act})", moduli[0], moduli.len())
                } else {
                    write!(f, "semidirect(q={q},l={l},moduli={},action={act})", fmt_list(moduli))
                }
            }
            CentralExt { quotient, cocycle } => {
                let c = if cocycle.is_zero() {
                    "zero".to_string()
                } else {
                    format!(
                        "[{}]",
                        cocycle.rows().iter().map(|r| fmt_list(r)).collect::<Vec<_>>().join(",")
                    )
                };
                write!(f, "central_ext(Q={quotient},A={},cocycle={c})", fmt_list(cocycle.moduli()))
            }
            Relabel(d, seed) => write!(f, "relabel({d},seed={seed})"),
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone)]
enum Value {
    Int(i64),
    Word(String),
    List(Vec<Value>),
    Call(String, Vec<(Option<String>, Value)>),
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

fn bad(msg: impl Into<String>) -> GroupError {
    GroupError::BadDescriptor(msg.into())
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn ident(&mut self) -> String {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        String::from_utf8_lossy(&self.s[st..self.i]).into_owned()
    }

    fn value(&mut self) -> Result<Value, GroupError> {
        match self.peek() {
            Some(b'[') => {
                self.i += 1;
                let mut items = Vec::new();
                if self.peek() == Some(b']') {
                    self.i += 1;
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.value()?);
                    match self.peek() {
                        Some(b',') => self.i += 1,
                        Some(b']') => {
                            self.i += 1;
                            return Ok(Value::List(items));
                        }
                        _ => return Err(bad("unterminated list")),
                    }
                }
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let st = self.i;
                self.i += 1;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let t = std::str::from_utf8(&self.s[st..self.i]).unwrap();
                t.parse().map(Value::Int).map_err(|_| bad(format!("bad integer {t}")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                if self.peek() != Some(b'(') {
                    return Ok(Value::Word(name));
                }
                self.i += 1;
                let mut args = Vec::new();
                if self.peek() == Some(b')') {
                    self.i += 1;
                    return Ok(Value::Call(name, args));
                }
                loop {
                    let save = self.i;
                    let key = self.ident();
                    let key = if !key.is_empty() && self.peek() == Some(b'=') {
                        self.i += 1;
                        Some(key)
                    } else {
                        self.i = save;
                        None
                    };
                    args.push((key, self.value()?));
                    match self.peek() {
                        Some(b',') => self.i += 1,
                        Some(b')') => {
                            self.i += 1;
                            return Ok(Value::Call(name, args));
                        }
                        _ => return Err(bad("unterminated argument list")),
                    }
                }
            }
            _ => Err(bad(format!("unexpected input at offset {}", self.i))),
        }
    }
}

struct Args {
    name: String,
    items: Vec<(Option<String>, Value)>,
}

impl Args {
    /// Argument by key, falling back to position.
    fn get(&self, key: &str, pos: usize) -> Result<&Value, GroupError> {
        if let Some((_, v)) = self.items.iter().find(|(k, _)| k.as_deref() == Some(key)) {
            return Ok(v);
        }
        match self.items.get(pos) {
            Some((None, v)) => Ok(v),
            _ => Err(bad(format!("{}: missing argument {key}", self.name))),
        }
    }

    fn opt(&self, key: &str) -> Option<&Value> {
        self.items.iter().find(|(k, _)| k.as_deref() == Some(key)).map(|(_, v)| v)
    }

    fn int(&self, key: &str, pos: usize) -> Result<i64, GroupError> {
        match self.get(key, pos)? {
            Value::Int(x) => Ok(*x),
            _ => Err(bad(format!("{}: {key} must be an integer", self.name))),
        }
    }

    fn uint(&self, key: &str, pos: usize) -> Result<u64, GroupError> {
        let x = self.int(key, pos)?;
        u64::try_from(x).map_err(|_| bad(format!("{}: {key} must be non-negative", self.name)))
    }
}

fn int_list(v: &Value) -> Result<Vec<i64>, GroupError> {
    match v {
        Value::List(xs) => xs
            .iter()
            .map(|x| match x {
                Value::Int(i) => Ok(*i),
                _ => Err(bad("expected integer list")),
            })
            .collect(),
        _ => Err(bad("expected list")),
    }
}

fn matrix(v: &Value) -> Result<Vec<Vec<i64>>, GroupError> {
    match v {
        Value::List(rows) => rows.iter().map(int_list).collect(),
        _ => Err(bad("expected matrix")),
    }
}

fn depth(v: &Value) -> usize {
    match v {
        Value::List(xs) => 1 + xs.first().map_or(0, depth),
        _ => 0,
    }
}

fn to_descriptor(v: &Value) -> Result<GroupDescriptor, GroupError> {
    use GroupDescriptor::*;
    let Value::Call(name, items) = v else {
        return Err(bad("expected a constructor"));
    };
    let a = Args { name: name.clone(), items: items.clone() };
    let usz = |k: &str, p: usize| a.uint(k, p).map(|x| x as usize);
    Ok(match name.as_str() {
        "cyclic" => Cyclic(usz("n", 0)?),
        "elem_abelian" => ElemAbelian { p: a.uint("p", 0)?, k: usz("k", 1)? },
        "sym" => Sym(usz("n", 0)?),
        "alt" => Alt(usz("n", 0)?),
        "dihedral" => Dihedral(usz("n", 0)?),
        "sl2" => Sl2(a.uint("p", 0)?),
        "direct_product" => {
            let parts: Result<Vec<_>, _> = a.items.iter().map(|(_, v)| to_descriptor(v)).collect();
            DirectProduct(parts?)
        }
        "semidirect" => {
            let q = a.uint("q", 0)?;
            let l = usz("l", 1)?;
            let moduli: Vec<u64> = match a.opt("moduli") {
                Some(m) => int_list(m)?.into_iter().map(|x| x as u64).collect(),
                None => vec![a.uint("p", 2)?; usz("k", 3)?],
            };
            let act = a.get("action", 4)?;
            let action = match depth(act) {
                2 => vec![matrix(act)?],
                3 => match act {
                    Value::List(ms) => ms.iter().map(matrix).collect::<Result<_, _>>()?,
                    _ => unreachable!(),
                },
                // l = 0 or k = 0
                _ => match act {
                    Value::List(ms) if ms.is_empty() => vec![],
                    _ => return Err(bad("semidirect: malformed action")),
                },
            };
            Semidirect { q, l, moduli, action }
        }
        "central_ext" => {
            let quotient = to_descriptor(a.get("Q", 0)?)?;
            let moduli: Vec<u64> = int_list(a.get("A", 1)?)?.into_iter().map(|x| x as u64).collect();
            let qn = quotient.order();
            let cocycle = match a.get("cocycle", 2)? {
                Value::Word(w) if w == "zero" => CocycleMatrix::zero(&moduli, qn),
                v @ Value::List(_) => {
                    let rows: Vec<Vec<u64>> = matrix(v)?
                        .into_iter()
                        .zip(&moduli)
                        .map(|(r, &m)| r.into_iter().map(|x| x.rem_euclid(m as i64) as u64).collect())
                        .collect();
                    if rows.len() != moduli.len() || rows.iter().any(|r| r.len() != qn * qn) {
                        return Err(GroupError::BadCocycle("cocycle must be k x |Q|^2".into()));
                    }
                    CocycleMatrix::from_rows(&moduli, qn, rows)
                }
                _ => return Err(bad("central_ext: cocycle must be 'zero' or a matrix")),
            };
            CentralExt { quotient: Box::new(quotient), cocycle }
        }
        "relabel" => Relabel(Box::new(to_descriptor(a.get("G", 0)?)?), a.uint("seed", 1)?),
        other => return Err(bad(format!("unknown constructor {other}"))),
    })
}

/// Parse a one-line descriptor such as `semidirect(q=2,l=1,p=3,k=1,action=[[2]])`.
pub fn parse_descriptor(s: &str) -> Result<GroupDescriptor, GroupError> {
    let mut p = Parser { s: s.as_bytes(), i: 0 };
    let v = p.value()?;
    if p.peek().is_some() {
        return Err(bad(format!("trailing input at offset {}", p.i)));
    }
    to_descriptor(&v)
}

// ---------------------------------------------------------------- building

/// Number a list of coordinate tuples: identity first, then the rest in the
/// given (lexicographic) order.
fn number<T: Clone + Eq + std::hash::Hash>(
    mut elems: Vec<T>,
    identity: &T,
    mul: impl Fn(&T, &T) -> T,
) -> CayleyTable {
    let pos = elems.iter().position(|e| e == identity).expect("identity present");
    let id = elems.remove(pos);
    elems.insert(0, id);
    let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    CayleyTable::from_fn(elems.len(), |a, b| index[&mul(&elems[a], &elems[b])])
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn is_even(p: &[u8]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

fn compose(a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn mixed_radix(moduli: &[u64]) -> Vec<Vec<u64>> {
    let total: u64 = moduli.iter().product();
    (0..total)
        .map(|mut x| {
            let mut c = vec![0; moduli.len()];
            for i in (0..moduli.len()).rev() {
                c[i] = x % moduli[i];
                x /= moduli[i];
            }
            c
        })
        .collect()
}

fn radix_index(c: &[u64], moduli: &[u64]) -> usize {
    c.iter().zip(moduli).fold(0, |acc, (&x, &m)| acc * m as usize + x as usize)
}

/// Apply an integer matrix to a vector of `∏ Z_{m_i}`.
fn act(m: &[Vec<i64>], v: &[u64], moduli: &[u64]) -> Vec<u64> {
    moduli
        .iter()
        .enumerate()
        .map(|(i, &mi)| {
            let s: i64 = m[i].iter().zip(v).map(|(&a, &x)| a * x as i64).sum();
            s.rem_euclid(mi as i64) as u64
        })
        .collect()
}

fn build_semidirect(
    q: u64,
    l: usize,
    moduli: &[u64],
    action: &[Vec<Vec<i64>>],
) -> Result<CayleyTable, GroupError> {
    let k = moduli.len();
    let badact = |s: &str| Err(GroupError::BadAction(s.to_string()));
    if q == 0 || moduli.iter().any(|&m| m == 0) {
        return badact("zero modulus");
    }
    if action.len() != l {
        return badact("need one matrix per generator of the acting group");
    }
    if action.iter().any(|m| m.len() != k || m.iter().any(|r| r.len() != k)) {
        return badact("matrices must be k x k");
    }
    let nvecs = mixed_radix(moduli);
    let nn = nvecs.len();
    // each generator as a permutation of N, checking well-definedness
    let mut gen_perms: Vec<Vec<usize>> = Vec::with_capacity(l);
    for m in action {
        for i in 0..k {
            for j in 0..k {
                if (m[i][j] * moduli[j] as i64).rem_euclid(moduli[i] as i64) != 0 {
                    return badact("matrix does not define an endomorphism");
                }
            }
        }
        let img: Vec<usize> = nvecs.iter().map(|v| radix_index(&act(m, v, moduli), moduli)).collect();
        let mut seen = vec![false; nn];
        for &x in &img {
            if seen[x] {
                return badact("matrix is not invertible");
            }
            seen[x] = true;
        }
        // additivity on the generators' images
        for a in 0..nn {
            for b in 0..nn {
                let s: Vec<u64> = (0..k).map(|i| (nvecs[a][i] + nvecs[b][i]) % moduli[i]).collect();
                let si = radix_index(&s, moduli);
                let t: Vec<u64> =
                    (0..k).map(|i| (nvecs[img[a]][i] + nvecs[img[b]][i]) % moduli[i]).collect();
                if img[si] != radix_index(&t, moduli) {
                    return badact("matrix is not additive");
                }
            }
        }
        gen_perms.push(img);
    }
    let compose_p = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    for (i, g) in gen_perms.iter().enumerate() {
        let mut pw: Vec<usize> = (0..nn).collect();
        for _ in 0..q {
            pw = compose_p(g, &pw);
        }
        if pw.iter().enumerate().any(|(x, &y)| x != y) {
            return badact(&format!("matrix {i} has order not dividing q"));
        }
        for h in &gen_perms[..i] {
            if compose_p(g, h) != compose_p(h, g) {
                return badact("matrices do not commute");
            }
        }
    }
    let hmod = vec![q; l];
    let hvecs = mixed_radix(&hmod);
    // action of each h as a permutation of N
    let hperm: Vec<Vec<usize>> = hvecs
        .iter()
        .map(|h| {
            let mut p: Vec<usize> = (0..nn).collect();
            for (i, &e) in h.iter().enumerate() {
                for _ in 0..e {
                    p = compose_p(&gen_perms[i], &p);
                }
            }
            p
        })
        .collect();
    let nh = hvecs.len();
    let add_n = |a: usize, b: usize| {
        let s: Vec<u64> = (0..k).map(|i| (nvecs[a][i] + nvecs[b][i]) % moduli[i]).collect();
        radix_index(&s, moduli)
    };
    let add_h = |a: usize, b: usize| {
        let s: Vec<u64> = (0..l).map(|i| (hvecs[a][i] + hvecs[b][i]) % q).collect();
        radix_index(&s, &hmod)
    };
    Ok(CayleyTable::from_fn(nh * nn, |x, y| {
        let (h1, n1) = (x / nn, x % nn);
        let (h2, n2) = (y / nn, y % nn);
        add_h(h1, h2) * nn + add_n(n1, hperm[h1][n2])
    }))
    .map(|t| {
        debug_assert!(t.order() == nh * nn);
        t
    })
}

fn build_central_ext(qg: &CayleyTable, f: &CocycleMatrix) -> Result<CayleyTable, GroupError> {
    let moduli = f.moduli();
    if f.quotient_order() != qg.order() {
        return Err(GroupError::BadCocycle("cocycle width does not match |Q|^2".into()));
    }
    if !f.is_normalized() {
        return Err(GroupError::BadCocycle("cocycle is not normalized".into()));
    }
    if let Some((a, b, c)) = f.cocycle_violation(qg) {
        return Err(GroupError::BadCocycle(format!("identity fails at ({a},{b},{c})")));
    }
    let avecs = mixed_radix(moduli);
    let nq = qg.order();
    let na = avecs.len();
    Ok(CayleyTable::from_fn(na * nq, |x, y| {
        let (a1, q1) = (x / nq, x % nq);
        let (a2, q2) = (y / nq, y % nq);
        let s: Vec<u64> = (0..moduli.len())
            .map(|i| (avecs[a1][i] + avecs[a2][i] + f.get(i, q1, q2)) % moduli[i])
            .collect();
        radix_index(&s, moduli) * nq + qg.mul(q1, q2)
    }))
}

/// Relabel the non-identity elements by a seeded random permutation.
pub fn relabel_table(g: &CayleyTable, seed: u64) -> (CayleyTable, Vec<usize>) {
    let n = g.order();
    let mut rest: Vec<usize> = (1..n).collect();
    rest.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut sigma = vec![0; n];
    for (i, &x) in rest.iter().enumerate() {
        sigma[i + 1] = x;
    }
    let mut inv = vec![0; n];
    for (a, &b) in sigma.iter().enumerate() {
        inv[b] = a;
    }
    let t = CayleyTable::from_fn(n, |a, b| sigma[g.mul(inv[a], inv[b])]);
    (t, sigma)
}

/// Build the Cayley table of a descriptor.
pub fn build_group(d: &GroupDescriptor) -> Result<CayleyTable, GroupError> {
    use GroupDescriptor::*;
    let g = match d {
        Cyclic(n) => {
            if *n == 0 {
                return Err(bad("cyclic(0)"));
            }
            CayleyTable::from_fn(*n, |a, b| (a + b) % n)
        }
        ElemAbelian { p, k } => {
            if !crate::arith::is_prime(*p) {
                return Err(bad("elem_abelian needs a prime"));
            }
            let moduli = vec![*p; *k];
            build_semidirect(1, 0, &moduli, &[])?
        }
        Sym(n) => {
            let perms = permutations(*n);
            let id: Vec<u8> = (0..*n as u8).collect();
            number(perms, &id, compose)
        }
        Alt(n) => {
            let perms: Vec<Vec<u8>> = permutations(*n).into_iter().filter(|p| is_even(p)).collect();
            let id: Vec<u8> = (0..*n as u8).collect();
            number(perms, &id, compose)
        }
        Dihedral(n) => {
            if *n < 2 || n % 2 == 1 {
                return Err(bad("dihedral(n) needs even n >= 2"));
            }
            let r = n / 2;
            // s^a r^i  with  (s^a r^i)(s^b r^j) = s^{a+b} r^{(-1)^b i + j}
            CayleyTable::from_fn(*n, |x, y| {
                let (a, i) = (x / r, x % r);
                let (b, j) = (y / r, y % r);
                let ii = if b == 1 { (r - i) % r } else { i };
                ((a + b) % 2) * r + (ii + j) % r
            })
        }
        Sl2(p) => {
            let p = *p;
            if !crate::arith::is_prime(p) {
                return Err(bad("sl2 needs a prime"));
            }
            let mut elems = Vec::new();
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        for dd in 0..p {
                            if (a * dd + p * p - b * c) % p == 1 {
                                elems.push([a, b, c, dd]);
                            }
                        }
                    }
                }
            }
            number(elems, &[1, 0, 0, 1], |x, y| {
                [
                    (x[0] * y[0] + x[1] * y[2]) % p,
                    (x[0] * y[1] + x[1] * y[3]) % p,
                    (x[2] * y[0] + x[3] * y[2]) % p,
                    (x[2] * y[1] + x[3] * y[3]) % p,
                ]
            })
        }
        DirectProduct(parts) => {
            let tables: Vec<CayleyTable> = parts.iter().map(build_group).collect::<Result<_, _>>()?;
            let orders: Vec<u64> = tables.iter().map(|t| t.order() as u64).collect();
            let coords = mixed_radix(&orders);
            let total = coords.len();
            CayleyTable::from_fn(total, |x, y| {
                let c: Vec<u64> = (0..tables.len())
                    .map(|i| tables[i].mul(coords[x][i] as usize, coords[y][i] as usize) as u64)
                    .collect();
                radix_index(&c, &orders)
            })
        }
        Semidirect { q, l, moduli, action } => build_semidirect(*q, *l, moduli, action)?,
        CentralExt { quotient, cocycle } => build_central_ext(&build_group(quotient)?, cocycle)?,
        Relabel(inner, seed) => relabel_table(&build_group(inner)?, *seed).0,
    };
    debug_assert_eq!(g.order(), d.order());
    Ok(g)
}
