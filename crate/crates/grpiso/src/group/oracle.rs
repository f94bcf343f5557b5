use super::{CayleyTable, GroupError, GroupHom};
use crate::exec;

/// Default order limit for [`oracle_aut`].
pub const ORACLE_GUARD: usize = 256;

/// A small generating set: repeatedly add the lowest-index element of maximal
/// order outside the subgroup generated so far.
pub fn generating_set(g: &CayleyTable) -> Vec<usize> {
    let n = g.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut count = 1;
    let mut gens = Vec::new();
    while count < n {
        let x = (0..n)
            .filter(|&x| !inside[x])
            .max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)))
            .unwrap();
        gens.push(x);
        let mut elems: Vec<usize> = (0..n).filter(|&y| inside[y]).collect();
        let mut i = 0;
        while i < elems.len() {
            let y = elems[i];
            for &s in &gens {
                let z = g.mul(y, s);
                if !inside[z] {
                    inside[z] = true;
                    elems.push(z);
                }
            }
            i += 1;
        }
        count = elems.len();
    }
    gens
}

/// Search state for extending a partial map generator by generator.
struct Search<'a> {
    g: &'a CayleyTable,
    h: &'a CayleyTable,
    gens: Vec<usize>,
    candidates: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a CayleyTable, h: &'a CayleyTable) -> Self {
        let gens = generating_set(g);
        let candidates = gens
            .iter()
            .map(|&x| (0..h.order()).filter(|&y| h.element_order(y) == g.element_order(x)).collect())
            .collect();
        Search { g, h, gens, candidates }
    }

    /// The map `gens[i] ↦ imgs[i]` (`i <= j`) on `<gens[..=j]>`, if it is an
    /// injective homomorphism there.
    fn extend(&self, j: usize, imgs: &[usize]) -> Option<Vec<usize>> {
        let (g, h) = (self.g, self.h);
        let mut phi = vec![usize::MAX; g.order()];
        let mut used = vec![false; h.order()];
        phi[0] = 0;
        used[0] = true;
        let mut queue = vec![0usize];
        let mut qi = 0;
        while qi < queue.len() {
            let x = queue[qi];
            qi += 1;
            for i in 0..=j {
                let y = g.mul(x, self.gens[i]);
                let v = h.mul(phi[x], imgs[i]);
                if phi[y] == usize::MAX {
                    if used[v] {
                        return None;
                    }
                    phi[y] = v;
                    used[v] = true;
                    queue.push(y);
                } else if phi[y] != v {
                    return None;
                }
            }
        }
        exec::tick(queue.len() as u64);
        Some(phi)
    }

    fn dfs(&self, map: &[usize], imgs: &mut Vec<usize>, all: bool, out: &mut Vec<Vec<usize>>) -> bool {
        let j = imgs.len();
        if j == self.gens.len() {
            out.push(map.to_vec());
            return !all;
        }
        for &c in &self.candidates[j] {
            if map.contains(&c) {
                continue;
            }
            imgs.push(c);
            if let Some(next) = self.extend(j, imgs) {
                if self.dfs(&next, imgs, all, out) {
                    imgs.pop();
                    return true;
                }
            }
            imgs.pop();
        }
        false
    }

    /// All (or the first) isomorphisms, in lexicographic order of generator images.
    fn run(&self, all: bool) -> Vec<Vec<usize>> {
        let n = self.g.order();
        if self.gens.is_empty() {
            return vec![vec![0; n.min(1)]];
        }
        let job = |&c: &usize| {
            let mut imgs = vec![c];
            let mut out = Vec::new();
            if let Some(next) = self.extend(0, &imgs) {
                self.dfs(&next, &mut imgs, all, &mut out);
            }
            out
        };
        if all {
            exec::par_map(&self.candidates[0], job).into_iter().flatten().collect()
        } else {
            exec::par_find_first(&self.candidates[0], |c| job(c).into_iter().next())
                .into_iter()
                .collect()
        }
    }
}

/// An isomorphism `g → h` found by generator enumeration, or `None` after
/// exhausting all generator images. The witness is the first in lexicographic
/// order of generator images.
pub fn oracle_iso(g: &CayleyTable, h: &CayleyTable) -> Option<GroupHom> {
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return None;
    }
    let s = Search::new(g, h);
    s.run(false).into_iter().next().map(|img| GroupHom::new(img, h.order()))
}

/// All automorphisms of `g`, refusing groups above [`ORACLE_GUARD`].
pub fn oracle_aut(g: &CayleyTable) -> Result<Vec<GroupHom>, GroupError> {
    oracle_aut_guarded(g, ORACLE_GUARD)
}

pub fn oracle_aut_guarded(g: &CayleyTable, guard: usize) -> Result<Vec<GroupHom>, GroupError> {
    if g.order() > guard {
        return Err(GroupError::TooLarge { order: g.order(), guard });
    }
    let s = Search::new(g, g);
    Ok(s.run(true).into_iter().map(|img| GroupHom::new(img, g.order())).collect())
}
