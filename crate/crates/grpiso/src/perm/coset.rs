use std::collections::HashSet;

use super::{Perm, PermError, PermGroup};
use crate::exec;

/// Default cap on the number of transversal representatives.
pub const TRANSVERSAL_CAP: usize = 1_000_000;

/// A left coset `rep ∘ group`, or the empty set.
#[derive(Clone, Debug)]
pub struct PermCoset {
    pub rep: Option<Perm>,
    pub group: PermGroup,
}

impl PermCoset {
    pub fn new(rep: Perm, group: PermGroup) -> Self {
        PermCoset { rep: Some(rep), group }
    }

    pub fn empty(degree: usize) -> Self {
        PermCoset { rep: None, group: PermGroup::trivial(degree) }
    }

    /// The group itself as a coset.
    pub fn from_group(group: PermGroup) -> Self {
        PermCoset { rep: Some(Perm::identity(group.degree())), group }
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_none()
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn size(&self) -> u128 {
        if self.rep.is_some() {
            self.group.order()
        } else {
            0
        }
    }

    pub fn contains(&self, sigma: &Perm) -> bool {
        match &self.rep {
            None => false,
            Some(r) => self.group.contains(&r.inverse().compose(sigma)),
        }
    }

    /// `x ∘ self`.
    pub fn left_mul(&self, x: &Perm) -> PermCoset {
        PermCoset { rep: self.rep.as_ref().map(|r| x.compose(r)), group: self.group.clone() }
    }

    pub fn elements(&self) -> Vec<Perm> {
        match &self.rep {
            None => Vec::new(),
            Some(r) => self.group.elements().iter().map(|g| r.compose(g)).collect(),
        }
    }
}

/// Rebuild both groups over one shared base.
fn common_base(g: &PermGroup, h: &PermGroup) -> (PermGroup, PermGroup) {
    let m = g.degree();
    let h1 = PermGroup::with_base_prefix(&h.strong_generators(), m, &g.base()).unwrap();
    let g1 = PermGroup::with_base_prefix(&g.strong_generators(), m, &h1.base()).unwrap();
    let h2 = PermGroup::with_base_prefix(&h.strong_generators(), m, &g1.base()).unwrap();
    debug_assert_eq!(g1.base(), h2.base());
    (g1, h2)
}

/// Depth-first search for `g ∈ G` with `zinv ∘ g ∈ H`, extending the partial
/// product `g` (levels `< level` fixed) and the matching partial `H` product `w`.
fn search(
    gb: &PermGroup,
    hb: &PermGroup,
    level: usize,
    g: &Perm,
    w: &Perm,
    zinv: &Perm,
) -> Option<Perm> {
    exec::tick(1);
    if level == gb.level_count() {
        return (zinv.compose(g) == *w).then(|| g.clone());
    }
    let beta = gb.level_point(level);
    let winv = w.inverse();
    let mut orbit: Vec<usize> = gb.level_orbit(level).to_vec();
    orbit.sort_by_key(|&d| g.apply(d));
    for d in orbit {
        let u = gb.level_trans(level, d).unwrap();
        let g2 = g.compose(u);
        let gamma = zinv.apply(g2.apply(beta));
        let dh = winv.apply(gamma);
        let Some(t) = hb.level_trans(level, dh) else {
            continue;
        };
        let w2 = w.compose(t);
        if let Some(found) = search(gb, hb, level + 1, &g2, &w2, zinv) {
            return Some(found);
        }
    }
    None
}

fn orbit_of(gens: &[Perm], start: usize, m: usize) -> Vec<bool> {
    let mut seen = vec![false; m];
    seen[start] = true;
    let mut st = vec![start];
    while let Some(x) = st.pop() {
        for s in gens {
            let y = s.apply(x);
            if !seen[y] {
                seen[y] = true;
                st.push(y);
            }
        }
    }
    seen
}

/// `G ∩ H` by levelwise search from the bottom of the shared stabilizer chain.
fn subgroup_intersection(gb: &PermGroup, hb: &PermGroup) -> PermGroup {
    let m = gb.degree();
    let id = Perm::identity(m);
    let mut kgens: Vec<Perm> = Vec::new();
    for l in (0..gb.level_count()).rev() {
        let beta = gb.level_point(l);
        let mut reach = orbit_of(&kgens, beta, m);
        let mut dead = vec![false; m];
        let mut cands: Vec<usize> = gb.level_orbit(l).to_vec();
        cands.sort_unstable();
        for gamma in cands {
            if reach[gamma] || dead[gamma] {
                continue;
            }
            let found = match hb.level_trans(l, gamma) {
                None => None,
                Some(t) => {
                    let u = gb.level_trans(l, gamma).unwrap();
                    search(gb, hb, l + 1, u, t, &id)
                }
            };
            match found {
                Some(k) => {
                    kgens.push(k);
                    reach = orbit_of(&kgens, beta, m);
                }
                None => {
                    for (x, r) in orbit_of(&kgens, gamma, m).into_iter().enumerate() {
                        if r {
                            dead[x] = true;
                        }
                    }
                }
            }
        }
    }
    PermGroup::new(&kgens, m).unwrap()
}

/// `xG ∩ yH` by backtracking over the shared stabilizer chain.
pub fn coset_intersection(c1: &PermCoset, c2: &PermCoset) -> PermCoset {
    let m = c1.degree();
    assert_eq!(m, c2.degree(), "coset degrees differ");
    let (Some(x), Some(y)) = (&c1.rep, &c2.rep) else {
        return PermCoset::empty(m);
    };
    let (gb, hb) = common_base(&c1.group, &c2.group);
    let z = x.inverse().compose(y);
    let zinv = z.inverse();
    let id = Perm::identity(m);
    let Some(w) = search(&gb, &hb, 0, &id, &id, &zinv) else {
        return PermCoset::empty(m);
    };
    let k = subgroup_intersection(&gb, &hb);
    PermCoset::new(x.compose(&w), k.reduced())
}

/// Canonical element of the left coset `x ∘ H`: lexicographically least
/// images of the base of `H`.
fn canonical(h: &PermGroup, x: &Perm) -> Perm {
    let mut c = x.clone();
    for l in 0..h.level_count() {
        let d = *h.level_orbit(l).iter().min_by_key(|&&d| c.apply(d)).unwrap();
        c = c.compose(h.level_trans(l, d).unwrap());
    }
    c
}

/// One representative of each left coset of `h` in `g`, starting with the identity.
pub fn transversal(g: &PermGroup, h: &PermGroup, cap: usize) -> Result<Vec<Perm>, PermError> {
    if !h.is_subgroup_of(g) {
        return Err(PermError::NotSubgroup);
    }
    let index = g.order() / h.order();
    if index > cap as u128 {
        return Err(PermError::IndexGuardExceeded { index, cap });
    }
    let m = g.degree();
    let id = Perm::identity(m);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(canonical(h, &id));
    let mut reps = vec![id];
    let gens = g.strong_generators();
    let mut i = 0;
    while i < reps.len() {
        for s in &gens {
            let cand = s.compose(&reps[i]);
            if seen.insert(canonical(h, &cand)) {
                reps.push(cand);
            }
        }
        i += 1;
    }
    exec::tick(reps.len() as u64);
    debug_assert_eq!(reps.len() as u128, index);
    Ok(reps)
}
