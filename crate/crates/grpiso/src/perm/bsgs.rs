use super::{Perm, PermError};
use crate::exec;

/// A word over the original generators: `(index, inverted)` factors, read as a
/// composition left to right (`w[0] ∘ w[1] ∘ …`).
pub type Word = Vec<(usize, bool)>;

#[derive(Clone, Debug)]
enum Node {
    Id,
    Gen(usize),
    Inv(u32),
    Prod(u32, u32),
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// indices into `strong`
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// `trans[γ] = (u, word)` with `u(point) = γ`
    trans: Vec<Option<(Perm, u32)>>,
}

/// A permutation group with a base and strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    strong: Vec<(Perm, u32)>,
    levels: Vec<Level>,
    words: Vec<Node>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        Level { point, gens: Vec::new(), orbit: Vec::new(), trans: vec![None; degree] }
    }
}

impl PermGroup {
    /// Schreier-Sims on `gens`. The base is taken as `prefix` followed by the
    /// first moved point of each generator that fixes the base so far.
    pub fn with_base_prefix(gens: &[Perm], degree: usize, prefix: &[usize]) -> Result<Self, PermError> {
        for g in gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let mut words = vec![Node::Id];
        let mut strong = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if !g.is_identity() {
                words.push(Node::Gen(i));
                strong.push((g.clone(), (words.len() - 1) as u32));
            }
        }
        let mut grp = PermGroup {
            degree,
            gens: gens.to_vec(),
            strong: Vec::new(),
            levels: prefix.iter().map(|&p| Level::new(p, degree)).collect(),
            words,
        };
        for (g, w) in strong {
            grp.add_strong(g, w, 0);
        }
        grp.schreier_sims();
        Ok(grp)
    }

    pub fn new(gens: &[Perm], degree: usize) -> Result<Self, PermError> {
        Self::with_base_prefix(gens, degree, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(&[], degree).unwrap()
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[&[0, 1]]));
            let cyc: Vec<usize> = (0..degree).collect();
            gens.push(Perm::from_cycles(degree, &[&cyc]));
        }
        Self::new(&gens, degree).unwrap()
    }

    /// Symmetric group on each of the given disjoint point sets.
    pub fn young(degree: usize, parts: &[Vec<usize>]) -> Self {
        let mut gens = Vec::new();
        for part in parts {
            if part.len() >= 2 {
                gens.push(Perm::from_cycles(degree, &[&[part[0], part[1]]]));
                gens.push(Perm::from_cycles(degree, &[part]));
            }
        }
        Self::new(&gens, degree).unwrap()
    }

    fn push_word(&mut self, n: Node) -> u32 {
        self.words.push(n);
        (self.words.len() - 1) as u32
    }

    /// Register `g` as a strong generator on levels `from..` that it fixes the
    /// base points below; extend the base if it fixes every base point.
    fn add_strong(&mut self, g: Perm, w: u32, from: usize) {
        let idx = self.strong.len();
        self.strong.push((g.clone(), w));
        let mut l = 0;
        loop {
            if l == self.levels.len() {
                let p = g.first_moved().expect("identity is never a strong generator");
                self.levels.push(Level::new(p, self.degree));
            }
            if l >= from {
                self.levels[l].gens.push(idx);
                self.recompute_orbit(l);
            }
            if g.apply(self.levels[l].point) != self.levels[l].point {
                break;
            }
            l += 1;
        }
    }

    fn recompute_orbit(&mut self, l: usize) {
        let lv = &self.levels[l];
        let degree = self.degree;
        let mut trans: Vec<Option<(Perm, u32)>> = vec![None; degree];
        let mut new_nodes = Vec::new();
        let base_word = 0u32;
        trans[lv.point] = Some((Perm::identity(degree), base_word));
        let mut orbit = vec![lv.point];
        let mut i = 0;
        let next_id = self.words.len() as u32;
        while i < orbit.len() {
            let d = orbit[i];
            i += 1;
            for &si in &lv.gens {
                let (s, sw) = &self.strong[si];
                let e = s.apply(d);
                if trans[e].is_none() {
                    let (u, uw) = trans[d].as_ref().unwrap();
                    let id = next_id + new_nodes.len() as u32;
                    new_nodes.push(Node::Prod(*sw, *uw));
                    trans[e] = Some((s.compose(u), id));
                    orbit.push(e);
                }
            }
        }
        self.words.extend(new_nodes);
        let lv = &mut self.levels[l];
        lv.trans = trans;
        lv.orbit = orbit;
    }

    /// Strip `h` through levels `from..`; returns the residue and the level at
    /// which it stopped, plus the transversal words used.
    fn strip(&self, mut h: Perm, from: usize) -> (Perm, usize, Vec<u32>) {
        let mut used = Vec::new();
        for l in from..self.levels.len() {
            let lv = &self.levels[l];
            let g = h.apply(lv.point);
            match &lv.trans[g] {
                None => return (h, l, used),
                Some((u, w)) => {
                    h = u.inverse().compose(&h);
                    used.push(*w);
                }
            }
        }
        (h, self.levels.len(), used)
    }

    fn schreier_sims(&mut self) {
        for l in 0..self.levels.len() {
            self.recompute_orbit(l);
        }
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let l = i as usize;
            let mut restart = None;
            'scan: for oi in 0..self.levels[l].orbit.len() {
                let gamma = self.levels[l].orbit[oi];
                for gi in 0..self.levels[l].gens.len() {
                    let si = self.levels[l].gens[gi];
                    let (s, sw) = self.strong[si].clone();
                    let (u, uw) = self.levels[l].trans[gamma].clone().unwrap();
                    let sg = s.apply(gamma);
                    let (v, vw) = self.levels[l].trans[sg].clone().unwrap();
                    let schreier = v.inverse().compose(&s).compose(&u);
                    exec::tick(1);
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j, used) = self.strip(schreier, l + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        // word of h: used_r^-1 ∘ … ∘ used_1^-1 ∘ v^-1 ∘ s ∘ u
                        let vi = self.push_word(Node::Inv(vw));
                        let mut w = self.push_word(Node::Prod(sw, uw));
                        w = self.push_word(Node::Prod(vi, w));
                        for t in used {
                            let ti = self.push_word(Node::Inv(t));
                            w = self.push_word(Node::Prod(ti, w));
                        }
                        self.add_strong(h, w, l + 1);
                        restart = Some(j.min(self.levels.len() - 1));
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The generators the group was built from.
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        self.strong.iter().map(|s| s.0.clone()).collect()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Orbit sizes along the stabilizer chain.
    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, sigma: &Perm) -> bool {
        if sigma.degree() != self.degree {
            return false;
        }
        let (h, j, _) = self.strip(sigma.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.strong.iter().all(|(s, _)| other.contains(s))
    }

    fn expand(&self, node: u32, inv: bool, out: &mut Word) {
        // explicit stack: (node, inverted)
        let mut stack = vec![(node, inv)];
        while let Some((n, inv)) = stack.pop() {
            match &self.words[n as usize] {
                Node::Id => {}
                Node::Gen(g) => {
                    let f = (*g, inv);
                    if out.last() == Some(&(f.0, !f.1)) {
                        out.pop();
                    } else {
                        out.push(f);
                    }
                }
                Node::Inv(a) => stack.push((*a, !inv)),
                Node::Prod(a, b) => {
                    // (a∘b)^-1 = b^-1 ∘ a^-1; the stack pops in reverse
                    if inv {
                        stack.push((*a, true));
                        stack.push((*b, true));
                    } else {
                        stack.push((*b, false));
                        stack.push((*a, false));
                    }
                }
            }
        }
    }

    /// A word over [`generators`](Self::generators) evaluating to `sigma`, if
    /// `sigma` is a member.
    pub fn membership(&self, sigma: &Perm) -> Option<Word> {
        if sigma.degree() != self.degree {
            return None;
        }
        let (h, j, used) = self.strip(sigma.clone(), 0);
        if j != self.levels.len() || !h.is_identity() {
            return None;
        }
        // sigma = u_1 ∘ u_2 ∘ … ∘ u_k
        let mut w = Vec::new();
        for u in used {
            self.expand(u, false, &mut w);
        }
        Some(w)
    }

    pub fn evaluate(&self, w: &Word) -> Perm {
        w.iter().fold(Perm::identity(self.degree), |acc, &(g, inv)| {
            let p = if inv { self.gens[g].inverse() } else { self.gens[g].clone() };
            acc.compose(&p)
        })
    }

    /// Pointwise stabilizer of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let rebased = PermGroup::with_base_prefix(&self.strong_generators(), self.degree, points)
            .expect("same degree");
        let t = points.len();
        let gens: Vec<Perm> = rebased
            .strong
            .iter()
            .filter(|(s, _)| points.iter().all(|&p| s.apply(p) == p))
            .map(|(s, _)| s.clone())
            .collect();
        let stab = PermGroup::new(&gens, self.degree).unwrap();
        debug_assert_eq!(
            stab.order(),
            rebased.levels.iter().skip(t).map(|l| l.orbit.len() as u128).product::<u128>()
        );
        stab
    }

    /// Kernel of the action given by `images[i]` for the `i`-th generator.
    pub fn kernel_of_action(&self, images: &[Perm]) -> Result<PermGroup, PermError> {
        if images.len() != self.gens.len() {
            return Err(PermError::NotAnAction);
        }
        let m2 = images.first().map_or(0, |p| p.degree());
        if images.iter().any(|p| p.degree() != m2) {
            return Err(PermError::NotAnAction);
        }
        let m = self.degree;
        let diag: Vec<Perm> = self.gens.iter().zip(images).map(|(g, a)| g.direct_sum(a)).collect();
        let d = PermGroup::new(&diag, m + m2).unwrap();
        if d.order() != self.order() {
            return Err(PermError::NotAnAction);
        }
        let fixed: Vec<usize> = (m..m + m2).collect();
        let k = d.pointwise_stabilizer(&fixed);
        let gens: Vec<Perm> = k.strong_generators().iter().map(|p| p.restrict(0..m)).collect();
        Ok(PermGroup::new(&gens, m).unwrap())
    }

    /// Drop generators already generated by earlier ones.
    pub fn reduce_generators(&self) -> Vec<Perm> {
        let mut kept: Vec<Perm> = Vec::new();
        let mut cur = PermGroup::trivial(self.degree);
        for g in &self.gens {
            if !cur.contains(g) {
                kept.push(g.clone());
                cur = PermGroup::new(&kept, self.degree).unwrap();
            }
        }
        debug_assert_eq!(cur.order(), self.order());
        kept
    }

    /// Group generated by the reduced generating set.
    pub fn reduced(&self) -> PermGroup {
        PermGroup::new(&self.reduce_generators(), self.degree).unwrap()
    }

    /// All elements (for small groups).
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for lv in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lv.orbit.len());
            for &g in &lv.orbit {
                let u = &lv.trans[g].as_ref().unwrap().0;
                for x in &out {
                    next.push(u.compose(x));
                }
            }
            out = next;
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        orbits(self).len() <= 1
    }

    pub(crate) fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub(crate) fn level_point(&self, l: usize) -> usize {
        self.levels[l].point
    }

    pub(crate) fn level_orbit(&self, l: usize) -> &[usize] {
        &self.levels[l].orbit
    }

    pub(crate) fn level_trans(&self, l: usize, g: usize) -> Option<&Perm> {
        self.levels[l].trans[g].as_ref().map(|t| &t.0)
    }
}

/// Orbits of the generated group, each sorted, ordered by least element.
pub fn orbits(g: &PermGroup) -> Vec<Vec<usize>> {
    let m = g.degree();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orb = vec![s];
        let mut i = 0;
        while i < orb.len() {
            let x = orb[i];
            i += 1;
            for p in g.generators() {
                let y = p.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y);
                }
            }
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}
