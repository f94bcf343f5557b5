use super::{CayleyTable, GroupError, GroupHom};

/// A subgroup as a sorted element list of its parent table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    is_normal: bool,
}

impl Subgroup {
    /// Wrap a set already known to be a subgroup of `g`.
    pub fn from_elements(g: &CayleyTable, mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let is_normal = is_normal_set(g, &elements);
        Subgroup { elements, is_normal }
    }

    pub fn whole(g: &CayleyTable) -> Self {
        Subgroup { elements: (0..g.order()).collect(), is_normal: true }
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0], is_normal: true }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// The subgroup as a table of its own, with the element map into the parent
    /// (position `i` of the new table is `elements()[i]`).
    pub fn to_table(&self, g: &CayleyTable) -> CayleyTable {
        let pos = |x: usize| self.elements.binary_search(&x).expect("closed subgroup");
        let e = &self.elements;
        CayleyTable::from_fn(e.len(), |a, b| pos(g.mul(e[a], e[b])))
    }
}

fn is_normal_set(g: &CayleyTable, set: &[usize]) -> bool {
    let mut mark = vec![false; g.order()];
    for &x in set {
        mark[x] = true;
    }
    set.iter().all(|&h| (0..g.order()).all(|x| mark[g.conj(h, x)]))
}

/// Whether `set` contains 0 and is closed under products and inverses.
pub fn is_subgroup(g: &CayleyTable, set: &[usize]) -> bool {
    let mut mark = vec![false; g.order()];
    for &x in set {
        mark[x] = true;
    }
    mark[0] && set.iter().all(|&a| mark[g.inv(a)] && set.iter().all(|&b| mark[g.mul(a, b)]))
}

pub fn center(g: &CayleyTable) -> Subgroup {
    let n = g.order();
    let elements = (0..n)
        .filter(|&z| (0..n).all(|x| g.mul(z, x) == g.mul(x, z)))
        .collect();
    Subgroup { elements, is_normal: true }
}

fn close_set(g: &CayleyTable, gens: &[usize], mark: &mut [bool]) -> Vec<usize> {
    let mut elems = vec![0];
    mark[0] = true;
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        for &s in gens {
            let y = g.mul(x, s);
            if !mark[y] {
                mark[y] = true;
                elems.push(y);
            }
        }
        i += 1;
    }
    elems
}

/// Subgroup generated by `s`.
pub fn closure(g: &CayleyTable, s: &[usize]) -> Subgroup {
    let mut mark = vec![false; g.order()];
    let elems = close_set(g, s, &mut mark);
    Subgroup::from_elements(g, elems)
}

/// Smallest normal subgroup containing `s`.
pub fn normal_closure(g: &CayleyTable, s: &[usize]) -> Subgroup {
    let n = g.order();
    let mut mark = vec![false; n];
    let mut gens: Vec<usize> = Vec::new();
    for &x in s {
        for y in 0..n {
            let c = g.conj(x, y);
            if !mark[c] {
                mark[c] = true;
                gens.push(c);
            }
        }
    }
    // the set of conjugates is conjugation-stable, so it generates a normal subgroup
    let mut mark = vec![false; n];
    let elems = close_set(g, &gens, &mut mark);
    Subgroup { elements: sorted(elems), is_normal: true }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// `G/N` with cosets numbered by increasing minimal element, and the projection.
pub fn quotient(g: &CayleyTable, nsub: &Subgroup) -> Result<(CayleyTable, GroupHom), GroupError> {
    if !is_normal_set(g, nsub.elements()) {
        return Err(GroupError::NotNormal);
    }
    let n = g.order();
    let mut label = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if label[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for &h in nsub.elements() {
            label[g.mul(x, h)] = idx;
        }
    }
    let q = CayleyTable::from_fn(reps.len(), |a, b| label[g.mul(reps[a], reps[b])]);
    let proj = GroupHom::new(label, reps.len());
    Ok((q, proj))
}

/// All elements of `p`-power order, returned raw. The caller decides whether the
/// set is a subgroup.
pub fn sylow_elements(g: &CayleyTable, p: u64) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| {
            let mut o = g.element_order(x) as u64;
            while o % p == 0 {
                o /= p;
            }
            o == 1
        })
        .collect()
}
