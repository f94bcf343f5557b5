use super::CayleyTable;

/// A map between groups given by its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub image: Vec<usize>,
    pub codomain_order: usize,
}

impl GroupHom {
    pub fn new(image: Vec<usize>, codomain_order: usize) -> Self {
        GroupHom { image, codomain_order }
    }

    pub fn identity(n: usize) -> Self {
        GroupHom { image: (0..n).collect(), codomain_order: n }
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn domain_order(&self) -> usize {
        self.image.len()
    }

    pub fn is_hom(&self, dom: &CayleyTable, cod: &CayleyTable) -> bool {
        let n = dom.order();
        if self.image.len() != n || self.codomain_order != cod.order() {
            return false;
        }
        if self.image.iter().any(|&x| x >= cod.order()) {
            return false;
        }
        (0..n).all(|a| {
            (0..n).all(|b| self.image[dom.mul(a, b)] == cod.mul(self.image[a], self.image[b]))
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.image.len() != self.codomain_order {
            return false;
        }
        let mut seen = vec![false; self.codomain_order];
        for &x in &self.image {
            if x >= seen.len() || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn is_isomorphism(&self, dom: &CayleyTable, cod: &CayleyTable) -> bool {
        self.is_bijective() && self.is_hom(dom, cod)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            image: self.image.iter().map(|&x| other.image[x]).collect(),
            codomain_order: other.codomain_order,
        }
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut image = vec![0; self.image.len()];
        for (a, &b) in self.image.iter().enumerate() {
            image[b] = a;
        }
        Some(GroupHom { image, codomain_order: self.image.len() })
    }
}
