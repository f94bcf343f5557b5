//! Small-graph isomorphism: layered edge-fixed automorphism groups, the
//! color-automorphism coset recursion, and edge-colored bipartite isomorphism.

mod color;
mod layered;

pub use color::{color_coset, colored_bipartite_iso, BipartiteColorMatrix, ColoredDomain};
pub use layered::{
    aut_edge_fixed, graph_automorphisms, graph_iso, kernel_layer_generators, layered_subgraph,
};

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeMissing(usize, usize),
    #[error("matrix dimensions differ: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on `0..m` with optional vertex colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    m: usize,
    edges: BTreeSet<(usize, usize)>,
    colors: Option<Vec<usize>>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Graph {
    pub fn new(m: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::Invalid(format!("self-loop at {u}")));
            }
            if u >= m || v >= m {
                return Err(GraphError::Invalid(format!("edge ({u}, {v}) out of range")));
            }
            set.insert(norm(u, v));
        }
        Ok(Graph { m, edges: set, colors: None })
    }

    pub fn with_colors(mut self, colors: Vec<usize>) -> Result<Self, GraphError> {
        if colors.len() != self.m {
            return Err(GraphError::Invalid("one color per vertex".into()));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn cycle(m: usize) -> Self {
        let e: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
        Graph::new(m, &e).unwrap()
    }

    pub fn path(m: usize) -> Self {
        let e: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
        Graph::new(m, &e).unwrap()
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&norm(u, v))
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors.as_ref().map_or(0, |c| c[v])
    }

    pub fn colors(&self) -> Option<&[usize]> {
        self.colors.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.m).filter(|&w| self.has_edge(v, w)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.m];
        let mut out = Vec::new();
        for s in 0..self.m {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for w in self.neighbors(comp[i]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether `images` maps this graph onto `other`, preserving colors.
    pub fn is_isomorphism(&self, other: &Graph, images: &[usize]) -> bool {
        self.m == other.m
            && self.edges.len() == other.edges.len()
            && (0..self.m).all(|v| self.color(v) == other.color(images[v]))
            && self.edges.iter().all(|&(u, v)| other.has_edge(images[u], images[v]))
    }

    /// Parse the text format: `m k`, then `k` lines `u v`, then optionally a
    /// line `colors c_0 … c_{m-1}`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, msg: &str| GraphError::Parse { line: line + 1, msg: msg.into() };
        let (ln, header) = lines.next().ok_or_else(|| perr(0, "missing header"))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(ln, "bad integer")))
            .collect::<Result<_, _>>()?;
        let [m, k] = h[..] else {
            return Err(perr(ln, "header must be `m k`"));
        };
        let mut edges = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, l) = lines.next().ok_or_else(|| perr(ln, "missing edge line"))?;
            let t: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| perr(ln, "bad integer")))
                .collect::<Result<_, _>>()?;
            let [u, v] = t[..] else {
                return Err(perr(ln, "edge line must be `u v`"));
            };
            edges.push((u, v));
        }
        let mut g = Graph::new(m, &edges)?;
        if let Some((ln, l)) = lines.next() {
            let mut it = l.split_whitespace();
            if it.next() != Some("colors") {
                return Err(perr(ln, "expected `colors` line"));
            }
            let c: Vec<usize> = it
                .map(|t| t.parse().map_err(|_| perr(ln, "bad integer")))
                .collect::<Result<_, _>>()?;
            g = g.with_colors(c).map_err(|_| perr(ln, "need one color per vertex"))?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.m, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        if let Some(c) = &self.colors {
            let cs: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("colors {}\n", cs.join(" ")));
        }
        s
    }

    /// The image of this graph under a vertex relabeling.
    pub fn permuted(&self, images: &[usize]) -> Graph {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (images[u], images[v])).collect();
        let mut g = Graph::new(self.m, &edges).unwrap();
        if let Some(c) = &self.colors {
            let mut nc = vec![0; self.m];
            for v in 0..self.m {
                nc[images[v]] = c[v];
            }
            g.colors = Some(nc);
        }
        g
    }
}

#[cfg(test)]
mod tests;
